"""Block curves, their asymptotes, and the anatomy of a single observation.

Two evaluation methods exist for block curves:

- "words" applies the multivariate measures to the exact length-ℓ word
  distribution. Its cost grows with the word support, so it is the method
  for short blocks and the only one for the co-information curve.
- "filtered" builds H(ℓ) from the chain rule and R(ℓ) from window classes,
  R(ℓ) = Σ_i H[X_i | i symbols before, ℓ-1-i symbols after], and derives
  T, B, W and Q from the identities H = B + R, T = B + Q, W = B + T and
  T = ℓ·H(1) - H. It reaches blocks of length 64 and beyond cheaply.
"""

import logging
from collections.abc import Iterable
from dataclasses import dataclass, field

import numpy as np

from .constants import (
    DEFAULT_COINFORMATION_BLOCK,
    DEFAULT_FILTERED_BLOCK,
    DEFAULT_WINDOW,
    DERIVATIVE_TOLERANCE,
    EXCESS_ENTROPY_MAX_BLOCK,
    IDENTITY_TOLERANCE,
    MAX_COINFORMATION_VARIABLES,
    PROPOSITION_RATE_TOLERANCE,
    PROPOSITION_TOLERANCE,
    RATE_CONVERGENCE,
    SUBEXTENSIVE_TOLERANCE,
)
from .errors import InvalidArgumentError, ResourceLimitError
from .info_measures import (
    binding_information,
    co_information,
    conditional_entropy,
    enigmatic_information,
    entropy,
    local_exogenous_information,
    residual_entropy,
)
from .process_model import (
    EpsilonMachine,
    WindowClasses,
    compression_redundancies,
    entropy_rate_exact,
    future_classes,
    iter_past_classes,
    past_classes,
    predictive_entropy,
    single_symbol_entropy,
    window_distribution_from_classes,
    word_distribution,
)

logger = logging.getLogger(__name__)

CURVE_MEASURES = ("H", "T", "B", "R", "W", "Q", "I")
CURVE_METHODS = ("words", "filtered")

_WORD_MEASURES = {
    "B": binding_information,
    "R": residual_entropy,
    "W": local_exogenous_information,
    "Q": enigmatic_information,
    "I": co_information,
}


@dataclass(frozen=True)
class BlockCurve:
    """Values of one block measure for ℓ = 0..max_length; values[0] is 0."""

    measure_id: str
    values: tuple[float, ...]
    method: str = "words"

    @property
    def max_length(self) -> int:
        return len(self.values) - 1


@dataclass(frozen=True)
class AsymptoticFit:
    """Straight-line asymptote value(ℓ) ≈ subextensive + rate·ℓ."""

    rate: float
    subextensive: float
    converged: bool
    residual: float
    tolerance: float


@dataclass(frozen=True)
class ExcessEntropyEstimate:
    from_entropy_rates: float
    from_redundancy_rates: float
    termwise_match: bool
    converged: bool
    length: int

    @property
    def value(self) -> float:
        return self.from_entropy_rates


@dataclass(frozen=True)
class AnatomyDecomposition:
    """Decomposition of H[X₀] and E for one machine (all values in bits)."""

    h_1: float
    h_mu: float
    rho_mu: float
    r_mu: float
    b_mu: float
    q_mu: float
    w_mu: float
    sigma_mu: float
    excess_entropy: float
    i_1: float
    r_1: float
    r_inf: float
    window: int
    diagnostics: dict = field(default_factory=dict)

    @property
    def converged(self) -> bool:
        return bool(
            self.diagnostics.get("window_converged", True)
            and self.diagnostics.get("excess_entropy_converged", True)
        )


@dataclass(frozen=True)
class ExcessEntropyDecomposition:
    """E next to the subextensive parts of the B, R, Q and W curves."""

    excess_entropy: float
    fits: dict[str, AsymptoticFit]
    sums: dict[str, float]
    anatomy_sum: float
    max_length: int

    @property
    def residuals(self) -> dict[str, float]:
        return {label: value - self.excess_entropy for label, value in self.sums.items()}

    @property
    def converged(self) -> bool:
        return all(fit.converged for fit in self.fits.values())


@dataclass(frozen=True)
class PropositionReport:
    """Finite-length evidence that block co-information vanishes."""

    curve: BlockCurve
    fit: AsymptoticFit
    tolerance: float
    rate_tolerance: float = PROPOSITION_RATE_TOLERANCE

    @property
    def final_value_vanishes(self) -> bool:
        return abs(self.curve.values[-1]) < self.tolerance

    @property
    def rate_vanishes(self) -> bool:
        return abs(self.fit.rate) < self.rate_tolerance

    @property
    def subextensive_vanishes(self) -> bool:
        return abs(self.fit.subextensive) < self.tolerance


def block_curve(
    machine: EpsilonMachine, measure_id: str, max_length: int, method: str = "words"
) -> BlockCurve:
    """Evaluate measure F(ℓ) for ℓ = 0..max_length.

    The co-information curve "I" is always evaluated on word distributions.

    Raises:
        InvalidArgumentError: unknown measure or method, or max_length < 1.
        ResourceLimitError: the word support or co-information subsets exceed
            their budgets.
    """
    if measure_id not in CURVE_MEASURES:
        raise InvalidArgumentError(
            f"Unknown block measure '{measure_id}'. Expected one of: {', '.join(CURVE_MEASURES)}"
        )
    if method not in CURVE_METHODS:
        raise InvalidArgumentError(
            f"Unknown curve method '{method}'. Expected one of: {', '.join(CURVE_METHODS)}"
        )
    if max_length < 1:
        raise InvalidArgumentError(f"Block length must be at least 1, got {max_length}")

    if measure_id == "I":
        if max_length > MAX_COINFORMATION_VARIABLES:
            raise ResourceLimitError(
                f"Block co-information is limited to length {MAX_COINFORMATION_VARIABLES}, "
                f"got {max_length}"
            )
        method = "words"

    if method == "filtered":
        curves = _filtered_curves(machine, max_length, with_residual=measure_id not in ("H", "T"))
        values = curves[measure_id]
    else:
        values = [0.0] + [
            _word_measure(machine, measure_id, length) for length in range(1, max_length + 1)
        ]
    logger.debug("Computed %s curve to length %d (%s)", measure_id, max_length, method)
    return BlockCurve(measure_id, tuple(float(v) for v in values), method)


def block_curves(
    machine: EpsilonMachine, measure_ids: Iterable[str], max_length: int, method: str = "words"
) -> dict[str, BlockCurve]:
    """Several curves at once; the filtered method shares one pass over window classes."""
    measure_ids = list(measure_ids)
    if method != "filtered" or "I" in measure_ids:
        return {m: block_curve(machine, m, max_length, method) for m in measure_ids}
    for measure_id in measure_ids:
        if measure_id not in CURVE_MEASURES:
            raise InvalidArgumentError(
                f"Unknown block measure '{measure_id}'. "
                f"Expected one of: {', '.join(CURVE_MEASURES)}"
            )
    if max_length < 1:
        raise InvalidArgumentError(f"Block length must be at least 1, got {max_length}")
    with_residual = any(m not in ("H", "T") for m in measure_ids)
    curves = _filtered_curves(machine, max_length, with_residual=with_residual)
    return {m: BlockCurve(m, tuple(curves[m]), "filtered") for m in measure_ids}


def discrete_derivative(curve: BlockCurve) -> list[float]:
    """value[ℓ] - value[ℓ-1] for ℓ = 1..L."""
    if curve.max_length < 1:
        raise InvalidArgumentError("A curve needs at least one block length to differentiate")
    return np.diff(np.asarray(curve.values)).tolist()


def asymptote_fit(curve: BlockCurve, tolerance: float = DERIVATIVE_TOLERANCE) -> AsymptoticFit:
    """Fit the line through the last two points and judge it by the last three.

    The fit is converged when the last three discrete derivatives agree within
    `tolerance`. The residual is the largest distance of points L-1 and L-2
    from the fitted line; it never exceeds that derivative spread.
    """
    length = curve.max_length
    if length < 3:
        raise InvalidArgumentError(f"Asymptote fits need L >= 3, got {length}")
    values = np.asarray(curve.values)
    derivatives = np.diff(values)
    rate = float(derivatives[-1])
    subextensive = float(values[-1] - length * rate)
    line = subextensive + rate * np.array([length - 2, length - 1])
    residual = float(np.max(np.abs(values[-3:-1] - line)))
    spread = float(np.ptp(derivatives[-3:]))
    converged = spread < tolerance
    if not converged:
        logger.debug(
            "%s curve not converged at L=%d: derivative spread %g, tolerance %g",
            curve.measure_id,
            length,
            spread,
            tolerance,
        )
    return AsymptoticFit(rate, subextensive, converged, residual, tolerance)


def excess_entropy(machine: EpsilonMachine, max_length: int | None = None) -> ExcessEntropyEstimate:
    """E by summing h_ℓ - hμ and, independently, -(ρ_ℓ - ρμ).

    The sums stop at the first ℓ with h_ℓ - hμ < RATE_CONVERGENCE, or at
    `max_length` (default EXCESS_ENTROPY_MAX_BLOCK) without converging.
    """
    cap = EXCESS_ENTROPY_MAX_BLOCK if max_length is None else max_length
    if cap < 1:
        raise InvalidArgumentError(f"Block length must be at least 1, got {cap}")
    h_mu = entropy_rate_exact(machine)
    h_1 = single_symbol_entropy(machine)
    rho_mu = h_1 - h_mu

    block_entropies = [0.0]
    converged = False
    for classes in iter_past_classes(machine):
        block_entropies.append(block_entropies[-1] + predictive_entropy(machine, classes))
        if block_entropies[-1] - block_entropies[-2] - h_mu < RATE_CONVERGENCE:
            converged = True
            break
        if len(block_entropies) - 1 >= cap:
            break
    length = len(block_entropies) - 1

    block_entropies = np.array(block_entropies)
    entropy_terms = np.diff(block_entropies) - h_mu
    total_correlations = np.arange(length + 1) * h_1 - block_entropies
    redundancy_terms = -(np.diff(total_correlations) - rho_mu)
    termwise = bool(np.all(np.abs(entropy_terms - redundancy_terms) <= IDENTITY_TOLERANCE))
    if not converged:
        logger.warning(
            "h_L - hmu = %g at L=%d; excess entropy has not converged", entropy_terms[-1], length
        )
    return ExcessEntropyEstimate(
        from_entropy_rates=float(entropy_terms.sum()),
        from_redundancy_rates=float(redundancy_terms.sum()),
        termwise_match=termwise,
        converged=converged,
        length=length,
    )


def window_residual_entropy(machine: EpsilonMachine, window: int) -> float:
    """H[X₀ | window symbols before, window symbols after]; nonincreasing in window."""
    if window < 1:
        raise InvalidArgumentError(f"Window must be at least 1, got {window}")
    past = past_classes(machine, window)[-1]
    future = future_classes(machine, window)[-1]
    return _center_entropy(machine, past, future)


def anatomy(
    machine: EpsilonMachine, window: int = DEFAULT_WINDOW, max_length: int | None = None
) -> AnatomyDecomposition:
    """Split H[X₀] into rμ, bμ, qμ and σμ-related pieces for one machine.

    H[1] and hμ come from the machine in closed form, rμ from the window
    estimator and E from `excess_entropy`; everything else follows by
    arithmetic.
    """
    if window < 1:
        raise InvalidArgumentError(f"Window must be at least 1, got {window}")
    h_1 = single_symbol_entropy(machine)
    h_mu = entropy_rate_exact(machine)
    rho_mu = h_1 - h_mu

    pasts = past_classes(machine, window)
    futures = future_classes(machine, window)
    r_mu = _center_entropy(machine, pasts[window], futures[window])
    r_previous = _center_entropy(machine, pasts[window - 1], futures[window - 1])
    b_mu = h_mu - r_mu
    q_mu = rho_mu - b_mu

    estimate = excess_entropy(machine, max_length)
    excess = estimate.value
    sigma_mu = excess - rho_mu
    redundancies = compression_redundancies(machine)

    window_change = r_previous - r_mu
    diagnostics = {
        "r_mu_previous_window": r_previous,
        "window_change": window_change,
        "window_converged": abs(window_change) <= DERIVATIVE_TOLERANCE,
        "excess_entropy_length": estimate.length,
        "excess_entropy_converged": estimate.converged,
        "excess_entropy_termwise_match": estimate.termwise_match,
    }
    if not diagnostics["window_converged"]:
        logger.warning(
            "r_mu changed by %g between windows %d and %d", window_change, window - 1, window
        )
    return AnatomyDecomposition(
        h_1=h_1,
        h_mu=h_mu,
        rho_mu=rho_mu,
        r_mu=r_mu,
        b_mu=b_mu,
        q_mu=q_mu,
        w_mu=rho_mu + b_mu,
        sigma_mu=sigma_mu,
        excess_entropy=excess,
        i_1=q_mu + sigma_mu,
        r_1=redundancies.single_symbol,
        r_inf=redundancies.asymptotic,
        window=window,
        diagnostics=diagnostics,
    )


def ee_decompositions(
    machine: EpsilonMachine,
    max_length: int = DEFAULT_FILTERED_BLOCK,
    method: str = "filtered",
    window: int = DEFAULT_WINDOW,
    tolerance: float = SUBEXTENSIVE_TOLERANCE,
) -> ExcessEntropyDecomposition:
    """Four ways of recovering E from subextensive parts of block curves."""
    curves = block_curves(machine, ("R", "B", "Q", "W"), max_length, method)
    fits = {measure: asymptote_fit(curve, tolerance) for measure, curve in curves.items()}
    e_r, e_b, e_q, e_w = (fits[m].subextensive for m in ("R", "B", "Q", "W"))
    sums = {
        "E_B + E_R": e_b + e_r,
        "-E_B - E_Q": -e_b - e_q,
        "(E_R - E_Q) / 2": 0.5 * (e_r - e_q),
        "-(E_W + E_Q) / 2": -0.5 * (e_w + e_q),
    }
    parts = anatomy(machine, window)
    return ExcessEntropyDecomposition(
        excess_entropy=parts.excess_entropy,
        fits=fits,
        sums=sums,
        anatomy_sum=parts.b_mu + parts.q_mu + parts.sigma_mu,
        max_length=max_length,
    )


def coinformation_propositions_check(
    machine: EpsilonMachine,
    max_length: int = DEFAULT_COINFORMATION_BLOCK,
    tolerance: float = PROPOSITION_TOLERANCE,
) -> PropositionReport:
    """Block co-information I(ℓ), its fitted rate and subextensive part."""
    if entropy_rate_exact(machine) <= 0:
        raise InvalidArgumentError("Co-information checks need a process with positive entropy rate")
    curve = block_curve(machine, "I", max_length)
    return PropositionReport(curve, asymptote_fit(curve, tolerance), tolerance)


def _word_measure(machine: EpsilonMachine, measure_id: str, length: int) -> float:
    if measure_id == "T":
        return length * _word_measure(machine, "H", 1) - _word_measure(machine, "H", length)
    words = word_distribution(machine, length)
    if measure_id == "H":
        return entropy(words)
    return _WORD_MEASURES[measure_id](words)


def _filtered_curves(
    machine: EpsilonMachine, max_length: int, *, with_residual: bool = True
) -> dict[str, list[float]]:
    pasts = past_classes(machine, max_length - 1)
    rates = [predictive_entropy(machine, classes) for classes in pasts]
    h = np.concatenate([[0.0], np.cumsum(rates)])
    lengths = np.arange(max_length + 1)
    t = lengths * h[1] - h
    if not with_residual:
        return {"H": h.tolist(), "T": t.tolist()}

    futures = future_classes(machine, max_length - 1)
    r = [0.0]
    for length in range(1, max_length + 1):
        r.append(
            sum(
                _center_entropy(machine, pasts[before], futures[length - 1 - before])
                for before in range(length)
            )
        )
    r = np.array(r)

    b = h - r
    w = lengths * h[1] - r
    curves = {"H": h, "T": t, "R": r, "B": b, "W": w, "Q": t - b}
    return {measure: values.tolist() for measure, values in curves.items()}


def _center_entropy(machine: EpsilonMachine, past: WindowClasses, future: WindowClasses) -> float:
    dist = window_distribution_from_classes(machine, past, future)
    return conditional_entropy(dist, (1,), (0, 2))
