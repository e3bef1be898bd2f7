"""Two-source partial information decomposition with the I_min redundancy.

The redundancy of sources S1 and S2 about a target T is
Σ_t p(t) · min(I_spec(t; S1), I_spec(t; S2)), where the specific information
I_spec(t; S) = Σ_s p(s | t) log2(p(t | s) / p(t)) averages to I[T; S].
"""

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .block_analysis import excess_entropy
from .constants import DEFAULT_WINDOW, NONNEGATIVE_SLACK, SYMMETRY_TOLERANCE
from .errors import ConsistencyError, InvalidArgumentError
from .info_measures import conditional_entropy, entropy, mutual_information
from .joint_dist import JointDistribution, group_indices, index_set
from .process_model import EpsilonMachine, entropy_rate_exact, window_distribution

logger = logging.getLogger(__name__)

# Variable positions in a window distribution.
PAST, PRESENT, FUTURE = 0, 1, 2


@dataclass(frozen=True)
class PIDResult:
    redundancy: float
    unique_source1: float
    unique_source2: float
    synergy: float
    total: float

    def atoms(self) -> tuple[float, float, float, float]:
        return (self.redundancy, self.unique_source1, self.unique_source2, self.synergy)


@dataclass(frozen=True)
class PresentPIDReport:
    """PID of I[X₀; past, future] with the closed-form checks it must pass."""

    result: PIDResult
    rho_mu: float
    b_mu: float
    q_mu: float
    window: int
    tolerance: float = SYMMETRY_TOLERANCE

    @property
    def uniquity(self) -> float:
        return self.result.unique_source1

    @property
    def checks(self) -> dict[str, float]:
        """Signed gaps that vanish for a consistent decomposition."""
        r = self.result
        return {
            "unique past - unique future": r.unique_source1 - r.unique_source2,
            "redundancy - synergy - q_mu": r.redundancy - r.synergy - self.q_mu,
            "redundancy - (rho_mu - uniquity)": r.redundancy - (self.rho_mu - self.uniquity),
            "synergy - (b_mu - uniquity)": r.synergy - (self.b_mu - self.uniquity),
        }

    @property
    def consistent(self) -> bool:
        return all(abs(gap) < self.tolerance for gap in self.checks.values())


@dataclass(frozen=True)
class PastPIDReport:
    """PID of I[past; X₀, future], whose total approaches E."""

    result: PIDResult
    excess_entropy: float
    window: int
    tolerance: float = SYMMETRY_TOLERANCE

    @property
    def excess_entropy_gap(self) -> float:
        return self.result.total - self.excess_entropy

    @property
    def consistent(self) -> bool:
        return abs(self.excess_entropy_gap) < self.tolerance


def specific_information(
    dist: JointDistribution,
    target: Iterable[int],
    source: Iterable[int],
    target_outcome: Sequence[int],
) -> float:
    """I_spec(target = target_outcome; source) in bits.

    Raises:
        InvalidArgumentError: overlapping index sets, or an outcome with zero
            probability.
    """
    target_cols = index_set(target, dist.variable_count)
    source_cols = index_set(source, dist.variable_count)
    if set(target_cols) & set(source_cols):
        raise InvalidArgumentError(f"Target {target_cols} and source {source_cols} overlap")
    if len(target_outcome) != len(target_cols):
        raise InvalidArgumentError(
            f"Target outcome {tuple(target_outcome)} does not match index set {target_cols}"
        )
    outcomes, _, values = _specific_informations(dist, target_cols, source_cols)
    match = np.flatnonzero(np.all(outcomes == np.asarray(target_outcome), axis=1))
    if len(match) == 0:
        raise InvalidArgumentError(
            f"Target outcome {tuple(target_outcome)} has zero probability"
        )
    return float(values[match[0]])


def pid_two_sources(
    dist: JointDistribution,
    target: Iterable[int],
    source1: Iterable[int],
    source2: Iterable[int],
) -> PIDResult:
    """Redundancy, unique and synergistic information two sources carry about a target."""
    target_cols = index_set(target, dist.variable_count)
    s1 = index_set(source1, dist.variable_count)
    s2 = index_set(source2, dist.variable_count)
    for a, b in ((target_cols, s1), (target_cols, s2), (s1, s2)):
        if set(a) & set(b):
            raise InvalidArgumentError(f"Index sets {a} and {b} overlap")

    _, target_masses, spec1 = _specific_informations(dist, target_cols, s1)
    _, _, spec2 = _specific_informations(dist, target_cols, s2)
    redundancy = float(np.sum(target_masses * np.minimum(spec1, spec2)))

    info1 = mutual_information(dist, target_cols, s1)
    info2 = mutual_information(dist, target_cols, s2)
    total = mutual_information(dist, target_cols, s1 + s2)
    unique1 = info1 - redundancy
    unique2 = info2 - redundancy
    synergy = total - redundancy - unique1 - unique2

    result = PIDResult(
        redundancy=_nonnegative_atom(redundancy, "redundancy"),
        unique_source1=_nonnegative_atom(unique1, "unique information of source 1"),
        unique_source2=_nonnegative_atom(unique2, "unique information of source 2"),
        synergy=_nonnegative_atom(synergy, "synergy"),
        total=total,
    )
    logger.debug("PID of %s from %s and %s: %s", target_cols, s1, s2, result)
    return result


def anatomy_pid_present(machine: EpsilonMachine, window: int = DEFAULT_WINDOW) -> PresentPIDReport:
    """Decompose wμ = I[X₀; past, future] into redundancy, uniquity and synergy.

    The past and future are windows of `window` symbols on either side of X₀.
    """
    if window < 1:
        raise InvalidArgumentError(f"Window must be at least 1, got {window}")
    dist = window_distribution(machine, window, window)
    result = pid_two_sources(dist, (PRESENT,), (PAST,), (FUTURE,))

    h_1 = entropy(dist, (PRESENT,))
    h_mu = entropy_rate_exact(machine)
    r_mu = conditional_entropy(dist, (PRESENT,), (PAST, FUTURE))
    rho_mu = h_1 - h_mu
    b_mu = h_mu - r_mu
    report = PresentPIDReport(result, rho_mu, b_mu, rho_mu - b_mu, window)
    if not report.consistent:
        logger.warning("Present-centric PID at window %d fails checks: %s", window, report.checks)
    return report


def anatomy_pid_past(machine: EpsilonMachine, window: int = DEFAULT_WINDOW) -> PastPIDReport:
    """Decompose I[past; X₀, future] with X₀ and the future as sources."""
    if window < 1:
        raise InvalidArgumentError(f"Window must be at least 1, got {window}")
    dist = window_distribution(machine, window, window)
    result = pid_two_sources(dist, (PAST,), (PRESENT,), (FUTURE,))
    report = PastPIDReport(result, excess_entropy(machine).value, window)
    if not report.consistent:
        logger.warning(
            "Past-centric PID total differs from E by %g at window %d",
            report.excess_entropy_gap,
            window,
        )
    return report


def _specific_informations(
    dist: JointDistribution, target: tuple[int, ...], source: tuple[int, ...]
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(target outcomes, p(target), I_spec per target outcome), rows aligned."""
    target_outcomes, target_index = group_indices(dist, target)
    _, source_index = group_indices(dist, source)
    n_targets = len(target_outcomes)
    n_sources = int(source_index.max()) + 1

    target_masses = np.bincount(target_index, weights=dist.probs, minlength=n_targets)
    source_masses = np.bincount(source_index, weights=dist.probs, minlength=n_sources)
    pair_keys, pair_index = np.unique(
        target_index * n_sources + source_index, return_inverse=True
    )
    pair_masses = np.bincount(pair_index.ravel(), weights=dist.probs, minlength=len(pair_keys))
    pair_targets, pair_sources = np.divmod(pair_keys, n_sources)

    p_t = target_masses[pair_targets]
    ratio = pair_masses / (source_masses[pair_sources] * p_t)
    terms = pair_masses / p_t * np.log2(ratio)
    values = np.bincount(pair_targets, weights=terms, minlength=n_targets)
    return target_outcomes, target_masses, values


def _nonnegative_atom(value: float, name: str) -> float:
    if value < -NONNEGATIVE_SLACK:
        raise ConsistencyError(f"Negative PID atom ({name}): {value}")
    return max(float(value), 0.0)
