"""Shannon and multivariate information measures, in bits.

Every measure here is a function of subset entropies H[X_A]. The multivariate
ones (total correlation, binding, residual, local exogenous, enigmatic and
co-information) are also expressible as integer-weighted sums of the atoms
of the information diagram; `atom_weights` and `atom_measure` provide that
view.
"""

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .constants import ATOM_CHECK_TOLERANCE, MAX_ATOM_VARIABLES, NONNEGATIVE_SLACK
from .errors import ConsistencyError, InvalidArgumentError, ResourceLimitError
from .joint_dist import JointDistribution, complement, index_set, marginal_masses

logger = logging.getLogger(__name__)

JOINT_ENTROPY = "joint-entropy"
CO_INFORMATION = "co-information"
TOTAL_CORRELATION = "total-correlation"
BINDING = "binding"
RESIDUAL = "residual"
LOCAL_EXOGENOUS = "local-exogenous"
ENIGMATIC = "enigmatic"

MEASURE_IDS = (
    JOINT_ENTROPY,
    CO_INFORMATION,
    TOTAL_CORRELATION,
    BINDING,
    RESIDUAL,
    LOCAL_EXOGENOUS,
    ENIGMATIC,
)


@dataclass(frozen=True)
class AtomWeights:
    """Integer weight of every information-diagram atom for one measure.

    An atom is keyed by the set of variables it lies inside of.
    """

    measure_id: str
    variable_count: int
    weights: Mapping[frozenset[int], int] = field(default_factory=dict)


@dataclass(frozen=True)
class AtomMeasure:
    """Signed value (bits) of every information-diagram atom of a distribution."""

    variable_count: int
    values: Mapping[frozenset[int], float] = field(default_factory=dict)

    def total(self) -> float:
        return float(sum(self.values.values()))


def shannon_entropy(masses: np.ndarray) -> float:
    """Entropy in bits of a vector of masses; zero masses contribute nothing."""
    p = np.asarray(masses, dtype=float)
    p = p[p > 0]
    if p.size == 0:
        return 0.0
    return float(max(-np.sum(p * np.log2(p)), 0.0))


def entropy(dist: JointDistribution, variables: Iterable[int] | None = None) -> float:
    """H[X_vars]; all variables when `variables` is None."""
    if variables is None:
        return shannon_entropy(dist.probs)
    cols = index_set(variables, dist.variable_count)
    return shannon_entropy(marginal_masses(dist, cols))


def conditional_entropy(
    dist: JointDistribution, target: Iterable[int], given: Iterable[int]
) -> float:
    """H[target | given] = H[target, given] - H[given]."""
    target_cols = index_set(target, dist.variable_count)
    given_cols = index_set(given, dist.variable_count, allow_empty=True)
    _require_disjoint(target_cols, given_cols)
    value = _joint_entropy(dist, target_cols + given_cols) - _joint_entropy(dist, given_cols)
    return _clamp_nonnegative(value, "conditional entropy")


def mutual_information(dist: JointDistribution, a: Iterable[int], b: Iterable[int]) -> float:
    """I[a; b] = H[a] + H[b] - H[a, b]."""
    a_cols = index_set(a, dist.variable_count)
    b_cols = index_set(b, dist.variable_count)
    _require_disjoint(a_cols, b_cols)
    value = entropy(dist, a_cols) + entropy(dist, b_cols) - entropy(dist, a_cols + b_cols)
    return _clamp_nonnegative(value, "mutual information")


def conditional_mutual_information(
    dist: JointDistribution, a: Iterable[int], b: Iterable[int], given: Iterable[int]
) -> float:
    """I[a; b | given] = H[a | given] + H[b | given] - H[a, b | given]."""
    a_cols = index_set(a, dist.variable_count)
    b_cols = index_set(b, dist.variable_count)
    given_cols = index_set(given, dist.variable_count, allow_empty=True)
    _require_disjoint(a_cols, b_cols, given_cols)
    h_given = _joint_entropy(dist, given_cols)
    value = (
        _joint_entropy(dist, a_cols + given_cols)
        + _joint_entropy(dist, b_cols + given_cols)
        - _joint_entropy(dist, a_cols + b_cols + given_cols)
        - h_given
    )
    return _clamp_nonnegative(value, "conditional mutual information")


def subset_entropies(dist: JointDistribution) -> np.ndarray:
    """H[X_A] for every subset A of Ω_N, indexed by bitmask (bit i ↔ variable i).

    Cost is one grouping pass over the support per subset, 2^N passes in all.
    """
    n = dist.variable_count
    values = np.zeros(2**n)
    for mask in range(1, 2**n):
        cols = [i for i in range(n) if mask >> i & 1]
        values[mask] = shannon_entropy(marginal_masses(dist, cols))
    return values


def co_information(dist: JointDistribution) -> float:
    """Alternating inclusion–exclusion sum of all subset entropies.

    Signed; equals H for one variable and I[X; Y] for two.
    """
    values = subset_entropies(dist)
    return _co_information_from_subsets(values)


def total_correlation(dist: JointDistribution) -> float:
    """Σ_i H[X_i] - H[X_{0:N}]."""
    singles, _, joint = _single_and_residual_entropies(dist)
    return _clamp_nonnegative(float(np.sum(singles)) - joint, "total correlation")


def residual_entropy(dist: JointDistribution) -> float:
    """Σ_i H[X_i | all other variables]."""
    _, rests, joint = _single_and_residual_entropies(dist)
    value = float(np.sum(joint - rests))
    return _clamp_nonnegative(value, "residual entropy")


def binding_information(dist: JointDistribution) -> float:
    """H[X_{0:N}] - residual entropy."""
    _, rests, joint = _single_and_residual_entropies(dist)
    value = joint - float(np.sum(joint - rests))
    return _clamp_nonnegative(value, "binding information")


def local_exogenous_information(dist: JointDistribution) -> float:
    """Σ_i I[X_i; all other variables] = B + T."""
    singles, rests, joint = _single_and_residual_entropies(dist)
    value = float(np.sum(singles + rests - joint))
    return _clamp_nonnegative(value, "local exogenous information")


def enigmatic_information(dist: JointDistribution) -> float:
    """T - B; signed, and equal to the co-information for three variables."""
    singles, rests, joint = _single_and_residual_entropies(dist)
    total = float(np.sum(singles)) - joint
    binding = joint - float(np.sum(joint - rests))
    return total - binding


_MEASURES = {
    JOINT_ENTROPY: entropy,
    CO_INFORMATION: co_information,
    TOTAL_CORRELATION: total_correlation,
    BINDING: binding_information,
    RESIDUAL: residual_entropy,
    LOCAL_EXOGENOUS: local_exogenous_information,
    ENIGMATIC: enigmatic_information,
}


def measure_value(dist: JointDistribution, measure_id: str) -> float:
    """Evaluate one of MEASURE_IDS over all variables of `dist`."""
    try:
        return _MEASURES[measure_id](dist)
    except KeyError:
        raise InvalidArgumentError(
            f"Unknown measure '{measure_id}'. Expected one of: {', '.join(MEASURE_IDS)}"
        )


def atom_weights(measure_id: str, variable_count: int) -> AtomWeights:
    """Integer atom weights w such that measure = Σ_atoms w(atom) · atom value."""
    if variable_count < 2:
        raise InvalidArgumentError("Atom weights need at least two variables")
    if measure_id not in _MEASURES:
        raise InvalidArgumentError(
            f"Unknown measure '{measure_id}'. Expected one of: {', '.join(MEASURE_IDS)}"
        )

    weights = {}
    for atom in _atoms(variable_count):
        m = len(atom)
        if measure_id == JOINT_ENTROPY:
            weight = 1
        elif measure_id == CO_INFORMATION:
            weight = 1 if m == variable_count else 0
        elif measure_id == TOTAL_CORRELATION:
            weight = m - 1
        elif measure_id == BINDING:
            weight = 1 if m >= 2 else 0
        elif measure_id == RESIDUAL:
            weight = 1 if m == 1 else 0
        elif measure_id == LOCAL_EXOGENOUS:
            weight = m if m >= 2 else 0
        else:
            weight = m - 2 if m >= 2 else 0
        weights[atom] = weight
    return AtomWeights(measure_id, variable_count, weights)


def atom_measure(dist: JointDistribution) -> AtomMeasure:
    """Signed information-diagram atoms by Möbius inversion of subset entropies.

    The atom inside exactly the variables S is
    Σ_{∅≠T⊆S} (-1)^{|T|+1} (H[T ∪ S̄] - H[S̄]).
    """
    n = dist.variable_count
    if n > MAX_ATOM_VARIABLES:
        raise ResourceLimitError(
            f"Atom measure is limited to {MAX_ATOM_VARIABLES} variables, got {n}"
        )
    entropies = subset_entropies(dist)
    full = 2**n - 1

    values = {}
    for atom in _atoms(n):
        s_mask = _mask(atom)
        outside = full ^ s_mask
        value = 0.0
        sub = s_mask
        while sub:
            sign = 1.0 if bin(sub).count("1") % 2 else -1.0
            value += sign * (entropies[sub | outside] - entropies[outside])
            sub = (sub - 1) & s_mask
        values[atom] = value

    for mask in range(1, full + 1):
        covered = sum(v for atom, v in values.items() if _mask(atom) & mask)
        if abs(covered - entropies[mask]) > ATOM_CHECK_TOLERANCE:
            raise ConsistencyError(
                f"Atoms covering subset {mask:b} sum to {covered}, expected {entropies[mask]}"
            )
    for atom, value in values.items():
        if len(atom) == 1 and value < -ATOM_CHECK_TOLERANCE:
            raise ConsistencyError(f"Single-variable atom {set(atom)} is negative: {value}")
    return AtomMeasure(n, values)


def weighted_atom_sum(weights: AtomWeights, atoms: AtomMeasure) -> float:
    """Σ weight · value over the atoms of one diagram."""
    if weights.variable_count != atoms.variable_count:
        raise InvalidArgumentError("Atom weights and atom values cover different variable counts")
    return float(sum(weights.weights[atom] * value for atom, value in atoms.values.items()))


def _atoms(variable_count: int) -> list[frozenset[int]]:
    return [
        frozenset(combo)
        for size in range(1, variable_count + 1)
        for combo in combinations(range(variable_count), size)
    ]


def _mask(indices: Iterable[int]) -> int:
    return sum(1 << i for i in indices)


def _co_information_from_subsets(values: np.ndarray) -> float:
    total = 0.0
    for mask in range(1, len(values)):
        total += values[mask] if bin(mask).count("1") % 2 else -values[mask]
    return float(total)


def _joint_entropy(dist: JointDistribution, cols: tuple[int, ...]) -> float:
    if not cols:
        return 0.0
    return shannon_entropy(marginal_masses(dist, cols))


def _single_and_residual_entropies(
    dist: JointDistribution,
) -> tuple[np.ndarray, np.ndarray, float]:
    """(H[X_i] per i, H[X_{Ω∖i}] per i, H[X_Ω])."""
    n = dist.variable_count
    joint = shannon_entropy(dist.probs)
    singles = np.array([_joint_entropy(dist, (i,)) for i in range(n)])
    rests = np.array([_joint_entropy(dist, complement((i,), n)) for i in range(n)])
    return singles, rests, joint


def _require_disjoint(*index_sets: tuple[int, ...]) -> None:
    seen: set[int] = set()
    for cols in index_sets:
        overlap = seen.intersection(cols)
        if overlap:
            raise InvalidArgumentError(f"Index sets overlap on {sorted(overlap)}")
        seen.update(cols)


def _clamp_nonnegative(value: float, name: str) -> float:
    if value < -NONNEGATIVE_SLACK:
        raise ConsistencyError(f"Negative {name}: {value}")
    if value < 0:
        logger.debug("Clamping %s of %g to 0", name, value)
        return 0.0
    return float(value)
