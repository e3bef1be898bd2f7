"""Finite joint probability distributions over discrete variables.

A distribution stores only its positive-probability outcomes as an integer
matrix (one row per outcome, one column per variable) alongside the matching
masses. All marginal and conditional views are produced by grouping rows,
which keeps sparse word distributions cheap.
"""

import math
from collections.abc import Iterable, Mapping, Sequence

import numpy as np

from .constants import PROBABILITY_TOLERANCE
from .errors import InvalidArgumentError

IndexSet = tuple[int, ...]

# Rows are packed into a single int64 key when the alphabet product allows it.
_PACKED_KEY_LIMIT = 2**62


class JointDistribution:
    """Probability table over N finite-alphabet variables.

    Instances are immutable once built; the outcome and probability arrays
    are marked read-only.
    """

    def __init__(
        self,
        outcomes: np.ndarray | Sequence[Sequence[int]],
        probs: np.ndarray | Sequence[float],
        alphabet_sizes: Sequence[int],
    ):
        sizes = tuple(int(k) for k in alphabet_sizes)
        if not sizes:
            raise InvalidArgumentError("A distribution needs at least one variable")
        if any(k < 1 for k in sizes):
            raise InvalidArgumentError(f"Alphabet sizes must be positive, got {sizes}")

        rows = np.asarray(outcomes, dtype=np.int64).reshape(-1, len(sizes))
        masses = np.asarray(probs, dtype=float).ravel()
        if masses.shape[0] != rows.shape[0]:
            raise InvalidArgumentError(
                f"Got {rows.shape[0]} outcomes but {masses.shape[0]} probabilities"
            )
        if np.any(masses < 0):
            raise InvalidArgumentError("Probabilities must be nonnegative")
        if np.any(rows < 0) or np.any(rows >= np.asarray(sizes)):
            raise InvalidArgumentError("An outcome falls outside its variable's alphabet")
        total = float(masses.sum())
        if abs(total - 1.0) > PROBABILITY_TOLERANCE:
            raise InvalidArgumentError(f"Total probability mass is {total!r}, expected 1")

        positive = masses > 0
        rows, masses = rows[positive], masses[positive]
        representatives, inverse = group_rows(rows, sizes)
        if len(representatives) != len(rows):
            masses = np.bincount(inverse, weights=masses, minlength=len(representatives))
            rows = representatives

        rows.setflags(write=False)
        masses.setflags(write=False)
        self._outcomes = rows
        self._probs = masses
        self._alphabet_sizes = sizes

    @classmethod
    def from_table(
        cls, table: Mapping[tuple[int, ...], float], alphabet_sizes: Sequence[int] | None = None
    ) -> "JointDistribution":
        """Build a distribution from an outcome → probability mapping.

        Alphabet sizes default to one more than the largest symbol seen per variable.
        """
        if not table:
            raise InvalidArgumentError("Cannot build a distribution from an empty table")
        rows = np.array([tuple(outcome) for outcome in table], dtype=np.int64)
        if rows.ndim != 2:
            raise InvalidArgumentError("All outcomes must have the same length")
        if alphabet_sizes is None:
            alphabet_sizes = tuple(int(k) + 1 for k in rows.max(axis=0))
        return cls(rows, list(table.values()), alphabet_sizes)

    @classmethod
    def uniform(cls, alphabet_sizes: Sequence[int]) -> "JointDistribution":
        """Uniform distribution over every outcome of the given alphabets."""
        sizes = tuple(int(k) for k in alphabet_sizes)
        rows = np.array(list(np.ndindex(*sizes)), dtype=np.int64).reshape(-1, len(sizes))
        return cls(rows, np.full(len(rows), 1.0 / len(rows)), sizes)

    @property
    def variable_count(self) -> int:
        return len(self._alphabet_sizes)

    @property
    def alphabet_sizes(self) -> tuple[int, ...]:
        return self._alphabet_sizes

    @property
    def outcomes(self) -> np.ndarray:
        return self._outcomes

    @property
    def probs(self) -> np.ndarray:
        return self._probs

    @property
    def table(self) -> dict[tuple[int, ...], float]:
        return {
            tuple(int(s) for s in row): float(p)
            for row, p in zip(self._outcomes, self._probs, strict=True)
        }

    def probability(self, outcome: Sequence[int]) -> float:
        """Probability of a full outcome tuple (0 when absent)."""
        if len(outcome) != self.variable_count:
            raise InvalidArgumentError(
                f"Outcome {tuple(outcome)} has {len(outcome)} entries, expected {self.variable_count}"
            )
        match = np.all(self._outcomes == np.asarray(outcome), axis=1)
        return float(self._probs[match].sum())

    def __len__(self) -> int:
        return len(self._probs)

    def __repr__(self) -> str:
        return (
            f"JointDistribution(variables={self.variable_count}, "
            f"alphabets={self._alphabet_sizes}, support={len(self)})"
        )


def index_set(indices: Iterable[int], variable_count: int, *, allow_empty: bool = False) -> IndexSet:
    """Validate variable indices against Ω_N and return them as an ordered tuple."""
    result = tuple(int(i) for i in indices)
    if not result and not allow_empty:
        raise InvalidArgumentError("Index set must not be empty")
    if len(set(result)) != len(result):
        raise InvalidArgumentError(f"Index set {result} repeats an index")
    for i in result:
        if not 0 <= i < variable_count:
            raise InvalidArgumentError(f"Index {i} out of range for {variable_count} variables")
    return result


def complement(indices: Iterable[int], variable_count: int) -> IndexSet:
    """Indices of Ω_N not in the given set, in increasing order."""
    excluded = set(index_set(indices, variable_count, allow_empty=True))
    return tuple(i for i in range(variable_count) if i not in excluded)


def group_indices(dist: JointDistribution, keep: Iterable[int]) -> tuple[np.ndarray, np.ndarray]:
    """Group outcome rows by their values on `keep`.

    Returns:
        (marginal outcomes, inverse) where inverse[r] is the marginal row that
        outcome row r belongs to.
    """
    cols = index_set(keep, dist.variable_count, allow_empty=True)
    if not cols:
        return np.zeros((1, 0), dtype=np.int64), np.zeros(len(dist), dtype=np.int64)
    sizes = tuple(dist.alphabet_sizes[i] for i in cols)
    return group_rows(dist.outcomes[:, list(cols)], sizes)


def marginal_masses(dist: JointDistribution, keep: Iterable[int]) -> np.ndarray:
    """Masses of the marginal on `keep` (a single unit mass for the empty set)."""
    representatives, inverse = group_indices(dist, keep)
    return np.bincount(inverse, weights=dist.probs, minlength=len(representatives))


def marginalize(dist: JointDistribution, keep: Iterable[int]) -> JointDistribution:
    """Marginal distribution over `keep`, variables in the given order."""
    cols = index_set(keep, dist.variable_count)
    representatives, inverse = group_indices(dist, cols)
    masses = np.bincount(inverse, weights=dist.probs, minlength=len(representatives))
    return JointDistribution(
        representatives, masses, tuple(dist.alphabet_sizes[i] for i in cols)
    )


def slice_condition(
    dist: JointDistribution, given: Iterable[int], outcome: Sequence[int]
) -> JointDistribution:
    """Conditional distribution of the remaining variables given X_given = outcome."""
    cols = index_set(given, dist.variable_count)
    if len(outcome) != len(cols):
        raise InvalidArgumentError(
            f"Conditioning outcome {tuple(outcome)} does not match index set {cols}"
        )
    remaining = complement(cols, dist.variable_count)
    if not remaining:
        raise InvalidArgumentError("Cannot condition on every variable")

    match = np.all(dist.outcomes[:, list(cols)] == np.asarray(outcome), axis=1)
    mass = float(dist.probs[match].sum())
    if mass <= 0:
        raise InvalidArgumentError(
            f"Conditioning outcome {tuple(outcome)} has zero probability"
        )
    return JointDistribution(
        dist.outcomes[match][:, list(remaining)],
        dist.probs[match] / mass,
        tuple(dist.alphabet_sizes[i] for i in remaining),
    )


def product(first: JointDistribution, second: JointDistribution) -> JointDistribution:
    """Joint distribution of two independent distributions, first's variables first."""
    n, m = len(first), len(second)
    rows = np.hstack(
        [np.repeat(first.outcomes, m, axis=0), np.tile(second.outcomes, (n, 1))]
    )
    masses = np.outer(first.probs, second.probs).ravel()
    masses = masses / masses.sum()
    return JointDistribution(rows, masses, first.alphabet_sizes + second.alphabet_sizes)


def group_rows(rows: np.ndarray, sizes: tuple[int, ...]) -> tuple[np.ndarray, np.ndarray]:
    if len(rows) == 0:
        return rows, np.zeros(0, dtype=np.int64)
    if math.prod(sizes) < _PACKED_KEY_LIMIT:
        multipliers = np.cumprod((1,) + sizes[:-1], dtype=np.int64)
        keys = rows @ multipliers
        _, first, inverse = np.unique(keys, return_index=True, return_inverse=True)
        return rows[first], inverse.ravel()
    representatives, inverse = np.unique(rows, axis=0, return_inverse=True)
    return representatives, inverse.ravel()
