"""Unifilar edge-labeled Markov machines and their stationary statistics.

Besides exact word distributions, this module groups past and future windows
by the state vector they induce ("predictive classes"). Every window in a
class carries the same information about the adjacent symbols, so window
quantities can be evaluated exactly at lengths where enumerating words is
out of reach.
"""

import bisect
import logging
import math
from collections.abc import Iterator
from dataclasses import dataclass, field
from functools import cached_property
from itertools import count, islice
from pathlib import Path
from types import MappingProxyType
from typing import NamedTuple

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from .constants import (
    CLASS_KEY_DECIMALS,
    DENSE_STATIONARY_LIMIT,
    IDENTITY_TOLERANCE,
    MAX_PREDICTIVE_CLASSES,
    MAX_WINDOW_CELLS,
    MAX_WORD_ROWS,
    POWER_ITERATION_MAX_STEPS,
    POWER_ITERATION_TOLERANCE,
    PROBABILITY_TOLERANCE,
)
from .errors import ConsistencyError, InvalidArgumentError, ModelError, ResourceLimitError
from .info_measures import shannon_entropy
from .joint_dist import JointDistribution, group_rows

logger = logging.getLogger(__name__)

MACHINES_DIR = Path(__file__).parent / "machines"

# NRPS column of the single-observation analysis, used to accept a transcription.
NRPS_SINGLE_SYMBOL_ENTROPY = 0.97987
NRPS_ENTROPY_RATE = 0.50000
NRPS_TRANSCRIPTION_TOLERANCE = 1e-4


@dataclass(frozen=True)
class EpsilonMachine:
    """Unifilar machine: (state, symbol) → (probability, next state).

    Validation happens on construction; a machine that exists is unifilar,
    normalized and strongly connected.
    """

    states: tuple[str, ...]
    alphabet_size: int
    transitions: MappingProxyType = field(repr=False)
    name: str = "machine"

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "transitions", MappingProxyType(dict(self.transitions)))
        _validate_machine(self)

    @cached_property
    def state_index(self) -> dict[str, int]:
        return {state: i for i, state in enumerate(self.states)}

    @cached_property
    def labeled_matrices(self) -> np.ndarray:
        """T[x][s, s'] = Pr(emit x and move to s' | s); shape (k, n, n)."""
        n = len(self.states)
        matrices = np.zeros((self.alphabet_size, n, n))
        for (state, symbol), (prob, target) in self.transitions.items():
            matrices[symbol, self.state_index[state], self.state_index[target]] = prob
        matrices.setflags(write=False)
        return matrices

    @cached_property
    def next_state_table(self) -> np.ndarray:
        """δ[s, x] = index of the next state, -1 where no edge exists; shape (n, k)."""
        table = np.full((len(self.states), self.alphabet_size), -1, dtype=np.int64)
        for (state, symbol), (_, target) in self.transitions.items():
            table[self.state_index[state], symbol] = self.state_index[target]
        table.setflags(write=False)
        return table

    @cached_property
    def emission_matrix(self) -> np.ndarray:
        """E[s, x] = Pr(emit x | s); shape (n, k)."""
        return self.labeled_matrices.sum(axis=2).T

    @cached_property
    def state_matrix(self) -> np.ndarray:
        """Stochastic state-to-state matrix with symbols summed out."""
        return self.labeled_matrices.sum(axis=0)

    @cached_property
    def stationary_vector(self) -> np.ndarray:
        vector = _solve_stationary(self.state_matrix)
        vector.setflags(write=False)
        return vector


@dataclass(frozen=True)
class StationaryDistribution:
    weights: dict[str, float]

    def vector(self, machine: EpsilonMachine) -> np.ndarray:
        return np.array([self.weights[state] for state in machine.states])


class CompressionRedundancies(NamedTuple):
    single_symbol: float  # R_1 = log2 k - H[X]
    asymptotic: float  # R_inf = log2 k - hmu


@dataclass(frozen=True)
class WindowClasses:
    """Windows of one length grouped by the state vector they induce.

    Past classes: `directions[c]` is Pr(S | window) for the state following
    the window and `weights[c]` the class probability.
    Future classes: `weights[c] * directions[c][s]` is the total probability of
    the class's windows given the state preceding them is s.
    """

    length: int
    directions: np.ndarray
    weights: np.ndarray

    @property
    def count(self) -> int:
        return len(self.weights)

    @property
    def state_vectors(self) -> np.ndarray:
        return self.weights[:, None] * self.directions


def stationary_distribution(machine: EpsilonMachine) -> StationaryDistribution:
    """Unique stationary distribution of the machine's state chain."""
    vector = machine.stationary_vector
    return StationaryDistribution(
        {state: float(p) for state, p in zip(machine.states, vector, strict=True)}
    )


def word_distribution(machine: EpsilonMachine, length: int) -> JointDistribution:
    """Exact stationary distribution of length-ℓ words.

    Paths are expanded one symbol at a time from every state weighted by π,
    dropping zero-probability branches and merging rows that share both word
    and current state.
    """
    if length < 1:
        raise InvalidArgumentError(f"Word length must be at least 1, got {length}")
    k, n = machine.alphabet_size, len(machine.states)
    delta = machine.next_state_table
    emissions = machine.emission_matrix

    pi = machine.stationary_vector
    states = np.flatnonzero(pi > 0)
    probs = pi[states]
    words = np.zeros((len(states), 0), dtype=np.int64)

    for step in range(length):
        branch = probs[:, None] * emissions[states]
        rows, symbols = np.nonzero(branch > 0)
        words = np.hstack([words[rows], symbols[:, None]])
        probs = branch[rows, symbols]
        states = delta[states[rows], symbols]

        keyed = np.hstack([words, states[:, None]])
        representatives, inverse = group_rows(keyed, (k,) * (step + 1) + (n,))
        if len(representatives) != len(keyed):
            probs = np.bincount(inverse, weights=probs, minlength=len(representatives))
            words, states = representatives[:, :-1], representatives[:, -1]
        if len(words) > MAX_WORD_ROWS:
            raise ResourceLimitError(
                f"Length-{length} words exceed the budget of {MAX_WORD_ROWS} rows at step {step + 1}"
            )

    logger.debug("Enumerated %d (word, state) rows for length %d", len(words), length)
    return JointDistribution(words, probs, (k,) * length)


def entropy_rate_exact(machine: EpsilonMachine) -> float:
    """hμ = Σ_s π(s) H[next symbol | s]."""
    pi = machine.stationary_vector
    return float(sum(p * shannon_entropy(row) for p, row in zip(pi, machine.emission_matrix)))


def single_symbol_entropy(machine: EpsilonMachine) -> float:
    """H[X] from the stationary one-symbol distribution."""
    return shannon_entropy(machine.stationary_vector @ machine.emission_matrix)


def compression_redundancies(machine: EpsilonMachine) -> CompressionRedundancies:
    """Redundancy of raw measurements against a memoryless and an optimal code."""
    capacity = math.log2(machine.alphabet_size)
    return CompressionRedundancies(
        single_symbol=capacity - single_symbol_entropy(machine),
        asymptotic=capacity - entropy_rate_exact(machine),
    )


def sample_sequence(machine: EpsilonMachine, length: int, seed: int) -> np.ndarray:
    """Draw a symbol sequence starting from a π-distributed state.

    Uses numpy's PCG64 bit generator: the start state is drawn with
    `Generator.choice(p=π)`, then one `Generator.random()` double per symbol is
    mapped through the current state's cumulative emission probabilities.
    Output is identical for identical (machine, length, seed).
    """
    if length < 1:
        raise InvalidArgumentError(f"Sequence length must be at least 1, got {length}")
    rng = np.random.Generator(np.random.PCG64(seed))
    state = int(rng.choice(len(machine.states), p=machine.stationary_vector))
    draws = rng.random(length).tolist()

    thresholds = []
    symbols = []
    for row in machine.emission_matrix:
        positive = [x for x in range(machine.alphabet_size) if row[x] > 0]
        cumulative = np.cumsum(row[positive]).tolist()
        cumulative[-1] = 1.0
        thresholds.append(cumulative)
        symbols.append(positive)
    delta = machine.next_state_table.tolist()

    sequence = []
    for u in draws:
        position = bisect.bisect_right(thresholds[state], u)
        symbol = symbols[state][position]
        sequence.append(symbol)
        state = delta[state][symbol]
    return np.array(sequence, dtype=np.int64)


def empirical_word_distribution(
    sequence: np.ndarray, length: int, alphabet_size: int | None = None
) -> JointDistribution:
    """Sliding-window word frequencies of a symbol sequence."""
    symbols = np.asarray(sequence, dtype=np.int64)
    if length < 1:
        raise InvalidArgumentError(f"Word length must be at least 1, got {length}")
    if len(symbols) < length:
        raise InvalidArgumentError(
            f"Sequence of length {len(symbols)} is shorter than the word length {length}"
        )
    k = alphabet_size if alphabet_size is not None else int(symbols.max()) + 1
    windows = sliding_window_view(symbols, length)
    representatives, inverse = group_rows(windows, (k,) * length)
    counts = np.bincount(inverse, minlength=len(representatives))
    return JointDistribution(representatives, counts / counts.sum(), (k,) * length)


def iter_past_classes(machine: EpsilonMachine) -> Iterator[WindowClasses]:
    """Past-window classes of length 0, 1, 2, ... (forward filtering from π)."""
    matrices = machine.labeled_matrices
    directions = machine.stationary_vector[None, :].copy()
    weights = np.ones(1)
    for step in count():
        yield WindowClasses(step, directions, weights)
        directions, weights = _advance_classes(directions, weights, matrices, forward=True)


def iter_future_classes(machine: EpsilonMachine) -> Iterator[WindowClasses]:
    """Future-window classes of length 0, 1, 2, ... (backward likelihoods)."""
    n = len(machine.states)
    matrices = machine.labeled_matrices
    directions = np.full((1, n), 1.0 / n)
    weights = np.array([float(n)])
    for step in count():
        yield WindowClasses(step, directions, weights)
        directions, weights = _advance_classes(directions, weights, matrices, forward=False)


def past_classes(machine: EpsilonMachine, length: int) -> list[WindowClasses]:
    """Past-window classes for every length 0..length."""
    result = list(islice(iter_past_classes(machine), length + 1))
    logger.debug("Past classes at length %d: %d", length, result[-1].count)
    return result


def future_classes(machine: EpsilonMachine, length: int) -> list[WindowClasses]:
    """Future-window classes for every length 0..length."""
    result = list(islice(iter_future_classes(machine), length + 1))
    logger.debug("Future classes at length %d: %d", length, result[-1].count)
    return result


def predictive_entropy(machine: EpsilonMachine, classes: WindowClasses) -> float:
    """H[next symbol | past window] for a set of past classes."""
    predictions = classes.directions @ machine.emission_matrix
    return float(sum(w * shannon_entropy(row) for w, row in zip(classes.weights, predictions)))


def block_entropy_rates(machine: EpsilonMachine, length: int) -> np.ndarray:
    """h_ℓ = H(ℓ) - H(ℓ-1) for ℓ = 1..length, entry ℓ-1 of the result."""
    return np.array(
        [predictive_entropy(machine, classes) for classes in past_classes(machine, length - 1)]
    )


def window_distribution_from_classes(
    machine: EpsilonMachine, past: WindowClasses, future: WindowClasses
) -> JointDistribution:
    """Joint distribution of (past class, X₀, future class)."""
    cells = past.count * machine.alphabet_size * future.count
    if cells > MAX_WINDOW_CELLS:
        raise ResourceLimitError(
            f"Window table of {cells} cells exceeds the budget of {MAX_WINDOW_CELLS}"
        )
    table = np.einsum(
        "ps,xst,ft->pxf", past.state_vectors, machine.labeled_matrices, future.state_vectors
    )
    total = float(table.sum())
    if abs(total - 1.0) > 1e-9:
        raise ConsistencyError(f"Window distribution has mass {total}")
    outcomes = np.argwhere(table > 0)
    probs = table[table > 0] / total
    return JointDistribution(
        outcomes, probs, (past.count, machine.alphabet_size, future.count)
    )


def window_distribution(
    machine: EpsilonMachine, past_length: int, future_length: int
) -> JointDistribution:
    """(past class, X₀, future class) for windows X_{-past:0} and X_{1:future+1}.

    Equivalent to the (past + 1 + future)-word distribution for every measure
    that treats each window as one variable.
    """
    past = past_classes(machine, past_length)[-1]
    future = future_classes(machine, future_length)[-1]
    return window_distribution_from_classes(machine, past, future)


def even_process() -> EpsilonMachine:
    """Blocks of 1s of even length separated by one or more 0s."""
    return EpsilonMachine(
        states=("A", "B"),
        alphabet_size=2,
        transitions={
            ("A", 0): (0.5, "A"),
            ("A", 1): (0.5, "B"),
            ("B", 1): (1.0, "A"),
        },
        name="even",
    )


def golden_mean_family(p: float = 0.5) -> EpsilonMachine:
    """No two consecutive 0s; p is the probability of the 1-emitting self-loop at A."""
    if not 0 < p < 1:
        raise InvalidArgumentError(f"Self-loop probability must lie in (0, 1), got {p}")
    return EpsilonMachine(
        states=("A", "B"),
        alphabet_size=2,
        transitions={
            ("A", 1): (p, "A"),
            ("A", 0): (1.0 - p, "B"),
            ("B", 1): (1.0, "A"),
        },
        name="golden-mean" if p == 0.5 else f"golden-mean(p={p:g})",
    )


def fair_coin() -> EpsilonMachine:
    return EpsilonMachine(
        states=("A",),
        alphabet_size=2,
        transitions={("A", 0): (0.5, "A"), ("A", 1): (0.5, "A")},
        name="coin",
    )


def nrps(path: str | Path | None = None) -> EpsilonMachine:
    """Noisy Random Phase-Slip machine loaded from a transcription file.

    The transcription is accepted only if it reproduces the process's known
    single-symbol entropy and entropy rate.
    """
    from .machine_format import load_machine

    source = Path(path) if path is not None else MACHINES_DIR / "nrps.machine"
    if not source.exists():
        raise ModelError(
            f"No NRPS transcription found at {source}; supply a machine file for it"
        )
    machine = load_machine(source, name="nrps")
    h1 = single_symbol_entropy(machine)
    hmu = entropy_rate_exact(machine)
    if (
        abs(h1 - NRPS_SINGLE_SYMBOL_ENTROPY) > NRPS_TRANSCRIPTION_TOLERANCE
        or abs(hmu - NRPS_ENTROPY_RATE) > NRPS_TRANSCRIPTION_TOLERANCE
    ):
        raise ModelError(
            f"NRPS transcription rejected: H[1]={h1:.5f}, hmu={hmu:.5f}; expected "
            f"{NRPS_SINGLE_SYMBOL_ENTROPY:.5f} and {NRPS_ENTROPY_RATE:.5f}"
        )
    return machine


BUILTIN_PROCESSES = {
    "even": even_process,
    "golden-mean": golden_mean_family,
    "nrps": nrps,
    "coin": fair_coin,
}


def builtin_machine(name: str) -> EpsilonMachine:
    try:
        factory = BUILTIN_PROCESSES[name]
    except KeyError:
        raise InvalidArgumentError(
            f"Unknown process '{name}'. Expected one of: {', '.join(BUILTIN_PROCESSES)}"
        )
    return factory()


def _advance_classes(
    directions: np.ndarray, weights: np.ndarray, matrices: np.ndarray, *, forward: bool
) -> tuple[np.ndarray, np.ndarray]:
    """Extend every class by one symbol and merge classes with equal directions."""
    new_directions, new_weights = [], []
    for matrix in matrices:
        vectors = directions @ (matrix if forward else matrix.T)
        mass = vectors.sum(axis=1)
        live = mass > 0
        new_directions.append(vectors[live] / mass[live, None])
        new_weights.append(weights[live] * mass[live])
    stacked = np.vstack(new_directions)
    masses = np.concatenate(new_weights)

    keys = np.round(stacked, CLASS_KEY_DECIMALS) + 0.0
    _, first, inverse = np.unique(keys, axis=0, return_index=True, return_inverse=True)
    merged = np.bincount(inverse.ravel(), weights=masses, minlength=len(first))
    if len(first) > MAX_PREDICTIVE_CLASSES:
        raise ResourceLimitError(
            f"{len(first)} predictive classes exceed the budget of {MAX_PREDICTIVE_CLASSES}"
        )
    return stacked[first], merged


def _solve_stationary(matrix: np.ndarray) -> np.ndarray:
    n = matrix.shape[0]
    if n <= DENSE_STATIONARY_LIMIT:
        system = matrix.T - np.eye(n)
        system[-1, :] = 1.0
        rhs = np.zeros(n)
        rhs[-1] = 1.0
        try:
            vector = np.linalg.solve(system, rhs)
        except np.linalg.LinAlgError:
            raise ModelError("State chain has no unique stationary distribution")
    else:
        # Lazy chain: same fixed point, aperiodic, so plain iteration converges.
        lazy = 0.5 * (matrix + np.eye(n))
        vector = np.full(n, 1.0 / n)
        for _ in range(POWER_ITERATION_MAX_STEPS):
            updated = vector @ lazy
            if np.abs(updated - vector).sum() < POWER_ITERATION_TOLERANCE:
                vector = updated
                break
            vector = updated
        else:
            raise ModelError("Power iteration for the stationary distribution did not converge")

    if np.any(vector < -IDENTITY_TOLERANCE):
        raise ModelError("Stationary distribution has negative entries")
    vector = np.clip(vector, 0.0, None)
    vector = vector / vector.sum()
    if np.abs(vector @ matrix - vector).max() > IDENTITY_TOLERANCE:
        raise ConsistencyError("Stationary distribution is not a fixed point of the state chain")
    return vector


def _validate_machine(machine: EpsilonMachine) -> None:
    if not machine.states:
        raise ModelError("A machine needs at least one state")
    if len(set(machine.states)) != len(machine.states):
        raise ModelError(f"Duplicate state names in {machine.states}")
    if machine.alphabet_size < 1:
        raise ModelError(f"Alphabet size must be positive, got {machine.alphabet_size}")

    known = set(machine.states)
    outgoing = dict.fromkeys(machine.states, 0.0)
    successors: dict[str, set[str]] = {state: set() for state in machine.states}
    for key, value in machine.transitions.items():
        state, symbol = key
        prob, target = value
        if state not in known or target not in known:
            raise ModelError(f"Edge {state} -> {target} references an unknown state")
        if not 0 <= symbol < machine.alphabet_size:
            raise ModelError(f"Symbol {symbol} outside alphabet of size {machine.alphabet_size}")
        if not 0 < prob <= 1:
            raise ModelError(f"Edge ({state}, {symbol}) has probability {prob} outside (0, 1]")
        outgoing[state] += prob
        successors[state].add(target)

    for state, total in outgoing.items():
        if abs(total - 1.0) > PROBABILITY_TOLERANCE:
            raise ModelError(f"Outgoing probabilities of state {state} sum to {total}")

    predecessors: dict[str, set[str]] = {state: set() for state in machine.states}
    for state, targets in successors.items():
        for target in targets:
            predecessors[target].add(state)
    start = machine.states[0]
    if _reachable(start, successors) != known or _reachable(start, predecessors) != known:
        raise ModelError("Machine is not strongly connected, so it has no unique stationary measure")


def _reachable(start: str, graph: dict[str, set[str]]) -> set[str]:
    seen = {start}
    frontier = [start]
    while frontier:
        for target in graph[frontier.pop()]:
            if target not in seen:
                seen.add(target)
                frontier.append(target)
    return seen
