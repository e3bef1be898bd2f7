"""Tests for Shannon and multivariate information measures."""

import math

import pytest

from infoanatomy.errors import InvalidArgumentError, ResourceLimitError
from infoanatomy.info_measures import (
    MEASURE_IDS,
    TOTAL_CORRELATION,
    atom_measure,
    atom_weights,
    binding_information,
    co_information,
    conditional_entropy,
    conditional_mutual_information,
    enigmatic_information,
    entropy,
    local_exogenous_information,
    measure_value,
    mutual_information,
    residual_entropy,
    shannon_entropy,
    subset_entropies,
    total_correlation,
    weighted_atom_sum,
)
from infoanatomy.joint_dist import JointDistribution, product


class TestXorTriple:
    """The XOR triple is the reference case for synergy."""

    def test_pairwise_and_conditional_information(self, xor_triple):
        assert mutual_information(xor_triple, (0,), (1,)) == pytest.approx(0.0, abs=1e-12)
        assert conditional_mutual_information(xor_triple, (0,), (1,), (2,)) == pytest.approx(
            1.0, abs=1e-12
        )
        assert mutual_information(xor_triple, (0, 1), (2,)) == pytest.approx(1.0, abs=1e-12)

    def test_multivariate_measures(self, xor_triple):
        assert total_correlation(xor_triple) == pytest.approx(1.0, abs=1e-12)
        assert binding_information(xor_triple) == pytest.approx(2.0, abs=1e-12)
        assert residual_entropy(xor_triple) == pytest.approx(0.0, abs=1e-12)
        assert local_exogenous_information(xor_triple) == pytest.approx(3.0, abs=1e-12)
        assert enigmatic_information(xor_triple) == pytest.approx(-1.0, abs=1e-12)
        assert co_information(xor_triple) == pytest.approx(-1.0, abs=1e-12)


def test_shannon_entropy_ignores_zeros():
    """Zero masses contribute nothing."""
    assert shannon_entropy([0.5, 0.5, 0.0]) == pytest.approx(1.0)
    assert shannon_entropy([1.0]) == 0.0
    assert shannon_entropy([]) == 0.0


def test_entropy_of_marginals(xor_triple):
    """Each XOR variable is a fair bit; any two determine the third."""
    assert entropy(xor_triple) == pytest.approx(2.0)
    assert entropy(xor_triple, (2,)) == pytest.approx(1.0)
    assert conditional_entropy(xor_triple, (2,), (0, 1)) == pytest.approx(0.0, abs=1e-12)
    assert conditional_entropy(xor_triple, (2,), ()) == pytest.approx(1.0)


def test_overlapping_index_sets_are_rejected(xor_triple):
    """Measures between sets of variables need disjoint sets."""
    with pytest.raises(InvalidArgumentError, match="overlap"):
        mutual_information(xor_triple, (0, 1), (1,))
    with pytest.raises(InvalidArgumentError, match="overlap"):
        conditional_entropy(xor_triple, (0,), (0,))


def test_co_information_small_cases():
    """Co-information is H for one variable and I for two."""
    bit = JointDistribution([(0,), (1,)], [0.3, 0.7], (2,))
    pair = JointDistribution([(0, 0), (1, 1), (1, 0)], [0.4, 0.4, 0.2], (2, 2))

    assert co_information(bit) == pytest.approx(entropy(bit))
    assert co_information(pair) == pytest.approx(mutual_information(pair, (0,), (1,)))


def test_co_information_vanishes_with_an_independent_variable(random_distribution):
    """Appending an independent variable sends co-information to zero."""
    dependent = random_distribution(3, 2)
    independent = JointDistribution([(0,), (1,)], [0.4, 0.6], (2,))

    assert abs(co_information(product(dependent, independent))) < 1e-10


def test_total_correlation_and_binding_ignore_independent_variables(random_distribution):
    """Independent additions change neither T nor B."""
    base = random_distribution(5, 3)
    extended = product(base, JointDistribution.uniform((3,)))

    assert total_correlation(extended) == pytest.approx(total_correlation(base), abs=1e-10)
    assert binding_information(extended) == pytest.approx(binding_information(base), abs=1e-10)


@pytest.mark.parametrize("seed", range(10))
def test_measure_identities(random_distribution, seed):
    """H = B + R, W = B + T, and enigmatic = T - B equals co-information at N = 3."""
    dist = random_distribution(seed, 3, alphabet_size=3)

    h = entropy(dist)
    t = total_correlation(dist)
    b = binding_information(dist)
    r = residual_entropy(dist)
    w = local_exogenous_information(dist)
    q = enigmatic_information(dist)

    assert h == pytest.approx(b + r, abs=1e-10)
    assert w == pytest.approx(b + t, abs=1e-10)
    assert q == pytest.approx(t - b, abs=1e-10)
    assert q == pytest.approx(co_information(dist), abs=1e-12)
    for value in (t, b, r, w):
        assert value >= -1e-9


def test_subset_entropies_by_bitmask(xor_triple):
    """Bit i of the index selects variable i."""
    values = subset_entropies(xor_triple)

    assert values[0] == 0.0
    assert values[0b001] == pytest.approx(1.0)
    assert values[0b011] == pytest.approx(2.0)
    assert values[0b111] == pytest.approx(2.0)


def test_measure_value_dispatch(xor_triple):
    """Measure ids resolve to the matching functions."""
    assert measure_value(xor_triple, "binding") == pytest.approx(2.0)
    with pytest.raises(InvalidArgumentError, match="Unknown measure"):
        measure_value(xor_triple, "entropy-rate")


class TestAtoms:
    """Information-diagram atoms and integer atom weights."""

    def test_xor_atoms(self, xor_triple):
        atoms = atom_measure(xor_triple)

        assert atoms.values[frozenset({0, 1, 2})] == pytest.approx(-1.0, abs=1e-12)
        assert atoms.values[frozenset({0})] == pytest.approx(0.0, abs=1e-12)
        assert atoms.values[frozenset({0, 1})] == pytest.approx(1.0, abs=1e-12)
        assert atoms.total() == pytest.approx(entropy(xor_triple))

    def test_central_total_correlation_weight(self):
        weights = atom_weights(TOTAL_CORRELATION, 4)

        assert weights.weights[frozenset({0, 1, 2, 3})] == 3
        assert weights.weights[frozenset({0})] == 0

    @pytest.mark.parametrize("variable_count", [2, 3, 4])
    def test_weighted_sums_reproduce_measures(self, random_distribution, variable_count):
        for seed in range(34):
            dist = random_distribution(100 * variable_count + seed, variable_count)
            atoms = atom_measure(dist)
            for measure_id in MEASURE_IDS:
                expected = measure_value(dist, measure_id)
                actual = weighted_atom_sum(atom_weights(measure_id, variable_count), atoms)
                assert actual == pytest.approx(expected, abs=1e-9), measure_id

    def test_weights_need_two_variables(self):
        with pytest.raises(InvalidArgumentError):
            atom_weights("binding", 1)

    def test_atom_budget(self):
        dist = JointDistribution.uniform((2,) * 7)

        with pytest.raises(ResourceLimitError):
            atom_measure(dist)


def test_entropy_of_uniform_alphabet():
    """Uniform over k symbols carries log2 k bits."""
    assert entropy(JointDistribution.uniform((5,))) == pytest.approx(math.log2(5))
