"""Shared fixtures: small distributions and the bundled example machines."""

import numpy as np
import pytest

from infoanatomy.joint_dist import JointDistribution
from infoanatomy.process_model import even_process, fair_coin, golden_mean_family


@pytest.fixture
def xor_triple():
    """X, Y fair independent bits and Z = X xor Y."""
    outcomes = [(x, y, x ^ y) for x in (0, 1) for y in (0, 1)]
    return JointDistribution(outcomes, [0.25] * 4, (2, 2, 2))


@pytest.fixture
def copy_triple():
    """Z = X = Y, one fair bit."""
    return JointDistribution([(0, 0, 0), (1, 1, 1)], [0.5, 0.5], (2, 2, 2))


@pytest.fixture
def even():
    return even_process()


@pytest.fixture
def golden_mean():
    return golden_mean_family()


@pytest.fixture
def coin():
    return fair_coin()


@pytest.fixture
def random_distribution():
    """Factory for dense random distributions with a fixed seed."""

    def build(seed, variable_count, alphabet_size=2):
        rng = np.random.default_rng(seed)
        sizes = (alphabet_size,) * variable_count
        dist = JointDistribution.uniform(sizes)
        weights = rng.random(len(dist))
        return JointDistribution(dist.outcomes, weights / weights.sum(), sizes)

    return build
