import hypothesis
import numpy as np
import pytest

from centropy.datasets import SyntheticConfig, linear_stochastic_gaussian_process
from centropy.discovery import DiscoveryConfig

hypothesis.settings.register_profile("default", max_examples=50, deadline=None)
hypothesis.settings.register_profile("fast", max_examples=5, deadline=None)
hypothesis.settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240501)


@pytest.fixture
def fast_config():
    return DiscoveryConfig(permutations=50, seed=3)


@pytest.fixture
def chain_instance():
    """Three nodes wired X0 -> X1 -> X2."""
    adjacency = np.zeros((3, 3))
    adjacency[1, 0] = 1
    adjacency[2, 1] = 1
    return linear_stochastic_gaussian_process(
        SyntheticConfig(n=3, T=1000, rho=0.8, p=0.0, seed=11), adjacency=adjacency
    )
