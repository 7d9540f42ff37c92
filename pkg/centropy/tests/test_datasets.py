import numpy as np
import pytest

from centropy.datasets import (
    SyntheticConfig,
    linear_stochastic_gaussian_process,
    poisson_count_process,
    spectral_radius,
)
from centropy.exceptions import InvalidConfig


@pytest.mark.parametrize("params", [
    {"n": 1},
    {"T": 9},
    {"rho": 0.0},
    {"rho": 1.5},
    {"p": -0.1},
    {"p": 1.1},
    {"seed": -1},
    {"noise_std": 0.0},
    {"burn_in": -5},
])
def test_config_validation(params):
    with pytest.raises(InvalidConfig):
        SyntheticConfig(**params)


def test_default_instance_shapes():
    data, truth = linear_stochastic_gaussian_process(n=5, T=1000, rho=0.7, p=0.2, seed=3)
    assert data.shape == (1000, 5)
    assert truth.n_nodes == 5
    assert all(edge.lag == 1 and edge.cmi == 0.0 and edge.p_value == 1.0 for edge in truth.edges)


@pytest.mark.parametrize("generator", [linear_stochastic_gaussian_process, poisson_count_process])
def test_generators_are_deterministic(generator):
    first = generator(n=4, T=200, p=0.5, seed=9)
    second = generator(SyntheticConfig(n=4, T=200, p=0.5, seed=9))
    np.testing.assert_array_equal(first.data, second.data)
    assert first.truth == second.truth
    assert not np.array_equal(first.data, generator(n=4, T=200, p=0.5, seed=10).data)


@pytest.mark.parametrize("generator", [linear_stochastic_gaussian_process, poisson_count_process])
def test_truth_matches_weight_support(generator):
    instance = generator(n=6, T=50, p=0.4, seed=1)
    support = {(int(j), int(i)) for i, j in zip(*np.nonzero(instance.weight_matrix))}
    assert {(edge.source, edge.sink) for edge in instance.truth.edges} == support


def test_no_coupling_gives_empty_truth():
    instance = linear_stochastic_gaussian_process(n=5, T=100, p=0.0, seed=2)
    assert instance.truth.edges == ()
    assert not instance.weight_matrix.any()


def test_full_coupling_without_self_loops():
    instance = linear_stochastic_gaussian_process(n=5, T=100, p=1.0, seed=2)
    assert len(instance.truth.edges) == 20
    assert all(edge.source != edge.sink for edge in instance.truth.edges)


def test_self_loops_flag_allows_diagonal():
    instance = linear_stochastic_gaussian_process(n=3, T=100, p=1.0, seed=2, self_loops=True)
    assert len(instance.truth.edges) == 9


def test_weights_are_spectrally_normalized():
    instance = linear_stochastic_gaussian_process(n=5, T=100, rho=0.7, p=1.0, seed=2)
    assert spectral_radius(instance.weight_matrix) == pytest.approx(0.7)


def test_explicit_adjacency_overrides_random_draw():
    adjacency = np.zeros((3, 3))
    adjacency[2, 0] = 1
    instance = linear_stochastic_gaussian_process(n=3, T=100, p=1.0, seed=2, adjacency=adjacency)
    assert [edge.triple for edge in instance.truth.edges] == [(0, 2, 1)]
    assert instance.weight_matrix[2, 0] == pytest.approx(0.7)
    with pytest.raises(InvalidConfig):
        linear_stochastic_gaussian_process(n=3, T=100, adjacency=np.zeros((2, 2)))


def test_linear_process_is_stable_at_strong_coupling():
    data = linear_stochastic_gaussian_process(n=5, T=2000, rho=0.99, p=1.0, seed=4).data
    assert np.all(np.isfinite(data))
    assert np.all(data.var(axis=0) < 1000)


def test_burn_in_length_does_not_change_variance():
    short = linear_stochastic_gaussian_process(n=4, T=20_000, p=0.2, seed=6, burn_in=100).data
    long = linear_stochastic_gaussian_process(n=4, T=20_000, p=0.2, seed=6, burn_in=500).data
    np.testing.assert_allclose(short.var(axis=0), long.var(axis=0), rtol=0.1)


def test_noise_std_scales_uncoupled_series():
    data = linear_stochastic_gaussian_process(n=2, T=5000, p=0.0, seed=1, noise_std=2.0).data
    np.testing.assert_allclose(data.std(axis=0), 2.0, rtol=0.05)


def test_uncoupled_poisson_counts_have_base_rate():
    data = poisson_count_process(n=3, T=10_000, p=0.0, seed=5).data
    assert np.issubdtype(data.dtype, np.integer)
    assert data.min() >= 0
    np.testing.assert_allclose(data.mean(axis=0), 3.0, atol=0.1)


def test_coupled_poisson_counts_rise_above_base_rate():
    adjacency = np.array([[0, 0], [1, 0]])
    data = poisson_count_process(n=2, T=10_000, rho=0.7, seed=5, adjacency=adjacency).data
    assert data[:, 1].mean() > data[:, 0].mean() + 0.5
