"""
Synthetic time series with known causal networks.

Both generators draw an Erdős–Rényi coupling topology (or take an explicit
adjacency matrix), simulate a lag-1 process on it from a zero initial state,
discard a burn-in and return the recorded series together with the truth
graph. A generator is a pure function of its config: the same config gives a
bit-identical instance.
"""
import logging
from dataclasses import dataclass, replace

import numpy as np

from .discovery import MAX_SEED
from .exceptions import InvalidConfig
from .graph import CausalGraph, EdgeRecord

logger = logging.getLogger(__name__)

POISSON_BASE_RATE = 3.0


@dataclass(frozen=True)
class SyntheticConfig:
    n: int = 5
    T: int = 1000
    rho: float = 0.7
    p: float = 0.2
    seed: int = 0
    self_loops: bool = False
    noise_std: float = 1.0
    burn_in: int = 100

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise InvalidConfig(f"n must be an integer of at least 2, got {self.n}")
        if int(self.T) != self.T or self.T < 10:
            raise InvalidConfig(f"T must be an integer of at least 10, got {self.T}")
        if not 0 < self.rho < 1:
            raise InvalidConfig(f"rho must lie in (0, 1), got {self.rho}")
        if not 0 <= self.p <= 1:
            raise InvalidConfig(f"p must lie in [0, 1], got {self.p}")
        if int(self.seed) != self.seed or not 0 <= self.seed <= MAX_SEED:
            raise InvalidConfig(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if not self.noise_std > 0:
            raise InvalidConfig(f"noise_std must be positive, got {self.noise_std}")
        if int(self.burn_in) != self.burn_in or self.burn_in < 0:
            raise InvalidConfig(f"burn_in must be a non-negative integer, got {self.burn_in}")


@dataclass(frozen=True, eq=False)
class SyntheticInstance:
    """Generated series (T x n), its truth graph and the coupling weights.

    Unpacks as ``data, truth = instance``.
    """
    data: np.ndarray
    truth: CausalGraph
    weight_matrix: np.ndarray

    def __iter__(self):
        yield self.data
        yield self.truth


def _resolve_config(config, params):
    if config is None:
        return SyntheticConfig(**params)
    return replace(config, **params) if params else config


def _adjacency(config, rng, adjacency=None):
    if adjacency is None:
        drawn = (rng.random((config.n, config.n)) < config.p).astype(float)
        if not config.self_loops:
            np.fill_diagonal(drawn, 0.0)
        return drawn
    adjacency = np.asarray(adjacency, dtype=float)
    if adjacency.shape != (config.n, config.n):
        raise InvalidConfig(f"adjacency must be {config.n}x{config.n}, got {adjacency.shape}")
    return (adjacency != 0).astype(float)


def spectral_radius(matrix):
    if not matrix.any():
        return 0.0
    return float(np.max(np.abs(np.linalg.eigvals(matrix))))


def truth_graph(weight_matrix):
    """Lag-1 graph with an edge j -> i wherever ``weight_matrix[i, j]`` is nonzero."""
    sinks, sources = np.nonzero(weight_matrix)
    edges = tuple(
        EdgeRecord(source=int(j), sink=int(i), lag=1, cmi=0.0, p_value=1.0)
        for i, j in zip(sinks, sources)
    )
    return CausalGraph(n_nodes=weight_matrix.shape[0], edges=edges)


def linear_stochastic_gaussian_process(config=None, *, adjacency=None, **params):
    """Simulate ``x[t+1] = W x[t] + noise`` with ``W = rho * A / max(1, spectral_radius(A))``.

    Keyword ``params`` override fields of ``config`` (or of the default
    config), so ``linear_stochastic_gaussian_process(n=5, T=1000, rho=0.7, p=0.2)``
    works. An explicit ``adjacency`` replaces the random topology.
    """
    config = _resolve_config(config, params)
    rng = np.random.default_rng(config.seed)
    a = _adjacency(config, rng, adjacency)
    weights = config.rho * a / max(1.0, spectral_radius(a))

    steps = config.burn_in + config.T
    noise = rng.normal(0.0, config.noise_std, size=(steps, config.n))
    series = np.empty((steps, config.n))
    state = np.zeros(config.n)
    for t in range(steps):
        state = weights @ state + noise[t]
        series[t] = state

    logger.debug(f"Linear process: {int(a.sum())} edges, spectral radius of W {spectral_radius(weights):.4g}")
    return SyntheticInstance(series[config.burn_in:], truth_graph(weights), weights)


def poisson_count_process(config=None, *, adjacency=None, **params):
    """Counts with ``x[i, t+1] ~ Poisson(3 * (1 + sum_j W[i, j] * x[j, t] / (1 + x[j, t])))``, ``W = rho * A``.

    ``noise_std`` does not apply; the Poisson draw is the only noise.
    """
    config = _resolve_config(config, params)
    rng = np.random.default_rng(config.seed)
    a = _adjacency(config, rng, adjacency)
    weights = config.rho * a

    steps = config.burn_in + config.T
    series = np.empty((steps, config.n), dtype=np.int64)
    state = np.zeros(config.n)
    for t in range(steps):
        rates = POISSON_BASE_RATE * (1.0 + weights @ (state / (1.0 + state)))
        series[t] = rng.poisson(rates)
        state = series[t].astype(float)

    logger.debug(f"Poisson process: {int(a.sum())} edges, mean count {series[config.burn_in:].mean():.4g}")
    return SyntheticInstance(series[config.burn_in:], truth_graph(weights), weights)


GENERATORS = {
    "linear": linear_stochastic_gaussian_process,
    "poisson": poisson_count_process,
}
