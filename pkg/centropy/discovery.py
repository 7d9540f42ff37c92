"""
Optimal causation entropy (oCSE) network discovery.

For every target node the candidate predictors are the lagged copies of all
variables. A forward pass greedily adds the candidate with the largest
causation entropy (conditional mutual information with the target's next
value, given the candidates already chosen) for as long as a shuffle test
finds it significant. A backward pass then re-tests every chosen candidate
against all the others and drops the ones that are no longer significant.
The survivors become the edges of the causal graph.

Shuffle tests are reproducible: every permutation is drawn from its own
random stream derived from ``(seed, target, candidate, pass, iteration,
permutation index)``, so results do not depend on how work is scheduled.
"""
import logging
from dataclasses import dataclass, field, replace
from itertools import combinations

import numpy as np
from joblib import Parallel, delayed

from . import tasks
from .estimators import EstimatorSpec
from .exceptions import (
    DiscoveryError,
    EstimatorError,
    InvalidConfig,
    NonFiniteInput,
    SeriesTooShort,
)
from .graph import CausalGraph, default_node_names
from .information import conditional_mutual_information, mutual_information

logger = logging.getLogger(__name__)

FORWARD = 0
BACKWARD = 1

FORWARD_TESTS = ("candidate", "max")
MAX_SEED = 2 ** 64 - 1


@dataclass(frozen=True)
class DiscoveryConfig:
    """Parameters of one discovery run.

    ``forward_test`` selects the null of the forward gate: ``"candidate"``
    permutes the selected candidate only, ``"max"`` compares against the
    maximum over all remaining candidates of their permuted CMI.
    ``backward_fixpoint`` repeats backward sweeps until nothing is removed.
    """
    estimator: EstimatorSpec = field(default_factory=EstimatorSpec)
    alpha_forward: float = 0.05
    alpha_backward: float = 0.05
    permutations: int = 200
    max_lag: int = 1
    seed: int = 0
    standardize: bool = True
    include_self: bool = True
    backward_fixpoint: bool = False
    forward_test: str = "candidate"

    def __post_init__(self):
        if not isinstance(self.estimator, EstimatorSpec):
            raise InvalidConfig("estimator must be an EstimatorSpec")
        for name in ("alpha_forward", "alpha_backward"):
            value = getattr(self, name)
            if not 0 < value < 1:
                raise InvalidConfig(f"{name} must lie in (0, 1), got {value}")
        if int(self.permutations) != self.permutations or self.permutations < 1:
            raise InvalidConfig(f"permutations must be a positive integer, got {self.permutations}")
        if int(self.max_lag) != self.max_lag or self.max_lag < 1:
            raise InvalidConfig(f"max_lag must be a positive integer, got {self.max_lag}")
        if int(self.seed) != self.seed or not 0 <= self.seed <= MAX_SEED:
            raise InvalidConfig(f"seed must be an unsigned 64-bit integer, got {self.seed}")
        if self.forward_test not in FORWARD_TESTS:
            raise InvalidConfig(f"forward_test must be one of {FORWARD_TESTS}, got '{self.forward_test}'")


@dataclass(frozen=True, order=True)
class Candidate:
    """A lagged predictor: ``variable`` observed ``lag`` steps before the target."""
    variable: int
    lag: int

    def __post_init__(self):
        if self.lag < 1:
            raise InvalidConfig(f"Candidate lag must be at least 1, got {self.lag}")


@dataclass(frozen=True)
class ShuffleTestResult:
    observed_cmi: float
    p_value: float
    null_samples: tuple
    conditioning: tuple = ()


@dataclass(frozen=True, eq=False)
class LagEmbedding:
    """Aligned candidate and target columns of a time series.

    ``predictors[:, variable * max_lag + lag - 1]`` holds ``variable`` delayed
    by ``lag`` steps; ``targets[:, i]`` holds variable ``i``'s next values.
    """
    n_nodes: int
    max_lag: int
    predictors: np.ndarray
    targets: np.ndarray
    node_names: tuple = None

    @property
    def n_samples(self):
        return self.targets.shape[0]

    @property
    def candidates(self):
        return tuple(
            Candidate(variable, lag)
            for variable in range(self.n_nodes)
            for lag in range(1, self.max_lag + 1)
        )

    def _index(self, candidate):
        if not (0 <= candidate.variable < self.n_nodes and candidate.lag <= self.max_lag):
            raise InvalidConfig(f"{candidate} is outside the embedding")
        return candidate.variable * self.max_lag + candidate.lag - 1

    def column(self, candidate):
        return self.predictors[:, [self._index(candidate)]]

    def block(self, candidates):
        return self.predictors[:, [self._index(c) for c in candidates]]

    def target(self, node):
        return self.targets[:, [node]]

    def own_lags(self, node):
        return tuple(Candidate(node, lag) for lag in range(1, self.max_lag + 1))


def _zscore(columns):
    std = columns.std(axis=0)
    std[std == 0] = 1.0
    return (columns - columns.mean(axis=0)) / std


def build_lag_embedding(data, max_lag=1, standardize=False, node_names=None):
    """Window ``data`` (time x variables) into lagged candidates and next-step targets."""
    values = np.asarray(data, dtype=float)
    if values.ndim != 2:
        raise InvalidConfig(f"Time series must be a 2-D (time, variables) array, got {values.ndim} dimensions")
    if int(max_lag) != max_lag or max_lag < 1:
        raise InvalidConfig(f"max_lag must be a positive integer, got {max_lag}")
    n_steps, n_nodes = values.shape
    if n_steps <= max_lag + 1:
        raise SeriesTooShort(f"{n_steps} time steps are too few for max_lag={max_lag}")

    predictors = np.empty((n_steps - max_lag, n_nodes * max_lag))
    for variable in range(n_nodes):
        for lag in range(1, max_lag + 1):
            predictors[:, variable * max_lag + lag - 1] = values[max_lag - lag:n_steps - lag, variable]
    targets = values[max_lag:, :].copy()
    if standardize:
        predictors = _zscore(predictors)
        targets = _zscore(targets)
    return LagEmbedding(
        n_nodes=n_nodes,
        max_lag=max_lag,
        predictors=predictors,
        targets=targets,
        node_names=tuple(node_names) if node_names is not None else None,
    )


def _permutation(seed, key, index, size):
    sequence = np.random.SeedSequence(seed, spawn_key=(*key, index))
    return np.random.default_rng(sequence).permutation(size)


def _p_value(observed, null_samples):
    exceed = sum(1 for value in null_samples if value >= observed)
    return (1 + exceed) / (1 + len(null_samples))


def _map(function, items, n_jobs):
    if n_jobs in (None, 1):
        return [function(item) for item in items]
    return Parallel(n_jobs=n_jobs, prefer="threads")(delayed(function)(item) for item in items)


def permutation_test(x, y, z, spec, *, permutations, seed, key, n_jobs=1):
    """Shuffle test of I(x; y | z): only the rows of ``x`` are permuted.

    ``key`` (a tuple of non-negative integers) names the random stream; the
    p-value is ``(1 + #{null >= observed}) / (1 + permutations)``.
    """
    x = np.asarray(x, dtype=float)
    observed = conditional_mutual_information(x, y, z, spec)

    def null_sample(index):
        order = _permutation(seed, key, index, x.shape[0])
        return conditional_mutual_information(x[order], y, z, spec)

    null_samples = tuple(_map(null_sample, range(permutations), n_jobs))
    return ShuffleTestResult(observed, _p_value(observed, null_samples), null_samples)


def causation_entropy(candidate, target, conditioning, embedding, spec):
    """CMI between a candidate and the target's next value given the conditioning candidates."""
    try:
        return conditional_mutual_information(
            embedding.column(candidate),
            embedding.target(target),
            embedding.block(sorted(conditioning)),
            spec,
        )
    except EstimatorError as exc:
        raise DiscoveryError(exc, target, candidate, embedding.node_names) from exc


def _stream_key(target, candidate, stream):
    return (target, candidate.variable, candidate.lag, *stream)


def shuffle_test(candidate, target, conditioning, embedding, config, stream=(FORWARD, 0), n_jobs=1):
    """Significance of ``candidate`` for ``target`` given ``conditioning``.

    ``stream`` is the ``(pass, iteration)`` part of the random-stream key.
    """
    conditioning = tuple(sorted(conditioning))
    if candidate in conditioning:
        raise InvalidConfig(f"{candidate} cannot be tested against a set that contains it")
    try:
        result = permutation_test(
            embedding.column(candidate),
            embedding.target(target),
            embedding.block(conditioning),
            config.estimator,
            permutations=config.permutations,
            seed=config.seed,
            key=_stream_key(target, candidate, stream),
            n_jobs=n_jobs,
        )
    except EstimatorError as exc:
        raise DiscoveryError(exc, target, candidate, embedding.node_names) from exc
    return replace(result, conditioning=conditioning)


def _max_statistic_test(best, remaining, target, selected, embedding, config, iteration, n_jobs):
    conditioning = tuple(sorted(selected))
    y = embedding.target(target)
    z = embedding.block(conditioning)
    observed = causation_entropy(best, target, conditioning, embedding, config.estimator)

    def null_sample(index):
        values = []
        for candidate in remaining:
            order = _permutation(
                config.seed, _stream_key(target, candidate, (FORWARD, iteration)), index, embedding.n_samples
            )
            try:
                values.append(conditional_mutual_information(embedding.column(candidate)[order], y, z, config.estimator))
            except EstimatorError as exc:
                raise DiscoveryError(exc, target, candidate, embedding.node_names) from exc
        return max(values)

    null_samples = tuple(_map(null_sample, range(config.permutations), n_jobs))
    return ShuffleTestResult(observed, _p_value(observed, null_samples), null_samples, conditioning)


def _argmax_candidate(remaining, target, selected, embedding, config):
    """Remaining candidate with the largest causation entropy; ties go to the lowest (variable, lag)."""
    best, best_score = None, -np.inf
    for candidate in sorted(remaining):
        score = causation_entropy(candidate, target, selected, embedding, config.estimator)
        if best is None or score > best_score:
            best, best_score = candidate, score
    return best


def _forward_gate(best, remaining, target, selected, embedding, config, n_jobs=1):
    iteration = len(selected)
    if config.forward_test == "max":
        return _max_statistic_test(best, remaining, target, selected, embedding, config, iteration, n_jobs)
    return shuffle_test(best, target, selected, embedding, config, stream=(FORWARD, iteration), n_jobs=n_jobs)


def _candidate_pool(target, embedding, config):
    return [c for c in embedding.candidates if config.include_self or c.variable != target]


def forward_pass(target, embedding, config, n_jobs=1):
    """Greedy parent selection; returns ``(candidate, test result)`` pairs in acceptance order."""
    remaining = _candidate_pool(target, embedding, config)
    selected = []
    while remaining:
        chosen = [candidate for candidate, _ in selected]
        best = _argmax_candidate(remaining, target, chosen, embedding, config)
        result = _forward_gate(best, remaining, target, chosen, embedding, config, n_jobs)
        if result.p_value > config.alpha_forward:
            logger.debug(f"Target {target}: forward pass stops at {best} (p={result.p_value:.4g})")
            break
        logger.debug(f"Target {target}: forward pass accepts {best} (cmi={result.observed_cmi:.4g}, p={result.p_value:.4g})")
        selected.append((best, result))
        remaining.remove(best)
    return selected


def backward_pass(target, selected, embedding, config, n_jobs=1):
    """Prune ``selected`` (candidates in acceptance order) by re-testing each against the others.

    Surviving candidates carry a test conditioned on exactly the other
    survivors; those results become the edge attributes.
    """
    survivors = list(selected)
    results = {}
    sweep = 0

    def retest(candidate):
        others = [s for s in survivors if s != candidate]
        result = shuffle_test(candidate, target, others, embedding, config, stream=(BACKWARD, sweep), n_jobs=n_jobs)
        if result.p_value > config.alpha_backward:
            logger.debug(f"Target {target}: backward pass removes {candidate} (p={result.p_value:.4g})")
            survivors.remove(candidate)
            results.pop(candidate, None)
            return True
        results[candidate] = result
        return False

    while True:
        removed = False
        for candidate in list(survivors):
            removed |= retest(candidate)
        if not (config.backward_fixpoint and removed):
            break
        sweep += 1

    # A survivor tested before a later removal was conditioned on a stale set.
    while True:
        stale = [
            c for c in survivors
            if results[c].conditioning != tuple(sorted(s for s in survivors if s != c))
        ]
        if not stale:
            break
        for candidate in stale:
            if candidate in survivors:
                retest(candidate)

    return [(candidate, results[candidate]) for candidate in survivors]


def _is_consistent(subset, pool, target, embedding, config):
    for candidate in subset:
        others = [c for c in subset if c != candidate]
        result = shuffle_test(candidate, target, others, embedding, config, stream=(BACKWARD, 0))
        if result.p_value > config.alpha_backward:
            return False
    remaining = [c for c in pool if c not in subset]
    if not remaining:
        return True
    best = _argmax_candidate(remaining, target, subset, embedding, config)
    return _forward_gate(best, remaining, target, list(subset), embedding, config).p_value > config.alpha_forward


def exhaustive_search(target, embedding, config):
    """Smallest candidate set satisfying both significance rules, by brute force.

    A set qualifies when each member is significant given the rest (the
    backward rule) and its best outside candidate is not significant given
    the set (the forward gate). Among the smallest qualifying sets the one
    with the largest mutual information with the target wins. Returns
    ``None`` when no set qualifies.
    """
    pool = _candidate_pool(target, embedding, config)
    y = embedding.target(target)
    for size in range(len(pool) + 1):
        qualifying = [
            subset for subset in combinations(sorted(pool), size)
            if _is_consistent(subset, pool, target, embedding, config)
        ]
        if qualifying:
            return max(
                qualifying,
                key=lambda subset: mutual_information(embedding.block(subset), y, config.estimator) if subset else 0.0,
            )
    return None


def discover_network(data, config=None, *, node_names=None, n_jobs=1, permutation_jobs=1):
    """Discover the lagged causal network of ``data`` (time x variables).

    ``n_jobs`` threads process targets in parallel and each shuffle test
    spreads its permutations over ``permutation_jobs`` threads; the result is
    identical for any thread counts.
    """
    config = config or DiscoveryConfig()
    values = np.asarray(data, dtype=float)
    if values.ndim != 2 or values.shape[1] < 2:
        raise InvalidConfig(f"Need a (time, variables) array with at least 2 variables, got shape {values.shape}")
    if not np.all(np.isfinite(values)):
        raise NonFiniteInput("Time series contains NaN or infinite values")
    n_nodes = values.shape[1]
    names = tuple(node_names) if node_names is not None else default_node_names(n_nodes)
    if len(names) != n_nodes:
        raise InvalidConfig(f"Got {len(names)} node names for {n_nodes} variables")

    # Count data keeps its integer support.
    standardize = config.standardize and not config.estimator.is_discrete
    embedding = build_lag_embedding(values, config.max_lag, standardize=standardize, node_names=names)
    logger.info(
        f"Discovering {n_nodes} targets over {embedding.n_samples} samples "
        f"(estimator={config.estimator.kind.value}, max_lag={config.max_lag}, permutations={config.permutations})"
    )
    edges = tasks.run_targets(embedding, config, n_jobs=n_jobs, permutation_jobs=permutation_jobs)
    return CausalGraph(n_nodes=n_nodes, node_names=names, edges=tuple(edges))


def transfer_entropy(source, target, lag, embedding, spec=None):
    """Causation entropy of ``source`` at ``lag`` given the target's own past (all embedded lags).

    A source that is already part of that past carries no further information
    and gives exactly 0.
    """
    own_past = embedding.own_lags(target)
    if Candidate(source, lag) in own_past:
        return 0.0
    return conditional_mutual_information(
        embedding.column(Candidate(source, lag)),
        embedding.target(target),
        embedding.block(own_past),
        spec,
    )


def transfer_entropy_matrix(data, max_lag=1, spec=None, lag=1):
    """Pairwise transfer entropies; entry ``[i, j]`` is TE from ``j`` to ``i`` at ``lag``."""
    embedding = build_lag_embedding(data, max_lag)
    n_nodes = embedding.n_nodes
    matrix = np.zeros((n_nodes, n_nodes))
    for i in range(n_nodes):
        for j in range(n_nodes):
            if i != j:
                matrix[i, j] = transfer_entropy(j, i, lag, embedding, spec)
    return matrix
