"""
Per-target discovery jobs.

Targets are independent, so each one is a self-contained unit of work;
``run_targets`` fans them out over a thread pool and gathers the edges back
in target order. Shuffle tests inside a target can use a second, nested pool
for their permutations.
"""
import logging

from joblib import Parallel, delayed

from . import discovery
from .exceptions import DiscoveryError
from .graph import EdgeRecord

logger = logging.getLogger(__name__)


def discover_target(target, embedding, config, permutation_jobs=1):
    """Forward then backward pass for one target; returns its incoming edges.

    ``permutation_jobs`` threads share the permutations of every shuffle test.
    """
    name = embedding.node_names[target] if embedding.node_names else f"X{target}"
    logger.info(f"Discovering parents of {name}")
    try:
        forward = discovery.forward_pass(target, embedding, config, n_jobs=permutation_jobs)
        backward = discovery.backward_pass(
            target, [candidate for candidate, _ in forward], embedding, config, n_jobs=permutation_jobs
        )
    except DiscoveryError as e:
        logger.error(f"Discovery failed for {name}: {str(e)}")
        raise

    edges = [
        EdgeRecord(
            source=candidate.variable,
            sink=target,
            lag=candidate.lag,
            cmi=result.observed_cmi,
            p_value=result.p_value,
        )
        for candidate, result in backward
    ]
    logger.info(f"{name}: {len(forward)} selected, {len(edges)} kept after pruning")
    return edges


def run_targets(embedding, config, n_jobs=1, permutation_jobs=1):
    """Discover every target's parents; edges come back in target order."""
    targets = range(embedding.n_nodes)
    if n_jobs in (None, 1):
        results = [discover_target(target, embedding, config, permutation_jobs) for target in targets]
    else:
        results = Parallel(n_jobs=n_jobs, prefer="threads")(
            delayed(discover_target)(target, embedding, config, permutation_jobs) for target in targets
        )
    return [edge for edges in results for edge in edges]
