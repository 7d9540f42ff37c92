"""
Entropy, mutual information and conditional mutual information.

All quantities are in nats. Inputs are sample blocks: arrays of shape
(samples, variables), or 1-D arrays for a single variable, with rows aligned
across the blocks of one call. Estimates are not clamped at zero.

Usage:
    spec = EstimatorSpec(kind="knn", k_neighbors=4)
    cmi = conditional_mutual_information(x, y, z, spec)
"""
import numpy as np

from .estimators import EstimatorKind, EstimatorSpec, as_block, check_aligned, get_estimator

__all__ = [
    "EstimatorKind",
    "EstimatorSpec",
    "conditional_mutual_information",
    "entropy",
    "mutual_information",
]

DEFAULT_SPEC = EstimatorSpec()


def _prepare(spec, **blocks):
    estimator = get_estimator(spec or DEFAULT_SPEC)
    arrays = [estimator.validate(as_block(data, name)) for name, data in blocks.items()]
    check_aligned(*arrays)
    return estimator, arrays


def entropy(x, spec=None):
    estimator, (x,) = _prepare(spec, x=x)
    return float(estimator.entropy(x))


def mutual_information(x, y, spec=None):
    estimator, (x, y) = _prepare(spec, x=x, y=y)
    return float(estimator.mutual_information(x, y))


def conditional_mutual_information(x, y, z=None, spec=None):
    """I(x; y | z); an empty or missing ``z`` reduces to :func:`mutual_information`."""
    if z is None or np.size(z) == 0:
        return mutual_information(x, y, spec)
    estimator, (x, y, z) = _prepare(spec, x=x, y=y, z=z)
    return float(estimator.conditional_mutual_information(x, y, z))
