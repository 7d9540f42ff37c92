"""Estimator families, one class per kind."""
from .base import Estimator, EstimatorKind, EstimatorSpec, as_block, check_aligned
from .gaussian import GaussianEstimator
from .geometric import GeometricKnnEstimator
from .kde import KdeEstimator
from .knn import KnnEstimator
from .poisson import PoissonEstimator

ESTIMATORS = {
    cls.kind: cls
    for cls in (GaussianEstimator, KnnEstimator, GeometricKnnEstimator, KdeEstimator, PoissonEstimator)
}


def get_estimator(spec):
    return ESTIMATORS[spec.kind](spec)


__all__ = [
    "ESTIMATORS",
    "Estimator",
    "EstimatorKind",
    "EstimatorSpec",
    "as_block",
    "check_aligned",
    "get_estimator",
]
