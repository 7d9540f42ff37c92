"""
Discrete plug-in estimator for count-valued (Poisson-like) samples.
"""
import numpy as np

from ..exceptions import NonCountData
from .base import Estimator, EstimatorKind


class PoissonEstimator(Estimator):
    kind = EstimatorKind.POISSON

    def validate(self, block):
        if np.any(block < 0) or np.any(block != np.round(block)):
            raise NonCountData("Poisson estimator requires nonnegative integer counts")
        return block

    def entropy(self, x):
        _, counts = np.unique(x, axis=0, return_counts=True)
        p = counts / x.shape[0]
        return -np.sum(p * np.log(p))
