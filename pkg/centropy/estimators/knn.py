"""
k-nearest-neighbour estimators in the max-norm.

Entropy is the Kozachenko-Leonenko estimate. Mutual information and
conditional mutual information use the Kraskov-Stoegbauer-Grassberger
joint-space neighbour counting (and its Frenzel-Pompe conditional form), so
the digamma terms of the marginals are evaluated at the joint-space radius
instead of being estimated separately.
"""
import numpy as np
from scipy.spatial import cKDTree
from scipy.special import digamma

from ..exceptions import NeighborCountTooLarge
from .base import Estimator, EstimatorKind

LOG_TINY = np.log(np.finfo(float).tiny)


class KnnEstimator(Estimator):
    kind = EstimatorKind.KNN

    def check_neighbors(self, n_samples):
        if self.spec.k_neighbors >= n_samples:
            raise NeighborCountTooLarge(
                f"k_neighbors={self.spec.k_neighbors} must be smaller than the {n_samples} samples"
            )

    def kth_radius(self, data):
        """Max-norm distance from every point to its k-th neighbour (self excluded)."""
        self.check_neighbors(data.shape[0])
        distances, _ = cKDTree(data).query(data, k=self.spec.k_neighbors + 1, p=np.inf)
        return distances[:, -1]

    @staticmethod
    def strict_counts(data, radius):
        """Points strictly inside ``radius`` of every point, the point itself included."""
        tree = cKDTree(data)
        return tree.query_ball_point(data, np.nextafter(radius, 0), p=np.inf, return_length=True)

    def entropy(self, x):
        n, d = x.shape
        radius = self.kth_radius(x)
        with np.errstate(divide="ignore"):
            log_diameter = np.maximum(np.log(2.0 * radius), LOG_TINY)
        return digamma(n) - digamma(self.spec.k_neighbors) + d * np.mean(log_diameter)

    def mutual_information(self, x, y):
        n = x.shape[0]
        radius = self.kth_radius(np.hstack([x, y]))
        n_x = self.strict_counts(x, radius)
        n_y = self.strict_counts(y, radius)
        return digamma(self.spec.k_neighbors) + digamma(n) - np.mean(digamma(n_x) + digamma(n_y))

    def conditional_mutual_information(self, x, y, z):
        radius = self.kth_radius(np.hstack([x, y, z]))
        n_xz = self.strict_counts(np.hstack([x, z]), radius)
        n_yz = self.strict_counts(np.hstack([y, z]), radius)
        n_z = self.strict_counts(z, radius)
        return digamma(self.spec.k_neighbors) - np.mean(digamma(n_xz) + digamma(n_yz) - digamma(n_z))
