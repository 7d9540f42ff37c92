"""
Closed-form Gaussian estimators from the (regularized) sample covariance.
"""
import numpy as np
from scipy import linalg

from ..exceptions import SingularCovariance
from .base import Estimator, EstimatorKind

LOG_2PIE = np.log(2 * np.pi * np.e)


class GaussianEstimator(Estimator):
    kind = EstimatorKind.GAUSSIAN

    def covariance(self, data):
        """Sample covariance (denominator T-1) with the regularization on the diagonal."""
        cov = np.atleast_2d(np.cov(data, rowvar=False, ddof=1))
        return cov + self.spec.regularization * np.eye(cov.shape[0])

    def entropy_from_covariance(self, cov):
        try:
            chol = linalg.cholesky(cov, lower=True)
        except np.linalg.LinAlgError as exc:
            raise SingularCovariance(
                f"Cholesky factorization failed for a {cov.shape[0]}x{cov.shape[0]} covariance "
                f"even with regularization {self.spec.regularization}"
            ) from exc
        log_det = 2.0 * np.sum(np.log(np.diag(chol)))
        return 0.5 * (cov.shape[0] * LOG_2PIE + log_det)

    def _sub_entropy(self, cov, index):
        return self.entropy_from_covariance(cov[np.ix_(index, index)])

    def entropy(self, x):
        return self.entropy_from_covariance(self.covariance(x))

    def mutual_information(self, x, y):
        cov = self.covariance(np.hstack([x, y]))
        ix = np.arange(x.shape[1])
        iy = np.arange(x.shape[1], cov.shape[0])
        return self._sub_entropy(cov, ix) + self._sub_entropy(cov, iy) - self.entropy_from_covariance(cov)

    def conditional_mutual_information(self, x, y, z):
        # One joint covariance; every entropy term is a principal sub-block of it.
        cov = self.covariance(np.hstack([x, y, z]))
        dx, dy = x.shape[1], y.shape[1]
        ix = np.arange(dx)
        iy = np.arange(dx, dx + dy)
        iz = np.arange(dx + dy, cov.shape[0])
        return (
            self._sub_entropy(cov, np.concatenate([ix, iz]))
            + self._sub_entropy(cov, np.concatenate([iy, iz]))
            - self._sub_entropy(cov, iz)
            - self.entropy_from_covariance(cov)
        )
