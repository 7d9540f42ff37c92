"""
Estimator specification, sample-block validation and the estimator base class.
"""
import enum
import logging
from dataclasses import dataclass

import numpy as np

from ..exceptions import EstimatorError, InvalidConfig, NonFiniteInput, RowMisalignment

logger = logging.getLogger(__name__)


class EstimatorKind(str, enum.Enum):
    GAUSSIAN = "gaussian"
    KNN = "knn"
    GEOMETRIC_KNN = "geometric-knn"
    KDE = "kde"
    POISSON = "poisson"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class EstimatorSpec:
    """Which estimator family to use and its tuning parameters.

    ``k_neighbors`` applies to the kNN families, ``bandwidth_rule`` to KDE and
    ``regularization`` (added to covariance diagonals) to the Gaussian family;
    KDE also uses it as a floor on per-dimension variance.
    """
    kind: EstimatorKind = EstimatorKind.GAUSSIAN
    k_neighbors: int = 4
    bandwidth_rule: str = "silverman"
    regularization: float = 1e-10

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", EstimatorKind(self.kind))
        except ValueError as exc:
            choices = ", ".join(kind.value for kind in EstimatorKind)
            raise InvalidConfig(f"Unknown estimator '{self.kind}', expected one of: {choices}") from exc
        if int(self.k_neighbors) != self.k_neighbors or self.k_neighbors < 1:
            raise InvalidConfig(f"k_neighbors must be a positive integer, got {self.k_neighbors}")
        if self.bandwidth_rule != "silverman":
            raise InvalidConfig(f"Unknown bandwidth rule '{self.bandwidth_rule}'")
        if not self.regularization > 0:
            raise InvalidConfig(f"regularization must be positive, got {self.regularization}")

    @property
    def is_discrete(self):
        return self.kind is EstimatorKind.POISSON


def as_block(data, name="x"):
    """Return ``data`` as a finite (rows, columns) float array with at least two rows."""
    block = np.asarray(data, dtype=float)
    if block.ndim == 1:
        block = block[:, np.newaxis]
    if block.ndim != 2:
        raise EstimatorError(f"{name} must be a 1-D or 2-D array, got {block.ndim} dimensions")
    if block.shape[0] < 2:
        raise EstimatorError(f"{name} needs at least 2 rows, got {block.shape[0]}")
    if not np.all(np.isfinite(block)):
        raise NonFiniteInput(f"{name} contains NaN or infinite values")
    return block


def check_aligned(*blocks):
    rows = {block.shape[0] for block in blocks}
    if len(rows) > 1:
        raise RowMisalignment(f"Sample blocks have different row counts: {sorted(rows)}")


class Estimator:
    """Entropy estimator; information quantities default to entropy combinations.

    Subclasses implement :meth:`entropy` and may override the mutual
    information methods with joint-space formulations.
    """
    kind = None

    def __init__(self, spec):
        self.spec = spec

    def validate(self, block):
        """Hook for family-specific input checks; returns the block."""
        return block

    def entropy(self, x):
        raise NotImplementedError

    def mutual_information(self, x, y):
        return self.entropy(x) + self.entropy(y) - self.entropy(np.hstack([x, y]))

    def conditional_mutual_information(self, x, y, z):
        return (
            self.entropy(np.hstack([x, z]))
            + self.entropy(np.hstack([y, z]))
            - self.entropy(z)
            - self.entropy(np.hstack([x, y, z]))
        )
