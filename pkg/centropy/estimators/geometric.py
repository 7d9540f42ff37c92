"""
Geometric k-nearest-neighbour estimators.

A point whose neighbourhood is markedly anisotropic gets an ellipsoidal
volume element aligned with the principal axes of that neighbourhood: the
local metric stretches each principal direction by the inverse of its
relative singular value, and the radius is the distance to the k-th neighbour
in that metric. Points whose neighbourhood is close to isotropic, or
singular, keep the max-norm ball of the standard kNN estimator, so on smooth
full-dimensional densities the estimates match :class:`KnnEstimator`.

Mutual information and its conditional form keep the joint-space neighbour
counting of the kNN estimator. Each block (x, y, z) gets its own local
metric and the joint distance is the maximum over blocks, so the joint
volume element is the product of the marginal ones and the volume terms
cancel exactly as they do for max-norm balls.
"""
import logging
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from scipy.special import digamma, gammaln

from .base import EstimatorKind
from .knn import LOG_TINY, KnnEstimator

logger = logging.getLogger(__name__)

SINGULAR_RATIO = 1e-10
ANISOTROPY_RATIO = 0.25
SHAPE_NEIGHBORS_PER_DIMENSION = 10


def log_unit_ball_volume(d):
    return 0.5 * d * np.log(np.pi) - gammaln(0.5 * d + 1)


@dataclass(frozen=True, eq=False)
class LocalShape:
    """Per-point principal axes (rows of ``axes[i]``) and axis ratios of one block.

    Points not flagged ``anisotropic`` use the max-norm.
    """
    axes: np.ndarray
    ratios: np.ndarray
    anisotropic: np.ndarray

    def distance(self, i, offsets):
        """Distance from point ``i`` to the rows ``offsets`` (already centred on point ``i``)."""
        if self.anisotropic[i]:
            return np.sqrt(np.sum((offsets @ self.axes[i].T / self.ratios[i]) ** 2, axis=1))
        return np.max(np.abs(offsets), axis=1)

    def log_volume(self, i, radius):
        """Log volume of point ``i``'s ellipsoid at ``radius``."""
        d = self.ratios.shape[1]
        log_radius = max(np.log(radius), LOG_TINY) if radius > 0 else LOG_TINY
        return log_unit_ball_volume(d) + d * log_radius + np.sum(np.log(self.ratios[i]))


def local_shape(block, k):
    """Fit a principal-axis shape to every point's neighbourhood in ``block``."""
    n, d = block.shape
    axes = np.broadcast_to(np.eye(d), (n, d, d)).copy()
    ratios = np.ones((n, d))
    anisotropic = np.zeros(n, dtype=bool)
    m = min(max(2 * k, SHAPE_NEIGHBORS_PER_DIMENSION * d), n - 1)
    if d == 1 or m < d:
        return LocalShape(axes, ratios, anisotropic)

    _, neighbors = cKDTree(block).query(block, k=m + 1)
    local = block[neighbors]
    _, singular, principal = np.linalg.svd(local - local.mean(axis=1, keepdims=True), full_matrices=False)
    singular_rows = singular[:, -1] <= SINGULAR_RATIO * singular[:, 0]
    with np.errstate(divide="ignore", invalid="ignore"):
        relative = singular / singular[:, :1]
    anisotropic = ~singular_rows & (relative[:, -1] < ANISOTROPY_RATIO)
    axes[anisotropic] = principal[anisotropic]
    ratios[anisotropic] = relative[anisotropic]
    return LocalShape(axes, ratios, anisotropic)


class LocalSpace:
    """Blocks side by side under the per-point metric ``max`` over the block metrics."""

    def __init__(self, blocks, shapes):
        self.data = np.hstack(blocks)
        self.shapes = shapes
        self.columns = []
        start = 0
        for block in blocks:
            self.columns.append(slice(start, start + block.shape[1]))
            start += block.shape[1]
        self.tree = cKDTree(self.data)

    def distances(self, i, rows):
        offsets = self.data[rows] - self.data[i]
        return np.max(
            [shape.distance(i, offsets[:, columns]) for shape, columns in zip(self.shapes, self.columns)],
            axis=0,
        )

    def kth_distance(self, i, k):
        # Local distances are never below the max-norm distance, so the
        # max-norm ball of radius ``bound`` holds the k nearest local neighbours.
        _, nearest = self.tree.query(self.data[i], k=k + 1, p=np.inf)
        bound = np.max(self.distances(i, nearest))
        candidates = self.tree.query_ball_point(self.data[i], bound, p=np.inf)
        return np.sort(self.distances(i, candidates))[k]

    def count_within(self, i, radius):
        """Points strictly inside ``radius`` of point ``i``, itself included."""
        candidates = self.tree.query_ball_point(self.data[i], radius, p=np.inf)
        if radius <= 0:
            return len(candidates)
        return np.count_nonzero(self.distances(i, candidates) < radius)


class GeometricKnnEstimator(KnnEstimator):
    kind = EstimatorKind.GEOMETRIC_KNN

    def entropy(self, x):
        n, d = x.shape
        k = self.spec.k_neighbors
        radius = self.kth_radius(x)
        with np.errstate(divide="ignore"):
            log_volumes = d * np.maximum(np.log(2.0 * radius), LOG_TINY)

        shape = local_shape(x, k)
        anisotropic = np.flatnonzero(shape.anisotropic)
        if anisotropic.size:
            space = LocalSpace([x], [shape])
            for i in anisotropic:
                log_volumes[i] = shape.log_volume(i, space.kth_distance(i, k))
            logger.debug(f"Geometric kNN used ellipsoids for {anisotropic.size}/{n} points")
        return digamma(n) - digamma(k) + np.mean(log_volumes)

    def joint_counts(self, blocks, subspaces):
        """Neighbour counts in each subspace at every point's joint-space k-th neighbour distance.

        ``subspaces`` are tuples of block indices. Points whose blocks are all
        isotropic keep the max-norm counts of the kNN estimator.
        """
        k = self.spec.k_neighbors
        radius = self.kth_radius(np.hstack(blocks))
        counts = [self.strict_counts(np.hstack([blocks[b] for b in subspace]), radius) for subspace in subspaces]

        shapes = [local_shape(block, k) for block in blocks]
        anisotropic = np.flatnonzero(np.any([shape.anisotropic for shape in shapes], axis=0))
        if anisotropic.size:
            joint = LocalSpace(blocks, shapes)
            spaces = [LocalSpace([blocks[b] for b in s], [shapes[b] for b in s]) for s in subspaces]
            for i in anisotropic:
                eps = joint.kth_distance(i, k)
                for count, space in zip(counts, spaces):
                    count[i] = space.count_within(i, eps)
            logger.debug(f"Geometric kNN used local metrics for {anisotropic.size}/{len(radius)} points")
        return counts

    def mutual_information(self, x, y):
        n = x.shape[0]
        n_x, n_y = self.joint_counts([x, y], [(0,), (1,)])
        return digamma(self.spec.k_neighbors) + digamma(n) - np.mean(digamma(n_x) + digamma(n_y))

    def conditional_mutual_information(self, x, y, z):
        n_xz, n_yz, n_z = self.joint_counts([x, y, z], [(0, 2), (1, 2), (2,)])
        return digamma(self.spec.k_neighbors) - np.mean(digamma(n_xz) + digamma(n_yz) - digamma(n_z))
