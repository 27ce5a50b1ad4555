"""Deterministic 1-D statistics and clustering.

Everything here works on a single coordinate (text-block or box centers), so
K-means is specialised to one dimension and seeded deterministically instead
of from random draws. Two scikit-learn compatible estimators wrap the functions:
:class:`KMeans1D` and :class:`ZScoreOutlierRemover`.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin, OutlierMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import (
    check_non_negative,
    check_points,
    check_positive,
    check_positive_int,
)

# Relative to the largest magnitude; below this a spread is rounding noise.
_SIGMA_EPS = 1e-12
BRUTE_FORCE_MAX_POINTS = 15


def population_std(values) -> float:
    """Population standard deviation, snapped to 0 when it is pure rounding noise."""
    x = check_points(values, name="values")
    sigma = float(np.std(x))
    scale = float(np.max(np.abs(x)))
    if sigma <= _SIGMA_EPS * scale:
        return 0.0
    return sigma


def zscores(values) -> list[float]:
    """Population z-scores of ``values``; all zeros when the spread is zero.

    >>> zscores([0, 0, 0, 0, 100])
    [-0.5, -0.5, -0.5, -0.5, 2.0]
    """
    x = check_points(values, name="values")
    sigma = population_std(x)
    if sigma == 0.0:
        return [0.0] * x.size
    return ((x - x.mean()) / sigma).tolist()


def iterative_zscore_mask(values, threshold: float = 1.75) -> tuple[np.ndarray, int]:
    """Repeatedly drop every value whose ``|z| >= threshold`` until a pass drops nothing.

    Returns the boolean inlier mask over the input and the number of z-score
    passes that were evaluated. A pass is skipped (and the loop ends) once one
    value or fewer remains or the spread collapses to zero.
    """
    threshold = check_positive(threshold, "threshold")
    x = check_points(values, name="values", allow_empty=True)
    keep = np.ones(x.size, dtype=bool)
    passes = 0
    while keep.sum() > 1:
        current = x[keep]
        sigma = population_std(current)
        if sigma == 0.0:
            break
        passes += 1
        z = np.abs(current - current.mean()) / sigma
        drop = z >= threshold
        if not drop.any():
            break
        idx = np.flatnonzero(keep)
        keep[idx[drop]] = False
    return keep, passes


@dataclass(frozen=True)
class ClusterModel:
    """Result of a 1-D clustering run.

    ``assignment[i]`` is the cluster of input point ``i``; clusters are
    numbered so that ``centroids`` ascend. ``inertia_history`` holds the
    inertia after every Lloyd iteration (empty for the brute-force oracle).
    """

    centroids: tuple[float, ...]
    assignment: tuple[int, ...]
    inertia: float
    n_iter: int = 0
    inertia_history: tuple[float, ...] = field(default=(), repr=False)

    @property
    def k(self) -> int:
        return len(self.centroids)

    def members(self) -> list[list[int]]:
        out = [[] for _ in self.centroids]
        for i, c in enumerate(self.assignment):
            out[c].append(i)
        return out


def inertia(points, assignment, centroids) -> float:
    x = np.asarray(points, dtype=float)
    c = np.asarray(centroids, dtype=float)
    return float(np.sum((x - c[np.asarray(assignment, dtype=int)]) ** 2))


def _quantile_seeds(x: np.ndarray, k: int) -> np.ndarray:
    s = np.sort(x, kind="stable")
    n = s.size
    return np.array([s[(2 * i + 1) * n // (2 * k)] for i in range(k)], dtype=float)


def _gap_seeds(x: np.ndarray, k: int) -> np.ndarray:
    s = np.sort(x, kind="stable")
    gaps = np.diff(s)
    # widest gaps first, leftmost on ties
    cuts = sorted(sorted(range(gaps.size), key=lambda i: (-gaps[i], i))[: k - 1])
    bounds = [0, *(c + 1 for c in cuts), s.size]
    return np.array([s[lo:hi].mean() for lo, hi in zip(bounds, bounds[1:])], dtype=float)


_SEEDERS = {"gaps": _gap_seeds, "quantile": _quantile_seeds}


def _nearest(x: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    # argmin returns the first minimum, so ties go to the lower index
    return np.argmin(np.abs(x[:, None] - centroids[None, :]), axis=1)


def _mean(values: np.ndarray) -> float:
    # shifted mean: identical values average to exactly themselves
    return float(values[0] + np.mean(values - values[0]))


def _fill_empty(x, labels, centroids, k):
    counts = np.bincount(labels, minlength=k)
    for j in range(k):
        if counts[j]:
            continue
        dist = (x - centroids[labels]) ** 2
        # never empty another cluster while re-seeding this one
        dist = np.where(counts[labels] >= 2, dist, -1.0)
        i = int(np.argmax(dist))
        counts[labels[i]] -= 1
        labels[i] = j
        counts[j] = 1
    return labels


def _relabel(x, labels, centroids, n_iter, history) -> ClusterModel:
    order = np.argsort(centroids, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.size)
    new_labels = rank[labels]
    new_centroids = centroids[order]
    return ClusterModel(
        centroids=tuple(float(c) for c in new_centroids),
        assignment=tuple(int(a) for a in new_labels),
        inertia=inertia(x, new_labels, new_centroids),
        n_iter=n_iter,
        inertia_history=tuple(history),
    )


def kmeans_1d(points, k: int, max_iter: int = 100, tol: float = 1e-9, init: str = "gaps") -> ClusterModel:
    """Lloyd's algorithm on one coordinate with deterministic seeding.

    ``init="gaps"`` cuts the sorted points at their ``k - 1`` widest gaps and
    seeds each centroid at a segment mean; when clusters are separated by
    gaps wider than any cluster, this start is already the optimum.
    ``init="quantile"`` seeds at sorted positions ``floor((2i+1) n / 2k)``.
    Each iteration assigns points to the nearest centroid (ties to the lower
    index), re-seeds any empty cluster with the point farthest from its
    centroid, and moves centroids to cluster means. Iteration stops once no
    centroid moves by more than ``tol``, the assignment repeats, or after
    ``max_iter`` iterations.
    """
    x = check_points(points, name="points")
    k = check_positive_int(k, "k")
    if k > x.size:
        raise ValueError(f"k={k} exceeds the number of points ({x.size})")
    max_iter = check_positive_int(max_iter, "max_iter")
    tol = check_non_negative(tol, "tol")
    if init not in _SEEDERS:
        raise ValueError(f"init must be one of {sorted(_SEEDERS)}, got {init!r}")

    centroids = _SEEDERS[init](x, k)
    history = []
    seen = set()
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        labels = _fill_empty(x, _nearest(x, centroids), centroids, k)
        updated = np.array([_mean(x[labels == j]) for j in range(k)])
        history.append(inertia(x, labels, updated))
        shift = float(np.max(np.abs(updated - centroids)))
        centroids = updated
        # duplicate points can make re-seeding cycle; a repeated assignment cannot improve
        key = labels.tobytes()
        if shift <= tol or key in seen:
            break
        seen.add(key)
    return _relabel(x, labels, centroids, n_iter, history)


def brute_force_clusters(points, k: int) -> ClusterModel:
    """Globally optimal 1-D clustering by enumerating contiguous partitions.

    Optimal 1-D clusters are contiguous once the points are sorted, so trying
    every placement of ``k - 1`` cut points is exhaustive. Test oracle only.
    """
    x = check_points(points, name="points")
    k = check_positive_int(k, "k")
    n = x.size
    if n > BRUTE_FORCE_MAX_POINTS:
        raise ValueError(f"brute force is limited to {BRUTE_FORCE_MAX_POINTS} points, got {n}")
    if k > n:
        raise ValueError(f"k={k} exceeds the number of points ({n})")

    order = np.argsort(x, kind="stable")
    s = x[order]
    best = None
    for cuts in itertools.combinations(range(1, n), k - 1):
        bounds = (0, *cuts, n)
        total = 0.0
        means = []
        for lo, hi in zip(bounds, bounds[1:]):
            seg = s[lo:hi]
            m = seg.mean()
            means.append(m)
            total += float(np.sum((seg - m) ** 2))
        if best is None or total < best[0]:
            best = (total, bounds, means)

    _, bounds, means = best
    labels = np.empty(n, dtype=int)
    for j, (lo, hi) in enumerate(zip(bounds, bounds[1:])):
        labels[order[lo:hi]] = j
    centroids = np.array(means)
    return ClusterModel(
        centroids=tuple(float(c) for c in centroids),
        assignment=tuple(int(a) for a in labels),
        inertia=inertia(x, labels, centroids),
    )


class KMeans1D(ClusterMixin, BaseEstimator):
    """Deterministic one-dimensional K-means.

    Parameters
    ----------
    n_clusters : int, default=2
        Number of clusters.
    max_iter : int, default=100
        Maximum number of Lloyd iterations.
    tol : float, default=1e-9
        Largest centroid movement treated as convergence.
    init : {"gaps", "quantile"}, default="gaps"
        Deterministic seeding strategy, see :func:`kmeans_1d`.

    Attributes
    ----------
    cluster_centers_ : ndarray of shape (n_clusters,)
        Ascending centroids.
    labels_ : ndarray of shape (n_samples,)
    inertia_ : float
    n_iter_ : int
    inertia_history_ : ndarray
        Inertia after each iteration; non-increasing.
    """

    def __init__(self, n_clusters=2, max_iter=100, tol=1e-9, init="gaps"):
        self.n_clusters = n_clusters
        self.max_iter = max_iter
        self.tol = tol
        self.init = init

    def fit(self, X, y=None):
        model = kmeans_1d(X, self.n_clusters, max_iter=self.max_iter, tol=self.tol, init=self.init)
        self.model_ = model
        self.cluster_centers_ = np.asarray(model.centroids)
        self.labels_ = np.asarray(model.assignment)
        self.inertia_ = model.inertia
        self.n_iter_ = model.n_iter
        self.inertia_history_ = np.asarray(model.inertia_history)
        return self

    def predict(self, X):
        check_is_fitted(self, "cluster_centers_")
        return _nearest(check_points(X), self.cluster_centers_)


class ZScoreOutlierRemover(OutlierMixin, BaseEstimator):
    """Iterative z-score outlier filter for 1-D data.

    ``fit_predict`` follows the scikit-learn outlier convention: ``1`` for
    inliers, ``-1`` for removed values.

    Attributes
    ----------
    inlier_mask_ : ndarray of bool
    n_passes_ : int
        Number of z-score passes evaluated before the loop stopped.
    """

    def __init__(self, threshold=1.75):
        self.threshold = threshold

    def fit(self, X, y=None):
        self.inlier_mask_, self.n_passes_ = iterative_zscore_mask(X, self.threshold)
        return self

    def fit_predict(self, X, y=None):
        return np.where(self.fit(X).inlier_mask_, 1, -1)
