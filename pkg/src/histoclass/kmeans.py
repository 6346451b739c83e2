"""Seeded Lloyd k-means with restarts, plus the cluster-derived reports.

The model is fitted on min-max normalised features. Cluster indices are
arbitrary; purity and importance are reported per index.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import KMEANS_MAX_ITER, KMEANS_RESTARTS, KMEANS_TOL, N_CLUSTERS
from .data import Dataset, Diagnosis
from .errors import DataError, NumericalError

CLUSTER_FEATURE = "cluster"


@dataclass(frozen=True)
class KMeansModel:
    names: tuple[str, ...]
    centroids: np.ndarray
    seed: int
    wcss: float
    iterations: int
    restarts: int
    converged: bool
    wcss_history: tuple[float, ...] = ()

    @property
    def k(self) -> int:
        return self.centroids.shape[0]

    def __eq__(self, other):
        if not isinstance(other, KMeansModel):
            return NotImplemented
        return (
            self.names == other.names
            and np.array_equal(self.centroids, other.centroids)
            and (self.seed, self.wcss, self.iterations, self.restarts, self.converged)
            == (other.seed, other.wcss, other.iterations, other.restarts, other.converged)
        )


def _sq_dists(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    return ((X[:, None, :] - C[None, :, :]) ** 2).sum(axis=2)


def _nearest(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    # argmin returns the first minimum, so ties go to the lower index
    return np.argmin(_sq_dists(X, C), axis=1)


def _means(X: np.ndarray, labels: np.ndarray, k: int) -> np.ndarray:
    return np.stack([X[labels == j].mean(axis=0) for j in range(k)])


def _wcss(X: np.ndarray, C: np.ndarray, labels: np.ndarray) -> float:
    return float(((X - C[labels]) ** 2).sum())


def _reseed_empty(X, C, labels, k):
    labels = labels.copy()
    for j in range(k):
        if np.any(labels == j):
            continue
        d = ((X - C[labels]) ** 2).sum(axis=1)
        # never strip the last member from another cluster
        sizes = np.bincount(labels, minlength=k)
        d[sizes[labels] <= 1] = -1.0
        labels[int(np.argmax(d))] = j
    return labels


def lloyd(X: np.ndarray, init: np.ndarray, max_iter: int, tol: float):
    """Run Lloyd iterations from ``init``.

    Returns ``(centroids, labels, history, iterations, converged)``; on
    convergence ``labels`` is the nearest-centroid assignment for the returned
    centroids and each centroid is the mean of its members.
    """
    k = init.shape[0]
    C = init.astype(float).copy()
    labels = _nearest(X, C)
    history = []
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        labels = _reseed_empty(X, C, _nearest(X, C), k)
        new_C = _means(X, labels, k)
        history.append(_wcss(X, new_C, labels))
        movement = float(np.max(np.abs(new_C - C)))
        C = new_C
        if movement < tol and np.array_equal(_nearest(X, C), labels):
            converged = True
            break
    return C, labels, history, it, converged


def kmeans_fit(
    features: Dataset,
    k: int = N_CLUSTERS,
    seed: int = 0,
    restarts: int = KMEANS_RESTARTS,
    max_iter: int = KMEANS_MAX_ITER,
    tol: float = KMEANS_TOL,
) -> KMeansModel:
    """Best-of-``restarts`` k-means on normalised features.

    Each restart starts from ``k`` distinct sample points drawn uniformly
    with a generator seeded by ``seed``; the lowest within-cluster sum of
    squares wins, earliest restart on ties.
    """
    if k < 2:
        raise DataError("k must be at least 2")
    if restarts < 1:
        raise DataError("restarts must be at least 1")
    X = features.X
    n = X.shape[0]
    if n < k:
        raise DataError(f"need at least k={k} samples, got {n}")
    if np.any(X < 0) or np.any(X > 1):
        raise DataError("k-means expects features normalised to [0, 1]")

    rng = np.random.default_rng(seed)
    best = None
    for _ in range(restarts):
        init = X[rng.choice(n, size=k, replace=False)]
        C, labels, history, iters, converged = lloyd(X, init, max_iter, tol)
        wcss = _wcss(X, C, labels)
        if not np.isfinite(wcss):
            raise NumericalError("non-finite within-cluster sum of squares")
        if best is None or wcss < best[0]:
            best = (wcss, C, history, iters, converged)
    wcss, C, history, iters, converged = best
    C.setflags(write=False)
    return KMeansModel(
        names=features.schema,
        centroids=C,
        seed=seed,
        wcss=wcss,
        iterations=iters,
        restarts=restarts,
        converged=converged,
        wcss_history=tuple(history),
    )


def assign(m: KMeansModel, sample) -> int:
    x = np.asarray(sample, dtype=float).ravel()
    if x.size != m.centroids.shape[1]:
        raise DataError(
            f"dimension mismatch: model has {m.centroids.shape[1]} features, got {x.size}"
        )
    return int(_nearest(x[None, :], m.centroids)[0])


def assign_all(m: KMeansModel, ds: Dataset) -> np.ndarray:
    if ds.width != m.centroids.shape[1]:
        raise DataError(
            f"dimension mismatch: model has {m.centroids.shape[1]} features, got {ds.width}"
        )
    return _nearest(ds.X, m.centroids)


@dataclass(frozen=True)
class ClusterPurity:
    cluster: int
    count_A: int
    count_N: int

    @property
    def size(self) -> int:
        return self.count_A + self.count_N

    @property
    def share_A(self) -> float:
        return self.count_A / self.size if self.size else 0.0

    @property
    def share_N(self) -> float:
        return self.count_N / self.size if self.size else 0.0


def purity_from_labels(labels, diagnoses, k: int) -> list[ClusterPurity]:
    out = []
    for j in range(k):
        members = [d for lab, d in zip(labels, diagnoses) if lab == j]
        n_a = sum(1 for d in members if d is Diagnosis.A)
        out.append(ClusterPurity(j, n_a, len(members) - n_a))
    return out


def cluster_purity(m: KMeansModel, ds: Dataset) -> list[ClusterPurity]:
    return purity_from_labels(assign_all(m, ds), ds.diagnoses, m.k)


@dataclass(frozen=True)
class ClusterImportance:
    names: tuple[str, ...]
    raw: tuple[float, ...]
    shares: tuple[float, ...]

    def share(self, name: str) -> float:
        return self.shares[self.names.index(name)]


def feature_importance(m: KMeansModel, ds: Dataset) -> ClusterImportance:
    """Centroid separation per feature, in units of that feature's sample std."""
    if m.k != 2:
        raise DataError("feature importance is defined for k = 2")
    if ds.width != m.centroids.shape[1]:
        raise DataError("dimension mismatch between model and dataset")
    if len(ds) < 2:
        raise DataError("need at least two samples")
    sigma = ds.X.std(axis=0, ddof=1)
    if np.any(sigma == 0):
        bad = [n for n, s in zip(ds.schema, sigma) if s == 0]
        raise NumericalError(f"zero-variance feature(s): {bad}")
    raw = np.abs(m.centroids[0] - m.centroids[1]) / sigma
    total = raw.sum()
    if total == 0:
        raise NumericalError("degenerate centroids")
    return ClusterImportance(
        ds.schema,
        tuple(float(v) for v in raw),
        tuple(float(v) for v in raw / total),
    )


def attach_cluster_feature(ds: Dataset, m: KMeansModel) -> Dataset:
    labels = assign_all(m, ds)
    return ds.with_feature(CLUSTER_FEATURE, labels.astype(float))
