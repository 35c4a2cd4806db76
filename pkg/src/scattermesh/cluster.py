"""Partitioning of document vectors: farthest-point (maximin) and k-means++.

Maximin grows the center set greedily under cosine distance: after two
unconditional centers, the point farthest from its nearest center is promoted
while that distance exceeds theta. k-means++ seeds centers with squared-
Euclidean-distance weighting, then runs Lloyd iterations; the best of several
restarts by objective is kept. All tie-breaks resolve to the lowest index so
results are reproducible for a fixed seed.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import sparse

from .errors import ClusteringError
from .lsa import EmbeddingMatrix
from .vectorizer import TermDocMatrix


def _as_dense(vectors) -> tuple[np.ndarray, tuple[str, ...] | None]:
    if isinstance(vectors, EmbeddingMatrix):
        return np.asarray(vectors.values, dtype=np.float64), vectors.doc_ids
    if isinstance(vectors, TermDocMatrix):
        return vectors.matrix.toarray().astype(np.float64), vectors.doc_ids
    if sparse.issparse(vectors):
        return vectors.toarray().astype(np.float64), None
    return np.asarray(vectors, dtype=np.float64), None


def cosine_distance(x: np.ndarray, y: np.ndarray) -> float:
    """1 - cos(x, y); defined only for nonzero vectors."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    nx = np.linalg.norm(x)
    ny = np.linalg.norm(y)
    if nx == 0.0 or ny == 0.0:
        raise ClusteringError("cosine distance is undefined for zero vectors")
    return float(np.clip(1.0 - (x @ y) / (nx * ny), 0.0, 2.0))


def pairwise_cosine_distances(x: np.ndarray) -> np.ndarray:
    """All-pairs cosine distance matrix.

    Zero rows sit at distance 1 from everything (the convention for documents
    that lost all weighted terms); the diagonal is 0.
    """
    x = np.asarray(x, dtype=np.float64)
    norms = np.linalg.norm(x, axis=1)
    zero = norms == 0.0
    safe = np.where(zero, 1.0, norms)
    unit = x / safe[:, None]
    dist = 1.0 - unit @ unit.T
    np.clip(dist, 0.0, 2.0, out=dist)
    dist[zero, :] = 1.0
    dist[:, zero] = 1.0
    np.fill_diagonal(dist, 0.0)
    return dist


@dataclass(frozen=True)
class MaximinParams:
    theta: float
    seed: int = 0

    def __post_init__(self):
        # cosine distance tops out at 1 on nonnegative vectors and at 2 on
        # embeddings; the space-specific bound is checked where data is known
        if not 0.0 < self.theta < 2.0:
            raise ValueError("theta must be in (0, 2)")


@dataclass(frozen=True)
class KmeansParams:
    k: int
    seed: int = 0
    max_iterations: int = 300
    tolerance: float = 1e-6  # relative objective change
    restarts: int = 10

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")


@dataclass(frozen=True, eq=False)
class Clustering:
    """A partition of the input vectors plus how it was produced."""

    assignments: np.ndarray  # per-document cluster index
    centroids: np.ndarray  # k x dim, in the clustering space
    k: int
    algorithm: str  # "maximin" or "kmeans_pp"
    params: MaximinParams | KmeansParams
    seed: int
    iterations: int
    objective: float | None = None  # k-means objective; absent for maximin
    center_indices: tuple[int, ...] | None = None  # maximin: chosen documents
    objective_history: tuple[float, ...] | None = None  # k-means: per-iteration
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        if self.assignments.min() < 0 or self.assignments.max() >= self.k:
            raise ClusteringError("assignment index out of range")
        sizes = np.bincount(self.assignments, minlength=self.k)
        if np.any(sizes == 0):
            raise ClusteringError("every cluster must have at least one member")

    def members(self, cluster: int) -> np.ndarray:
        return np.flatnonzero(self.assignments == cluster)

    def sizes(self) -> np.ndarray:
        return np.bincount(self.assignments, minlength=self.k)


def maximin(vectors, params: MaximinParams) -> Clustering:
    """Farthest-point clustering under cosine distance.

    Center 1 is drawn uniformly at random; center 2 is the point farthest
    from it; further points are promoted while the farthest point's distance
    to its nearest center exceeds theta. Zero rows take no part in center
    selection and land in cluster 0.
    """
    x, _ = _as_dense(vectors)
    norms = np.linalg.norm(x, axis=1)
    nz = np.flatnonzero(norms > 0.0)
    if nz.size < 2:
        raise ClusteringError("maximin needs at least 2 nonzero vectors")
    if params.theta > 1.0 and np.all(x >= 0.0):
        raise ClusteringError("theta must be <= 1 on nonnegative vectors (cosine range [0, 1])")

    unit = x[nz] / norms[nz, None]
    m = nz.size
    rng = np.random.default_rng(params.seed)
    first = int(rng.integers(m))

    def dist_to(center_local: int) -> np.ndarray:
        return np.clip(1.0 - unit @ unit[center_local], 0.0, 2.0)

    d_first = dist_to(first)
    if d_first.max() <= 1e-12:
        assignments = np.zeros(x.shape[0], dtype=np.int64)
        return Clustering(
            assignments=assignments,
            centroids=x[nz[first]][None, :],
            k=1,
            algorithm="maximin",
            params=params,
            seed=params.seed,
            iterations=0,
            center_indices=(int(nz[first]),),
            warnings=("all vectors identical; returning a single cluster",),
        )

    second = int(np.argmax(d_first))
    centers = [first, second]
    min_dist = np.minimum(d_first, dist_to(second))
    promotions = 0
    while True:
        candidates = min_dist.copy()
        candidates[centers] = -np.inf
        far = int(np.argmax(candidates))
        if not np.isfinite(candidates[far]):
            break  # every point is a center
        if candidates[far] > params.theta:
            centers.append(far)
            min_dist = np.minimum(min_dist, dist_to(far))
            promotions += 1
        else:
            break

    k = len(centers)
    center_dist = np.stack([dist_to(c) for c in centers], axis=1)  # m x k
    local_assign = np.argmin(center_dist, axis=1)
    for idx, c in enumerate(centers):
        local_assign[c] = idx

    assignments = np.zeros(x.shape[0], dtype=np.int64)  # zero rows -> cluster 0
    assignments[nz] = local_assign
    return Clustering(
        assignments=assignments,
        centroids=x[nz[np.array(centers)]],
        k=k,
        algorithm="maximin",
        params=params,
        seed=params.seed,
        iterations=promotions,
        center_indices=tuple(int(nz[c]) for c in centers),
    )


def _sq_distances(x: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    diff = x[:, None, :] - centroids[None, :, :]
    return np.einsum("ijk,ijk->ij", diff, diff)


def _seed_plus_plus(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = x.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = np.einsum("ij,ij->i", x - x[chosen[0]], x - x[chosen[0]])
    for _ in range(1, k):
        total = d2.sum()
        if total <= 0.0:
            remaining = np.setdiff1d(np.arange(n), chosen)
            nxt = int(remaining[0])
        else:
            nxt = int(rng.choice(n, p=d2 / total))
        chosen.append(nxt)
        diff = x - x[nxt]
        d2 = np.minimum(d2, np.einsum("ij,ij->i", diff, diff))
    return x[chosen].copy()


def _lloyd(x: np.ndarray, centroids: np.ndarray, params: KmeansParams):
    n, k = x.shape[0], centroids.shape[0]
    prev_obj = np.inf
    history: list[float] = []
    labels = np.zeros(n, dtype=np.int64)
    for iteration in range(1, params.max_iterations + 1):
        d2 = _sq_distances(x, centroids)
        labels = np.argmin(d2, axis=1)

        sizes = np.bincount(labels, minlength=k)
        for j in np.flatnonzero(sizes == 0):
            # reseed the empty centroid at the point farthest from its own
            # centroid, skipping points that would empty another cluster
            own = d2[np.arange(n), labels].copy()
            own[sizes[labels] <= 1] = -np.inf
            far = int(np.argmax(own))
            centroids[j] = x[far]
            sizes[labels[far]] -= 1
            labels[far] = j
            sizes[j] += 1
            d2[:, j] = np.einsum("ij,ij->i", x - centroids[j], x - centroids[j])

        diff = x - centroids[labels]
        obj = float(np.einsum("ij,ij->", diff, diff))
        history.append(obj)

        converged = prev_obj != np.inf and (prev_obj - obj) <= params.tolerance * max(prev_obj, 1e-300)
        centroids = np.array(
            [x[labels == j].mean(axis=0) for j in range(k)], dtype=np.float64
        )
        if converged:
            break
        prev_obj = obj

    diff = x - centroids[labels]
    final_obj = float(np.einsum("ij,ij->", diff, diff))
    return labels, centroids, final_obj, tuple(history + [final_obj]), iteration


def kmeans_pp(vectors, params: KmeansParams) -> Clustering:
    """k-means with D^2-weighted seeding; best of `restarts` runs by objective.

    Lloyd iterations use squared Euclidean distance and stop when the relative
    objective change drops below the tolerance. Restart r uses seed + r.
    """
    x, _ = _as_dense(vectors)
    n = x.shape[0]
    if params.k > n:
        raise ClusteringError(f"k={params.k} exceeds the number of vectors ({n})")
    distinct = np.unique(x, axis=0).shape[0]
    if params.k > distinct:
        raise ClusteringError(f"k={params.k} exceeds the number of distinct vectors ({distinct})")

    best = None
    for r in range(params.restarts):
        rng = np.random.default_rng(params.seed + r)
        seeds = _seed_plus_plus(x, params.k, rng)
        labels, centroids, obj, history, iters = _lloyd(x, seeds.copy(), params)
        if best is None or obj < best[2]:
            best = (labels, centroids, obj, history, iters)

    labels, centroids, obj, history, iters = best
    return Clustering(
        assignments=labels,
        centroids=centroids,
        k=params.k,
        algorithm="kmeans_pp",
        params=params,
        seed=params.seed,
        iterations=iters,
        objective=obj,
        objective_history=history,
    )


def export_clustering_csv(clustering: Clustering, doc_ids, path: str | Path) -> None:
    """CSV with columns "id","cluster"."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "cluster"])
        for doc_id, label in zip(doc_ids, clustering.assignments):
            writer.writerow([doc_id, int(label)])
