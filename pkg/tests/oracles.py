"""Independent reference implementations used to cross-check the library.

Everything here deliberately avoids the package's own code paths: expected-MI
uses exact rational hypergeometric probabilities via math.comb, silhouette is
a plain O(N^2) double loop with its own cosine, and the 2-cluster k-means
objective comes from exhaustive enumeration of all bipartitions.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import numpy as np


def hypergeom_pmf_exact(m: int, n_total: int, a: int, b: int) -> Fraction:
    """P[cell count = m] with marginals a, b out of n_total, exact."""
    return Fraction(math.comb(a, m) * math.comb(n_total - a, b - m), math.comb(n_total, b))


def expected_mi_exact(counts: np.ndarray) -> float:
    """E[MI] by direct enumeration of every hypergeometric cell outcome."""
    counts = np.asarray(counts)
    a = counts.sum(axis=1)
    b = counts.sum(axis=0)
    n = int(counts.sum())
    total = 0.0
    for ai in a:
        for bj in b:
            if ai == 0 or bj == 0:
                continue
            lo = max(1, ai + bj - n)
            hi = min(ai, bj)
            for m in range(lo, hi + 1):
                p = hypergeom_pmf_exact(m, n, int(ai), int(bj))
                total += (m / n) * math.log(n * m / (ai * bj)) * float(p)
    return total


def entropy_exact(marginals, n: int) -> float:
    return -sum((m / n) * math.log(m / n) for m in marginals if m > 0)


def mutual_information_exact(counts: np.ndarray) -> float:
    counts = np.asarray(counts)
    a = counts.sum(axis=1)
    b = counts.sum(axis=0)
    n = int(counts.sum())
    total = 0.0
    for i in range(counts.shape[0]):
        for j in range(counts.shape[1]):
            nij = int(counts[i, j])
            if nij > 0:
                total += (nij / n) * math.log(n * nij / (int(a[i]) * int(b[j])))
    return total


def ami_exact(counts: np.ndarray, normalizer: str = "arithmetic") -> float:
    counts = np.asarray(counts)
    n = int(counts.sum())
    h_u = entropy_exact(counts.sum(axis=1), n)
    h_v = entropy_exact(counts.sum(axis=0), n)
    norm = (h_u + h_v) / 2 if normalizer == "arithmetic" else max(h_u, h_v)
    emi = expected_mi_exact(counts)
    denom = norm - emi
    if abs(denom) < 1e-15:
        one_per_row = all((row > 0).sum() == 1 for row in counts)
        one_per_col = all((col > 0).sum() == 1 for col in counts.T)
        return 1.0 if one_per_row and one_per_col else 0.0
    return (mutual_information_exact(counts) - emi) / denom


def cosine_distance_ref(x, y) -> float:
    num = sum(a * b for a, b in zip(x, y))
    nx = math.sqrt(sum(a * a for a in x))
    ny = math.sqrt(sum(b * b for b in y))
    if nx == 0.0 or ny == 0.0:
        return 1.0  # zero-row convention
    return min(max(1.0 - num / (nx * ny), 0.0), 2.0)


def silhouette_ref(x: np.ndarray, labels, variant: str = "pooled") -> float:
    """Brute-force silhouette with pooled or nearest-cluster b_i."""
    x = np.asarray(x, dtype=float)
    labels = list(labels)
    n = len(labels)
    clusters = sorted(set(labels))
    scores = []
    for i in range(n):
        same = [j for j in range(n) if j != i and labels[j] == labels[i]]
        if not same:
            scores.append(0.0)
            continue
        a_i = sum(cosine_distance_ref(x[i], x[j]) for j in same) / len(same)
        if variant == "pooled":
            other = [j for j in range(n) if labels[j] != labels[i]]
            b_i = sum(cosine_distance_ref(x[i], x[j]) for j in other) / len(other)
        else:
            means = []
            for c in clusters:
                if c == labels[i]:
                    continue
                members = [j for j in range(n) if labels[j] == c]
                means.append(sum(cosine_distance_ref(x[i], x[j]) for j in members) / len(members))
            b_i = min(means)
        denom = max(a_i, b_i)
        scores.append(0.0 if denom == 0.0 else (b_i - a_i) / denom)
    return sum(scores) / n


def kmeans_objective(points: np.ndarray, groups: list[list[int]]) -> float:
    total = 0.0
    for members in groups:
        pts = points[members]
        center = pts.mean(axis=0)
        total += ((pts - center) ** 2).sum()
    return float(total)


def best_two_partition(points: np.ndarray) -> tuple[float, frozenset]:
    """Exhaustive search over all non-trivial bipartitions."""
    n = len(points)
    best_obj = math.inf
    best_split = None
    for size in range(1, n // 2 + 1):
        for combo in itertools.combinations(range(n), size):
            left = list(combo)
            right = [i for i in range(n) if i not in combo]
            if not right:
                continue
            obj = kmeans_objective(points, [left, right])
            if obj < best_obj:
                best_obj = obj
                best_split = frozenset([frozenset(left), frozenset(right)])
    return best_obj, best_split


def random_contingency(rng: np.random.Generator, max_n: int = 30) -> np.ndarray:
    """Counts from a random pair of partitions of a random small N."""
    n = int(rng.integers(2, max_n + 1))
    r = int(rng.integers(1, 5))
    c = int(rng.integers(1, 5))
    u = rng.integers(0, r, size=n)
    v = rng.integers(0, c, size=n)
    rows = np.unique(u)
    cols = np.unique(v)
    counts = np.zeros((rows.size, cols.size), dtype=np.int64)
    for ui, vi in zip(u, v):
        counts[np.searchsorted(rows, ui), np.searchsorted(cols, vi)] += 1
    return counts
