"""Cluster quality measures: silhouette, purity, homogeneity, and AMI.

External measures compare a clustering against ground-truth classes through
the class-by-cluster contingency table. Adjusted mutual information corrects
raw MI by its exact expectation under the hypergeometric (fixed-marginals
permutation) model, so random assignments score near 0 and identical
partitions score 1. All logarithms are natural; AMI is base-invariant.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np
from scipy.special import gammaln

from .cluster import pairwise_cosine_distances
from .errors import MetricError


@dataclass(frozen=True, eq=False)
class ContingencyTable:
    """Co-occurrence counts: rows are true classes, columns are clusters."""

    counts: np.ndarray  # classes x clusters, non-negative ints
    class_labels: tuple[str, ...]
    cluster_labels: tuple[str, ...]

    def __post_init__(self):
        if self.counts.ndim != 2:
            raise MetricError("counts must be 2-dimensional")
        if self.counts.shape != (len(self.class_labels), len(self.cluster_labels)):
            raise MetricError("labels must align with the counts matrix")
        if np.any(self.counts < 0):
            raise MetricError("counts must be non-negative")

    @property
    def class_totals(self) -> np.ndarray:
        return self.counts.sum(axis=1)

    @property
    def cluster_totals(self) -> np.ndarray:
        return self.counts.sum(axis=0)

    @property
    def n(self) -> int:
        return int(self.counts.sum())

    @property
    def cluster_count(self) -> int:
        return self.counts.shape[1]

    def transposed(self) -> "ContingencyTable":
        return ContingencyTable(
            counts=self.counts.T.copy(),
            class_labels=self.cluster_labels,
            cluster_labels=self.class_labels,
        )


def contingency(
    predicted: Mapping[str, int],
    truth: Mapping[str, str],
    class_order: Sequence[str] | None = None,
) -> ContingencyTable:
    """Count class/cluster co-occurrences over a shared id set."""
    missing_pred = sorted(set(truth) - set(predicted))
    missing_truth = sorted(set(predicted) - set(truth))
    if missing_pred or missing_truth:
        parts = []
        if missing_pred:
            parts.append(f"ids missing from predicted: {missing_pred[:10]}")
        if missing_truth:
            parts.append(f"ids missing from truth: {missing_truth[:10]}")
        raise MetricError("; ".join(parts))

    classes = list(class_order) if class_order is not None else sorted(set(truth.values()))
    clusters = sorted(set(predicted.values()))
    class_idx = {c: i for i, c in enumerate(classes)}
    cluster_idx = {c: j for j, c in enumerate(clusters)}
    counts = np.zeros((len(classes), len(clusters)), dtype=np.int64)
    for doc_id, cls in truth.items():
        counts[class_idx[cls], cluster_idx[predicted[doc_id]]] += 1
    return ContingencyTable(
        counts=counts,
        class_labels=tuple(classes),
        cluster_labels=tuple(str(c) for c in clusters),
    )


def purity(table: ContingencyTable) -> float:
    """Fraction of documents in their cluster's majority class."""
    if table.n < 1:
        raise MetricError("purity needs at least one document")
    return float(table.counts.max(axis=0).sum() / table.n)


def homogeneity(table: ContingencyTable) -> np.ndarray:
    """Per-cluster purity: majority-class count over cluster size."""
    totals = table.cluster_totals
    if np.any(totals < 1):
        raise MetricError("every cluster must have at least one member")
    return table.counts.max(axis=0) / totals


def entropy(marginals: np.ndarray, n: int) -> float:
    """Shannon entropy of the counts, in nats; zero counts are skipped."""
    if n < 1:
        raise MetricError("entropy needs n >= 1")
    p = np.asarray(marginals, dtype=np.float64) / n
    p = p[p > 0]
    return float(-(p * np.log(p)).sum())


def mutual_information(table: ContingencyTable) -> float:
    """MI between the class and cluster partitions, in nats."""
    n = table.n
    if n < 1:
        raise MetricError("mutual information needs n >= 1")
    a = table.class_totals.astype(np.float64)
    b = table.cluster_totals.astype(np.float64)
    nij = table.counts.astype(np.float64)
    outer = a[:, None] * b[None, :]
    mask = nij > 0
    vals = (nij[mask] / n) * np.log(n * nij[mask] / outer[mask])
    return float(vals.sum())


def expected_mi(table: ContingencyTable) -> float:
    """Exact E[MI] over all tables with these marginals (permutation model).

    For each cell the count follows a hypergeometric law; the expectation sums
    (m/N) ln(N m / (a_i b_j)) weighted by the hypergeometric pmf, with all
    factorials evaluated through lgamma to avoid overflow.
    """
    n = table.n
    if n < 1:
        raise MetricError("expected MI needs n >= 1")
    a = table.class_totals.astype(np.int64)
    b = table.cluster_totals.astype(np.int64)
    lg = math.lgamma
    total = 0.0
    for ai in a:
        if ai == 0:
            continue
        for bj in b:
            if bj == 0:
                continue
            lo = max(1, ai + bj - n)
            hi = min(ai, bj)
            if hi < lo:
                continue
            m = np.arange(lo, hi + 1, dtype=np.float64)
            log_p = (
                lg(ai + 1) + lg(bj + 1) + lg(n - ai + 1) + lg(n - bj + 1) - lg(n + 1)
                - gammaln(m + 1)
                - gammaln(ai - m + 1)
                - gammaln(bj - m + 1)
                - gammaln(n - ai - bj + m + 1)
            )
            mi_term = (m / n) * np.log(n * m / (float(ai) * float(bj)))
            total += float((mi_term * np.exp(log_p)).sum())
    return total


def _partitions_identical(table: ContingencyTable) -> bool:
    nz_per_row = (table.counts > 0).sum(axis=1)
    nz_per_col = (table.counts > 0).sum(axis=0)
    return bool(np.all(nz_per_row == 1) and np.all(nz_per_col == 1))


def ami(table: ContingencyTable, normalizer: str = "arithmetic") -> float:
    """Adjusted mutual information: (MI - E[MI]) / (norm(H_U, H_V) - E[MI]).

    `normalizer` is "arithmetic" (mean of the entropies, the default) or
    "max". When the denominator vanishes (both partitions trivial) the score
    is 1 for identical partitions and 0 otherwise.
    """
    if normalizer not in ("arithmetic", "max"):
        raise MetricError(f"unknown AMI normalizer {normalizer!r}")
    n = table.n
    h_u = entropy(table.class_totals, n)
    h_v = entropy(table.cluster_totals, n)
    norm = (h_u + h_v) / 2.0 if normalizer == "arithmetic" else max(h_u, h_v)
    emi = expected_mi(table)
    denominator = norm - emi
    if abs(denominator) < 1e-15:
        return 1.0 if _partitions_identical(table) else 0.0
    return float((mutual_information(table) - emi) / denominator)


def silhouette(
    vectors,
    assignments: np.ndarray,
    distance: str = "cosine",
    variant: str = "pooled",
) -> float:
    """Mean silhouette under cosine distance.

    a_i is the mean distance to same-cluster documents. With the default
    "pooled" variant b_i is the mean distance to every document in a
    different cluster; the "nearest" variant takes the smallest per-cluster
    mean instead. Singleton points and all-zero contrasts score 0.
    """
    if distance != "cosine":
        raise MetricError(f"unsupported distance {distance!r}")
    if variant not in ("pooled", "nearest"):
        raise MetricError(f"unknown silhouette variant {variant!r}")

    from .cluster import _as_dense  # local import to avoid cycle at module load

    x, _ = _as_dense(vectors)
    labels = np.asarray(assignments)
    n = x.shape[0]
    if labels.shape[0] != n:
        raise MetricError("assignments must align with vectors")
    uniq = np.unique(labels)
    if uniq.size < 2:
        raise MetricError("silhouette needs at least 2 clusters")

    dist = pairwise_cosine_distances(x)
    same = labels[:, None] == labels[None, :]
    np.fill_diagonal(same, False)
    same_counts = same.sum(axis=1)

    scores = np.zeros(n, dtype=np.float64)
    for i in range(n):
        if same_counts[i] == 0:
            continue  # singleton: s_i = 0 by convention
        a_i = dist[i, same[i]].mean()
        others = ~same[i]
        others[i] = False
        if variant == "pooled":
            b_i = dist[i, others].mean()
        else:
            b_i = min(
                dist[i, labels == c].mean() for c in uniq if c != labels[i]
            )
        denom = max(a_i, b_i)
        scores[i] = 0.0 if denom == 0.0 else (b_i - a_i) / denom
    return float(scores.mean())


@dataclass(frozen=True, eq=False)
class MetricReport:
    """Bundle of quality scores for one clustering."""

    sc: float | None
    prt: float
    ami: float
    homogeneity: tuple[float, ...]
    k: int

    def __post_init__(self):
        if len(self.homogeneity) != self.k:
            raise MetricError("homogeneity must have one value per cluster")
        if not 0.0 < self.prt <= 1.0:
            raise MetricError("purity must lie in (0, 1]")
        if self.sc is not None and not -1.0 <= self.sc <= 1.0:
            raise MetricError("silhouette must lie in [-1, 1]")

    def to_json(self) -> str:
        return json.dumps(
            {
                "sc": self.sc,
                "prt": self.prt,
                "ami": self.ami,
                "homogeneity": list(self.homogeneity),
                "k": self.k,
            }
        )

    @classmethod
    def from_json(cls, payload: str) -> "MetricReport":
        obj = json.loads(payload)
        return cls(
            sc=obj["sc"],
            prt=obj["prt"],
            ami=obj["ami"],
            homogeneity=tuple(obj["homogeneity"]),
            k=obj["k"],
        )


def write_contingency_csv(table: ContingencyTable, path: str | Path) -> None:
    """Header row = cluster labels, first column = class labels."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["class"] + list(table.cluster_labels))
        for i, label in enumerate(table.class_labels):
            writer.writerow([label] + [int(v) for v in table.counts[i]])


def read_contingency_csv(path: str | Path) -> ContingencyTable:
    with Path(path).open("r", encoding="utf-8", newline="") as fh:
        rows = list(csv.reader(fh))
    if not rows or len(rows) < 2:
        raise MetricError(f"{path}: empty contingency CSV")
    cluster_labels = tuple(rows[0][1:])
    class_labels = tuple(r[0] for r in rows[1:])
    counts = np.array([[int(v) for v in r[1:]] for r in rows[1:]], dtype=np.int64)
    return ContingencyTable(counts=counts, class_labels=class_labels, cluster_labels=cluster_labels)
