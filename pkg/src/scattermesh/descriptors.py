"""Human-readable cluster descriptors and 2-D projections for plotting.

Descriptors come from cluster centroids: when clustering ran in the reduced
space the centroid is mapped back to term space first, then the heaviest
terms are listed. The projection is a fresh 2-dimensional reduction of the
weighted matrix, independent of whatever reduction fed the clustering; it
exists purely for plotting.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, NamedTuple

import numpy as np

from .cluster import Clustering
from .lsa import SvdFactors, back_transform, project_documents, truncated_svd
from .vectorizer import TermDocMatrix, Vocabulary


@dataclass(frozen=True)
class DescriptorList:
    """Top terms of one cluster, heaviest first."""

    cluster: int
    terms: tuple[tuple[str, float], ...]


def cluster_descriptors(
    clustering: Clustering,
    vocab: Vocabulary,
    top_k: int = 10,
    factors: SvdFactors | None = None,
) -> list[DescriptorList]:
    """Heaviest centroid terms per cluster.

    Centroids in the reduced space require `factors` for the back-transform.
    Negative back-transformed weights are kept and naturally rank below every
    positive weight; ties break toward the lower term index.
    """
    if top_k < 1:
        raise ValueError("top_k must be >= 1")
    n_terms = len(vocab)
    out = []
    for c in range(clustering.k):
        centroid = np.asarray(clustering.centroids[c], dtype=np.float64)
        if factors is not None:
            weights = back_transform(centroid, factors)
        elif centroid.shape[0] == n_terms:
            weights = centroid
        else:
            raise ValueError(
                "clustering ran in a reduced space; supply the matching SVD factors"
            )
        if weights.shape[0] != n_terms:
            raise ValueError("factors do not match the vocabulary size")
        order = np.lexsort((np.arange(n_terms), -weights))[:top_k]
        out.append(
            DescriptorList(
                cluster=c,
                terms=tuple((vocab.terms[j], float(weights[j])) for j in order),
            )
        )
    return out


class ProjectionRow(NamedTuple):
    id: str
    x: float
    y: float
    cluster: int
    cls: str  # empty string when truth is unknown


def plot_projection(
    matrix: TermDocMatrix,
    clustering: Clustering,
    truth: Mapping[str, str] | None = None,
    seed: int = 0,
) -> list[ProjectionRow]:
    """Fresh 2-D reduction of the matrix with cluster and class columns."""
    if matrix.n_docs < 2:
        raise ValueError("projection needs at least 2 documents")
    n = min(2, matrix.n_docs, matrix.n_terms)
    factors = truncated_svd(matrix, n=n, seed=seed)
    emb = project_documents(factors, doc_ids=matrix.doc_ids).values
    if emb.shape[1] < 2:  # rank-deficient matrix: pad the missing axis
        emb = np.hstack([emb, np.zeros((emb.shape[0], 2 - emb.shape[1]))])
    rows = []
    for i, doc_id in enumerate(matrix.doc_ids):
        rows.append(
            ProjectionRow(
                id=doc_id,
                x=float(emb[i, 0]),
                y=float(emb[i, 1]),
                cluster=int(clustering.assignments[i]),
                cls=truth.get(doc_id, "") if truth else "",
            )
        )
    return rows


def write_projection_csv(rows: list[ProjectionRow], path: str | Path) -> None:
    """Columns, in order: "id","x","y","cluster","class"."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "x", "y", "cluster", "class"])
        for row in rows:
            writer.writerow([row.id, repr(row.x), repr(row.y), row.cluster, row.cls])


PALETTE = (
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
    "#bcbd22", "#17becf", "#aec7e8", "#ffbb78",
    "#98df8a", "#ff9896", "#c5b0d5", "#c49c94",
)


def write_projection_svg(rows: list[ProjectionRow], path: str | Path) -> None:
    """Self-contained two-panel scatter: classes on the left, clusters right.

    The class panel is dropped when no row carries a class label.
    """
    has_truth = any(r.cls for r in rows)
    panels = (["class"] if has_truth else []) + ["cluster"]

    xs = np.array([r.x for r in rows])
    ys = np.array([r.y for r in rows])
    span_x = (xs.max() - xs.min()) or 1.0
    span_y = (ys.max() - ys.min()) or 1.0
    size, margin = 360, 30

    def sx(v):
        return margin + (v - xs.min()) / span_x * (size - 2 * margin)

    def sy(v):
        return size - margin - (v - ys.min()) / span_y * (size - 2 * margin)

    classes = sorted(set(r.cls for r in rows if r.cls))
    clusters = sorted(set(r.cluster for r in rows))
    color_of = {
        "class": {c: PALETTE[i % len(PALETTE)] for i, c in enumerate(classes)},
        "cluster": {c: PALETTE[i % len(PALETTE)] for i, c in enumerate(clusters)},
    }

    width = size * len(panels)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{size + 90}" '
        f'viewBox="0 0 {width} {size + 90}">',
        f'<rect width="{width}" height="{size + 90}" fill="white"/>',
    ]
    for p, panel in enumerate(panels):
        off = p * size
        title = "classes" if panel == "class" else "predicted clusters"
        parts.append(
            f'<text x="{off + size / 2}" y="18" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13">{title}</text>'
        )
        for r in rows:
            key = r.cls if panel == "class" else r.cluster
            color = color_of[panel].get(key, "#cccccc")
            parts.append(
                f'<circle cx="{off + sx(r.x):.2f}" cy="{sy(r.y):.2f}" r="3" '
                f'fill="{color}" fill-opacity="0.7"/>'
            )
        legend_items = classes if panel == "class" else clusters
        for i, item in enumerate(legend_items):
            lx = off + margin
            ly = size + 12 + 16 * i
            color = color_of[panel][item]
            parts.append(f'<rect x="{lx}" y="{ly - 9}" width="10" height="10" fill="{color}"/>')
            parts.append(
                f'<text x="{lx + 14}" y="{ly}" font-family="sans-serif" font-size="11">{item}</text>'
            )
    parts.append("</svg>")
    Path(path).write_text("\n".join(parts), encoding="utf-8")
