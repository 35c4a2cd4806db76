"""Vocabulary reduction: per-document top-rank voting (VCGS) or a df floor.

VCGS keeps a term when it ranks among the top R weighted terms of strictly
more than P percent of the documents (P = 0.1 means 0.1% of N). The df
selector keeps terms whose document frequency is at least tau_df. Restriction
drops the other columns without re-weighting: df and N stay frozen from the
full matrix, so selection ranks and surviving weights remain consistent.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import sparse

from .errors import EmptySelectionError
from .vectorizer import TermDocMatrix, Vocabulary


@dataclass(frozen=True)
class VcgsParams:
    rank_threshold: int  # R: top-R weighted terms per document
    percent_threshold: float  # P: percentage of documents, 0.1 -> 0.1%

    def __post_init__(self):
        if self.rank_threshold < 1:
            raise ValueError("rank_threshold must be >= 1")
        if not 0 < self.percent_threshold < 100:
            raise ValueError("percent_threshold must be in (0, 100)")


@dataclass(frozen=True)
class DfParams:
    tau_df: int

    def __post_init__(self):
        if self.tau_df < 2:
            raise ValueError("tau_df must be >= 2")


def vcgs_hit_counts(tdm: TermDocMatrix, params: VcgsParams) -> np.ndarray:
    """Per-term count of documents where the term ranks in the top R by weight.

    Ties within a document break toward the lower term index. Only stored
    (nonzero) weights participate.
    """
    mat = tdm.matrix
    hits = np.zeros(mat.shape[1], dtype=np.int64)
    indptr, indices, data = mat.indptr, mat.indices, mat.data
    r = params.rank_threshold
    for i in range(mat.shape[0]):
        lo, hi = indptr[i], indptr[i + 1]
        if lo == hi:
            continue
        cols = indices[lo:hi]
        w = data[lo:hi]
        if hi - lo <= r:
            hits[cols] += 1
        else:
            # weight descending, then term index ascending
            order = np.lexsort((cols, -w))[:r]
            hits[cols[order]] += 1
    return hits


def vcgs_select(tdm: TermDocMatrix, params: VcgsParams) -> np.ndarray:
    """Indices of terms whose top-R hit count strictly exceeds (P/100) * N."""
    if tdm.matrix.nnz == 0:
        raise EmptySelectionError("matrix has no stored weights")
    hits = vcgs_hit_counts(tdm, params)
    threshold = (params.percent_threshold / 100.0) * tdm.n_docs
    kept = np.flatnonzero(hits > threshold)
    if kept.size == 0:
        raise EmptySelectionError(
            f"VCGS(R={params.rank_threshold}, P={params.percent_threshold}) kept no terms; "
            "relax R upward or P downward"
        )
    return kept


def df_select(vocab: Vocabulary, params: DfParams) -> np.ndarray:
    """Indices of terms with document frequency >= tau_df."""
    kept = np.flatnonzero(vocab.df >= params.tau_df)
    if kept.size == 0:
        raise EmptySelectionError(
            f"df threshold {params.tau_df} exceeds the maximum df {int(vocab.df.max())}"
        )
    return kept


def restrict(tdm: TermDocMatrix, subset: np.ndarray) -> TermDocMatrix:
    """Drop columns outside `subset`; weights, df, and N are left untouched.

    Documents whose rows become all-zero are retained (see :func:`zero_rows`).
    """
    subset = np.unique(np.asarray(subset, dtype=np.int64))
    if subset.size == 0:
        raise ValueError("subset must be non-empty")
    if subset[0] < 0 or subset[-1] >= tdm.n_terms:
        raise IndexError("subset indices out of range")
    sub_vocab = Vocabulary(
        terms=tuple(tdm.vocab.terms[j] for j in subset),
        df=tdm.vocab.df[subset].copy(),
        n_docs=tdm.vocab.n_docs,
    )
    mat = sparse.csr_matrix(tdm.matrix[:, subset])
    mat.sort_indices()
    return TermDocMatrix(matrix=mat, scheme=tdm.scheme, vocab=sub_vocab, doc_ids=tdm.doc_ids)


def zero_rows(tdm: TermDocMatrix) -> np.ndarray:
    """Indices of documents with no stored weight left."""
    counts = np.diff(tdm.matrix.indptr)
    return np.flatnonzero(counts == 0)


def write_selection_csv(
    tdm: TermDocMatrix,
    subset: np.ndarray,
    path: str | Path,
    hit_counts: np.ndarray | None = None,
) -> None:
    """Kept terms with df (and VCGS hit counts when available), for inspection."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        header = ["term", "df"] + (["hits"] if hit_counts is not None else [])
        writer.writerow(header)
        for j in np.asarray(subset):
            row = [tdm.vocab.terms[j], int(tdm.vocab.df[j])]
            if hit_counts is not None:
                row.append(int(hit_counts[j]))
            writer.writerow(row)
