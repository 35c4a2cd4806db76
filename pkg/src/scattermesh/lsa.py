"""Truncated SVD of the term-document matrix and document embeddings.

The reduced document representation is U_n * Sigma_n (equivalently M' V_n),
one row per document. Reduced vectors map back to term space through V_n for
descriptor extraction. Factor signs follow a fixed convention so results are
reproducible: in each V column, the entry of largest magnitude is made
non-negative (U flips jointly).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import sparse
from scipy.sparse.linalg import svds

from .vectorizer import TermDocMatrix


@dataclass(frozen=True, eq=False)
class SvdFactors:
    """Top-n singular triplets: values descending, factor columns orthonormal."""

    n: int
    singular_values: np.ndarray  # (n,), non-increasing, >= 0
    doc_factors: np.ndarray  # U_n, docs x n
    term_factors: np.ndarray  # V_n, terms x n
    rank_deficient: bool = False  # requested n exceeded the numerical rank

    def __post_init__(self):
        if self.singular_values.shape != (self.n,):
            raise ValueError("singular_values must have length n")
        if np.any(np.diff(self.singular_values) > 1e-12) or np.any(self.singular_values < 0):
            raise ValueError("singular values must be non-increasing and non-negative")
        if self.doc_factors.shape[1] != self.n or self.term_factors.shape[1] != self.n:
            raise ValueError("factor column counts must equal n")


@dataclass(frozen=True, eq=False)
class EmbeddingMatrix:
    """Dense reduced document vectors, rows aligned with doc_ids."""

    values: np.ndarray  # docs x n
    doc_ids: tuple[str, ...]

    def __post_init__(self):
        if not np.all(np.isfinite(self.values)):
            raise ValueError("embedding entries must be finite")
        if len(self.doc_ids) != self.values.shape[0]:
            raise ValueError("doc_ids must align with rows")


def _apply_sign_convention(u: np.ndarray, v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    flip = np.sign(v[np.argmax(np.abs(v), axis=0), np.arange(v.shape[1])])
    flip[flip == 0] = 1.0
    return u * flip, v * flip


def truncated_svd(matrix: TermDocMatrix | sparse.spmatrix | np.ndarray, n: int, seed: int = 0) -> SvdFactors:
    """Top-n singular triplets of the (sparse) matrix.

    Deterministic for a fixed seed. If n exceeds the numerical rank, the
    near-zero triplets are dropped and the result is flagged rank_deficient.
    """
    a = matrix.matrix if isinstance(matrix, TermDocMatrix) else matrix
    rows, cols = a.shape
    if not 1 <= n <= min(rows, cols):
        raise ValueError(f"n must be in [1, {min(rows, cols)}], got {n}")

    if n < min(rows, cols):
        rng = np.random.default_rng(seed)
        v0 = rng.standard_normal(min(rows, cols))
        try:
            u, s, vt = svds(sparse.csr_matrix(a, dtype=np.float64), k=n, v0=v0)
        except Exception:
            u, s, vt = _dense_topn(a, n)
        else:
            order = np.argsort(-s)
            u, s, vt = u[:, order], s[order], vt[order, :]
    else:
        u, s, vt = _dense_topn(a, n)

    # drop numerically-zero singular values (n beyond the rank)
    cutoff = max(rows, cols) * np.finfo(np.float64).eps * (s[0] if s.size and s[0] > 0 else 1.0)
    keep = s > cutoff
    rank_deficient = not bool(np.all(keep))
    u, s, vt = u[:, keep], s[keep], vt[keep, :]

    u, v = _apply_sign_convention(u, vt.T)
    return SvdFactors(
        n=int(s.size),
        singular_values=s,
        doc_factors=u,
        term_factors=v,
        rank_deficient=rank_deficient,
    )


def _dense_topn(a, n: int):
    dense = a.toarray() if sparse.issparse(a) else np.asarray(a, dtype=np.float64)
    u, s, vt = np.linalg.svd(dense, full_matrices=False)
    return u[:, :n], s[:n], vt[:n, :]


def project_documents(factors: SvdFactors, doc_ids: tuple[str, ...] | None = None) -> EmbeddingMatrix:
    """Document embeddings U_n * Sigma_n (= M' V_n), one row per document."""
    values = factors.doc_factors * factors.singular_values
    if doc_ids is None:
        doc_ids = tuple(str(i) for i in range(values.shape[0]))
    return EmbeddingMatrix(values=values, doc_ids=tuple(doc_ids))


def back_transform(reduced_vector: np.ndarray, factors: SvdFactors) -> np.ndarray:
    """Map a reduced vector back to term space: reduced . V_n^T."""
    reduced_vector = np.asarray(reduced_vector, dtype=np.float64)
    if reduced_vector.shape != (factors.n,):
        raise ValueError(f"expected a vector of length {factors.n}")
    return factors.term_factors @ reduced_vector


def write_singular_values_csv(factors: SvdFactors, path: str | Path) -> None:
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "singular_value"])
        for i, sv in enumerate(factors.singular_values):
            writer.writerow([i, repr(float(sv))])
