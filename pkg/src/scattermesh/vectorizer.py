"""Tokenization, vocabulary construction, and the weighted term-document matrix.

The matrix entry for term t_j in document d_i combines within-document term
frequency tf_ij with the collection statistics N (document count) and df_j
(document frequency). Compact tf-idf notation is ambiguous about whether the
log covers the N/df ratio, so three variants ship; all use natural
logarithms:

  log_outside   ln(tf) * (N / df)
  log_inside    ln(tf * N / df)
  standard      (1 + ln tf) * ln(N / df)

Terms appearing in only one document are dropped at vocabulary construction.
"""

from __future__ import annotations

import enum
import re
from collections import Counter
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np
from scipy import io as spio
from scipy import sparse

from .errors import EmptyVocabularyError

STOPWORD_FIXTURE = "stopwords_en_v1.txt"

# Lowercased runs of letters/digits, hyphens kept only between runs.
_TOKEN_RE = re.compile(r"[^\W_]+(?:-[^\W_]+)*", re.UNICODE)
_NUMBER_RE = re.compile(r"\d+(?:-\d+)*")


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    """Stopword set from a one-term-per-line UTF-8 file (default: bundled list)."""
    if path is None:
        text = resources.files("scattermesh.data").joinpath(STOPWORD_FIXTURE).read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


def tokenize(text: str, stopwords: Iterable[str] = frozenset()) -> list[str]:
    """Lowercase and split on non-alphanumerics, keeping internal hyphens.

    Tokens shorter than 2 characters, pure numbers, and stopwords are dropped.
    """
    stopset = stopwords if isinstance(stopwords, (set, frozenset)) else set(stopwords)
    out = []
    for tok in _TOKEN_RE.findall(text.lower()):
        if len(tok) < 2:
            continue
        if _NUMBER_RE.fullmatch(tok):
            continue
        if tok in stopset:
            continue
        out.append(tok)
    return out


class WeightScheme(enum.Enum):
    LOG_OUTSIDE = "log_outside"
    LOG_INSIDE = "log_inside"
    STANDARD = "standard"

    @classmethod
    def from_string(cls, s: str) -> "WeightScheme":
        try:
            return cls(s.strip().lower())
        except ValueError:
            raise ValueError(f"unknown weight scheme {s!r}") from None


@dataclass(frozen=True, eq=False)
class Vocabulary:
    """Term list with per-term document frequency; singleton-df terms removed."""

    terms: tuple[str, ...]
    df: np.ndarray  # document frequency per term, aligned with terms
    n_docs: int
    _index: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if len(self.terms) != len(self.df):
            raise ValueError("terms and df must align")
        if len(set(self.terms)) != len(self.terms):
            raise ValueError("terms must be unique")
        if np.any(self.df < 2) or np.any(self.df > self.n_docs):
            raise ValueError("df must satisfy 2 <= df <= n_docs")
        self._index.update({t: i for i, t in enumerate(self.terms)})

    def __len__(self) -> int:
        return len(self.terms)

    def index_of(self, term: str) -> int:
        return self._index[term]


@dataclass(frozen=True, eq=False)
class TermDocMatrix:
    """Sparse docs-by-terms weight matrix; structural zeros are not stored."""

    matrix: sparse.csr_matrix
    scheme: WeightScheme
    vocab: Vocabulary
    doc_ids: tuple[str, ...]

    def __post_init__(self):
        if self.matrix.shape[0] != self.vocab.n_docs:
            raise ValueError("row count must equal vocab.n_docs")
        if self.matrix.shape[1] != len(self.vocab):
            raise ValueError("column count must equal vocabulary size")
        if len(self.doc_ids) != self.matrix.shape[0]:
            raise ValueError("doc_ids must align with rows")
        if self.matrix.nnz:
            if not np.all(np.isfinite(self.matrix.data)) or np.any(self.matrix.data < 0):
                raise ValueError("weights must be finite and non-negative")

    @property
    def n_docs(self) -> int:
        return self.matrix.shape[0]

    @property
    def n_terms(self) -> int:
        return self.matrix.shape[1]

    def weight(self, doc: int, term: str) -> float:
        return float(self.matrix[doc, self.vocab.index_of(term)])


def build_vocabulary(token_lists: Sequence[Sequence[str]]) -> Vocabulary:
    """Document frequencies over the token lists; terms with df = 1 removed.

    Term order is first-appearance order across documents.
    """
    if len(token_lists) < 2:
        raise EmptyVocabularyError("need at least 2 documents to build a vocabulary")
    df: Counter[str] = Counter()
    first_seen: dict[str, None] = {}
    for tokens in token_lists:
        for tok in dict.fromkeys(tokens):  # unique, order-preserving
            df[tok] += 1
            first_seen.setdefault(tok)
    kept = [t for t in first_seen if df[t] >= 2]
    if not kept:
        raise EmptyVocabularyError("all terms occur in only one document")
    return Vocabulary(
        terms=tuple(kept),
        df=np.array([df[t] for t in kept], dtype=np.int64),
        n_docs=len(token_lists),
    )


def _weights(tf: np.ndarray, df: np.ndarray, n_docs: int, scheme: WeightScheme) -> np.ndarray:
    tf = tf.astype(np.float64)
    idf_ratio = n_docs / df.astype(np.float64)
    if scheme is WeightScheme.LOG_OUTSIDE:
        return np.log(tf) * idf_ratio
    if scheme is WeightScheme.LOG_INSIDE:
        return np.log(tf * idf_ratio)
    return (1.0 + np.log(tf)) * np.log(idf_ratio)


def weight_matrix(
    token_lists: Sequence[Sequence[str]],
    vocab: Vocabulary,
    scheme: WeightScheme = WeightScheme.LOG_OUTSIDE,
    doc_ids: Sequence[str] | None = None,
) -> TermDocMatrix:
    """Weighted sparse matrix over `vocab`; zero weights are not stored."""
    if len(token_lists) != vocab.n_docs:
        raise ValueError("token_lists must match the vocabulary's document count")
    if doc_ids is None:
        doc_ids = tuple(str(i) for i in range(len(token_lists)))
    else:
        doc_ids = tuple(doc_ids)

    rows: list[int] = []
    cols: list[int] = []
    tfs: list[int] = []
    for i, tokens in enumerate(token_lists):
        counts = Counter(tokens)
        for term, tf in counts.items():
            j = vocab._index.get(term)
            if j is not None:
                rows.append(i)
                cols.append(j)
                tfs.append(tf)

    tf_arr = np.array(tfs, dtype=np.int64)
    col_arr = np.array(cols, dtype=np.int64)
    data = _weights(tf_arr, vocab.df[col_arr], vocab.n_docs, scheme) if len(tfs) else np.array([])
    mat = sparse.csr_matrix(
        (data, (rows, cols)), shape=(len(token_lists), len(vocab)), dtype=np.float64
    )
    mat.eliminate_zeros()  # log_outside zeroes every tf=1 entry
    mat.sort_indices()
    return TermDocMatrix(matrix=mat, scheme=scheme, vocab=vocab, doc_ids=doc_ids)


def export_matrixmarket(tdm: TermDocMatrix, path: str | Path) -> None:
    """Debug dump in MatrixMarket coordinate format."""
    spio.mmwrite(str(path), tdm.matrix)
