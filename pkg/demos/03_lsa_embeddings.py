"""Reduce the matrix with a truncated SVD and map vectors both ways.

Demonstrates the embedding (U_n Sigma_n), the reconstruction error shrinking
as dimensions are added, and the term-space round trip used later for
cluster descriptors.
"""

import numpy as np

from scattermesh import (
    FieldSubset,
    VcgsParams,
    WeightScheme,
    back_transform,
    build_vocabulary,
    compose_text,
    load_stopwords,
    project_documents,
    restrict,
    tokenize,
    truncated_svd,
    vcgs_select,
    weight_matrix,
)
from scattermesh.datasets import make_planted_corpus

planted = make_planted_corpus(n_docs=200, n_topics=4, seed=7)
stopwords = load_stopwords()
texts = [compose_text(r, FieldSubset.TITLE_ABSTRACT_BODY) for r in planted.corpus]
token_lists = [tokenize(t, stopwords) for t in texts]
vocab = build_vocabulary(token_lists)
tdm = weight_matrix(token_lists, vocab, WeightScheme.LOG_OUTSIDE, doc_ids=planted.corpus.ids)
tdm = restrict(tdm, vcgs_select(tdm, VcgsParams(5, 0.5)))
print(f"matrix: {tdm.n_docs} x {tdm.n_terms}")

dense = tdm.matrix.toarray()
for n in (2, 4, 8, min(16, tdm.n_terms)):
    factors = truncated_svd(tdm, n=n, seed=0)
    recon = factors.doc_factors * factors.singular_values @ factors.term_factors.T
    err = np.linalg.norm(dense - recon) / np.linalg.norm(dense)
    print(f"n={n:2d}: sigma_1={factors.singular_values[0]:.2f}  relative recon error {err:.3f}")

factors = truncated_svd(tdm, n=4, seed=0)
embeddings = project_documents(factors, doc_ids=tdm.doc_ids)
print(f"\nembeddings: {embeddings.values.shape}, aligned with {len(embeddings.doc_ids)} ids")

# Back-transform carries reduced vectors (such as cluster centroids) home to
# term space; at n=4 the heaviest recovered terms are already topical.
centroid = embeddings.values[:50].mean(axis=0)  # first topic's documents
weights = back_transform(centroid, factors)
top = np.argsort(-weights)[:5]
print("heaviest back-transformed terms of a topic centroid:")
for j in top:
    print(f"  {tdm.vocab.terms[j]:16s} {weights[j]:.3f}")
