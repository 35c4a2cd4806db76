"""Partition the embedded documents with maximin and k-means++.

Maximin discovers its own cluster count from the distance threshold theta;
k-means++ is told k. Both are deterministic for a fixed seed.
"""

import numpy as np

from scattermesh import KmeansParams, MaximinParams, kmeans_pp, maximin
from scattermesh.harness import PipelineConfig, run_pipeline
from scattermesh.corpus import FieldSubset
from scattermesh.featselect import VcgsParams
from scattermesh.datasets import make_planted_corpus

planted = make_planted_corpus(n_docs=200, n_topics=4, seed=7)
config = PipelineConfig(
    subset=FieldSubset.TITLE_ABSTRACT_BODY,
    selector=VcgsParams(5, 0.5),
    lsa_n=4,
    algorithm=KmeansParams(k=4),
    seed=0,
)
artifacts = run_pipeline(planted.corpus, config)
space = artifacts.space

print("k-means++ (k=4):")
km = kmeans_pp(space, KmeansParams(k=4, seed=0))
print(f"  sizes={km.sizes().tolist()}  objective={km.objective:.3f}  iterations={km.iterations}")
print(f"  objective history: {[round(v, 2) for v in km.objective_history]}")

print("\nmaximin at several thetas (k is discovered, not set):")
for theta in (0.3, 0.6, 0.9):
    mm = maximin(space, MaximinParams(theta=theta, seed=0))
    print(f"  theta={theta}: k={mm.k}  sizes={sorted(mm.sizes().tolist(), reverse=True)}")

# agreement between the two partitions at k=4
mm = maximin(space, MaximinParams(theta=0.9, seed=0))
agree = np.zeros((4, mm.k), dtype=int)
for a, b in zip(km.assignments, mm.assignments):
    agree[a, b] += 1
print("\nk-means vs maximin co-occurrence counts:")
print(agree)
