"""Name the clusters and draw them.

Cluster descriptors are the heaviest centroid terms after mapping reduced
centroids back to term space. The 2-D scatter is a fresh two-dimensional
reduction, written as CSV plus a self-contained two-panel SVG (classes on
the left, predicted clusters on the right).
"""

from pathlib import Path

from scattermesh import KmeansParams, cluster_descriptors, plot_projection
from scattermesh.corpus import FieldSubset
from scattermesh.datasets import make_planted_corpus
from scattermesh.descriptors import write_projection_csv, write_projection_svg
from scattermesh.featselect import VcgsParams
from scattermesh.harness import PipelineConfig, run_pipeline

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

planted = make_planted_corpus(n_docs=200, n_topics=4, seed=7)
config = PipelineConfig(
    subset=FieldSubset.TITLE_ABSTRACT_BODY,
    selector=VcgsParams(5, 0.5),
    lsa_n=4,
    algorithm=KmeansParams(k=4),
    seed=0,
)
artifacts = run_pipeline(planted.corpus, config)

lists = cluster_descriptors(
    artifacts.clustering,
    artifacts.restricted.vocab,
    top_k=10,
    factors=artifacts.factors,
)
for dl in lists:
    terms = ", ".join(t for t, _ in dl.terms)
    print(f"C{dl.cluster + 1}: {terms}")

rows = plot_projection(artifacts.restricted, artifacts.clustering, truth=planted.truth)
write_projection_csv(rows, OUT / "projection.csv")
write_projection_svg(rows, OUT / "projection.svg")
print(f"\nwrote {OUT / 'projection.csv'} and {OUT / 'projection.svg'}")
