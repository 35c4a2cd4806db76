"""Build an evaluation dataset from a labeled document collection.

Walks through the ingest path: write a small JSONL corpus, load it back,
pick the most frequent subject labels as classes, strip the labels, and show
how the three text-field subsets compose.
"""

from pathlib import Path

from scattermesh import (
    FieldSubset,
    build_labeled_dataset,
    compose_text,
    load_corpus,
    write_truth_csv,
)
from scattermesh.datasets import make_planted_corpus, write_planted_corpus

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

# A synthetic stand-in for a real retrieval: 200 documents over four topics,
# each record annotated with its topic label in "mesh_major".
planted = make_planted_corpus(n_docs=200, n_topics=4, seed=7)
corpus_path = write_planted_corpus(planted, OUT, name="planted")
print(f"wrote {corpus_path}")

corpus = load_corpus(corpus_path)
print(f"loaded {len(corpus)} records, {corpus.skipped_records} skipped")

# Class selection mirrors the frequency rule: count candidates, keep the top
# k, drop records that carry zero or several of the selected labels.
dataset = build_labeled_dataset(
    corpus,
    candidate_labels=list(planted.classes),
    k_classes=4,
    min_class_size=10,
)
print("class sizes:", dataset.class_sizes())
print(f"dropped: {dataset.dropped_unlabeled} unlabeled, {dataset.dropped_multilabel} multi-label")

write_truth_csv(dataset.truth, OUT / "planted_truth.csv")

# The (a)/(b)/(c) experiments differ only in which fields feed the pipeline.
record = dataset.corpus.records[0]
for subset in FieldSubset:
    text = compose_text(record, subset)
    print(f"{subset.value:22s} -> {len(text.split())} tokens")
