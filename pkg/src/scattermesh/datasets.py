"""Synthetic planted-topic corpora and reference label fixtures.

The planted generator produces documents whose tokens are drawn from one of
several disjoint topic vocabularies plus a shared filler pool, giving a
reproducible ground truth for end-to-end pipeline checks. The "layered"
variant concentrates topic signal in the abstract and especially the body, so
cluster quality should improve as those fields are added to the input.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

import numpy as np

from .corpus import Corpus, DocumentRecord, save_corpus, write_truth_csv

TOPIC_NAMES = ("alphavirin", "betamycin", "gammazole", "deltaprost")

FILLER_WORDS = (
    "study", "patients", "analysis", "methods", "results", "clinical",
    "treatment", "groups", "effects", "models", "trial", "outcomes",
)


def _topic_vocab(name: str, size: int) -> tuple[str, ...]:
    return tuple(f"{name}{chr(ord('a') + w)}" for w in range(size))


@dataclass(frozen=True)
class PlantedCorpus:
    """A labeled synthetic corpus with its generating topic vocabularies."""

    corpus: Corpus  # records carry their class in subject_labels
    truth: dict[str, str]
    classes: tuple[str, ...]
    topic_words: dict[str, tuple[str, ...]]


def make_planted_corpus(
    n_docs: int = 400,
    n_topics: int = 4,
    seed: int = 7,
    layered: bool = False,
    words_per_topic: int = 10,
) -> PlantedCorpus:
    """Documents over disjoint topic vocabularies with known classes.

    With `layered=False` every field carries strong topic signal. With
    `layered=True` titles are nearly pure filler, abstracts carry a little
    signal, and bodies carry most of it.
    """
    if not 2 <= n_topics <= len(TOPIC_NAMES):
        raise ValueError(f"n_topics must be in [2, {len(TOPIC_NAMES)}]")
    rng = np.random.default_rng(seed)
    classes = TOPIC_NAMES[:n_topics]
    vocabs = {c: _topic_vocab(c, words_per_topic) for c in classes}

    # mildly skewed draw so the same topic words repeat within a document
    ranks = np.arange(1, words_per_topic + 1, dtype=np.float64)
    topic_p = (1.0 / ranks) / (1.0 / ranks).sum()

    if layered:
        mix = {"title": (7, 1), "abstract": (24, 6), "body": (60, 60)}
    else:
        mix = {"title": (4, 4), "abstract": (20, 20), "body": (40, 60)}

    records = []
    truth: dict[str, str] = {}
    for i in range(n_docs):
        cls = classes[i % n_topics]
        words = vocabs[cls]

        def draw(n_filler: int, n_topic: int) -> str:
            filler = rng.choice(FILLER_WORDS, size=n_filler, replace=True)
            topical = rng.choice(words, size=n_topic, replace=True, p=topic_p)
            tokens = np.concatenate([filler, topical])
            rng.shuffle(tokens)
            return " ".join(tokens)

        doc_id = f"doc-{i:04d}"
        records.append(
            DocumentRecord(
                id=doc_id,
                title=draw(*mix["title"]),
                abstract=draw(*mix["abstract"]),
                body=draw(*mix["body"]),
                subject_labels=frozenset({cls}),
            )
        )
        truth[doc_id] = cls

    corpus = Corpus(
        tuple(records),
        provenance=f"planted corpus (n={n_docs}, topics={n_topics}, seed={seed}, layered={layered})",
    )
    return PlantedCorpus(corpus=corpus, truth=truth, classes=classes, topic_words=vocabs)


def write_planted_corpus(planted: PlantedCorpus, directory: str | Path, name: str = "planted") -> Path:
    """Write the corpus as JSONL plus its ``<name>.truth.csv`` sidecar."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    corpus_path = directory / f"{name}.jsonl"
    save_corpus(planted.corpus, corpus_path)
    write_truth_csv(planted.truth, directory / f"{name}.truth.csv")
    return corpus_path


def reference_class_labels() -> tuple[str, ...]:
    """The four reference class labels shipped as a fixture."""
    text = resources.files("scattermesh.data").joinpath("breast_neoplasms_children.txt").read_text("utf-8")
    return tuple(line.strip() for line in text.splitlines() if line.strip())
