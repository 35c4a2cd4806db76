"""Document collections, class-labeled evaluation datasets, and text field subsets.

A corpus is an ordered list of records, each with an id, a title, optional
abstract/body text, and an optional set of subject labels (e.g. MeSH terms).
Labeled datasets are built by picking the most frequent candidate labels as
classes, keeping only single-label records, and stripping the labels so
clustering stays unsupervised while a truth map remains for evaluation.
"""

from __future__ import annotations

import csv
import enum
import json
from collections import Counter
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import DatasetError, IngestError


@dataclass(frozen=True)
class DocumentRecord:
    """One document: id and title required, abstract/body/labels optional."""

    id: str
    title: str
    abstract: str | None = None
    body: str | None = None
    subject_labels: frozenset[str] = frozenset()


@dataclass(frozen=True)
class Corpus:
    """Ordered, id-unique collection of records. Immutable after construction."""

    records: tuple[DocumentRecord, ...]
    provenance: str = ""
    skipped_records: int = 0  # invalid rows dropped at ingest, for reporting

    def __post_init__(self):
        seen: set[str] = set()
        for rec in self.records:
            if not rec.id:
                raise IngestError("record with empty id")
            if not rec.title:
                raise IngestError(f"record {rec.id!r} has empty title")
            if rec.id in seen:
                raise IngestError(f"duplicate record id {rec.id!r}")
            seen.add(rec.id)

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self) -> Iterator[DocumentRecord]:
        return iter(self.records)

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(r.id for r in self.records)

    def get(self, doc_id: str) -> DocumentRecord:
        for rec in self.records:
            if rec.id == doc_id:
                return rec
        raise KeyError(doc_id)

    def subset(self, keep_ids: Iterable[str]) -> "Corpus":
        """Records whose id is in `keep_ids`, original order preserved."""
        wanted = set(keep_ids)
        kept = tuple(r for r in self.records if r.id in wanted)
        return Corpus(kept, provenance=f"{self.provenance} (subset of {len(wanted)} ids)")


class FieldSubset(enum.Enum):
    """Which text fields feed the vectorizer: (a), (b), or (c)."""

    TITLE_ONLY = "title"
    TITLE_ABSTRACT = "title_abstract"
    TITLE_ABSTRACT_BODY = "title_abstract_body"

    @classmethod
    def from_string(cls, s: str) -> "FieldSubset":
        aliases = {
            "a": cls.TITLE_ONLY,
            "b": cls.TITLE_ABSTRACT,
            "c": cls.TITLE_ABSTRACT_BODY,
            "title": cls.TITLE_ONLY,
            "title_abstract": cls.TITLE_ABSTRACT,
            "title_abstract_body": cls.TITLE_ABSTRACT_BODY,
        }
        key = s.strip().lower()
        if key not in aliases:
            raise ValueError(f"unknown field subset {s!r}")
        return aliases[key]


@dataclass(frozen=True)
class LabeledDataset:
    """Label-stripped corpus plus the ground-truth class of every record."""

    corpus: Corpus
    truth: Mapping[str, str]
    classes: tuple[str, ...]
    dropped_unlabeled: int = 0  # records with zero selected labels
    dropped_multilabel: int = 0  # records with two or more selected labels

    def __post_init__(self):
        if len(self.classes) < 2:
            raise DatasetError("a labeled dataset needs at least 2 classes")
        class_set = set(self.classes)
        for rec in self.corpus:
            label = self.truth.get(rec.id)
            if label is None:
                raise DatasetError(f"record {rec.id!r} missing from truth map")
            if label not in class_set:
                raise DatasetError(f"record {rec.id!r} has unknown class {label!r}")
        present = set(self.truth[r.id] for r in self.corpus)
        missing = class_set - present
        if missing:
            raise DatasetError(f"classes without members: {sorted(missing)}")

    def class_sizes(self) -> dict[str, int]:
        counts = Counter(self.truth[r.id] for r in self.corpus)
        return {c: counts[c] for c in self.classes}


def _record_from_fields(doc_id, title, abstract, body, labels) -> DocumentRecord:
    return DocumentRecord(
        id=str(doc_id),
        title=str(title),
        abstract=str(abstract) if abstract not in (None, "") else None,
        body=str(body) if body not in (None, "") else None,
        subject_labels=frozenset(str(x) for x in labels),
    )


def _iter_jsonl(path: Path):
    with path.open("r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise IngestError(f"{path}: malformed JSON on line {lineno}: {exc}") from exc
            if not isinstance(obj, dict):
                raise IngestError(f"{path}: line {lineno} is not a JSON object")
            yield lineno, obj


def _iter_csv(path: Path):
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "id" not in reader.fieldnames or "title" not in reader.fieldnames:
            raise IngestError(f"{path}: CSV header must include 'id' and 'title'")
        for row in reader:
            mesh = row.get("mesh_major") or ""
            labels = [m for m in mesh.split("|") if m] if mesh else []
            obj = {
                "id": row.get("id"),
                "title": row.get("title"),
                "abstract": row.get("abstract"),
                "body": row.get("body"),
                "mesh_major": labels,
            }
            yield reader.line_num, obj


def load_corpus(path: str | Path, format: str | None = None) -> Corpus:
    """Read a corpus from a JSONL or CSV file.

    Rows with an empty id or title are skipped and counted in
    ``Corpus.skipped_records``. Duplicate ids and unparseable lines raise
    :class:`IngestError` naming the offending line.
    """
    path = Path(path)
    if not path.is_file():
        raise IngestError(f"cannot read corpus file: {path}")
    if format is None:
        format = "csv" if path.suffix.lower() == ".csv" else "jsonl"
    if format not in ("jsonl", "csv"):
        raise IngestError(f"unknown corpus format {format!r}")

    rows = _iter_csv(path) if format == "csv" else _iter_jsonl(path)
    records: list[DocumentRecord] = []
    seen: dict[str, int] = {}
    skipped = 0
    for lineno, obj in rows:
        doc_id = obj.get("id")
        title = obj.get("title")
        if doc_id in (None, "") or title in (None, ""):
            skipped += 1
            continue
        doc_id = str(doc_id)
        if doc_id in seen:
            raise IngestError(
                f"{path}: duplicate id {doc_id!r} on line {lineno} (first seen on line {seen[doc_id]})"
            )
        seen[doc_id] = lineno
        labels = obj.get("mesh_major") or []
        if not isinstance(labels, (list, tuple)):
            raise IngestError(f"{path}: line {lineno}: 'mesh_major' must be an array")
        records.append(_record_from_fields(doc_id, title, obj.get("abstract"), obj.get("body"), labels))

    return Corpus(
        tuple(records),
        provenance=f"{path} ({format})",
        skipped_records=skipped,
    )


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    """Write a corpus back out as JSONL (the canonical interchange format)."""
    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        for rec in corpus:
            obj: dict = {"id": rec.id, "title": rec.title}
            if rec.abstract is not None:
                obj["abstract"] = rec.abstract
            if rec.body is not None:
                obj["body"] = rec.body
            if rec.subject_labels:
                obj["mesh_major"] = sorted(rec.subject_labels)
            fh.write(json.dumps(obj, ensure_ascii=False) + "\n")


def build_labeled_dataset(
    corpus: Corpus,
    candidate_labels: Sequence[str],
    k_classes: int,
    min_class_size: int = 0,
) -> LabeledDataset:
    """Select the k most frequent candidate labels as classes and keep
    only records carrying exactly one of them.

    Ties between equally frequent candidates break by `candidate_labels`
    order. Records with zero or several selected labels are dropped (counts
    kept on the result). Classes smaller than `min_class_size` are an error.
    """
    if not candidate_labels:
        raise DatasetError("candidate_labels must be non-empty")
    if k_classes < 2:
        raise DatasetError("k_classes must be at least 2")

    counts = {label: 0 for label in candidate_labels}
    for rec in corpus:
        for label in candidate_labels:
            if label in rec.subject_labels:
                counts[label] += 1

    nonzero = [label for label in candidate_labels if counts[label] > 0]
    if len(nonzero) < k_classes:
        raise DatasetError(
            f"only {len(nonzero)} candidate labels occur in the corpus, need {k_classes}"
        )
    order = {label: i for i, label in enumerate(candidate_labels)}
    classes = tuple(sorted(nonzero, key=lambda l: (-counts[l], order[l]))[:k_classes])

    class_set = set(classes)
    kept: list[DocumentRecord] = []
    truth: dict[str, str] = {}
    dropped_zero = 0
    dropped_multi = 0
    for rec in corpus:
        matched = [c for c in classes if c in rec.subject_labels]
        if len(matched) == 1:
            truth[rec.id] = matched[0]
            kept.append(replace(rec, subject_labels=frozenset()))
        elif len(matched) == 0:
            dropped_zero += 1
        else:
            dropped_multi += 1

    sizes = Counter(truth.values())
    for c in classes:
        if sizes[c] < max(min_class_size, 1):
            raise DatasetError(
                f"class {c!r} has {sizes[c]} members, below minimum {max(min_class_size, 1)}"
            )

    stripped = Corpus(
        tuple(kept),
        provenance=f"{corpus.provenance} [labeled: {len(classes)} classes]",
    )
    return LabeledDataset(
        corpus=stripped,
        truth=truth,
        classes=classes,
        dropped_unlabeled=dropped_zero,
        dropped_multilabel=dropped_multi,
    )


def compose_text(record: DocumentRecord, subset: FieldSubset) -> str:
    """Join the selected fields with single newlines; absent fields drop out."""
    parts = [record.title]
    if subset in (FieldSubset.TITLE_ABSTRACT, FieldSubset.TITLE_ABSTRACT_BODY):
        if record.abstract:
            parts.append(record.abstract)
    if subset is FieldSubset.TITLE_ABSTRACT_BODY:
        if record.body:
            parts.append(record.body)
    return "\n".join(parts)


def write_truth_csv(truth: Mapping[str, str], path: str | Path) -> None:
    """Ground-truth sidecar: CSV with columns "id","class"."""
    with Path(path).open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "class"])
        for doc_id in truth:
            writer.writerow([doc_id, truth[doc_id]])


def read_truth_csv(path: str | Path) -> dict[str, str]:
    path = Path(path)
    if not path.is_file():
        raise IngestError(f"cannot read truth file: {path}")
    truth: dict[str, str] = {}
    with path.open("r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None or "id" not in reader.fieldnames or "class" not in reader.fieldnames:
            raise IngestError(f"{path}: truth CSV header must be 'id','class'")
        for row in reader:
            truth[row["id"]] = row["class"]
    return truth
