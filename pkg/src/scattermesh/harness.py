"""Pipeline orchestration: configurations, grid sweeps, and report tables.

A configuration fixes every choice from text fields to metric options; running
it executes compose -> tokenize -> vocabulary -> weight -> select ->
(optional LSA) -> cluster -> metrics. Sweeps expand per-parameter value lists
into the Cartesian product, derive one seed per configuration from the base
seed and the configuration's canonical serialization, and rank results by AMI
with non-comparable rows (maximin landing on the wrong k) last.
"""

from __future__ import annotations

import hashlib
import io
import itertools
import json
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from functools import lru_cache
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .cluster import KmeansParams, MaximinParams, kmeans_pp, maximin
from .corpus import FieldSubset, LabeledDataset, compose_text
from .errors import ScatterMeshError, StageError
from .featselect import DfParams, VcgsParams, df_select, restrict, vcgs_select, zero_rows
from .lsa import project_documents, truncated_svd
from .metrics import ContingencyTable, MetricReport, ami, contingency, homogeneity, purity, silhouette
from .vectorizer import WeightScheme, build_vocabulary, load_stopwords, weight_matrix

WORKERS_ENV = "SCATTERMESH_WORKERS"


@dataclass(frozen=True)
class PipelineConfig:
    """Everything needed to run one end-to-end experiment."""

    subset: FieldSubset = FieldSubset.TITLE_ABSTRACT
    scheme: WeightScheme = WeightScheme.LOG_OUTSIDE
    selector: VcgsParams | DfParams = VcgsParams(rank_threshold=5, percent_threshold=0.5)
    lsa_n: int | None = None
    algorithm: KmeansParams | MaximinParams = KmeansParams(k=4)
    seed: int = 0
    ami_normalizer: str = "arithmetic"
    silhouette_variant: str = "pooled"

    @property
    def algorithm_kind(self) -> str:
        return "kmeans" if isinstance(self.algorithm, KmeansParams) else "maximin"

    @property
    def selector_kind(self) -> str:
        return "vcgs" if isinstance(self.selector, VcgsParams) else "df"

    def canonical_string(self, include_seed: bool = True) -> str:
        """Sorted key=value pairs; the seed-derivation form omits the seed."""
        items = {
            "subset": self.subset.value,
            "scheme": self.scheme.value,
            "selector": self._selector_json(),
            "lsa_n": self.lsa_n,
            "algorithm": self._algorithm_json(),
            "metrics": {
                "ami_normalizer": self.ami_normalizer,
                "silhouette_variant": self.silhouette_variant,
            },
        }
        if include_seed:
            items["seed"] = self.seed
        return json.dumps(items, sort_keys=True, separators=(",", ":"))

    def _selector_json(self) -> dict:
        if isinstance(self.selector, VcgsParams):
            return {
                "kind": "vcgs",
                "r": self.selector.rank_threshold,
                "p": self.selector.percent_threshold,
            }
        return {"kind": "df", "tau_df": self.selector.tau_df}

    def _algorithm_json(self) -> dict:
        if isinstance(self.algorithm, KmeansParams):
            a = self.algorithm
            return {
                "kind": "kmeans",
                "k": a.k,
                "max_iterations": a.max_iterations,
                "tolerance": a.tolerance,
                "restarts": a.restarts,
            }
        return {"kind": "maximin", "theta": self.algorithm.theta}

    def to_json_dict(self) -> dict:
        return {
            "subset": self.subset.value,
            "scheme": self.scheme.value,
            "selector": self._selector_json(),
            "lsa_n": self.lsa_n,
            "algorithm": self._algorithm_json(),
            "seed": self.seed,
            "metrics": {
                "ami_normalizer": self.ami_normalizer,
                "silhouette_variant": self.silhouette_variant,
            },
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "PipelineConfig":
        selector = _selector_from_json(obj.get("selector", {"kind": "vcgs", "r": 5, "p": 0.5}))
        algorithm = _algorithm_from_json(obj.get("algorithm", {"kind": "kmeans", "k": 4}))
        metrics = obj.get("metrics") or {}
        return cls(
            subset=FieldSubset.from_string(obj.get("subset", "title_abstract")),
            scheme=WeightScheme.from_string(obj.get("scheme", "log_outside")),
            selector=selector,
            lsa_n=obj.get("lsa_n"),
            algorithm=algorithm,
            seed=int(obj.get("seed", 0)),
            ami_normalizer=metrics.get("ami_normalizer", "arithmetic"),
            silhouette_variant=metrics.get("silhouette_variant", "pooled"),
        )


def _selector_from_json(obj: dict) -> VcgsParams | DfParams:
    kind = obj.get("kind")
    if kind == "vcgs":
        return VcgsParams(rank_threshold=int(obj["r"]), percent_threshold=float(obj["p"]))
    if kind == "df":
        return DfParams(tau_df=int(obj["tau_df"]))
    raise ValueError(f"unknown selector kind {kind!r}")


def _algorithm_from_json(obj: dict) -> KmeansParams | MaximinParams:
    kind = obj.get("kind")
    if kind == "kmeans":
        return KmeansParams(
            k=int(obj["k"]),
            max_iterations=int(obj.get("max_iterations", 300)),
            tolerance=float(obj.get("tolerance", 1e-6)),
            restarts=int(obj.get("restarts", 10)),
        )
    if kind == "maximin":
        return MaximinParams(theta=float(obj["theta"]))
    raise ValueError(f"unknown algorithm kind {kind!r}")


@dataclass(frozen=True, eq=False)
class ExperimentResult:
    config: PipelineConfig
    report: MetricReport
    table: ContingencyTable
    k_found: int
    wall_time: float
    comparable: bool  # False when maximin missed the expected class count
    zero_row_count: int = 0

    def to_json_dict(self, include_timing: bool = False) -> dict:
        obj: dict[str, Any] = {
            "config": self.config.to_json_dict(),
            "report": json.loads(self.report.to_json()),
            "table": {
                "counts": self.table.counts.tolist(),
                "class_labels": list(self.table.class_labels),
                "cluster_labels": list(self.table.cluster_labels),
            },
            "k_found": self.k_found,
            "comparable": self.comparable,
            "zero_row_count": self.zero_row_count,
        }
        if include_timing:
            obj["wall_time"] = self.wall_time
        return obj

    @classmethod
    def from_json_dict(cls, obj: dict) -> "ExperimentResult":
        rep = obj["report"]
        return cls(
            config=PipelineConfig.from_json_dict(obj["config"]),
            report=MetricReport(
                sc=rep["sc"],
                prt=rep["prt"],
                ami=rep["ami"],
                homogeneity=tuple(rep["homogeneity"]),
                k=rep["k"],
            ),
            table=ContingencyTable(
                counts=np.array(obj["table"]["counts"], dtype=np.int64),
                class_labels=tuple(obj["table"]["class_labels"]),
                cluster_labels=tuple(obj["table"]["cluster_labels"]),
            ),
            k_found=obj["k_found"],
            wall_time=obj.get("wall_time", 0.0),
            comparable=obj["comparable"],
            zero_row_count=obj.get("zero_row_count", 0),
        )


class _Stage:
    """Annotates exceptions with the pipeline stage they came from."""

    def __init__(self, name: str):
        self.name = name

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc, tb):
        if exc is not None and not isinstance(exc, StageError):
            raise StageError(self.name, exc) from exc
        return False


@dataclass(frozen=True, eq=False)
class PipelineArtifacts:
    """Intermediate products of one pipeline run, for reports and browsing."""

    matrix: Any  # TermDocMatrix over the full vocabulary
    restricted: Any  # TermDocMatrix after feature selection
    factors: Any | None  # SvdFactors when LSA ran
    space: Any  # vectors the clustering saw
    clustering: Any
    zero_row_count: int


def run_pipeline(
    corpus,
    config: PipelineConfig,
    stopwords: frozenset[str] | None = None,
    clamp_lsa: bool = False,
) -> PipelineArtifacts:
    """compose -> tokenize -> vocabulary -> weight -> select -> LSA? -> cluster.

    Errors raised by a stage are re-raised as :class:`StageError` carrying the
    stage name. Deterministic for a fixed config (the config seed drives LSA
    and clustering). With `clamp_lsa` the LSA dimension shrinks to fit the
    restricted matrix instead of erroring (interactive re-scatters can land on
    very small subsets).
    """
    if stopwords is None:
        stopwords = load_stopwords()

    with _Stage("compose"):
        texts = [compose_text(rec, config.subset) for rec in corpus]
        doc_ids = corpus.ids

    with _Stage("tokenize"):
        token_lists = [tokenize_cached(t, stopwords) for t in texts]

    with _Stage("vocabulary"):
        vocab = build_vocabulary(token_lists)

    with _Stage("weight"):
        tdm = weight_matrix(token_lists, vocab, config.scheme, doc_ids=doc_ids)

    with _Stage("select"):
        if isinstance(config.selector, VcgsParams):
            subset = vcgs_select(tdm, config.selector)
        else:
            subset = df_select(tdm.vocab, config.selector)
        restricted = restrict(tdm, subset)
        n_zero = int(zero_rows(restricted).size)

    with _Stage("lsa"):
        lsa_n = config.lsa_n
        if lsa_n is not None and clamp_lsa:
            lsa_n = min(lsa_n, restricted.n_docs, restricted.n_terms)
        if lsa_n is not None:
            factors = truncated_svd(restricted, n=lsa_n, seed=config.seed)
            space = project_documents(factors, doc_ids=doc_ids)
        else:
            factors = None
            space = restricted

    with _Stage("cluster"):
        algo = replace(config.algorithm, seed=config.seed)
        if isinstance(algo, KmeansParams):
            clustering = kmeans_pp(space, algo)
        else:
            clustering = maximin(space, algo)

    return PipelineArtifacts(
        matrix=tdm,
        restricted=restricted,
        factors=factors,
        space=space,
        clustering=clustering,
        zero_row_count=n_zero,
    )


def score_clustering(
    space,
    clustering,
    truth,
    doc_ids,
    classes: Sequence[str],
    ami_normalizer: str = "arithmetic",
    silhouette_variant: str = "pooled",
) -> tuple[MetricReport, ContingencyTable]:
    """Contingency-based external metrics plus silhouette on the given space."""
    predicted = {doc_id: int(c) for doc_id, c in zip(doc_ids, clustering.assignments)}
    table = contingency(predicted, dict(truth), class_order=classes)
    prt = purity(table)
    homog = homogeneity(table)
    ami_score = ami(table, normalizer=ami_normalizer)
    sc = (
        silhouette(space, clustering.assignments, variant=silhouette_variant)
        if clustering.k >= 2
        else None
    )
    report = MetricReport(
        sc=sc,
        prt=prt,
        ami=ami_score,
        homogeneity=tuple(float(h) for h in homog),
        k=clustering.k,
    )
    return report, table


def run_experiment(
    dataset: LabeledDataset,
    config: PipelineConfig,
    stopwords: frozenset[str] | None = None,
) -> ExperimentResult:
    """Execute the full pipeline on a labeled dataset; deterministic per seed."""
    started = time.perf_counter()
    artifacts = run_pipeline(dataset.corpus, config, stopwords=stopwords)

    with _Stage("metrics"):
        report, table = score_clustering(
            artifacts.space,
            artifacts.clustering,
            dataset.truth,
            dataset.corpus.ids,
            dataset.classes,
            ami_normalizer=config.ami_normalizer,
            silhouette_variant=config.silhouette_variant,
        )

    comparable = True
    if isinstance(config.algorithm, MaximinParams):
        comparable = artifacts.clustering.k == len(dataset.classes)

    return ExperimentResult(
        config=config,
        report=report,
        table=table,
        k_found=artifacts.clustering.k,
        wall_time=time.perf_counter() - started,
        comparable=comparable,
        zero_row_count=artifacts.zero_row_count,
    )


@lru_cache(maxsize=100_000)
def tokenize_cached(text: str, stopwords: frozenset[str]) -> list[str]:
    """Tokenization is pure; sweeps hit the same texts across many configs."""
    from .vectorizer import tokenize

    return tokenize(text, stopwords)


@dataclass(frozen=True)
class SweepFailure:
    config: PipelineConfig
    stage: str
    message: str


@dataclass
class SweepOutcome:
    results: list[ExperimentResult]
    failures: list[SweepFailure]


def derive_seed(base_seed: int, config: PipelineConfig) -> int:
    """Deterministic per-config seed from the base seed and config identity."""
    payload = f"{base_seed}|{config.canonical_string(include_seed=False)}"
    digest = hashlib.sha256(payload.encode("utf-8")).digest()
    return int.from_bytes(digest[:4], "big")


def expand_grid(grid: dict, base_seed: int = 0) -> list[PipelineConfig]:
    """Cartesian product of the per-parameter value lists in `grid`.

    Keys mirror the config file: "subset", "scheme", "selector", "lsa_n",
    "algorithm" (each a list), and a single "metrics" object.
    """
    subsets = [FieldSubset.from_string(s) for s in grid.get("subset", ["title_abstract"])]
    schemes = [WeightScheme.from_string(s) for s in grid.get("scheme", ["log_outside"])]
    selectors = [_selector_from_json(s) for s in grid.get("selector", [{"kind": "vcgs", "r": 5, "p": 0.5}])]
    lsa_ns = grid.get("lsa_n", [None])
    algorithms = [_algorithm_from_json(a) for a in grid.get("algorithm", [{"kind": "kmeans", "k": 4}])]
    metrics = grid.get("metrics") or {}

    configs = []
    for subset, scheme, selector, lsa_n, algorithm in itertools.product(
        subsets, schemes, selectors, lsa_ns, algorithms
    ):
        cfg = PipelineConfig(
            subset=subset,
            scheme=scheme,
            selector=selector,
            lsa_n=None if lsa_n is None else int(lsa_n),
            algorithm=algorithm,
            seed=0,
            ami_normalizer=metrics.get("ami_normalizer", "arithmetic"),
            silhouette_variant=metrics.get("silhouette_variant", "pooled"),
        )
        configs.append(replace(cfg, seed=derive_seed(base_seed, cfg)))
    return configs


def rank_results(results: Sequence[ExperimentResult]) -> list[ExperimentResult]:
    """AMI descending, non-comparable rows last, ties by canonical config."""
    return sorted(
        results,
        key=lambda r: (not r.comparable, -r.report.ami, r.config.canonical_string()),
    )


def grid_sweep(
    dataset: LabeledDataset,
    grid: dict,
    parallelism: int | None = None,
    base_seed: int = 0,
) -> SweepOutcome:
    """Run every configuration in the grid; failures are recorded, not fatal."""
    configs = expand_grid(grid, base_seed=base_seed)
    if not configs:
        raise ScatterMeshError("grid expanded to zero configurations")
    if parallelism is None:
        parallelism = int(os.environ.get(WORKERS_ENV, "0")) or (os.cpu_count() or 1)

    stopwords = load_stopwords()
    results: list[ExperimentResult] = []
    failures: list[SweepFailure] = []

    def run_one(cfg: PipelineConfig):
        try:
            return run_experiment(dataset, cfg, stopwords=stopwords)
        except StageError as exc:
            return SweepFailure(config=cfg, stage=exc.stage, message=str(exc.cause))
        except ScatterMeshError as exc:
            return SweepFailure(config=cfg, stage="unknown", message=str(exc))

    with ThreadPoolExecutor(max_workers=parallelism) as pool:
        for outcome in pool.map(run_one, configs):
            if isinstance(outcome, SweepFailure):
                failures.append(outcome)
            else:
                results.append(outcome)

    return SweepOutcome(results=rank_results(results), failures=failures)


def grid_size(grid: dict) -> int:
    return (
        len(grid.get("subset", [1]))
        * len(grid.get("scheme", [1]))
        * len(grid.get("selector", [1]))
        * len(grid.get("lsa_n", [1]))
        * len(grid.get("algorithm", [1]))
    )


# --- report emission ------------------------------------------------------

_SUBSET_TAGS = {
    FieldSubset.TITLE_ONLY: "(a)",
    FieldSubset.TITLE_ABSTRACT: "(b)",
    FieldSubset.TITLE_ABSTRACT_BODY: "(c)",
}

DASH = "-"


def _fmt(value: float | None, comparable: bool = True) -> str:
    if value is None or not comparable:
        return DASH
    return f"{value:.3f}"


def _algo_name(kind: str) -> str:
    return "k-means" if kind == "kmeans" else "maximin"


def _selector_name(kind: str) -> str:
    return "VCGS" if kind == "vcgs" else "df"


def _render_rows(header: list[str], rows: list[list[str]], format: str) -> str:
    if format == "csv":
        buf = io.StringIO()
        import csv as _csv

        writer = _csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue()
    if format == "markdown":
        lines = ["| " + " | ".join(header) + " |"]
        lines.append("|" + "|".join(" --- " for _ in header) + "|")
        for row in rows:
            lines.append("| " + " | ".join(row) + " |")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown report format {format!r}")


def emit_report(results: Sequence[ExperimentResult], style: str = "summary", format: str = "csv") -> str:
    """Render results as one of the three table styles.

    summary: best-AMI row per (clustering, selector, LSA on/off) group, with
    dashes for groups whose maximin runs missed the expected cluster count.
    table3: best-AMI row per field subset. table4: matching matrix of the
    best comparable result plus its homogeneity row.
    """
    if not results:
        raise ScatterMeshError("no results to report")

    if style == "summary":
        groups: dict[tuple, ExperimentResult] = {}
        for res in results:
            key = (res.config.algorithm_kind, res.config.selector_kind, res.config.lsa_n is not None)
            cur = groups.get(key)
            if cur is None or res.report.ami > cur.report.ami:
                groups[key] = res
        header = ["Clustering", "Feat. selection", "LSA", "SC", "PRT", "AMI"]
        rows = []
        for algo in ("kmeans", "maximin"):
            for sel in ("vcgs", "df"):
                for lsa_used in (True, False):
                    res = groups.get((algo, sel, lsa_used))
                    if res is None:
                        continue
                    rows.append(
                        [
                            _algo_name(algo),
                            _selector_name(sel),
                            "Yes" if lsa_used else "No",
                            _fmt(res.report.sc, res.comparable),
                            _fmt(res.report.prt, res.comparable),
                            _fmt(res.report.ami, res.comparable),
                        ]
                    )
        return _render_rows(header, rows, format)

    if style == "table3":
        by_subset: dict[FieldSubset, ExperimentResult] = {}
        for res in results:
            cur = by_subset.get(res.config.subset)
            if cur is None or res.report.ami > cur.report.ami:
                by_subset[res.config.subset] = res
        header = ["Data", "Clustering", "Feat. selection", "LSA", "SC", "PRT", "AMI"]
        rows = []
        for subset in (FieldSubset.TITLE_ONLY, FieldSubset.TITLE_ABSTRACT, FieldSubset.TITLE_ABSTRACT_BODY):
            res = by_subset.get(subset)
            if res is None:
                continue
            rows.append(
                [
                    _SUBSET_TAGS[subset],
                    _algo_name(res.config.algorithm_kind),
                    _selector_name(res.config.selector_kind),
                    "Yes" if res.config.lsa_n is not None else "No",
                    _fmt(res.report.sc, res.comparable),
                    _fmt(res.report.prt, res.comparable),
                    _fmt(res.report.ami, res.comparable),
                ]
            )
        return _render_rows(header, rows, format)

    if style == "table4":
        comparable = [r for r in results if r.comparable]
        if not comparable:
            raise ScatterMeshError("no comparable result to render as a matching matrix")
        best = max(comparable, key=lambda r: r.report.ami)
        table = best.table
        header = ["class"] + [f"C_{j + 1}" for j in range(table.cluster_count)]
        rows = [
            [label] + [str(int(v)) for v in table.counts[i]]
            for i, label in enumerate(table.class_labels)
        ]
        rows.append(["Homogeneity"] + [f"{h:.3f}" for h in best.report.homogeneity])
        return _render_rows(header, rows, format)

    raise ValueError(f"unknown report style {style!r}")


def render_table4(table: ContingencyTable, format: str = "markdown") -> str:
    """Matching matrix plus homogeneity row for a standalone contingency table."""
    homog = homogeneity(table)
    header = ["class"] + [f"C_{j + 1}" for j in range(table.cluster_count)]
    rows = [
        [label] + [str(int(v)) for v in table.counts[i]]
        for i, label in enumerate(table.class_labels)
    ]
    rows.append(["Homogeneity"] + [f"{h:.3f}" for h in homog])
    return _render_rows(header, rows, format)


def save_results_json(results: Sequence[ExperimentResult], path: str | Path, failures: Sequence[SweepFailure] = ()) -> None:
    payload = {
        "results": [r.to_json_dict() for r in results],
        "failures": [
            {"config": f.config.to_json_dict(), "stage": f.stage, "message": f.message}
            for f in failures
        ],
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_results_json(path: str | Path) -> list[ExperimentResult]:
    obj = json.loads(Path(path).read_text(encoding="utf-8"))
    items = obj["results"] if isinstance(obj, dict) else obj
    return [ExperimentResult.from_json_dict(item) for item in items]


def results_csv(results: Sequence[ExperimentResult]) -> str:
    """Flat ranked CSV of every result (deterministic; no timing columns)."""
    header = [
        "rank", "clustering", "selector", "selector_params", "lsa_n", "subset",
        "scheme", "seed", "k_found", "comparable", "sc", "prt", "ami",
    ]
    rows = []
    for rank, res in enumerate(results, start=1):
        cfg = res.config
        sel = cfg._selector_json()
        sel_params = ";".join(f"{k}={sel[k]}" for k in sorted(sel) if k != "kind")
        rows.append(
            [
                str(rank),
                cfg.algorithm_kind,
                cfg.selector_kind,
                sel_params,
                "" if cfg.lsa_n is None else str(cfg.lsa_n),
                cfg.subset.value,
                cfg.scheme.value,
                str(cfg.seed),
                str(res.k_found),
                str(res.comparable).lower(),
                "" if res.report.sc is None else repr(res.report.sc),
                repr(res.report.prt),
                repr(res.report.ami),
            ]
        )
    return _render_rows(header, rows, "csv")
