"""Command-line entry point.

Subcommands: ingest, build-dataset, run, sweep, report, plot, serve.
Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import harness
from .corpus import (
    LabeledDataset,
    build_labeled_dataset,
    load_corpus,
    read_truth_csv,
    save_corpus,
    write_truth_csv,
)
from .errors import ScatterMeshError

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse would exit(2); we reserve 2 for data errors
        raise _UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="scattermesh", description="Document clustering with MeSH-anchored evaluation")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate a corpus file and write normalized JSONL")
    p.add_argument("--input", required=True)
    p.add_argument("--format", choices=["jsonl", "csv"], default=None)
    p.add_argument("--output", required=True)

    p = sub.add_parser("build-dataset", help="select classes by label frequency and strip labels")
    p.add_argument("--input", required=True, help="corpus JSONL with mesh_major labels")
    p.add_argument("--labels", required=True, help="candidate labels file, one per line")
    p.add_argument("--k-classes", type=int, default=4)
    p.add_argument("--min-class-size", type=int, default=1)
    p.add_argument("--output", required=True, help="stripped corpus JSONL")
    p.add_argument("--truth-out", required=True, help="truth sidecar CSV (id,class)")

    p = sub.add_parser("run", help="run one pipeline configuration")
    p.add_argument("--corpus", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--config", required=True, help="pipeline config JSON file")
    p.add_argument("--output", required=True, help="result JSON file")

    p = sub.add_parser("sweep", help="run a parameter grid")
    p.add_argument("--corpus", required=True)
    p.add_argument("--truth", required=True)
    p.add_argument("--grid", required=True, help="grid JSON file")
    p.add_argument("--output", required=True, help="ranked results CSV")
    p.add_argument("--results-json", default=None, help="full results JSON (for `report`)")
    p.add_argument("--workers", type=int, default=None)

    p = sub.add_parser("report", help="render results as a table")
    p.add_argument("--results", required=True, help="results JSON from run/sweep")
    p.add_argument("--style", choices=["summary", "table4", "table3"], default="summary")
    p.add_argument("--format", choices=["csv", "markdown"], default="csv")
    p.add_argument("--output", default=None, help="output file (stdout when omitted)")

    p = sub.add_parser("plot", help="emit a 2-D projection CSV (and optional SVG)")
    p.add_argument("--corpus", required=True)
    p.add_argument("--truth", default=None)
    p.add_argument("--config", required=True)
    p.add_argument("--output", required=True, help="projection CSV")
    p.add_argument("--svg", default=None, help="optional SVG scatter")

    p = sub.add_parser("serve", help="start the scatter/gather HTTP service")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--corpus-dir", required=True)
    p.add_argument("--ui-dir", default=None, help="static UI assets served under /ui")

    return parser


def _load_dataset(corpus_path: str, truth_path: str) -> LabeledDataset:
    corpus = load_corpus(corpus_path)
    truth = read_truth_csv(truth_path)
    classes = tuple(sorted(set(truth.values())))
    return LabeledDataset(corpus=corpus, truth=truth, classes=classes)


def _cmd_ingest(args) -> int:
    corpus = load_corpus(args.input, format=args.format)
    save_corpus(corpus, args.output)
    print(f"ingested {len(corpus)} records ({corpus.skipped_records} skipped) -> {args.output}")
    return EXIT_OK


def _cmd_build_dataset(args) -> int:
    corpus = load_corpus(args.input)
    labels = [
        line.strip()
        for line in Path(args.labels).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    dataset = build_labeled_dataset(corpus, labels, args.k_classes, args.min_class_size)
    save_corpus(dataset.corpus, args.output)
    write_truth_csv(dataset.truth, args.truth_out)
    sizes = dataset.class_sizes()
    print(f"classes: {', '.join(f'{c}={sizes[c]}' for c in dataset.classes)}")
    print(
        f"kept {len(dataset.corpus)} records "
        f"(dropped {dataset.dropped_unlabeled} unlabeled, {dataset.dropped_multilabel} multi-label)"
    )
    return EXIT_OK


def _cmd_run(args) -> int:
    dataset = _load_dataset(args.corpus, args.truth)
    config = harness.PipelineConfig.from_json_dict(json.loads(Path(args.config).read_text(encoding="utf-8")))
    result = harness.run_experiment(dataset, config)
    harness.save_results_json([result], args.output)
    rep = result.report
    sc = "-" if rep.sc is None else f"{rep.sc:.3f}"
    print(f"k={result.k_found} SC={sc} PRT={rep.prt:.3f} AMI={rep.ami:.3f} -> {args.output}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    dataset = _load_dataset(args.corpus, args.truth)
    grid = json.loads(Path(args.grid).read_text(encoding="utf-8"))
    base_seed = int(grid.get("base_seed", 0))
    print(f"sweeping {harness.grid_size(grid)} configurations")
    outcome = harness.grid_sweep(dataset, grid, parallelism=args.workers, base_seed=base_seed)
    Path(args.output).write_text(harness.results_csv(outcome.results), encoding="utf-8")
    if args.results_json:
        harness.save_results_json(outcome.results, args.results_json, failures=outcome.failures)
    print(f"{len(outcome.results)} succeeded, {len(outcome.failures)} failed -> {args.output}")
    for failure in outcome.failures:
        print(f"  failed [{failure.stage}]: {failure.message}")
    return EXIT_OK


def _cmd_report(args) -> int:
    results = harness.load_results_json(args.results)
    rendered = harness.emit_report(results, style=args.style, format=args.format)
    if args.output:
        Path(args.output).write_text(rendered, encoding="utf-8")
        print(f"wrote {args.style} report -> {args.output}")
    else:
        sys.stdout.write(rendered)
    return EXIT_OK


def _cmd_plot(args) -> int:
    from .descriptors import plot_projection, write_projection_csv, write_projection_svg

    corpus = load_corpus(args.corpus)
    truth = read_truth_csv(args.truth) if args.truth else None
    config = harness.PipelineConfig.from_json_dict(json.loads(Path(args.config).read_text(encoding="utf-8")))

    artifacts = harness.run_pipeline(corpus, config)
    rows = plot_projection(artifacts.restricted, artifacts.clustering, truth=truth, seed=config.seed)
    write_projection_csv(rows, args.output)
    if args.svg:
        write_projection_svg(rows, args.svg)
        print(f"wrote projection -> {args.output}, {args.svg}")
    else:
        print(f"wrote projection -> {args.output}")
    return EXIT_OK


def _cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    app = create_app(corpus_dir=args.corpus_dir, ui_dir=args.ui_dir)
    uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    return EXIT_OK


_COMMANDS = {
    "ingest": _cmd_ingest,
    "build-dataset": _cmd_build_dataset,
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "report": _cmd_report,
    "plot": _cmd_plot,
    "serve": _cmd_serve,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        return _COMMANDS[args.command](args)
    except ScatterMeshError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (OSError, json.JSONDecodeError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except Exception as exc:  # pragma: no cover - defensive
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
