import json

import numpy as np
import pytest

from scattermesh.cluster import KmeansParams, MaximinParams
from scattermesh.corpus import FieldSubset, build_labeled_dataset
from scattermesh.datasets import make_planted_corpus
from scattermesh.errors import StageError
from scattermesh.featselect import DfParams, VcgsParams
from scattermesh.harness import (
    ExperimentResult,
    PipelineConfig,
    derive_seed,
    emit_report,
    expand_grid,
    grid_size,
    grid_sweep,
    load_results_json,
    rank_results,
    results_csv,
    run_experiment,
    save_results_json,
)
from scattermesh.metrics import ContingencyTable, MetricReport
from scattermesh.vectorizer import WeightScheme


@pytest.fixture(scope="module")
def small_dataset():
    planted = make_planted_corpus(n_docs=120, n_topics=4, seed=11)
    return build_labeled_dataset(planted.corpus, list(planted.classes), k_classes=4, min_class_size=1)


BASE_CONFIG = PipelineConfig(
    subset=FieldSubset.TITLE_ABSTRACT_BODY,
    selector=VcgsParams(rank_threshold=5, percent_threshold=0.5),
    lsa_n=4,
    algorithm=KmeansParams(k=4, restarts=3),
    seed=0,
)


class TestRunExperiment:
    def test_planted_corpus_scores_high(self, small_dataset):
        result = run_experiment(small_dataset, BASE_CONFIG)
        assert result.report.ami >= 0.9
        assert result.k_found == 4
        assert result.comparable

    def test_deterministic_serialization(self, small_dataset):
        r1 = run_experiment(small_dataset, BASE_CONFIG)
        r2 = run_experiment(small_dataset, BASE_CONFIG)
        s1 = json.dumps(r1.to_json_dict(), sort_keys=True)
        s2 = json.dumps(r2.to_json_dict(), sort_keys=True)
        assert s1 == s2

    def test_stage_annotated_error(self, small_dataset):
        config = PipelineConfig(
            subset=FieldSubset.TITLE_ABSTRACT_BODY,
            selector=DfParams(tau_df=100_000),
            algorithm=KmeansParams(k=4),
        )
        with pytest.raises(StageError) as err:
            run_experiment(small_dataset, config)
        assert err.value.stage == "select"

    def test_maximin_comparable_flag_tracks_k(self, small_dataset):
        config = PipelineConfig(
            subset=FieldSubset.TITLE_ABSTRACT_BODY,
            selector=VcgsParams(rank_threshold=5, percent_threshold=0.5),
            lsa_n=4,
            algorithm=MaximinParams(theta=0.9),
            seed=1,
        )
        result = run_experiment(small_dataset, config)
        assert result.comparable == (result.k_found == 4)

    def test_result_json_round_trip(self, small_dataset):
        result = run_experiment(small_dataset, BASE_CONFIG)
        restored = ExperimentResult.from_json_dict(result.to_json_dict())
        assert restored.config == result.config
        assert restored.report.ami == result.report.ami
        np.testing.assert_array_equal(restored.table.counts, result.table.counts)


class TestConfig:
    def test_json_round_trip(self):
        obj = BASE_CONFIG.to_json_dict()
        assert obj["selector"] == {"kind": "vcgs", "r": 5, "p": 0.5}
        restored = PipelineConfig.from_json_dict(json.loads(json.dumps(obj)))
        assert restored == BASE_CONFIG

    def test_subset_aliases_accepted(self):
        cfg = PipelineConfig.from_json_dict({"subset": "c", "algorithm": {"kind": "maximin", "theta": 0.8}})
        assert cfg.subset is FieldSubset.TITLE_ABSTRACT_BODY
        assert isinstance(cfg.algorithm, MaximinParams)

    def test_canonical_string_is_sorted_and_stable(self):
        s = BASE_CONFIG.canonical_string()
        assert s == BASE_CONFIG.canonical_string()
        keys = list(json.loads(s))
        assert keys == sorted(keys)

    def test_derive_seed_depends_on_config_and_base(self):
        other = PipelineConfig(
            subset=FieldSubset.TITLE_ONLY,
            selector=VcgsParams(rank_threshold=5, percent_threshold=0.5),
            lsa_n=4,
            algorithm=KmeansParams(k=4, restarts=3),
        )
        assert derive_seed(0, BASE_CONFIG) == derive_seed(0, BASE_CONFIG)
        assert derive_seed(0, BASE_CONFIG) != derive_seed(1, BASE_CONFIG)
        assert derive_seed(0, BASE_CONFIG) != derive_seed(0, other)


SMALL_GRID = {
    "subset": ["title_abstract_body"],
    "scheme": ["log_outside"],
    "selector": [
        {"kind": "vcgs", "r": 5, "p": 0.5},
        {"kind": "df", "tau_df": 10},
    ],
    "lsa_n": [4, None],
    "algorithm": [{"kind": "kmeans", "k": 4, "restarts": 2}],
}


class TestGridSweep:
    def test_grid_expansion_count(self):
        assert grid_size(SMALL_GRID) == 4
        configs = expand_grid(SMALL_GRID, base_seed=0)
        assert len(configs) == 4
        assert len({c.canonical_string() for c in configs}) == 4

    def test_full_grid_size_arithmetic(self):
        grid = {
            "selector": (
                [{"kind": "vcgs", "r": r, "p": p} for r in range(5, 11) for p in range(1, 19)]
                + [{"kind": "df", "tau_df": t} for t in (10, 30, 50, 70, 100)]
            ),
            "lsa_n": [4, 8, 12, 16, 20, None],
            "algorithm": (
                [{"kind": "kmeans", "k": 4}]
                + [{"kind": "maximin", "theta": t} for t in (0.8, 0.9, 0.99)]
            ),
        }
        # 6*18 VCGS + 5 df selector points, x (5 LSA dims + none), x (kmeans + 3 thetas)
        assert grid_size(grid) == (6 * 18 + 5) * (5 + 1) * (1 + 3)

    def test_sweep_results_sorted_and_reproducible(self, small_dataset):
        out1 = grid_sweep(small_dataset, SMALL_GRID, parallelism=2, base_seed=5)
        out2 = grid_sweep(small_dataset, SMALL_GRID, parallelism=1, base_seed=5)
        assert len(out1.results) == 4 and not out1.failures
        amis = [r.report.ami for r in out1.results]
        assert amis == sorted(amis, reverse=True)
        assert results_csv(out1.results) == results_csv(out2.results)

    def test_failures_recorded_without_stopping(self, small_dataset):
        grid = dict(SMALL_GRID)
        grid["selector"] = [
            {"kind": "vcgs", "r": 5, "p": 0.5},
            {"kind": "df", "tau_df": 100_000},  # guaranteed empty selection
        ]
        outcome = grid_sweep(small_dataset, grid, parallelism=2, base_seed=0)
        assert len(outcome.failures) == 2  # both lsa settings of the bad selector
        assert all(f.stage == "select" for f in outcome.failures)
        assert len(outcome.results) == 2

    def test_ranking_is_stable_under_shuffling(self, small_dataset):
        outcome = grid_sweep(small_dataset, SMALL_GRID, parallelism=2, base_seed=1)
        rng = np.random.default_rng(0)
        shuffled = list(outcome.results)
        rng.shuffle(shuffled)
        assert [r.config.canonical_string() for r in rank_results(shuffled)] == [
            r.config.canonical_string() for r in outcome.results
        ]


def _fake_result(algo_kind, selector_kind, lsa, ami_value, comparable=True, subset=FieldSubset.TITLE_ABSTRACT):
    config = PipelineConfig(
        subset=subset,
        scheme=WeightScheme.LOG_OUTSIDE,
        selector=VcgsParams(5, 0.5) if selector_kind == "vcgs" else DfParams(10),
        lsa_n=4 if lsa else None,
        algorithm=KmeansParams(k=4) if algo_kind == "kmeans" else MaximinParams(theta=0.9),
        seed=0,
    )
    counts = np.array([[5, 1], [1, 5]], dtype=np.int64)
    table = ContingencyTable(counts=counts, class_labels=("x", "y"), cluster_labels=("0", "1"))
    report = MetricReport(sc=0.5, prt=10 / 12, ami=ami_value, homogeneity=(5 / 6, 5 / 6), k=2)
    return ExperimentResult(
        config=config, report=report, table=table, k_found=2 if comparable else 3,
        wall_time=0.0, comparable=comparable,
    )


class TestReports:
    def test_summary_best_per_group(self):
        results = [
            _fake_result("kmeans", "vcgs", True, 0.30),
            _fake_result("kmeans", "vcgs", True, 0.39),
            _fake_result("kmeans", "df", False, 0.27),
            _fake_result("maximin", "vcgs", True, 0.36),
        ]
        text = emit_report(results, style="summary", format="csv")
        lines = text.strip().splitlines()
        assert lines[0] == "Clustering,Feat. selection,LSA,SC,PRT,AMI"
        assert len(lines) == 4  # three groups plus header
        assert "k-means,VCGS,Yes,0.500,0.833,0.390" in lines

    def test_summary_dashes_for_non_comparable(self):
        results = [_fake_result("maximin", "df", True, 0.2, comparable=False)]
        text = emit_report(results, style="summary", format="csv")
        assert text.strip().splitlines()[1] == "maximin,df,Yes,-,-,-"

    def test_table3_one_row_per_subset(self):
        results = [
            _fake_result("kmeans", "vcgs", True, 0.32, subset=FieldSubset.TITLE_ONLY),
            _fake_result("kmeans", "vcgs", True, 0.39, subset=FieldSubset.TITLE_ABSTRACT),
            _fake_result("maximin", "vcgs", True, 0.40, subset=FieldSubset.TITLE_ABSTRACT_BODY),
        ]
        text = emit_report(results, style="table3", format="csv")
        lines = text.strip().splitlines()
        assert [line.split(",")[0] for line in lines[1:]] == ["(a)", "(b)", "(c)"]

    def test_table4_matrix_plus_homogeneity(self, reference_table):
        report = MetricReport(
            sc=0.256,
            prt=0.787,
            ami=0.393,
            homogeneity=(0.978, 0.978, 0.757, 0.712),
            k=4,
        )
        result = ExperimentResult(
            config=BASE_CONFIG, report=report, table=reference_table,
            k_found=4, wall_time=0.0, comparable=True,
        )
        text = emit_report([result], style="table4", format="markdown")
        assert "| 1597 | 0 | 822 | 12 |" in text
        assert "| Homogeneity | 0.978 | 0.978 | 0.757 | 0.712 |" in text

    def test_results_json_round_trip(self, small_dataset, tmp_path):
        result = run_experiment(small_dataset, BASE_CONFIG)
        path = tmp_path / "results.json"
        save_results_json([result], path)
        loaded = load_results_json(path)
        assert len(loaded) == 1
        assert loaded[0].report.ami == result.report.ami
