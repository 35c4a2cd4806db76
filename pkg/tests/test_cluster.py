import numpy as np
import pytest

from scattermesh.cluster import (
    KmeansParams,
    MaximinParams,
    cosine_distance,
    export_clustering_csv,
    kmeans_pp,
    maximin,
    pairwise_cosine_distances,
)
from scattermesh.errors import ClusteringError

from oracles import best_two_partition, kmeans_objective


class TestCosineDistance:
    def test_identical(self):
        v = np.array([1.0, 2.0, 3.0])
        assert cosine_distance(v, v) == 0.0

    def test_orthogonal(self):
        assert cosine_distance(np.array([1.0, 0.0]), np.array([0.0, 1.0])) == 1.0

    def test_antipodal(self):
        v = np.array([1.0, -2.0])
        assert cosine_distance(v, -v) == pytest.approx(2.0, abs=1e-12)

    def test_zero_vector_errors(self):
        with pytest.raises(ClusteringError):
            cosine_distance(np.zeros(3), np.ones(3))

    def test_pairwise_zero_row_convention(self):
        x = np.array([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]])
        d = pairwise_cosine_distances(x)
        assert d[1, 0] == 1.0 and d[0, 1] == 1.0 and d[1, 2] == 1.0
        assert d[1, 1] == 0.0


class TestMaximin:
    def test_three_orthogonal_vectors_three_singletons(self):
        vectors = np.eye(3)
        clustering = maximin(vectors, MaximinParams(theta=0.9, seed=0))
        assert clustering.k == 3
        assert sorted(clustering.sizes().tolist()) == [1, 1, 1]

    def test_duplicate_point_stays_with_its_center(self):
        e1 = np.array([1.0, 0.0])
        e2 = np.array([0.0, 1.0])
        clustering = maximin(np.vstack([e1, e1, e2]), MaximinParams(theta=0.8, seed=3))
        assert clustering.k == 2
        assert clustering.assignments[0] == clustering.assignments[1]
        assert clustering.assignments[2] != clustering.assignments[0]

    def test_theta_above_max_distance_gives_two_clusters(self):
        rng = np.random.default_rng(0)
        x = np.abs(rng.normal(size=(20, 4))) + 0.1
        clustering = maximin(x, MaximinParams(theta=0.999999, seed=1))
        assert clustering.k == 2

    def test_all_identical_single_cluster_with_warning(self):
        x = np.tile([1.0, 2.0], (5, 1))
        clustering = maximin(x, MaximinParams(theta=0.5, seed=0))
        assert clustering.k == 1
        assert clustering.warnings

    def test_second_center_is_farthest_from_first(self):
        rng = np.random.default_rng(1)
        for seed in range(10):
            x = rng.normal(size=(30, 5))
            clustering = maximin(x, MaximinParams(theta=0.7, seed=seed))
            first, second = clustering.center_indices[:2]
            dists = [cosine_distance(x[first], x[i]) for i in range(30) if i != first]
            assert cosine_distance(x[first], x[second]) == pytest.approx(max(dists), abs=1e-12)

    def test_promoted_centers_beyond_theta_and_nearest_assignment(self):
        rng = np.random.default_rng(2)
        for trial in range(50):
            n = int(rng.integers(5, 40))
            dim = int(rng.integers(2, 6))
            x = rng.normal(size=(n, dim))
            theta = float(rng.uniform(0.2, 1.2))
            clustering = maximin(x, MaximinParams(theta=theta, seed=trial))
            centers = clustering.center_indices
            # every step-3 promotion was strictly farther than theta from
            # all earlier centers
            for rank, c in enumerate(centers[2:], start=2):
                d_prior = min(cosine_distance(x[c], x[p]) for p in centers[:rank])
                assert d_prior > theta
            # every non-center point sits with its nearest center
            for i in range(n):
                if i in centers:
                    continue
                dists = [cosine_distance(x[i], x[c]) for c in centers]
                assert dists[clustering.assignments[i]] == pytest.approx(min(dists), abs=1e-12)

    def test_zero_rows_assigned_to_cluster_zero(self):
        x = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        clustering = maximin(x, MaximinParams(theta=0.5, seed=0))
        assert clustering.assignments[2] == 0

    def test_theta_above_one_rejected_on_nonnegative_data(self):
        x = np.abs(np.random.default_rng(3).normal(size=(5, 3)))
        with pytest.raises(ClusteringError):
            maximin(x, MaximinParams(theta=1.5, seed=0))

    def test_needs_two_nonzero_vectors(self):
        with pytest.raises(ClusteringError):
            maximin(np.array([[1.0, 0.0], [0.0, 0.0]]), MaximinParams(theta=0.5))


FOUR_POINTS = np.array([[0.0, 0.0], [0.0, 1.0], [10.0, 0.0], [10.0, 1.0]])


class TestKmeansPP:
    def test_axis_split_fixture_matches_exhaustive_search(self):
        clustering = kmeans_pp(FOUR_POINTS, KmeansParams(k=2, seed=0))
        assert clustering.objective == 1.0
        best_obj, best_split = best_two_partition(FOUR_POINTS)
        assert best_obj == 1.0
        got = frozenset(
            frozenset(np.flatnonzero(clustering.assignments == c).tolist())
            for c in range(2)
        )
        assert got == best_split

    def test_k_equals_n_zero_objective(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=(6, 3))
        clustering = kmeans_pp(x, KmeansParams(k=6, seed=0, restarts=2))
        assert clustering.objective == pytest.approx(0.0, abs=1e-12)
        assert sorted(clustering.sizes().tolist()) == [1] * 6

    def test_k_one_centroid_is_global_mean(self):
        rng = np.random.default_rng(5)
        x = rng.normal(size=(11, 2))
        clustering = kmeans_pp(x, KmeansParams(k=1, seed=0, restarts=1))
        np.testing.assert_allclose(clustering.centroids[0], x.mean(axis=0), atol=1e-12)

    def test_objective_non_increasing_each_iteration(self):
        rng = np.random.default_rng(6)
        for trial in range(50):
            n = int(rng.integers(8, 60))
            dim = int(rng.integers(2, 6))
            k = int(rng.integers(2, 6))
            x = rng.normal(size=(n, dim))
            clustering = kmeans_pp(x, KmeansParams(k=k, seed=trial, restarts=2))
            history = np.array(clustering.objective_history)
            assert np.all(np.diff(history) <= 0.0)

    def test_centroids_are_member_means(self):
        rng = np.random.default_rng(7)
        x = rng.normal(size=(40, 3))
        clustering = kmeans_pp(x, KmeansParams(k=4, seed=0))
        for c in range(4):
            members = x[clustering.assignments == c]
            np.testing.assert_allclose(clustering.centroids[c], members.mean(axis=0), atol=1e-9)

    def test_deterministic_for_fixed_seed(self):
        rng = np.random.default_rng(8)
        x = rng.normal(size=(50, 4))
        c1 = kmeans_pp(x, KmeansParams(k=3, seed=11))
        c2 = kmeans_pp(x, KmeansParams(k=3, seed=11))
        np.testing.assert_array_equal(c1.assignments, c2.assignments)
        np.testing.assert_array_equal(c1.centroids, c2.centroids)
        assert c1.objective == c2.objective

    def test_k_above_distinct_vectors_errors(self):
        x = np.array([[1.0, 1.0], [1.0, 1.0], [2.0, 2.0]])
        with pytest.raises(ClusteringError):
            kmeans_pp(x, KmeansParams(k=3, seed=0))

    def test_final_objective_matches_reference_formula(self):
        rng = np.random.default_rng(9)
        x = rng.normal(size=(25, 3))
        clustering = kmeans_pp(x, KmeansParams(k=3, seed=2))
        groups = [np.flatnonzero(clustering.assignments == c).tolist() for c in range(3)]
        assert clustering.objective == pytest.approx(kmeans_objective(x, groups), abs=1e-9)

    def test_restarts_never_worsen_the_objective(self):
        rng = np.random.default_rng(10)
        x = rng.normal(size=(30, 2))
        single = kmeans_pp(x, KmeansParams(k=4, seed=0, restarts=1))
        many = kmeans_pp(x, KmeansParams(k=4, seed=0, restarts=8))
        assert many.objective <= single.objective + 1e-12

    def test_empty_cluster_repair(self):
        from scattermesh.cluster import _lloyd

        # the second seed centroid is so far out that the first assignment
        # leaves it empty; repair must reseat it on the farthest point
        x = np.array([[0.0], [1.0], [2.0], [10.0]])
        seeds = np.array([[0.5], [100.0]])
        labels, centroids, obj, history, _ = _lloyd(x, seeds.copy(), KmeansParams(k=2, seed=0))
        assert sorted(np.bincount(labels, minlength=2).tolist()) == [1, 3]
        assert labels[3] != labels[0]
        assert np.all(np.diff(np.array(history)) <= 0.0)
        np.testing.assert_allclose(sorted(centroids.ravel()), [1.0, 10.0], atol=1e-12)


def test_export_clustering_csv(tmp_path):
    clustering = kmeans_pp(FOUR_POINTS, KmeansParams(k=2, seed=0))
    out = tmp_path / "clusters.csv"
    export_clustering_csv(clustering, ["a", "b", "c", "d"], out)
    lines = out.read_text(encoding="utf-8").strip().splitlines()
    assert lines[0] == "id,cluster"
    assert len(lines) == 5
