import math

import numpy as np
import pytest

from scattermesh.errors import EmptyVocabularyError
from scattermesh.vectorizer import (
    WeightScheme,
    build_vocabulary,
    export_matrixmarket,
    load_stopwords,
    tokenize,
    weight_matrix,
)


class TestTokenize:
    def test_hand_example(self):
        assert tokenize("Triple-Negative breast CANCER, 2018") == [
            "triple-negative",
            "breast",
            "cancer",
        ]

    def test_stopwords_removed(self):
        stops = load_stopwords()
        assert tokenize("the of and", stops) == []

    def test_empty_input(self):
        assert tokenize("") == []

    def test_short_tokens_and_numbers_dropped(self):
        assert tokenize("a b2 7 42 2-3 x") == ["b2"]

    def test_edge_hyphens_are_separators(self):
        assert tokenize("-left right- a--b") == ["left", "right"]

    def test_underscore_splits(self):
        assert tokenize("gene_name") == ["gene", "name"]


class TestBuildVocabulary:
    def test_singleton_terms_dropped(self):
        vocab = build_vocabulary([["a", "b"], ["b", "c"], ["b"]])
        assert vocab.terms == ("b",)
        np.testing.assert_array_equal(vocab.df, [3])
        assert vocab.n_docs == 3

    def test_two_identical_docs(self):
        vocab = build_vocabulary([["x"], ["x"]])
        assert vocab.terms == ("x",)
        np.testing.assert_array_equal(vocab.df, [2])

    def test_disjoint_docs_error(self):
        with pytest.raises(EmptyVocabularyError):
            build_vocabulary([["a"], ["b"]])

    def test_needs_two_documents(self):
        with pytest.raises(EmptyVocabularyError):
            build_vocabulary([["a", "a"]])

    def test_first_appearance_order(self):
        vocab = build_vocabulary([["z", "m"], ["m", "z", "q"], ["q"]])
        assert vocab.terms == ("z", "m", "q")

    def test_df_counts_documents_not_occurrences(self):
        vocab = build_vocabulary([["t", "t", "t"], ["t"]])
        np.testing.assert_array_equal(vocab.df, [2])


class TestWeightMatrix:
    def _fixture(self):
        # "w" appears twice in doc 0; df(w)=2, df(v)=2, N=2
        token_lists = [["w", "w", "v"], ["w", "v", "v", "v"]]
        return token_lists, build_vocabulary(token_lists)

    def test_log_outside_zeroes_tf_one(self):
        token_lists, vocab = self._fixture()
        tdm = weight_matrix(token_lists, vocab, WeightScheme.LOG_OUTSIDE)
        assert tdm.weight(0, "v") == 0.0  # tf=1 -> ln 1 = 0, not stored
        assert tdm.matrix[0, vocab.index_of("v")] == 0.0
        assert tdm.matrix.nnz == 2

    def test_log_outside_value(self):
        # tf=2, N=10, df=5 -> ln(2) * (10/5)
        token_lists = [["t", "t"]] + [["t"]] * 4 + [["u"], ["u"], ["u"], ["u"], ["u"]]
        vocab = build_vocabulary(token_lists)
        tdm = weight_matrix(token_lists, vocab, WeightScheme.LOG_OUTSIDE)
        assert tdm.weight(0, "t") == pytest.approx(math.log(2) * 2.0, abs=1e-12)

    def test_standard_value(self):
        # tf=2, N=10, df=5 -> (1 + ln 2) * ln 2
        token_lists = [["t", "t"]] + [["t"]] * 4 + [["u"], ["u"], ["u"], ["u"], ["u"]]
        vocab = build_vocabulary(token_lists)
        tdm = weight_matrix(token_lists, vocab, WeightScheme.STANDARD)
        assert tdm.weight(0, "t") == pytest.approx((1 + math.log(2)) * math.log(2), abs=1e-12)

    def test_log_inside_value(self):
        token_lists, vocab = self._fixture()
        tdm = weight_matrix(token_lists, vocab, WeightScheme.LOG_INSIDE)
        # tf=2, N=2, df=2 -> ln(2 * 2/2) = ln 2
        assert tdm.weight(0, "w") == pytest.approx(math.log(2), abs=1e-12)

    def test_weights_nonnegative_all_schemes(self):
        rng = np.random.default_rng(0)
        token_pool = [f"t{i}" for i in range(20)]
        token_lists = [
            list(rng.choice(token_pool, size=rng.integers(3, 15)))
            for _ in range(12)
        ]
        vocab = build_vocabulary(token_lists)
        for scheme in WeightScheme:
            tdm = weight_matrix(token_lists, vocab, scheme)
            assert np.all(tdm.matrix.data >= 0)
            assert np.all(np.isfinite(tdm.matrix.data))

    def test_weight_non_increasing_in_df(self):
        # same tf, larger df must never weigh more
        for scheme in WeightScheme:
            n, tf = 40, 3
            weights = []
            for df in (2, 5, 10, 40):
                from scattermesh.vectorizer import _weights

                w = _weights(np.array([tf]), np.array([df]), n, scheme)[0]
                weights.append(w)
            assert all(a >= b - 1e-12 for a, b in zip(weights, weights[1:]))

    def test_permuting_documents_permutes_rows(self):
        rng = np.random.default_rng(1)
        token_pool = [f"t{i}" for i in range(10)]
        token_lists = [list(rng.choice(token_pool, size=8)) for _ in range(6)]
        vocab = build_vocabulary(token_lists)
        tdm = weight_matrix(token_lists, vocab, WeightScheme.STANDARD)

        perm = [3, 1, 5, 0, 2, 4]
        permuted_lists = [token_lists[i] for i in perm]
        vocab_p = build_vocabulary(permuted_lists)
        tdm_p = weight_matrix(permuted_lists, vocab_p, WeightScheme.STANDARD)

        for new_row, old_row in enumerate(perm):
            for term in vocab.terms:
                assert tdm_p.weight(new_row, term) == pytest.approx(
                    tdm.weight(old_row, term), abs=1e-12
                )

    def test_matrixmarket_export(self, tmp_path):
        token_lists, vocab = self._fixture()
        tdm = weight_matrix(token_lists, vocab, WeightScheme.STANDARD)
        out = tmp_path / "matrix.mtx"
        export_matrixmarket(tdm, out)
        text = out.read_text(encoding="utf-8")
        assert text.startswith("%%MatrixMarket matrix coordinate")


class TestStopwords:
    def test_fixture_loads(self):
        stops = load_stopwords()
        assert "the" in stops and "of" in stops
        assert len(stops) > 100

    def test_custom_path(self, tmp_path):
        path = tmp_path / "stops.txt"
        path.write_text("foo\nbar\n", encoding="utf-8")
        assert load_stopwords(path) == frozenset({"foo", "bar"})
