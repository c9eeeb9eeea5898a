import numpy as np
import pytest
from sklearn.base import clone

from kpgen.embedding import (
    EmbedConfig,
    SkipGramEmbedder,
    VectorTable,
    cosine,
    embed_document,
    embed_phrase,
    load_vectors,
    save_vectors,
    skipgram_epoch_losses,
    train_skipgram,
)
from kpgen.textproc import make_document


def toy_table():
    return VectorTable(
        vocab={"alpha": 0, "beta": 1, "gamma": 2},
        matrix=np.array([[1.0, 0.0], [0.0, 2.0], [3.0, 3.0]]),
    )


class TestLoadVectors:
    def test_basic(self, tmp_path):
        p = tmp_path / "v.txt"
        p.write_text("2 3\na 1 0 0\nb 0 1 0\n", encoding="utf-8")
        table = load_vectors(p)
        assert table.dim == 3
        assert set(table.vocab) == {"a", "b"}
        assert np.allclose(table.get("a"), [1, 0, 0])

    def test_dimension_mismatch_names_line(self, tmp_path):
        p = tmp_path / "v.txt"
        p.write_text("2 3\na 1 0 0\nb 0 1\n", encoding="utf-8")
        with pytest.raises(ValueError, match="line 3: expected 3 values"):
            load_vectors(p)

    def test_empty_file(self, tmp_path):
        p = tmp_path / "v.txt"
        p.write_text("", encoding="utf-8")
        with pytest.raises(ValueError, match="missing header"):
            load_vectors(p)

    def test_row_count_mismatch(self, tmp_path):
        p = tmp_path / "v.txt"
        p.write_text("2 2\na 1 0\n", encoding="utf-8")
        with pytest.raises(ValueError, match="promises 2 rows"):
            load_vectors(p)

    def test_save_round_trip_exact(self, tmp_path):
        table = toy_table()
        p = tmp_path / "v.txt"
        save_vectors(table, p)
        loaded = load_vectors(p)
        assert loaded.vocab == table.vocab
        assert np.array_equal(loaded.matrix, table.matrix)


class TestEmbedPhrase:
    def test_single_word_is_its_vector(self):
        table = toy_table()
        emb = embed_phrase(table, ["alpha"])
        assert not emb.oov
        assert np.array_equal(emb.vector, table.get("alpha"))

    def test_all_oov_flagged(self):
        emb = embed_phrase(toy_table(), ["missing", "words"])
        assert emb.oov
        assert np.array_equal(emb.vector, np.zeros(2))

    def test_two_word_mean(self):
        emb = embed_phrase(toy_table(), ["alpha", "beta"])
        assert np.allclose(emb.vector, [0.5, 1.0])

    def test_case_folding(self):
        emb = embed_phrase(toy_table(), ["Alpha"])
        assert not emb.oov


class TestEmbedDocument:
    def test_single_eligible_word(self):
        doc = make_document("d", "", "the alpha .")
        emb = embed_document(toy_table(), doc, {"alpha": 2.5})
        assert np.allclose(emb.vector, [1.0, 0.0])

    def test_uniform_idf_is_plain_mean(self):
        doc = make_document("d", "", "alpha beta")
        emb = embed_document(toy_table(), doc, {}, default_idf=3.0)
        assert np.allclose(emb.vector, [0.5, 1.0])

    def test_weighted_mean_hand_computed(self):
        doc = make_document("d", "", "alpha beta")
        emb = embed_document(toy_table(), doc, {"alpha": 2.0, "beta": 1.0})
        assert np.allclose(emb.vector, (2 * np.array([1.0, 0]) + np.array([0, 2.0])) / 3)

    def test_no_eligible_tokens_oov(self):
        doc = make_document("d", "", "the of .")
        emb = embed_document(toy_table(), doc, {})
        assert emb.oov


class TestTrainSkipgram:
    def corpus(self):
        sents = []
        for _ in range(30):
            sents.append("cat chases mouse quickly".split())
            sents.append("feline chases mouse quickly".split())
            sents.append("stone lies under bridge".split())
        return sents

    def test_deterministic_given_seed(self):
        cfg = EmbedConfig(dim=16, epochs=2, min_count=1)
        t1 = train_skipgram(self.corpus(), cfg, seed=4)
        t2 = train_skipgram(self.corpus(), cfg, seed=4)
        assert t1.vocab == t2.vocab
        assert np.array_equal(t1.matrix, t2.matrix)
        t3 = train_skipgram(self.corpus(), cfg, seed=5)
        assert not np.array_equal(t1.matrix, t3.matrix)

    def test_shared_contexts_closer_than_random(self):
        cfg = EmbedConfig(dim=24, epochs=12, min_count=1, window=3)
        table = train_skipgram(self.corpus(), cfg, seed=1)
        cat, feline, stone = (table.get(w) for w in ["cat", "feline", "stone"])
        assert cosine(cat, feline) > cosine(cat, stone)

    def test_negatives_zero_forbidden(self):
        with pytest.raises(ValueError, match="negatives"):
            train_skipgram(self.corpus(), EmbedConfig(negatives=0))

    def test_empty_corpus_errors(self):
        with pytest.raises(ValueError, match="no eligible tokens"):
            train_skipgram([[]], EmbedConfig())

    def test_min_count_excludes(self):
        table = train_skipgram(
            [["common", "common", "rare"]], EmbedConfig(dim=4, min_count=2, epochs=1)
        )
        assert "common" in table.vocab and "rare" not in table.vocab

    def test_loss_decreases(self):
        losses = skipgram_epoch_losses(
            self.corpus(), EmbedConfig(dim=16, epochs=6, window=3), seed=2
        )
        assert losses[-1] < losses[0]


class TestScaleConsistency:
    def test_cosines_invariant_under_row_scaling(self):
        table = toy_table()
        scaled = VectorTable(vocab=dict(table.vocab), matrix=table.matrix * 7.5)
        doc = make_document("d", "", "alpha beta gamma")
        for words in (["alpha"], ["beta", "gamma"]):
            a = embed_phrase(table, words)
            b = embed_phrase(scaled, words)
            da = embed_document(table, doc, {}, default_idf=1.0)
            db = embed_document(scaled, doc, {}, default_idf=1.0)
            assert cosine(a.vector, da.vector) == pytest.approx(
                cosine(b.vector, db.vector), abs=1e-12
            )

    def test_cosine_basics(self):
        v = np.array([1.0, 2.0, 3.0])
        assert cosine(v, v) == pytest.approx(1.0)
        assert cosine(v, 2 * v) == pytest.approx(1.0)
        assert abs(cosine(v, np.array([3.0, -2.0, 1.0]))) <= 1 + 1e-12
        assert cosine(v, np.zeros(3)) == 0.0


class TestEstimator:
    def test_fit_sets_table(self):
        est = SkipGramEmbedder(dim=8, epochs=1, seed=0)
        est.fit([["alpha", "beta", "gamma"] * 5])
        assert est.table_.dim == 8

    def test_get_params_clone(self):
        est = SkipGramEmbedder(dim=12, window=3, seed=9)
        params = est.get_params()
        assert params["dim"] == 12 and params["window"] == 3
        cloned = clone(est)
        assert cloned.get_params() == params

    def test_transform_requires_fit(self):
        from sklearn.exceptions import NotFittedError

        with pytest.raises(NotFittedError):
            SkipGramEmbedder().transform([["alpha"]])

    def test_transform_shape(self):
        est = SkipGramEmbedder(dim=6, epochs=1).fit([["a1", "b2", "c3"] * 4])
        out = est.transform([["a1"], ["b2", "c3"]])
        assert out.shape == (2, 6)
