import pytest

from kpgen.vocab import BOS_ID, EOS_ID, PAD_ID, UNK_ID, RESERVED, Vocab


class TestVocab:
    def test_reserved_ids_fixed(self):
        v = Vocab(["word"])
        assert (PAD_ID, BOS_ID, EOS_ID, UNK_ID) == (0, 1, 2, 3)
        assert v.words[:4] == RESERVED
        assert v.id_of("word") == 4

    def test_build_orders_by_frequency_then_lexicographic(self):
        seqs = [["b", "a", "b", "c", "a", "d"]]
        v = Vocab.build(seqs, max_words=3)
        # a and b tie at 2 -> lexicographic; c/d tie at 1 -> c kept under cap
        assert v.words[4:] == ("a", "b", "c")

    def test_truncation_to_max_words(self):
        seqs = [[f"w{i}" for i in range(100)]]
        v = Vocab.build(seqs, max_words=10)
        assert len(v) == 14

    def test_encode_decode(self):
        v = Vocab(["alpha", "beta"])
        ids = v.encode(["alpha", "missing", "beta"], add_eos=True)
        assert ids == [4, UNK_ID, 5, EOS_ID]
        assert v.decode(ids) == ["alpha", "<unk>", "beta"]

    def test_duplicate_words_rejected(self):
        with pytest.raises(ValueError, match="duplicate"):
            Vocab(["same", "same"])

    def test_stems_aligned(self):
        v = Vocab(["breaches", "mining"])
        stems = v.stems()
        assert stems[v.id_of("breaches")] == "breach"
        assert stems[v.id_of("mining")] == "mine"
        assert stems[PAD_ID] == ""
