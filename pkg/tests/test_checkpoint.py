import numpy as np
import pytest

from kpgen.checkpoint import CheckpointError, load_checkpoint, save_checkpoint
from kpgen.seq2seq import ModelConfig, Seq2SeqModel
from kpgen.vocab import BOS_ID, Vocab


def model_and_vocab(seed=0):
    vocab = Vocab(["alpha", "beta", "gamma"])
    model = Seq2SeqModel.init_random(
        ModelConfig(vocab_size=len(vocab), emb_dim=4, hidden=4, max_src_len=8),
        seed=seed,
    )
    return model, vocab


class TestRoundTrip:
    def test_decode_outputs_exact(self, tmp_path):
        model, vocab = model_and_vocab()
        path = tmp_path / "m.npz"
        save_checkpoint(model, path, vocab=vocab)
        loaded, loaded_vocab = load_checkpoint(path)
        assert loaded_vocab.words == vocab.words
        enc_a = model.encode([4, 5, 6])
        enc_b = loaded.encode([4, 5, 6])
        step_a = model.decode_step(BOS_ID, model.initial_state(enc_a), enc_a)
        step_b = loaded.decode_step(BOS_ID, loaded.initial_state(enc_b), enc_b)
        assert np.array_equal(step_a.probs, step_b.probs)
        assert np.array_equal(step_a.attention, step_b.attention)

    def test_without_vocab(self, tmp_path):
        model, _ = model_and_vocab()
        path = tmp_path / "m.npz"
        save_checkpoint(model, path)
        loaded, vocab = load_checkpoint(path)
        assert vocab is None
        assert loaded.config == model.config

    def test_byte_stable_across_saves(self, tmp_path):
        model, vocab = model_and_vocab()
        p1, p2 = tmp_path / "a.npz", tmp_path / "b.npz"
        save_checkpoint(model, p1, vocab=vocab)
        save_checkpoint(model, p2, vocab=vocab)
        assert p1.read_bytes() == p2.read_bytes()


class TestErrors:
    def test_truncated_file(self, tmp_path):
        model, vocab = model_and_vocab()
        path = tmp_path / "m.npz"
        save_checkpoint(model, path, vocab=vocab)
        blob = path.read_bytes()
        path.write_bytes(blob[: len(blob) // 2])
        with pytest.raises(CheckpointError, match="corrupt or truncated"):
            load_checkpoint(path)

    def test_not_a_checkpoint(self, tmp_path):
        path = tmp_path / "x.npz"
        np.savez(open(path, "wb"), something=np.zeros(3))
        with pytest.raises(CheckpointError, match="no header"):
            load_checkpoint(path)

    def test_vocab_size_mismatch_names_both(self, tmp_path):
        model, vocab = model_and_vocab()
        path = tmp_path / "m.npz"
        save_checkpoint(model, path, vocab=vocab)
        with pytest.raises(CheckpointError, match=r"7.*does not.*match.*9"):
            load_checkpoint(path, expected_vocab_size=9)

    def test_version_mismatch(self, tmp_path):
        import json

        model, vocab = model_and_vocab()
        path = tmp_path / "m.npz"
        save_checkpoint(model, path, vocab=vocab)
        with np.load(path, allow_pickle=False) as data:
            arrays = {k: data[k] for k in data.files}
        meta = json.loads(str(arrays["meta"]))
        meta["version"] = 99
        arrays["meta"] = np.array(json.dumps(meta))
        np.savez(open(path, "wb"), **arrays)
        with pytest.raises(CheckpointError, match="version 99"):
            load_checkpoint(path)
