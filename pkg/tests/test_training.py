import numpy as np
import pytest

from kpgen.seq2seq import ModelConfig, Seq2SeqModel
from kpgen.training import LossPoint, TrainConfig, train, write_loss_csv


def toy_model(seed=0):
    return Seq2SeqModel.init_random(
        ModelConfig(vocab_size=10, emb_dim=6, hidden=6, max_src_len=12), seed=seed
    )


def toy_pairs(n=20):
    rng = np.random.default_rng(0)
    pairs = []
    for _ in range(n):
        src = [int(x) for x in rng.integers(4, 10, size=rng.integers(2, 8))]
        tgt = [int(x) for x in rng.integers(4, 10, size=rng.integers(1, 3))]
        pairs.append((src, tgt))
    return pairs


class TestSchedule:
    def test_decay_boundaries(self):
        cfg = TrainConfig(learning_rate=0.001, lr_decay=0.8, lr_decay_every=5)
        assert cfg.lr_for_epoch(0) == pytest.approx(0.001)
        assert cfg.lr_for_epoch(4) == pytest.approx(0.001)
        assert cfg.lr_for_epoch(5) == pytest.approx(0.001 * 0.8)
        assert cfg.lr_for_epoch(10) == pytest.approx(0.001 * 0.8 ** 2)

    def test_validation(self):
        with pytest.raises(ValueError):
            TrainConfig(learning_rate=0).validate()
        with pytest.raises(ValueError):
            TrainConfig(lr_decay=1.5).validate()


class TestTrain:
    def test_empty_training_set(self):
        with pytest.raises(ValueError, match="empty training set"):
            train(toy_model(), [], TrainConfig(epochs=1))

    def test_loss_curve_and_decrease(self):
        cfg = TrainConfig(epochs=6, batch_size=4, seed=1, learning_rate=0.05)
        result = train(toy_model(seed=1), toy_pairs(), cfg)
        assert len(result.loss_curve) == 6
        assert result.loss_curve[-1].mean_nll < result.loss_curve[0].mean_nll
        assert result.loss_curve[0].lr == pytest.approx(0.05)

    def test_toy_set_strictly_decreases_over_first_five_epochs(self):
        cfg = TrainConfig(epochs=6, batch_size=8, seed=0, learning_rate=0.02)
        result = train(toy_model(seed=4), toy_pairs(50), cfg)
        nll = [pt.mean_nll for pt in result.loss_curve[:5]]
        assert all(a > b for a, b in zip(nll, nll[1:]))

    def test_deterministic_given_seed(self):
        cfg = TrainConfig(epochs=2, batch_size=4, seed=3)
        r1 = train(toy_model(seed=2), toy_pairs(), cfg)
        r2 = train(toy_model(seed=2), toy_pairs(), cfg)
        for k in r1.model.params:
            assert np.array_equal(r1.model.params[k], r2.model.params[k])
        assert r1.loss_curve == r2.loss_curve

    def test_checkpoints_written(self, tmp_path):
        from kpgen.checkpoint import load_checkpoint

        cfg = TrainConfig(epochs=2, batch_size=8, checkpoint_every=1)
        train(toy_model(), toy_pairs(8), cfg, checkpoint_dir=tmp_path)
        names = sorted(p.name for p in tmp_path.iterdir())
        assert names == [
            "checkpoint-0.npz",
            "checkpoint-1.npz",
            "checkpoint-final.npz",
        ]
        model, _ = load_checkpoint(tmp_path / "checkpoint-final.npz")
        assert model.config.vocab_size == 10


class TestLossCsv:
    def test_format(self, tmp_path):
        curve = [LossPoint(0, 3, 2.5, 0.001), LossPoint(1, 6, 2.25, 0.001)]
        path = tmp_path / "loss.csv"
        write_loss_csv(curve, path)
        lines = path.read_text().splitlines()
        assert lines[0] == "epoch,step,mean_nll,lr"
        assert lines[1] == "0,3,2.5,0.001"
        assert len(lines) == 3
