"""Adagrad training loop for the generation model."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .seq2seq import Seq2SeqModel, make_batch

logger = logging.getLogger(__name__)


@dataclass
class TrainConfig:
    learning_rate: float = 0.001
    lr_decay: float = 0.8
    lr_decay_every: int = 5
    epochs: int = 30
    batch_size: int = 32
    seed: int = 0
    adagrad_eps: float = 1e-8
    clip_norm: float | None = 5.0
    checkpoint_every: int | None = None

    def validate(self) -> None:
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be positive")
        if not (0 < self.lr_decay <= 1):
            raise ValueError("lr_decay must be in (0, 1]")
        if self.lr_decay_every <= 0 or self.epochs <= 0 or self.batch_size <= 0:
            raise ValueError("epochs, batch_size and lr_decay_every must be positive")

    def lr_for_epoch(self, epoch: int) -> float:
        """0-based epochs: the rate is multiplied by ``lr_decay`` at every
        ``lr_decay_every`` boundary, so epoch 5 runs at base*0.8 under the
        defaults."""
        return self.learning_rate * self.lr_decay ** (epoch // self.lr_decay_every)


@dataclass(frozen=True)
class LossPoint:
    epoch: int
    step: int
    mean_nll: float
    lr: float


@dataclass
class TrainResult:
    model: Seq2SeqModel
    loss_curve: list[LossPoint] = field(default_factory=list)


def train(
    model: Seq2SeqModel,
    pairs,
    cfg: TrainConfig,
    checkpoint_dir=None,
    vocab=None,
) -> TrainResult:
    """Teacher-forced NLL training with Adagrad updates.

    ``pairs`` is a list of (source ids, target ids) examples, one keyphrase
    per example.  Deterministic for a fixed seed.  When ``checkpoint_dir``
    is set, checkpoints land there every ``cfg.checkpoint_every`` epochs
    plus once at the end; the returned model is the last checkpoint's.
    """
    cfg.validate()
    pairs = list(pairs)
    if not pairs:
        raise ValueError("empty training set")

    rng = np.random.default_rng(cfg.seed)
    accum = {k: np.zeros_like(v) for k, v in model.params.items()}
    curve: list[LossPoint] = []
    step = 0
    for epoch in range(cfg.epochs):
        lr = cfg.lr_for_epoch(epoch)
        order = rng.permutation(len(pairs))
        epoch_nll = 0.0
        epoch_batches = 0
        for start in range(0, len(pairs), cfg.batch_size):
            batch_pairs = [pairs[i] for i in order[start:start + cfg.batch_size]]
            batch = make_batch(batch_pairs)
            loss, grads = model.loss_and_grads(batch)
            if cfg.clip_norm is not None:
                _clip_global_norm(grads, cfg.clip_norm)
            for name, g in grads.items():
                accum[name] += g * g
                model.params[name] -= lr * g / (np.sqrt(accum[name]) + cfg.adagrad_eps)
            epoch_nll += loss
            epoch_batches += 1
            step += 1
        mean_nll = epoch_nll / max(1, epoch_batches)
        curve.append(LossPoint(epoch=epoch, step=step, mean_nll=mean_nll, lr=lr))
        logger.info("epoch %d step %d mean_nll %.4f lr %.6f", epoch, step, mean_nll, lr)
        if (
            checkpoint_dir is not None
            and cfg.checkpoint_every
            and (epoch + 1) % cfg.checkpoint_every == 0
        ):
            _write_checkpoint(model, vocab, checkpoint_dir, epoch)
    if checkpoint_dir is not None:
        _write_checkpoint(model, vocab, checkpoint_dir, "final")
    return TrainResult(model=model, loss_curve=curve)


def _clip_global_norm(grads: dict[str, np.ndarray], max_norm: float) -> None:
    total = np.sqrt(sum(float((g * g).sum()) for g in grads.values()))
    if total > max_norm:
        scale = max_norm / total
        for g in grads.values():
            g *= scale


def _write_checkpoint(model, vocab, checkpoint_dir, tag) -> None:
    from .checkpoint import save_checkpoint

    path = Path(checkpoint_dir) / f"checkpoint-{tag}.npz"
    save_checkpoint(model, path, vocab=vocab)
    logger.info("wrote checkpoint %s", path)


def write_loss_csv(curve: list[LossPoint], path) -> None:
    """Per-epoch training log: epoch, step, mean_nll, lr."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("epoch,step,mean_nll,lr\n")
        for pt in curve:
            fh.write(f"{pt.epoch},{pt.step},{pt.mean_nll!r},{pt.lr!r}\n")
