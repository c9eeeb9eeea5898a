"""Estimator facade tying vocabulary, model, training and decoding together."""

from __future__ import annotations

import logging

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .beam import DecodeConfig, GeneratedPhrase, biased_beam_search
from .checkpoint import load_checkpoint, save_checkpoint
from .seq2seq import ModelConfig, Seq2SeqModel
from .textproc import Document, stem
from .training import TrainConfig, train
from .vocab import Vocab

logger = logging.getLogger(__name__)


def _source_words(doc) -> list[str]:
    if isinstance(doc, Document):
        return [t.lower for t in doc.tokens if t.is_wordlike]
    return [str(w).casefold() for w in doc]


def _doc_stems(doc) -> set[str]:
    if isinstance(doc, Document):
        return set(doc.stem_set)
    return {stem(str(w).casefold()) for w in doc}


class Seq2SeqGenerator(BaseEstimator):
    """Trainable keyphrase generator with input-biased beam decoding.

    ``fit(X, y)`` takes aligned lists: ``X[i]`` is a source document (a
    :class:`~kpgen.textproc.Document` or a word sequence) and ``y[i]`` a
    single keyphrase word sequence, i.e. one training example per
    (document, keyphrase) pair.
    """

    def __init__(
        self,
        vocab_size: int = 50000,
        emb_dim: int = 200,
        hidden_size: int = 256,
        max_src_len: int = 512,
        learning_rate: float = 0.001,
        lr_decay: float = 0.8,
        lr_decay_every: int = 5,
        epochs: int = 30,
        batch_size: int = 32,
        clip_norm: float | None = 5.0,
        beam_width: int = 20,
        max_phrase_len: int = 6,
        bias_factor: float = 2.0,
        length_norm: float = 1.0,
        seed: int = 0,
    ):
        self.vocab_size = vocab_size
        self.emb_dim = emb_dim
        self.hidden_size = hidden_size
        self.max_src_len = max_src_len
        self.learning_rate = learning_rate
        self.lr_decay = lr_decay
        self.lr_decay_every = lr_decay_every
        self.epochs = epochs
        self.batch_size = batch_size
        self.clip_norm = clip_norm
        self.beam_width = beam_width
        self.max_phrase_len = max_phrase_len
        self.bias_factor = bias_factor
        self.length_norm = length_norm
        self.seed = seed

    def decode_config(self) -> DecodeConfig:
        return DecodeConfig(
            beam_width=self.beam_width,
            max_phrase_len=self.max_phrase_len,
            bias_factor=self.bias_factor,
            length_norm=self.length_norm,
        )

    def fit(self, X, y, checkpoint_dir=None, checkpoint_every: int | None = None):
        if len(X) != len(y):
            raise ValueError(f"X and y lengths differ: {len(X)} vs {len(y)}")
        sources = [_source_words(d) for d in X]
        self.vocab_ = Vocab.build(sources, max_words=self.vocab_size)
        pairs = []
        for src_words, phrase in zip(sources, y):
            src_ids = self.vocab_.encode(src_words)[: self.max_src_len]
            tgt_ids = self.vocab_.encode(list(phrase))
            if not src_ids or not tgt_ids:
                logger.warning("skipping empty training pair")
                continue
            pairs.append((src_ids, tgt_ids))
        if not pairs:
            raise ValueError("no usable training pairs")
        config = ModelConfig(
            vocab_size=len(self.vocab_),
            emb_dim=self.emb_dim,
            hidden=self.hidden_size,
            max_src_len=self.max_src_len,
        )
        model = Seq2SeqModel.init_random(config, seed=self.seed)
        result = train(
            model,
            pairs,
            TrainConfig(
                learning_rate=self.learning_rate,
                lr_decay=self.lr_decay,
                lr_decay_every=self.lr_decay_every,
                epochs=self.epochs,
                batch_size=self.batch_size,
                seed=self.seed,
                clip_norm=self.clip_norm,
                checkpoint_every=checkpoint_every,
            ),
            checkpoint_dir=checkpoint_dir,
            vocab=self.vocab_,
        )
        self.model_ = result.model
        self.loss_curve_ = result.loss_curve
        return self

    def generate(self, doc, step_observer=None) -> list[GeneratedPhrase]:
        """Ranked generated phrases for one document."""
        check_is_fitted(self, "model_")
        words = _source_words(doc)
        if not words:
            return []
        src_ids = self.vocab_.encode(words)
        enc = self.model_.encode(src_ids)
        return biased_beam_search(
            self.model_,
            enc,
            self.vocab_,
            _doc_stems(doc),
            self.decode_config(),
            step_observer=step_observer,
        )

    def predict(self, X) -> list[list[str]]:
        """Phrase surfaces (space-joined words) per document."""
        return [[" ".join(g.words) for g in self.generate(doc)] for doc in X]

    def save(self, path) -> None:
        check_is_fitted(self, "model_")
        save_checkpoint(self.model_, path, vocab=self.vocab_)

    def load_model(self, path) -> "Seq2SeqGenerator":
        """Attach a trained model + vocabulary from a checkpoint file."""
        model, vocab = load_checkpoint(path)
        if vocab is None:
            raise ValueError(f"{path}: checkpoint does not embed a vocabulary")
        self.model_ = model
        self.vocab_ = vocab
        self.loss_curve_ = []
        return self
