"""Word vectors for the semantic side of the ranker.

Two sources are supported: a plain-text vector file in the usual
"<count> <dim>" header format, and an in-corpus skip-gram trainer with
negative sampling.  Phrase vectors are unweighted means of token vectors;
document vectors are idf-weighted means, so frequent words do not drown
out the informative ones in long documents.  Out-of-vocabulary lookups are
reported through an explicit flag, never silently fabricated.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .textproc import Document, Token


class Embedding(NamedTuple):
    """A vector plus an out-of-vocabulary marker."""

    vector: np.ndarray
    oov: bool


@dataclass
class VectorTable:
    vocab: dict[str, int]
    matrix: np.ndarray  # |vocab| x dim

    @property
    def dim(self) -> int:
        return int(self.matrix.shape[1])

    def __contains__(self, word: str) -> bool:
        return word in self.vocab

    def get(self, word: str) -> np.ndarray | None:
        i = self.vocab.get(word)
        return None if i is None else self.matrix[i]


@dataclass
class EmbedConfig:
    dim: int = 300
    window: int = 5
    negatives: int = 5
    epochs: int = 5
    learning_rate: float = 0.025
    min_learning_rate: float = 1e-4
    min_count: int = 1

    def validate(self) -> None:
        for name in ("dim", "window", "negatives", "epochs", "min_count"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive, got {getattr(self, name)}")
        if self.learning_rate <= 0 or self.min_learning_rate <= 0:
            raise ValueError("learning rates must be positive")


def _sentences(corpus) -> list[list[str]]:
    """Lowercased word-like token sequences, one per document."""
    out = []
    for doc in corpus:
        if isinstance(doc, Document):
            out.append([t.lower for t in doc.tokens if t.is_wordlike])
        else:
            out.append([_lowered(w) for w in doc])
    return out


def _lowered(word) -> str:
    return word.lower if isinstance(word, Token) else str(word).casefold()


def _sgns_update(w_in, w_out, center, context, negatives, lr, rng, cum) -> float:
    """One positive + ``negatives`` sampled updates; returns the local loss."""
    targets = np.empty(negatives + 1, dtype=np.int64)
    targets[0] = context
    targets[1:] = np.searchsorted(cum, rng.random(negatives))
    labels = np.zeros(negatives + 1)
    labels[0] = 1.0

    v = w_in[center]
    out = w_out[targets]
    scores = out @ v
    sig = 1.0 / (1.0 + np.exp(-scores))
    g = (labels - sig) * lr
    grad_v = g @ out
    w_out[targets] += np.outer(g, v)
    w_in[center] += grad_v
    eps = 1e-10
    return float(-(np.log(sig[0] + eps) + np.log(1.0 - sig[1:] + eps).sum()))


def _run_skipgram(corpus, cfg: EmbedConfig, seed: int):
    cfg.validate()
    sentences = _sentences(corpus)
    counts = Counter(w for sent in sentences for w in sent)
    words = sorted(
        (w for w, c in counts.items() if c >= cfg.min_count),
        key=lambda w: (-counts[w], w),
    )
    if not words:
        raise ValueError("corpus has no eligible tokens")
    vocab = {w: i for i, w in enumerate(words)}

    rng = np.random.default_rng(seed)
    w_in = (rng.random((len(words), cfg.dim)) - 0.5) / cfg.dim
    w_out = np.zeros((len(words), cfg.dim))

    # Negative sampling distribution: unigram counts ** 0.75.
    freq = np.array([counts[w] for w in words], dtype=np.float64) ** 0.75
    cum = np.cumsum(freq / freq.sum())

    encoded = [[vocab[w] for w in sent if w in vocab] for sent in sentences]
    total_steps = max(1, cfg.epochs * sum(len(s) for s in encoded))
    step = 0
    epoch_losses = []
    for _epoch in range(cfg.epochs):
        loss_sum = 0.0
        n_pairs = 0
        for sent in encoded:
            for pos, center in enumerate(sent):
                lr = max(
                    cfg.min_learning_rate,
                    cfg.learning_rate * (1.0 - step / total_steps),
                )
                step += 1
                reach = int(rng.integers(1, cfg.window + 1))
                lo = max(0, pos - reach)
                hi = min(len(sent), pos + reach + 1)
                for ctx_pos in range(lo, hi):
                    if ctx_pos == pos:
                        continue
                    loss_sum += _sgns_update(
                        w_in, w_out, center, sent[ctx_pos],
                        cfg.negatives, lr, rng, cum,
                    )
                    n_pairs += 1
        epoch_losses.append(loss_sum / max(1, n_pairs))
    return VectorTable(vocab=vocab, matrix=w_in), epoch_losses


def train_skipgram(corpus, cfg: EmbedConfig, seed: int = 0) -> VectorTable:
    """Skip-gram with negative sampling over the corpus' word-like tokens.

    Deterministic for a fixed seed (single worker).  Words occurring fewer
    than ``cfg.min_count`` times are excluded.  Raises ``ValueError`` when
    no token survives the frequency cutoff.
    """
    table, _ = _run_skipgram(corpus, cfg, seed)
    return table


def skipgram_epoch_losses(corpus, cfg: EmbedConfig, seed: int = 0) -> list[float]:
    """Mean per-pair loss for each training epoch (same run as
    :func:`train_skipgram` with the same arguments)."""
    _, losses = _run_skipgram(corpus, cfg, seed)
    return losses


def save_vectors(table: VectorTable, path) -> None:
    """Write the standard text format: "<count> <dim>" header then one
    "<word> <v1> ... <vdim>" line per word.  Floats use ``repr`` so the
    round-trip is exact."""
    words = sorted(table.vocab, key=table.vocab.get)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"{len(words)} {table.dim}\n")
        for w in words:
            row = table.matrix[table.vocab[w]]
            fh.write(w + " " + " ".join(repr(float(x)) for x in row) + "\n")


def load_vectors(path) -> VectorTable:
    """Load a text vector file; errors name the offending line number."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().strip()
        if not header:
            raise ValueError(f"{path}: missing header")
        try:
            count, dim = (int(x) for x in header.split())
        except ValueError:
            raise ValueError(f"{path}: malformed header {header!r}") from None
        vocab: dict[str, int] = {}
        matrix = np.empty((count, dim))
        for lineno, line in enumerate(fh, start=2):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split(" ")
            word, values = parts[0], parts[1:]
            if len(values) != dim:
                raise ValueError(
                    f"{path}: line {lineno}: expected {dim} values, got {len(values)}"
                )
            row = len(vocab)
            if row >= count:
                raise ValueError(f"{path}: more rows than the header's {count}")
            if word in vocab:
                raise ValueError(f"{path}: line {lineno}: duplicate word {word!r}")
            vocab[word] = row
            matrix[row] = [float(v) for v in values]
    if len(vocab) != count:
        raise ValueError(f"{path}: header promises {count} rows, found {len(vocab)}")
    return VectorTable(vocab=vocab, matrix=matrix)


def embed_phrase(table: VectorTable, words) -> Embedding:
    """Unweighted mean of in-vocabulary token vectors (lowercased).

    ``words`` may be tokens, strings, or a CandidatePhrase-like object with
    ``tokens``.  An all-OOV phrase gives a zero vector with the OOV flag.
    """
    if hasattr(words, "tokens"):
        words = words.tokens
    elif isinstance(words, str):
        words = words.split()
    rows = [table.get(_lowered(w)) for w in words]
    rows = [r for r in rows if r is not None]
    if not rows:
        return Embedding(np.zeros(table.dim), True)
    return Embedding(np.mean(rows, axis=0), False)


def embed_document(
    table: VectorTable,
    doc: Document,
    idf: dict[str, float],
    default_idf: float = 1.0,
) -> Embedding:
    """idf-weighted mean over in-vocabulary, word-like, non-stopword tokens.

    Weights come from the stem-level idf map; stems unseen there fall back
    to ``default_idf`` (rankers pass log(doc_count), the most-specific
    value).  No eligible token gives a zero vector flagged OOV.
    """
    total = np.zeros(table.dim)
    weight_sum = 0.0
    for tok in doc.tokens:
        if not tok.is_wordlike or tok.is_stopword:
            continue
        row = table.get(tok.lower)
        if row is None:
            continue
        w = idf.get(tok.stem, default_idf)
        total += w * row
        weight_sum += w
    if weight_sum <= 0.0:
        return Embedding(np.zeros(table.dim), True)
    return Embedding(total / weight_sum, False)


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        return 0.0
    return float(np.dot(u, v) / (nu * nv))


class SkipGramEmbedder(BaseEstimator):
    """Scikit-learn style wrapper around :func:`train_skipgram`.

    ``fit`` accepts documents (:class:`~kpgen.textproc.Document`) or plain
    token sequences and exposes the trained table as ``table_``.
    """

    def __init__(
        self,
        dim: int = 300,
        window: int = 5,
        negatives: int = 5,
        epochs: int = 5,
        learning_rate: float = 0.025,
        min_learning_rate: float = 1e-4,
        min_count: int = 1,
        seed: int = 0,
    ):
        self.dim = dim
        self.window = window
        self.negatives = negatives
        self.epochs = epochs
        self.learning_rate = learning_rate
        self.min_learning_rate = min_learning_rate
        self.min_count = min_count
        self.seed = seed

    def _config(self) -> EmbedConfig:
        return EmbedConfig(
            dim=self.dim,
            window=self.window,
            negatives=self.negatives,
            epochs=self.epochs,
            learning_rate=self.learning_rate,
            min_learning_rate=self.min_learning_rate,
            min_count=self.min_count,
        )

    def fit(self, X, y=None):
        self.table_ = train_skipgram(X, self._config(), seed=self.seed)
        return self

    def transform(self, X) -> np.ndarray:
        """Rows of unweighted phrase vectors, one per input phrase."""
        check_is_fitted(self, "table_")
        return np.stack([embed_phrase(self.table_, p).vector for p in X])
