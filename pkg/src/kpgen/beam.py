"""Input-biased beam search over the generation model.

At every step the next-token distribution is reweighted: words whose stem
occurs in the source document get their probability multiplied by a bias
factor, then the distribution is renormalized.  Out-of-document words stay
reachable, just less likely.  A factor of exactly 1.0 short-circuits, so
unbiased decoding is bitwise identical to bias=1.0.

Hypotheses end at EOS or at the length cap; the final score is the
length-normalized sum of log (biased) probabilities.  Output is
deduplicated on stem keys and UNK-bearing hypotheses are dropped.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .seq2seq import EncodedSource, Seq2SeqModel
from .vocab import BOS_ID, EOS_ID, PAD_ID, UNK_ID, Vocab


@dataclass
class DecodeConfig:
    beam_width: int = 20
    max_phrase_len: int = 6
    bias_factor: float = 2.0
    length_norm: float = 1.0

    def validate(self) -> None:
        if self.beam_width < 1:
            raise ValueError("beam_width must be >= 1")
        if self.max_phrase_len < 1:
            raise ValueError("max_phrase_len must be >= 1")
        if self.bias_factor < 1.0:
            raise ValueError("bias_factor must be >= 1")


class GeneratedPhrase(NamedTuple):
    words: tuple[str, ...]
    ids: tuple[int, ...]
    stem_key: str
    score: float    # length-normalized log-probability
    logp: float     # raw sum of log biased probabilities


def bias_distribution(probs: np.ndarray, in_doc: np.ndarray, factor: float) -> np.ndarray:
    """Multiply in-document word probabilities by ``factor``, renormalize.

    Returns ``probs`` itself (no copy) when ``factor == 1.0`` so neutral
    bias is exactly the unbiased distribution.
    """
    if factor == 1.0:
        return probs
    p = probs * np.where(in_doc, factor, 1.0)
    return p / p.sum()


def in_document_mask(vocab: Vocab, doc_stems) -> np.ndarray:
    """Boolean vector over vocabulary ids: stem occurs in the document."""
    stems = vocab.stems()
    doc_stems = set(doc_stems)
    return np.array([s != "" and s in doc_stems for s in stems], dtype=bool)


class _Hyp(NamedTuple):
    ids: tuple[int, ...]
    logp: float
    state: tuple
    prev: int


def biased_beam_search(
    model: Seq2SeqModel,
    enc: EncodedSource,
    vocab: Vocab,
    doc_stems,
    cfg: DecodeConfig,
    step_observer=None,
) -> list[GeneratedPhrase]:
    """Beam decode one document; returns phrases ranked by score.

    A parent contributes at most ``beam_width`` children, preselected by
    log-probability (ties to the lower word id); the merged pool is pruned
    with ties broken by parent rank then word id, which keeps the search
    fully deterministic.  ``step_observer(step, raw_probs, biased_probs)``
    is invoked once per expanded hypothesis per step (testing hook).
    """
    cfg.validate()
    in_doc = in_document_mask(vocab, doc_stems)
    expandable = np.array(
        [w for w in range(len(vocab)) if w not in (PAD_ID, BOS_ID, EOS_ID)],
        dtype=np.int64,
    )
    active = [_Hyp(ids=(), logp=0.0, state=model.initial_state(enc), prev=BOS_ID)]
    finished: list[tuple[tuple[int, ...], float, int]] = []  # (ids, logp, n_emitted)

    for step in range(cfg.max_phrase_len):
        expansions: list[tuple[float, int, int, tuple]] = []  # (logp, rank, word, state)
        for rank, hyp in enumerate(active):
            res = model.decode_step(hyp.prev, hyp.state, enc)
            biased = bias_distribution(res.probs, in_doc, cfg.bias_factor)
            if step_observer is not None:
                step_observer(step, res.probs, biased)
            logs = np.log(biased)
            finished.append((hyp.ids, hyp.logp + float(logs[EOS_ID]), len(hyp.ids) + 1))
            cand = hyp.logp + logs[expandable]
            keep = np.argsort(-cand, kind="stable")[: cfg.beam_width]
            for k in keep:
                expansions.append(
                    (float(cand[k]), rank, int(expandable[k]), res.state)
                )
        expansions.sort(key=lambda t: (-t[0], t[1], t[2]))
        active = [
            _Hyp(ids=active[rank].ids + (w,), logp=lp, state=state, prev=w)
            for lp, rank, w, state in expansions[: cfg.beam_width]
        ]
        if not active:
            break

    for hyp in active:  # length-capped, never emitted EOS
        finished.append((hyp.ids, hyp.logp, len(hyp.ids)))

    return assemble_phrases(finished, vocab, cfg.length_norm)


def assemble_phrases(finished, vocab: Vocab, length_norm: float) -> list[GeneratedPhrase]:
    """Score, filter (empty / UNK), sort and stem-deduplicate hypotheses."""
    stems = vocab.stems()
    scored = []
    for ids, logp, n_emitted in finished:
        if not ids or UNK_ID in ids:
            continue
        score = logp / float(n_emitted) ** length_norm
        scored.append((ids, logp, score))
    scored.sort(key=lambda t: (-t[2], t[0]))
    out: list[GeneratedPhrase] = []
    seen: set[str] = set()
    for ids, logp, score in scored:
        key = " ".join(stems[i] for i in ids)
        if key in seen:
            continue
        seen.add(key)
        out.append(
            GeneratedPhrase(
                words=tuple(vocab.word_of(i) for i in ids),
                ids=ids,
                stem_key=key,
                score=score,
                logp=logp,
            )
        )
    return out


def exhaustive_reference_search(
    model: Seq2SeqModel,
    enc: EncodedSource,
    vocab: Vocab,
    doc_stems,
    cfg: DecodeConfig,
) -> list[GeneratedPhrase]:
    """Enumerate every possible hypothesis and score it with the same rule
    as :func:`biased_beam_search`; tiny vocabularies only.  Used as the
    pruning-correctness oracle."""
    cfg.validate()
    in_doc = in_document_mask(vocab, doc_stems)
    expandable = [w for w in range(len(vocab)) if w not in (PAD_ID, BOS_ID, EOS_ID)]
    finished: list[tuple[tuple[int, ...], float, int]] = []

    def walk(prefix: tuple[int, ...], logp: float, state, prev: int, depth: int):
        if depth == cfg.max_phrase_len:
            finished.append((prefix, logp, len(prefix)))
            return
        res = model.decode_step(prev, state, enc)
        biased = bias_distribution(res.probs, in_doc, cfg.bias_factor)
        logs = np.log(biased)
        finished.append((prefix, logp + float(logs[EOS_ID]), len(prefix) + 1))
        for w in expandable:
            walk(prefix + (w,), logp + float(logs[w]), res.state, w, depth + 1)

    walk((), 0.0, model.initial_state(enc), BOS_ID, 0)
    return assemble_phrases(finished, vocab, cfg.length_norm)
