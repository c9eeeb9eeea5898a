"""Present-candidate extraction: stopword-delimited chunking plus sub-spans.

A document's token stream is cut into maximal chunks at stopwords and
non-word tokens; every contiguous sub-span of a chunk up to
``MAX_PHRASE_LEN`` tokens becomes a candidate, so "security breach"
survives inside "recent security breach".  Spans made entirely of very
short tokens are dropped, and candidates are deduplicated on their stemmed
key.
"""

from __future__ import annotations

from dataclasses import dataclass

from .textproc import Document, Token, stem_phrase

MAX_PHRASE_LEN = 5
MIN_TOKEN_CHARS = 3


@dataclass(frozen=True, slots=True)
class CandidatePhrase:
    tokens: tuple[Token, ...]
    surface: str
    stem_key: str
    length: int
    span_count: int
    first_pos: int  # earliest start offset in the source token stream

    @property
    def stems(self) -> tuple[str, ...]:
        return tuple(t.stem for t in self.tokens)


def _chunks(doc: Document):
    """Yield (start_offset, [tokens]) runs of word-like non-stopword tokens."""
    run: list[Token] = []
    start = 0
    for i, tok in enumerate(doc.tokens):
        if tok.is_wordlike and not tok.is_stopword:
            if not run:
                start = i
            run.append(tok)
        elif run:
            yield start, run
            run = []
    if run:
        yield start, run


def extract_present(
    doc: Document,
    max_len: int = MAX_PHRASE_LEN,
    min_token_chars: int = MIN_TOKEN_CHARS,
) -> list[CandidatePhrase]:
    """All candidate phrases occurring contiguously in ``doc``.

    Deterministic; the result is sorted by first occurrence then stem key.
    Deduplication keeps the earliest surface form and sums occurrence
    counts across stem-equal spans.
    """
    found: dict[str, dict] = {}
    for start, run in _chunks(doc):
        n = len(run)
        for i in range(n):
            for j in range(i + 1, min(i + max_len, n) + 1):
                span = run[i:j]
                if all(len(t.surface) < min_token_chars for t in span):
                    continue
                key = stem_phrase(span)
                entry = found.get(key)
                if entry is None:
                    found[key] = {
                        "tokens": tuple(span),
                        "surface": " ".join(t.surface for t in span),
                        "count": 1,
                        "first_pos": start + i,
                    }
                else:
                    entry["count"] += 1
                    if start + i < entry["first_pos"]:
                        entry["first_pos"] = start + i
    out = [
        CandidatePhrase(
            tokens=e["tokens"],
            surface=e["surface"],
            stem_key=key,
            length=len(e["tokens"]),
            span_count=e["count"],
            first_pos=e["first_pos"],
        )
        for key, e in found.items()
    ]
    out.sort(key=lambda c: (c.first_pos, c.stem_key))
    return out


def count_contiguous(doc: Document, stems) -> int:
    """Number of positions where ``stems`` occurs contiguously in ``doc``
    (stem-level comparison over the full token stream)."""
    target = tuple(stems)
    n = len(target)
    if n == 0:
        return 0
    doc_stems = [t.stem for t in doc.tokens]
    if n > len(doc_stems):
        return 0
    count = 0
    for i in range(len(doc_stems) - n + 1):
        if doc_stems[i] == target[0] and tuple(doc_stems[i:i + n]) == target:
            count += 1
    return count


def first_occurrence(doc: Document, stems) -> int:
    """Start offset of the first contiguous occurrence, or ``len(doc.tokens)``
    when the phrase is absent (used as a deterministic sort key)."""
    target = tuple(stems)
    n = len(target)
    doc_stems = [t.stem for t in doc.tokens]
    for i in range(len(doc_stems) - n + 1):
        if tuple(doc_stems[i:i + n]) == target:
            return i
    return len(doc.tokens)
