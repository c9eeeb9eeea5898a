"""Corpus-wide phrase bank with an inverted index for absent-candidate queries.

Present candidates from every document are pooled into one deduplicated
bank.  For a query document, a bank phrase is an *absent* candidate when
every one of its stemmed tokens appears somewhere in the document but the
phrase itself never occurs contiguously.  The index maps stems to posting
lists so queries do not scan the whole bank; a linear scan must (and in the
tests does) give exactly the same answer.
"""

from __future__ import annotations

import io
from collections import Counter
from dataclasses import dataclass, field

from .candidates import CandidatePhrase, count_contiguous, extract_present
from .textproc import Document, stem_phrase_text

FORMAT_NAME = "kpgen-phrasebank"
FORMAT_VERSION = 1


@dataclass(frozen=True, slots=True)
class BankEntry:
    id: int
    stem_key: str
    surface: str
    stems: tuple[str, ...]
    df: int

    @property
    def distinct_stems(self) -> frozenset[str]:
        return frozenset(self.stems)


@dataclass
class PhraseBank:
    entries: list[BankEntry]
    index: dict[str, list[int]] = field(repr=False)
    doc_count: int = 0
    key_to_id: dict[str, int] = field(default_factory=dict, repr=False)

    def __len__(self) -> int:
        return len(self.entries)

    def __contains__(self, stem_key: str) -> bool:
        return stem_key in self.key_to_id

    def entry_for(self, stem_key: str) -> BankEntry | None:
        i = self.key_to_id.get(stem_key)
        return None if i is None else self.entries[i]

    def df_of(self, stem_key: str, default: int = 1) -> int:
        entry = self.entry_for(stem_key)
        return default if entry is None else entry.df


def _rebuild_index(entries: list[BankEntry]) -> dict[str, list[int]]:
    index: dict[str, list[int]] = {}
    for e in entries:
        for s in e.distinct_stems:
            index.setdefault(s, []).append(e.id)
    return index


def build(corpus: list[Document], max_len: int = 5) -> PhraseBank:
    """Pool present candidates from every document into a bank.

    ``df`` counts the documents where the phrase occurs contiguously after
    stemming, which can exceed the number of documents the extractor
    emitted it from (a stem-equal span may sit behind a chunk boundary in
    some document).  Raises ``ValueError`` on an empty corpus.
    """
    if not corpus:
        raise ValueError("empty corpus")

    surfaces: dict[str, CandidatePhrase] = {}
    emitted_in: dict[str, set[int]] = {}
    for d_i, doc in enumerate(corpus):
        for cand in extract_present(doc, max_len=max_len):
            if cand.stem_key not in surfaces:
                surfaces[cand.stem_key] = cand
            emitted_in.setdefault(cand.stem_key, set()).add(d_i)

    order = list(surfaces)  # first-encounter order over the corpus
    key_to_id = {k: i for i, k in enumerate(order)}
    provisional = [
        BankEntry(
            id=i,
            stem_key=k,
            surface=surfaces[k].surface,
            stems=surfaces[k].stems,
            df=len(emitted_in[k]),
        )
        for i, k in enumerate(order)
    ]
    index = _rebuild_index(provisional)

    # df correction: a document can contain a stem-equal contiguous span
    # that the extractor never emitted there (e.g. behind a stopword alias).
    extra_df = Counter()
    for d_i, doc in enumerate(corpus):
        for e in _full_stem_matches(provisional, index, doc):
            if d_i in emitted_in[e.stem_key]:
                continue
            if count_contiguous(doc, e.stems) > 0:
                extra_df[e.id] += 1

    entries = [
        e if extra_df[e.id] == 0 else
        BankEntry(e.id, e.stem_key, e.surface, e.stems, e.df + extra_df[e.id])
        for e in provisional
    ]
    return PhraseBank(
        entries=entries,
        index=_rebuild_index(entries),
        doc_count=len(corpus),
        key_to_id=key_to_id,
    )


def _full_stem_matches(entries, index, doc: Document):
    """Entries whose every distinct stem occurs in ``doc`` (via postings)."""
    hits = Counter()
    for s in doc.stem_set:
        for eid in index.get(s, ()):
            hits[eid] += 1
    for eid, n in hits.items():
        e = entries[eid]
        if n == len(e.distinct_stems):
            yield e


def draw_absent(bank: PhraseBank, doc: Document) -> list[BankEntry]:
    """Bank phrases admissible as absent candidates for ``doc``: all stems
    present in the document, no contiguous occurrence.  Sorted by id."""
    out = [
        e
        for e in _full_stem_matches(bank.entries, bank.index, doc)
        if count_contiguous(doc, e.stems) == 0
    ]
    out.sort(key=lambda e: e.id)
    return out


def draw_absent_scan(bank: PhraseBank, doc: Document) -> list[BankEntry]:
    """Reference linear scan over the whole bank; must equal
    :func:`draw_absent` exactly."""
    out = []
    for e in bank.entries:
        if e.distinct_stems <= doc.stem_set and count_contiguous(doc, e.stems) == 0:
            out.append(e)
    return out


@dataclass(frozen=True)
class CoverageStats:
    absent_gold_count: int
    bank_hit_rate: float | None
    token_hit_rate: float | None


def coverage_stats(bank: PhraseBank, labeled_docs) -> CoverageStats:
    """Corpus-level statistics over gold *absent* keyphrases.

    ``labeled_docs`` is an iterable of ``(Document, gold_phrases)`` pairs
    where ``gold_phrases`` are raw keyphrase strings.  ``bank_hit_rate`` is
    the fraction of absent gold keyphrases whose stem key exists in the
    bank; ``token_hit_rate`` the fraction whose every stem occurs in their
    own document.  Both are ``None`` when there are no absent gold
    keyphrases (undefined, not zero).
    """
    n_absent = 0
    in_bank = 0
    tokens_covered = 0
    for doc, gold_phrases in labeled_docs:
        for phrase in gold_phrases:
            try:
                key = stem_phrase_text(phrase)
            except ValueError:
                continue  # no word-like tokens at all
            stems = tuple(key.split(" "))
            if count_contiguous(doc, stems) > 0:
                continue  # present keyphrase, not in scope
            n_absent += 1
            if key in bank:
                in_bank += 1
            if set(stems) <= doc.stem_set:
                tokens_covered += 1
    if n_absent == 0:
        return CoverageStats(0, None, None)
    return CoverageStats(n_absent, in_bank / n_absent, tokens_covered / n_absent)


def save(bank: PhraseBank, path) -> None:
    """Write the bank as a versioned TSV; byte-stable for identical inputs.

    The inverted index is not stored; it is rebuilt on load.
    """
    buf = io.StringIO()
    buf.write(f"{FORMAT_NAME}\t{FORMAT_VERSION}\n")
    buf.write(f"doc_count\t{bank.doc_count}\n")
    buf.write(f"entries\t{len(bank.entries)}\n")
    for e in bank.entries:
        buf.write(f"{e.id}\t{e.surface}\t{e.stem_key}\t{e.df}\n")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(buf.getvalue())


def load(path) -> PhraseBank:
    with open(path, "r", encoding="utf-8") as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise ValueError(f"{path}: empty phrase bank file")
    name, _, version = lines[0].partition("\t")
    if name != FORMAT_NAME:
        raise ValueError(f"{path}: not a phrase bank file (header {lines[0]!r})")
    if version != str(FORMAT_VERSION):
        raise ValueError(
            f"{path}: unsupported format version {version!r} (expected {FORMAT_VERSION})"
        )
    doc_count = int(lines[1].split("\t")[1])
    n_entries = int(lines[2].split("\t")[1])
    entries = []
    for line in lines[3:]:
        eid, surface, stem_key, df = line.split("\t", 3)
        entries.append(
            BankEntry(
                id=int(eid),
                stem_key=stem_key,
                surface=surface,
                stems=tuple(stem_key.split(" ")),
                df=int(df),
            )
        )
    if len(entries) != n_entries:
        raise ValueError(
            f"{path}: header promises {n_entries} entries, found {len(entries)}"
        )
    return PhraseBank(
        entries=entries,
        index=_rebuild_index(entries),
        doc_count=doc_count,
        key_to_id={e.stem_key: e.id for e in entries},
    )
