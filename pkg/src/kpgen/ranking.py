"""Fused lexical/semantic candidate ranking and silver-label selection.

Each candidate gets a TF-IDF style lexical score and a cosine-similarity
semantic score against the document vector; the two are combined with a
geometric mean.  Cosines are clamped to [SEMANTIC_FLOOR, 1] before the
square root, so the fused score is always well defined and ordering among
non-negative scores is preserved.  Present and absent candidates go
through exactly the same formula and come back as two separately sorted
lists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .candidates import CandidatePhrase, count_contiguous, first_occurrence
from .embedding import Embedding, VectorTable, cosine, embed_document, embed_phrase
from .phrasebank import BankEntry, PhraseBank
from .textproc import Document

SEMANTIC_FLOOR = 1e-9


@dataclass(frozen=True, slots=True)
class ScoredPhrase:
    surface: str
    stem_key: str
    stems: tuple[str, ...]
    semantic: float
    lexical: float
    fused: float
    is_present: bool
    first_pos: int


@dataclass
class CorpusStats:
    """|D|, per-phrase document frequencies and per-stem idf weights."""

    doc_count: int
    phrase_df: dict[str, int]
    stem_df: dict[str, int]
    _idf_cache: dict[str, float] | None = None

    @classmethod
    def from_corpus(cls, corpus: list[Document], bank: PhraseBank) -> "CorpusStats":
        stem_df: dict[str, int] = {}
        for doc in corpus:
            for s in doc.stem_set:
                stem_df[s] = stem_df.get(s, 0) + 1
        return cls(
            doc_count=len(corpus),
            phrase_df={e.stem_key: e.df for e in bank.entries},
            stem_df=stem_df,
        )

    def idf(self, stem: str) -> float:
        return math.log(self.doc_count / max(1, self.stem_df.get(stem, 0)))

    def idf_map(self) -> dict[str, float]:
        if self._idf_cache is None:
            self._idf_cache = {s: self.idf(s) for s in self.stem_df}
        return self._idf_cache

    @property
    def max_idf(self) -> float:
        return math.log(max(1, self.doc_count))

    def phrase_idf(self, stem_key: str) -> float:
        # Phrases never seen in the bank count as maximally specific (DF=1).
        df = max(1, self.phrase_df.get(stem_key, 1))
        return math.log(self.doc_count / df)


def lexical_score(doc: Document, stems, stem_key: str, stats: CorpusStats) -> float:
    """TF(c,x)/|x| * log(|D|/DF(c,D)).

    TF is the contiguous occurrence count for present candidates; for
    absent ones it is the minimum document frequency of the constituent
    stems (0 when some stem never occurs, which can only happen for
    generator outputs).  |x| counts word-like tokens.
    """
    if doc.wordlike_count == 0:
        return 0.0
    tf = count_contiguous(doc, stems)
    if tf == 0:
        tf = min((doc.stem_tf.get(s, 0) for s in stems), default=0)
    if tf == 0:
        return 0.0
    return (tf / doc.wordlike_count) * stats.phrase_idf(stem_key)


def semantic_score(doc_vec: Embedding, phrase_vec: Embedding) -> float:
    """Cosine similarity clamped to [SEMANTIC_FLOOR, 1]; OOV on either side
    falls to the floor."""
    if doc_vec.oov or phrase_vec.oov:
        return SEMANTIC_FLOOR
    c = cosine(doc_vec.vector, phrase_vec.vector)
    return min(1.0, max(SEMANTIC_FLOOR, c))


def fuse(semantic: float, lexical: float, use_tfidf: bool = True) -> float:
    """Geometric mean of the two scores; with ``use_tfidf=False`` the
    ranking degenerates to embedding similarity alone."""
    if not use_tfidf:
        return semantic
    return math.sqrt(semantic * max(0.0, lexical))


@dataclass(frozen=True)
class RankInput:
    """One candidate ready for scoring."""

    surface: str
    stems: tuple[str, ...]
    stem_key: str
    words: tuple[str, ...]  # lowercased lookup forms for the embedder


def as_rank_input(obj) -> RankInput:
    if isinstance(obj, CandidatePhrase):
        return RankInput(
            surface=obj.surface,
            stems=obj.stems,
            stem_key=obj.stem_key,
            words=tuple(t.lower for t in obj.tokens),
        )
    if isinstance(obj, BankEntry):
        return RankInput(
            surface=obj.surface,
            stems=obj.stems,
            stem_key=obj.stem_key,
            words=tuple(w.casefold() for w in obj.surface.split(" ")),
        )
    if isinstance(obj, RankInput):
        return obj
    raise TypeError(f"cannot rank object of type {type(obj).__name__}")


def score_candidates(
    doc: Document,
    cands,
    table: VectorTable,
    stats: CorpusStats,
    doc_vec: Embedding | None = None,
    use_tfidf: bool = True,
) -> list[ScoredPhrase]:
    if doc_vec is None:
        doc_vec = embed_document(
            table, doc, stats.idf_map(), default_idf=stats.max_idf
        )
    out = []
    for obj in cands:
        c = as_rank_input(obj)
        sem = semantic_score(doc_vec, embed_phrase(table, c.words))
        lex = lexical_score(doc, c.stems, c.stem_key, stats)
        pos = first_occurrence(doc, c.stems)
        out.append(
            ScoredPhrase(
                surface=c.surface,
                stem_key=c.stem_key,
                stems=c.stems,
                semantic=sem,
                lexical=lex,
                fused=fuse(sem, lex, use_tfidf=use_tfidf),
                is_present=pos < len(doc.tokens),
                first_pos=pos,
            )
        )
    return out


def _sorted_ranking(scored: list[ScoredPhrase]) -> list[ScoredPhrase]:
    # Ties break on earlier first occurrence, then stem key, for determinism.
    return sorted(scored, key=lambda s: (-s.fused, s.first_pos, s.stem_key))


def rank(
    doc: Document,
    present,
    absent,
    table: VectorTable,
    stats: CorpusStats,
    use_tfidf: bool = True,
) -> tuple[list[ScoredPhrase], list[ScoredPhrase]]:
    """Score both candidate pools with the same fused formula and return
    (present ranked list, absent ranked list), each sorted descending."""
    doc_vec = embed_document(table, doc, stats.idf_map(), default_idf=stats.max_idf)
    scored_present = score_candidates(
        doc, present, table, stats, doc_vec=doc_vec, use_tfidf=use_tfidf
    )
    scored_absent = score_candidates(
        doc, absent, table, stats, doc_vec=doc_vec, use_tfidf=use_tfidf
    )
    return _sorted_ranking(scored_present), _sorted_ranking(scored_absent)


@dataclass(frozen=True, slots=True)
class SilverPair:
    doc_id: str
    surface: str
    stem_key: str
    is_present: bool
    rank: int  # 1-based within its list


def make_silver(
    corpus: list[Document],
    bank: PhraseBank,
    table: VectorTable,
    stats: CorpusStats,
    top_present: int = 5,
    top_absent: int = 5,
    use_tfidf: bool = True,
) -> list[SilverPair]:
    """Top-ranked present/absent candidates per document, in corpus order.

    Documents with fewer candidates contribute fewer pairs; nothing is
    padded.
    """
    from .candidates import extract_present
    from .phrasebank import draw_absent

    pairs: list[SilverPair] = []
    for doc in corpus:
        present, absent = rank(
            doc,
            extract_present(doc),
            draw_absent(bank, doc),
            table,
            stats,
            use_tfidf=use_tfidf,
        )
        for r, sp in enumerate(present[:top_present], start=1):
            pairs.append(SilverPair(doc.id, sp.surface, sp.stem_key, True, r))
        for r, sp in enumerate(absent[:top_absent], start=1):
            pairs.append(SilverPair(doc.id, sp.surface, sp.stem_key, False, r))
    return pairs


def save_silver(pairs: list[SilverPair], path) -> None:
    """Tab-separated export: doc_id, surface, stem_key, present|absent, rank."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for p in pairs:
            kind = "present" if p.is_present else "absent"
            fh.write(f"{p.doc_id}\t{p.surface}\t{p.stem_key}\t{kind}\t{p.rank}\n")


def load_silver(path) -> list[SilverPair]:
    pairs = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            try:
                doc_id, surface, stem_key, kind, r = line.split("\t")
            except ValueError:
                raise ValueError(f"{path}: line {lineno}: expected 5 tab-separated fields") from None
            pairs.append(SilverPair(doc_id, surface, stem_key, kind == "present", int(r)))
    return pairs
