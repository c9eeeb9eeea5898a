"""Tokenization, stemming and stopword handling shared by the whole package.

Everything downstream (candidate extraction, the phrase bank, ranking,
generation, evaluation) compares phrases through the stemmed keys produced
here, so this module is the single source of truth for how text is split
and normalised.
"""

from __future__ import annotations

import functools
import re
import unicodedata
from dataclasses import dataclass, field
from importlib import resources as importlib_resources

from . import porter

__all__ = [
    "Token",
    "Document",
    "tokenize",
    "stem",
    "stem_phrase",
    "stopwords",
    "make_document",
]

# A word is a run of alphanumeric characters, optionally joined by single
# internal hyphens ("e-mail" stays one token).  Underscore counts as
# punctuation.  Any other non-space character becomes a one-character token.
_WORD_ONLY_RE = re.compile(r"[^\W_]+(?:-[^\W_]+)*", re.UNICODE)
_TOKEN_RE = re.compile(r"[^\W_]+(?:-[^\W_]+)*|\S", re.UNICODE)


@functools.lru_cache(maxsize=1)
def stopwords() -> frozenset[str]:
    """The packaged English stopword list (179 entries, one per line)."""
    text = (
        importlib_resources.files("kpgen.resources")
        .joinpath("stopwords.txt")
        .read_text(encoding="utf-8")
    )
    return frozenset(line.strip() for line in text.splitlines() if line.strip())


@functools.lru_cache(maxsize=262144)
def stem(word: str) -> str:
    """Porter stem of a lowercase word (cached)."""
    return porter.stem(word)


@dataclass(frozen=True, slots=True)
class Token:
    surface: str
    lower: str
    stem: str
    is_stopword: bool
    is_wordlike: bool


def _make_token(surface: str, stopword_set: frozenset[str]) -> Token:
    lower = surface.casefold()
    wordlike = bool(_WORD_ONLY_RE.fullmatch(surface)) and any(
        ch.isalpha() for ch in surface
    )
    return Token(
        surface=surface,
        lower=lower,
        stem=stem(lower),
        is_stopword=lower in stopword_set,
        is_wordlike=wordlike,
    )


def tokenize(text: str) -> tuple[Token, ...]:
    """Split ``text`` into tokens at whitespace and punctuation boundaries.

    Punctuation marks become their own tokens; hyphenated words stay joined;
    pure digit strings are kept but flagged non-wordlike.  Input is
    NFC-normalised first so equal-looking strings produce equal stems.
    Deterministic and total: empty input gives an empty tuple.
    """
    text = unicodedata.normalize("NFC", text)
    sw = stopwords()
    return tuple(_make_token(m.group(0), sw) for m in _TOKEN_RE.finditer(text))


def stem_phrase(tokens) -> str:
    """Space-joined stems of a token or word sequence: the canonical
    equality key for all phrase matching.

    Accepts a sequence of :class:`Token` or of plain strings.  Raises
    ``ValueError`` on an empty phrase.
    """
    parts = []
    for tok in tokens:
        if isinstance(tok, Token):
            parts.append(tok.stem)
        else:
            parts.append(stem(str(tok).casefold()))
    if not parts:
        raise ValueError("empty phrase")
    return " ".join(parts)


def stem_phrase_text(text: str) -> str:
    """``stem_phrase`` over the word-like tokens of a raw string."""
    toks = [t for t in tokenize(text) if t.is_wordlike]
    if not toks:
        raise ValueError("empty phrase")
    return stem_phrase(toks)


@dataclass(frozen=True, slots=True)
class Document:
    """A tokenized document: title + body with stem-level statistics.

    ``stem_set``/``stem_tf`` cover word-like tokens only; ``wordlike_count``
    is the document length used by TF-IDF style scores.
    """

    id: str
    title: tuple[Token, ...]
    body: tuple[Token, ...]
    tokens: tuple[Token, ...] = field(repr=False)
    stem_set: frozenset[str] = field(repr=False)
    stem_tf: dict[str, int] = field(repr=False)
    wordlike_count: int = 0


def make_document(doc_id: str, title: str, body: str = "") -> Document:
    title_toks = tokenize(title)
    body_toks = tokenize(body)
    tokens = title_toks + body_toks
    tf: dict[str, int] = {}
    for tok in tokens:
        if tok.is_wordlike:
            tf[tok.stem] = tf.get(tok.stem, 0) + 1
    return Document(
        id=str(doc_id),
        title=title_toks,
        body=body_toks,
        tokens=tokens,
        stem_set=frozenset(tf),
        stem_tf=tf,
        wordlike_count=sum(tf.values()),
    )
