"""Corpus IO and the packaged synthetic benchmark.

JSONL is the exchange format everywhere: one object per line with ``id``,
``title``, ``abstract`` and optionally ``keywords``.  The synthetic corpus
plants its keyphrases deterministically: five unique single-word keyphrases
per document, one contiguous two-word phrase feeding the phrase bank, and
one absent two-word keyphrase whose words are scattered through the text
but occur contiguously in a partner document.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources as importlib_resources

from .textproc import Document, make_document, stem, stopwords

SAMPLE_CORPUS_RESOURCE = "sample_corpus.jsonl"


@dataclass
class CorpusLoadResult:
    records: list[dict]
    skipped: list[tuple[int, str]] = field(default_factory=list)  # (lineno, reason)


def read_corpus_jsonl(path) -> CorpusLoadResult:
    """Read and validate a JSONL corpus.

    Malformed lines and records without an ``id`` are skipped and reported
    with their line numbers; a duplicate ``id`` is an error naming it.
    """
    records: list[dict] = []
    skipped: list[tuple[int, str]] = []
    seen: set[str] = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                skipped.append((lineno, f"invalid JSON: {exc.msg}"))
                continue
            if not isinstance(obj, dict):
                skipped.append((lineno, "not a JSON object"))
                continue
            if "id" not in obj or not str(obj["id"]).strip():
                skipped.append((lineno, "missing id"))
                continue
            doc_id = str(obj["id"])
            if doc_id in seen:
                raise ValueError(f"{path}: line {lineno}: duplicate id {doc_id!r}")
            seen.add(doc_id)
            records.append(
                {
                    "id": doc_id,
                    "title": str(obj.get("title", "")),
                    "abstract": str(obj.get("abstract", obj.get("text", ""))),
                    "keywords": normalize_keywords(obj),
                }
            )
    return CorpusLoadResult(records=records, skipped=skipped)


def normalize_keywords(obj: dict) -> list[str]:
    """Accept ``keywords``/``keyword`` as a list or a ';'-separated string."""
    raw = obj.get("keywords", obj.get("keyword", []))
    if isinstance(raw, str):
        parts = raw.split(";")
    else:
        parts = list(raw)
    return [str(p).strip() for p in parts if str(p).strip()]


def documents_from_records(records) -> list[Document]:
    return [make_document(r["id"], r.get("title", ""), r.get("abstract", "")) for r in records]


def write_jsonl(records, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for r in records:
            fh.write(json.dumps(r, ensure_ascii=False, sort_keys=True) + "\n")


def load_keyphrase_jsonl(path):
    """Load an annotated corpus as (documents, gold keyphrase lists).

    This is the documented loader for benchmark test splits distributed in
    JSONL form with ``title``/``abstract``/``keywords`` fields (see the
    README for where to fetch them); records without keyphrases are kept
    with empty gold lists.
    """
    result = read_corpus_jsonl(path)
    docs = documents_from_records(result.records)
    gold = [r["keywords"] for r in result.records]
    return docs, gold


def load_sample_corpus() -> list[dict]:
    """The packaged 200-document synthetic corpus."""
    text = (
        importlib_resources.files("kpgen.resources")
        .joinpath(SAMPLE_CORPUS_RESOURCE)
        .read_text(encoding="utf-8")
    )
    return [json.loads(line) for line in text.splitlines() if line.strip()]


# ----------------------------------------------------------------------
# synthetic corpus with planted keyphrases
# ----------------------------------------------------------------------

_CONSONANTS = "bdfglmnprstvz"
_VOWELS_SYN = "aeiou"
_SYLLABLES = [c + v for c in _CONSONANTS for v in _VOWELS_SYN]
_SEPARATORS = ["the", "of", "in", "and", "with", "for", "on", "by", "from", "under"]


def _word_stream():
    """Deterministic stream of distinct pseudo-words with distinct stems.

    Words are three syllables (six letters), never stopwords, and their
    Porter stems must not collide so every planted phrase has a unique key.
    """
    seen_stems: set[str] = set()
    sw = stopwords()
    n = len(_SYLLABLES)
    i = 0
    while True:
        a, rest = divmod(i, n * n)
        b, c = divmod(rest, n)
        i += 1
        if a >= n:
            raise RuntimeError("synthetic word space exhausted")
        word = _SYLLABLES[(a * 7 + 3) % n] + _SYLLABLES[(b * 11 + 5) % n] + _SYLLABLES[(c * 9 + 7) % n]
        if word in sw:
            continue
        st = stem(word)
        if st in seen_stems:
            continue
        seen_stems.add(st)
        yield word


def build_synthetic_corpus(n_docs: int = 200, keywords_per_doc: int = 5) -> list[dict]:
    """Plant keyphrases into ``n_docs`` documents (``n_docs`` must be even).

    Per document: ``keywords_per_doc`` unique single-word gold keyphrases,
    five occurrences each; one contiguous two-word phrase that only feeds
    the phrase bank (not gold); and the partner document's contiguous
    phrase scattered as separate words six times each, making it this
    document's planted *absent* gold keyphrase.  Scattered words are also
    planted once into seven other documents each (disjoint host sets), so
    their single-word document frequency stays too high for them to crowd
    the genuinely document-specific keywords out of the top ranks, while
    the two-word phrase itself remains unique to the partner document.
    The ``keywords`` field lists the single-word gold keyphrases followed
    by the absent phrase.  Fully deterministic: no randomness anywhere.
    """
    if n_docs % 2 != 0:
        raise ValueError("n_docs must be even (documents are paired)")
    if n_docs < 36:
        raise ValueError("n_docs must be >= 36 so foreign plants cannot collide")
    words = _word_stream()
    singles = [[next(words) for _ in range(keywords_per_doc)] for _ in range(n_docs)]
    pair_words = [(next(words), next(words)) for _ in range(n_docs)]

    # Host schedule: word 0 of pair i goes to docs i+3, i+5, ..., i+15; word 1
    # to docs i+4, i+6, ..., i+16 (mod n).  Odd/even offsets keep the two
    # words of a pair out of any common host, and no offset hits i or its
    # partner, so "c d" stays drawable only for the partner's own document.
    foreign: dict[int, list[str]] = {j: [] for j in range(n_docs)}
    for i, (c, d) in enumerate(pair_words):
        for k in range(7):
            foreign[(i + 3 + 2 * k) % n_docs].append(c)
            foreign[(i + 4 + 2 * k) % n_docs].append(d)

    records = []
    for i in range(n_docs):
        partner = i + 1 if i % 2 == 0 else i - 1
        own_pair = pair_words[i]
        scattered = pair_words[partner]
        ks = singles[i]

        plan: list[tuple[str, ...]] = []
        guests = foreign[i]
        for round_no in range(5):
            for k in ks:
                plan.append((k,))
            plan.append((scattered[0],))
            plan.append((scattered[1],))
            if round_no == 2:
                plan.append(own_pair)  # the only contiguous content bigram
                plan.append((scattered[0],))
                plan.append((scattered[1],))
            for guest in guests[round_no * 3:(round_no + 1) * 3]:
                plan.append((guest,))

        title_items, body_items = plan[:3], plan[3:]
        title = _render(title_items, start=i)
        body = _render(body_items, start=i + 3, sentence_every=4)
        keywords = list(ks) + [" ".join(scattered)]
        records.append(
            {
                "id": f"doc-{i:04d}",
                "title": title,
                "abstract": body,
                "keywords": keywords,
            }
        )
    return records


def _render(items, start: int, sentence_every: int | None = None) -> str:
    """Join content items with rotating stopword separators so content
    words are never contiguous unless planted as a tuple."""
    parts: list[str] = []
    for j, item in enumerate(items):
        parts.append(_SEPARATORS[(start + j) % len(_SEPARATORS)])
        parts.append(" ".join(item))
        if sentence_every and (j + 1) % sentence_every == 0:
            parts.append(".")
    return " ".join(parts)


def synthetic_gold_split(record: dict) -> tuple[list[str], list[str]]:
    """(present gold, absent gold) for a synthetic record: the scattered
    partner phrase (always the last keyword) is the absent one."""
    kws = record["keywords"]
    return kws[:-1], [kws[-1]]
