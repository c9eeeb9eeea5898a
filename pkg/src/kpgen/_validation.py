"""Input coercion and validation shared by the estimator surfaces."""

from __future__ import annotations

from .textproc import Document, make_document


def as_documents(X) -> list[Document]:
    """Coerce an iterable of inputs into tokenized documents.

    Accepts :class:`Document` instances, dicts with ``id`` plus
    ``title``/``abstract`` (or ``body``/``text``), or plain strings (which
    get positional ids).  Raises ``TypeError``/``ValueError`` with the
    offending index.
    """
    docs: list[Document] = []
    seen_ids: set[str] = set()
    for i, item in enumerate(X):
        if isinstance(item, Document):
            doc = item
        elif isinstance(item, dict):
            if "id" not in item:
                raise ValueError(f"document {i}: missing 'id' field")
            body = item.get("abstract", item.get("body", item.get("text", "")))
            doc = make_document(str(item["id"]), str(item.get("title", "")), str(body))
        elif isinstance(item, str):
            doc = make_document(str(i), item)
        else:
            raise TypeError(
                f"document {i}: expected Document, dict or str, got {type(item).__name__}"
            )
        if doc.id in seen_ids:
            raise ValueError(f"document {i}: duplicate id {doc.id!r}")
        seen_ids.add(doc.id)
        docs.append(doc)
    if not docs:
        raise ValueError("empty corpus")
    return docs


def check_seed(seed) -> int:
    if not isinstance(seed, (int,)) or isinstance(seed, bool) or seed < 0:
        raise ValueError(f"seed must be a non-negative integer, got {seed!r}")
    return int(seed)
