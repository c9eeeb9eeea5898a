"""Present/absent keyphrase evaluation with stemmed matching.

Unified prediction lists are split into present and absent sublists by
checking whether a phrase's stemmed token sequence occurs contiguously in
the document (relative order within each sublist preserved).  Matching
against gold is on stem keys.  Conventions, also recorded in every report:
a document contributes to a metric only when it has at least one gold
phrase of that type, and precision of an empty truncated list is 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .candidates import count_contiguous
from .textproc import Document, stem_phrase_text

CONVENTIONS = (
    "macro average over documents with >=1 gold phrase of the metric's type; "
    "P@k := 0 for an empty truncated list; matching on Porter stem keys; "
    "duplicate predictions collapse to their first occurrence"
)

PRESENT_METRICS = ("present_f1@5", "present_f1@10", "present_f1@O")
ABSENT_METRICS = ("absent_r@10", "absent_r@20")


def phrase_key(phrase: str) -> str | None:
    """Stem key of a raw phrase string, or None if it has no word tokens."""
    try:
        return stem_phrase_text(phrase)
    except ValueError:
        return None


def dedup_keys(phrases) -> list[tuple[str, str]]:
    """(phrase, key) pairs with later stem-duplicates dropped."""
    out = []
    seen = set()
    for p in phrases:
        key = phrase_key(p)
        if key is None or key in seen:
            continue
        seen.add(key)
        out.append((p, key))
    return out


def split_present_absent(doc: Document, phrases) -> tuple[list[str], list[str]]:
    """Split a ranked unified list by contiguous stemmed occurrence in the
    document; order within each list is preserved."""
    present, absent = [], []
    for p in phrases:
        key = phrase_key(p)
        if key is None:
            continue
        if count_contiguous(doc, key.split(" ")) > 0:
            present.append(p)
        else:
            absent.append(p)
    return present, absent


def precision_recall_at_k(pred_keys: list[str], gold_keys: set[str], k: int) -> tuple[float, float]:
    """P@k and R@k with truncation at min(k, len(predictions))."""
    top = pred_keys[:k]
    hits = sum(1 for key in top if key in gold_keys)
    p = hits / len(top) if top else 0.0
    r = hits / len(gold_keys) if gold_keys else 0.0
    return p, r


def f1(p: float, r: float) -> float:
    return 0.0 if p + r == 0 else 2 * p * r / (p + r)


def f1_at_k(pred_keys: list[str], gold_keys: set[str], k: int) -> float:
    p, r = precision_recall_at_k(pred_keys, gold_keys, k)
    return f1(p, r)


def f1_at_o(pred_keys: list[str], gold_keys: set[str]) -> float:
    """F1 at a cutoff equal to the gold set size."""
    return f1_at_k(pred_keys, gold_keys, len(gold_keys))


@dataclass(frozen=True)
class EvalInput:
    doc: Document
    predicted: list[str]  # unified ranked list
    gold: list[str]


@dataclass(frozen=True)
class DocScores:
    doc_id: str
    n_gold_present: int
    n_gold_absent: int
    scores: dict[str, float]  # only the metrics this document is eligible for


@dataclass
class EvalReport:
    dataset: str
    macro: dict[str, float]
    eligible_docs: dict[str, int]
    per_doc: list[DocScores] = field(default_factory=list)
    conventions: str = CONVENTIONS


def score_document(doc: Document, predicted, gold) -> DocScores:
    pred_present, pred_absent = split_present_absent(doc, predicted)
    pp_keys = [k for _, k in dedup_keys(pred_present)]
    pa_keys = [k for _, k in dedup_keys(pred_absent)]
    gold_present, gold_absent = split_present_absent(doc, gold)
    gp_keys = {k for _, k in dedup_keys(gold_present)}
    ga_keys = {k for _, k in dedup_keys(gold_absent)}

    scores: dict[str, float] = {}
    if gp_keys:
        scores["present_f1@5"] = f1_at_k(pp_keys, gp_keys, 5)
        scores["present_f1@10"] = f1_at_k(pp_keys, gp_keys, 10)
        scores["present_f1@O"] = f1_at_o(pp_keys, gp_keys)
    if ga_keys:
        _, r10 = precision_recall_at_k(pa_keys, ga_keys, 10)
        _, r20 = precision_recall_at_k(pa_keys, ga_keys, 20)
        scores["absent_r@10"] = r10
        scores["absent_r@20"] = r20
    return DocScores(
        doc_id=doc.id,
        n_gold_present=len(gp_keys),
        n_gold_absent=len(ga_keys),
        scores=scores,
    )


def evaluate_corpus(inputs: list[EvalInput], dataset: str = "corpus") -> EvalReport:
    """Macro-averaged report over all eligible documents; errors on an
    empty corpus."""
    if not inputs:
        raise ValueError("cannot evaluate an empty corpus")
    per_doc = [score_document(i.doc, i.predicted, i.gold) for i in inputs]
    macro: dict[str, float] = {}
    eligible: dict[str, int] = {}
    for metric in PRESENT_METRICS + ABSENT_METRICS:
        values = [d.scores[metric] for d in per_doc if metric in d.scores]
        eligible[metric] = len(values)
        if values:
            macro[metric] = sum(values) / len(values)
    return EvalReport(dataset=dataset, macro=macro, eligible_docs=eligible, per_doc=per_doc)


def report_to_csv(report: EvalReport) -> str:
    lines = ["dataset,metric,value"]
    for metric in PRESENT_METRICS + ABSENT_METRICS:
        if metric in report.macro:
            lines.append(f"{report.dataset},{metric},{report.macro[metric]!r}")
    return "\n".join(lines) + "\n"


def render_table(report: EvalReport) -> str:
    width = max(len(m) for m in PRESENT_METRICS + ABSENT_METRICS)
    lines = [
        f"dataset: {report.dataset}",
        f"{'metric'.ljust(width)}  value    docs",
    ]
    for metric in PRESENT_METRICS + ABSENT_METRICS:
        if metric in report.macro:
            lines.append(
                f"{metric.ljust(width)}  {report.macro[metric]:.4f}   {report.eligible_docs[metric]}"
            )
        else:
            lines.append(f"{metric.ljust(width)}  undefined    0")
    lines.append(f"conventions: {report.conventions}")
    return "\n".join(lines) + "\n"
