"""Command-line pipeline: each stage reads its predecessors' artifacts and
writes its own, so stages are individually re-runnable and a fixed seed
reproduces every artifact byte for byte.

Stages: ingest -> build-bank -> embed -> rank / make-silver -> train-gen
-> generate -> evaluate, plus `sample-corpus` (writes the packaged
synthetic corpus) and `coverage` (absent-keyphrase corpus statistics).
Every command accepts ``--config FILE`` (a JSON object of flag defaults;
explicit flags win).
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import datasets, embedding, evaluation, phrasebank, ranking
from .candidates import extract_present
from .generator import Seq2SeqGenerator
from .pipeline import KeyphrasePipeline
from .ranking import CorpusStats
from .textproc import make_document


class StageError(Exception):
    pass


def _require(path, produced_by: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise StageError(
            f"missing input artifact {p} (produce it with `kpgen {produced_by}`)"
        )
    return p


def _load_store(path):
    """Documents from an ingest store (tokenized) or raw corpus JSONL."""
    result = datasets.read_corpus_jsonl(path)
    docs = []
    for r in result.records:
        docs.append(make_document(r["id"], r["title"], r["abstract"]))
    keywords = {r["id"]: r["keywords"] for r in result.records}
    return docs, keywords


# ----------------------------------------------------------------------
# subcommand implementations
# ----------------------------------------------------------------------

def cmd_ingest(args) -> int:
    result = datasets.read_corpus_jsonl(args.corpus)
    for lineno, reason in result.skipped:
        print(f"warning: {args.corpus}:{lineno}: {reason} (skipped)", file=sys.stderr)
    if not result.records:
        print(f"error: {args.corpus}: no valid documents", file=sys.stderr)
        return 1
    store = []
    for r in result.records:
        doc = make_document(r["id"], r["title"], r["abstract"])
        store.append(
            {
                "id": r["id"],
                "title": " ".join(t.surface for t in doc.title),
                "abstract": " ".join(t.surface for t in doc.body),
                "keywords": r["keywords"],
            }
        )
    datasets.write_jsonl(store, args.out)
    print(f"ingested {len(store)} documents ({len(result.skipped)} skipped) -> {args.out}")
    return 0


def cmd_sample_corpus(args) -> int:
    records = datasets.build_synthetic_corpus(n_docs=args.docs)
    datasets.write_jsonl(records, args.out)
    print(f"wrote {len(records)} synthetic documents -> {args.out}")
    return 0


def cmd_build_bank(args) -> int:
    docs, _ = _load_store(_require(args.store, "ingest"))
    bank = phrasebank.build(docs, max_len=args.max_phrase_len)
    phrasebank.save(bank, args.out)
    print(f"phrase bank: {len(bank)} entries from {bank.doc_count} documents -> {args.out}")
    return 0


def cmd_embed(args) -> int:
    docs, _ = _load_store(_require(args.store, "ingest"))
    cfg = embedding.EmbedConfig(
        dim=args.dim,
        window=args.window,
        negatives=args.negatives,
        epochs=args.epochs,
        min_count=args.min_count,
        learning_rate=args.learning_rate,
    )
    table = embedding.train_skipgram(docs, cfg, seed=args.seed)
    embedding.save_vectors(table, args.out)
    print(f"trained {len(table.vocab)} x {table.dim} vectors -> {args.out}")
    return 0


def _ranking_inputs(args):
    docs, keywords = _load_store(_require(args.store, "ingest"))
    bank = phrasebank.load(_require(args.bank, "build-bank"))
    table = embedding.load_vectors(_require(args.vectors, "embed"))
    if getattr(args, "train_store", None):
        train_docs, _ = _load_store(_require(args.train_store, "ingest"))
    else:
        train_docs = docs
    stats = CorpusStats.from_corpus(train_docs, bank)
    return docs, keywords, bank, table, stats


def cmd_rank(args) -> int:
    docs, _, bank, table, stats = _ranking_inputs(args)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        for doc in docs:
            present, absent = ranking.rank(
                doc,
                extract_present(doc, max_len=args.max_phrase_len),
                phrasebank.draw_absent(bank, doc),
                table,
                stats,
                use_tfidf=not args.no_tfidf,
            )
            fh.write(
                json.dumps(
                    {
                        "id": doc.id,
                        "present": [
                            {"phrase": s.surface, "score": s.fused}
                            for s in present[: args.top]
                        ],
                        "absent": [
                            {"phrase": s.surface, "score": s.fused}
                            for s in absent[: args.top]
                        ],
                    },
                    ensure_ascii=False,
                )
                + "\n"
            )
    print(f"ranked {len(docs)} documents -> {args.out}")
    return 0


def cmd_make_silver(args) -> int:
    docs, _, bank, table, stats = _ranking_inputs(args)
    pairs = ranking.make_silver(
        docs,
        bank,
        table,
        stats,
        top_present=args.top_present,
        top_absent=args.top_absent,
        use_tfidf=not args.no_tfidf,
    )
    ranking.save_silver(pairs, args.out)
    print(f"{len(pairs)} silver pairs -> {args.out}")
    return 0


def cmd_train_gen(args) -> int:
    docs, _ = _load_store(_require(args.store, "ingest"))
    pairs = ranking.load_silver(_require(args.silver, "make-silver"))
    by_id = {d.id: d for d in docs}
    missing = sorted({p.doc_id for p in pairs if p.doc_id not in by_id})
    if missing:
        print(f"error: silver pairs reference unknown documents: {missing[:5]}", file=sys.stderr)
        return 1
    X = [by_id[p.doc_id] for p in pairs]
    y = [[w.casefold() for w in p.surface.split(" ")] for p in pairs]
    gen = Seq2SeqGenerator(
        vocab_size=args.vocab_size,
        emb_dim=args.emb_dim,
        hidden_size=args.hidden,
        max_src_len=args.max_src_len,
        learning_rate=args.learning_rate,
        lr_decay=args.lr_decay,
        lr_decay_every=args.lr_decay_every,
        epochs=args.epochs,
        batch_size=args.batch_size,
        beam_width=args.beam,
        max_phrase_len=args.max_phrase_len,
        bias_factor=args.bias_factor,
        seed=args.seed,
    )
    gen.fit(X, y, checkpoint_dir=args.checkpoint_dir, checkpoint_every=args.checkpoint_every)
    gen.save(args.out)
    if args.loss_log:
        from .training import write_loss_csv

        write_loss_csv(gen.loss_curve_, args.loss_log)
    final = gen.loss_curve_[-1].mean_nll if gen.loss_curve_ else float("nan")
    print(f"trained generator on {len(pairs)} pairs (final nll {final:.4f}) -> {args.out}")
    return 0


def cmd_generate(args) -> int:
    docs, _, bank, table, stats = _ranking_inputs(args)
    pipe = KeyphrasePipeline(
        max_phrase_len=args.max_phrase_len,
        use_tfidf=not args.no_tfidf,
        use_generator=not args.no_genmodel,
        max_output_per_list=args.top,
        gen_beam_width=args.beam,
        gen_bias_factor=args.bias_factor,
    )
    pipe.bank_ = bank
    pipe.table_ = table
    pipe.stats_ = stats
    if args.no_genmodel:
        pipe.generator_ = None
    else:
        model_path = _require(args.model, "train-gen")
        gen = Seq2SeqGenerator(
            beam_width=args.beam,
            max_phrase_len=args.gen_phrase_len,
            bias_factor=args.bias_factor,
        )
        gen.load_model(model_path)
        pipe.generator_ = gen
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        for doc in docs:
            row = pipe.predict_document(doc)
            fh.write(json.dumps(row, ensure_ascii=False) + "\n")
    print(f"generated keyphrases for {len(docs)} documents -> {args.out}")
    return 0


def cmd_evaluate(args) -> int:
    docs, keywords = _load_store(_require(args.gold, "ingest"))
    by_id = {d.id: d for d in docs}
    inputs = []
    with open(_require(args.predictions, "generate"), "r", encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            row = json.loads(line)
            doc = by_id.get(str(row["id"]))
            if doc is None:
                print(f"warning: prediction for unknown id {row['id']!r} ignored", file=sys.stderr)
                continue
            unified = list(row.get("present", [])) + list(row.get("absent", []))
            inputs.append(
                evaluation.EvalInput(doc=doc, predicted=unified, gold=keywords.get(doc.id, []))
            )
    if not inputs:
        print("error: no predictions matched the gold corpus", file=sys.stderr)
        return 1
    report = evaluation.evaluate_corpus(inputs, dataset=args.dataset)
    csv_text = evaluation.report_to_csv(report)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(csv_text)
    table_text = evaluation.render_table(report)
    if args.table:
        with open(args.table, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(table_text)
    print(table_text, end="")
    print(f"report -> {args.out}")
    return 0


def cmd_coverage(args) -> int:
    docs, keywords = _load_store(_require(args.corpus, "ingest"))
    if args.bank:
        bank = phrasebank.load(_require(args.bank, "build-bank"))
    else:
        bank = phrasebank.build(docs)
    labeled = [(d, keywords.get(d.id, [])) for d in docs]
    stats = phrasebank.coverage_stats(bank, labeled)
    if stats.absent_gold_count == 0:
        print("absent gold keyphrases: 0; rates undefined")
        return 0
    print(f"absent gold keyphrases: {stats.absent_gold_count}")
    print(f"bank_hit_rate: {stats.bank_hit_rate:.4f}")
    print(f"token_hit_rate: {stats.token_hit_rate:.4f}")
    return 0


# ----------------------------------------------------------------------
# argument plumbing
# ----------------------------------------------------------------------

def _add_config_arg(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="JSON file of flag defaults (explicit flags win)")


def _apply_config(args: argparse.Namespace, argv: list[str]) -> argparse.Namespace:
    """Overlay config-file values onto parsed args, except where the flag
    was given explicitly on the command line."""
    if not getattr(args, "config", None):
        return args
    with open(args.config, "r", encoding="utf-8") as fh:
        cfg = json.load(fh)
    if not isinstance(cfg, dict):
        raise StageError(f"{args.config}: config must be a JSON object")
    explicit = {
        a[2:].split("=", 1)[0].replace("-", "_")
        for a in argv
        if a.startswith("--")
    }
    known = vars(args)
    for key, value in cfg.items():
        if key not in known:
            raise StageError(f"{args.config}: unknown config key {key!r}")
        if key in explicit:
            continue
        setattr(args, key, value)
    return args


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kpgen",
        description="Unsupervised keyphrase extraction and generation pipeline.",
        allow_abbrev=False,
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="validate and tokenize a JSONL corpus")
    p.add_argument("corpus", help="JSONL with id/title/abstract[/keywords]")
    p.add_argument("--out", required=True, help="tokenized corpus store (JSONL)")
    _add_config_arg(p)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("sample-corpus", help="write the packaged synthetic corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--docs", type=int, default=200)
    _add_config_arg(p)
    p.set_defaults(func=cmd_sample_corpus)

    p = sub.add_parser("build-bank", help="pool present candidates into a phrase bank")
    p.add_argument("store", help="corpus store from `ingest`")
    p.add_argument("--out", required=True, help="phrase bank TSV")
    p.add_argument("--max-phrase-len", type=int, default=5)
    _add_config_arg(p)
    p.set_defaults(func=cmd_build_bank)

    p = sub.add_parser("embed", help="train in-corpus skip-gram word vectors")
    p.add_argument("store")
    p.add_argument("--out", required=True, help="text vector file")
    p.add_argument("--dim", type=int, default=100)
    p.add_argument("--window", type=int, default=5)
    p.add_argument("--negatives", type=int, default=5)
    p.add_argument("--epochs", type=int, default=8)
    p.add_argument("--min-count", type=int, default=1)
    p.add_argument("--learning-rate", type=float, default=0.025)
    p.add_argument("--seed", type=int, default=0)
    _add_config_arg(p)
    p.set_defaults(func=cmd_embed)

    def ranking_io(p, needs_out=True):
        p.add_argument("store")
        p.add_argument("--bank", required=True)
        p.add_argument("--vectors", required=True)
        p.add_argument("--train-store",
                       help="corpus store the bank/vectors were built from "
                            "(defaults to the positional store; set it when "
                            "scoring unseen documents)")
        if needs_out:
            p.add_argument("--out", required=True)
        p.add_argument("--no-tfidf", action="store_true",
                       help="rank by embedding similarity only")
        p.add_argument("--max-phrase-len", type=int, default=5)

    p = sub.add_parser("rank", help="rank present and absent candidates per document")
    ranking_io(p)
    p.add_argument("--top", type=int, default=20)
    _add_config_arg(p)
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("make-silver", help="emit top-ranked silver training pairs")
    ranking_io(p)
    p.add_argument("--top-present", type=int, default=5)
    p.add_argument("--top-absent", type=int, default=5)
    _add_config_arg(p)
    p.set_defaults(func=cmd_make_silver)

    p = sub.add_parser("train-gen", help="train the seq2seq generator on silver pairs")
    p.add_argument("store")
    p.add_argument("--silver", required=True)
    p.add_argument("--out", required=True, help="model checkpoint (.npz)")
    p.add_argument("--loss-log", help="per-epoch loss CSV")
    p.add_argument("--vocab-size", type=int, default=50000)
    p.add_argument("--emb-dim", type=int, default=64)
    p.add_argument("--hidden", type=int, default=64)
    p.add_argument("--max-src-len", type=int, default=512)
    p.add_argument("--learning-rate", type=float, default=0.001)
    p.add_argument("--lr-decay", type=float, default=0.8)
    p.add_argument("--lr-decay-every", type=int, default=5)
    p.add_argument("--epochs", type=int, default=20)
    p.add_argument("--batch-size", type=int, default=32)
    p.add_argument("--beam", type=int, default=20)
    p.add_argument("--max-phrase-len", type=int, default=6)
    p.add_argument("--bias-factor", type=float, default=2.0)
    p.add_argument("--checkpoint-dir")
    p.add_argument("--checkpoint-every", type=int)
    p.add_argument("--seed", type=int, default=0)
    _add_config_arg(p)
    p.set_defaults(func=cmd_train_gen)

    p = sub.add_parser(
        "generate",
        help="extract + draw from bank + beam-generate, then rank one pooled list",
    )
    ranking_io(p)
    p.add_argument("--model", help="generator checkpoint from `train-gen`")
    p.add_argument("--no-genmodel", action="store_true",
                   help="bank-only variant: skip the generation model")
    p.add_argument("--beam", type=int, default=20)
    p.add_argument("--gen-phrase-len", type=int, default=6)
    p.add_argument("--bias-factor", type=float, default=2.0)
    p.add_argument("--top", type=int, default=50)
    _add_config_arg(p)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("evaluate", help="score predictions against gold keyphrases")
    p.add_argument("predictions", help="JSONL from `generate`")
    p.add_argument("--gold", required=True, help="corpus store with keywords")
    p.add_argument("--out", required=True, help="CSV report")
    p.add_argument("--table", help="also write the human-readable table")
    p.add_argument("--dataset", default="corpus")
    _add_config_arg(p)
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("coverage", help="absent-keyphrase coverage statistics")
    p.add_argument("corpus", help="corpus store with keywords")
    p.add_argument("--bank", help="optional prebuilt phrase bank")
    _add_config_arg(p)
    p.set_defaults(func=cmd_coverage)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parser.parse_args(argv)
        args = _apply_config(args, argv)
        return args.func(args)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
