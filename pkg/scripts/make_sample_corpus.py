#!/usr/bin/env python3
"""Regenerate the packaged synthetic sample corpus (byte-identical)."""

from pathlib import Path

from kpgen.datasets import build_synthetic_corpus, write_jsonl

out = Path(__file__).resolve().parents[1] / "src" / "kpgen" / "resources" / "sample_corpus.jsonl"
write_jsonl(build_synthetic_corpus(200), out)
print(f"wrote {out}")
