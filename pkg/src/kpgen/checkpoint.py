"""Versioned checkpoint container for the generation model.

A checkpoint is a numpy ``.npz``-compatible archive (no pickling) holding
a JSON header (magic string, format version, model config echo), every
named parameter tensor, and optionally the vocabulary word list.  Entries
are written with zeroed zip metadata so identical models produce
byte-identical files.  Round-trips reproduce decode outputs exactly;
truncated or mismatched files error out instead of producing a partial
model.
"""

from __future__ import annotations

import io
import json
import zipfile
from dataclasses import asdict

import numpy as np
from numpy.lib import format as npformat

from .seq2seq import ModelConfig, Seq2SeqModel
from .vocab import RESERVED, Vocab

MAGIC = "kpgen-seq2seq"
FORMAT_VERSION = 1


class CheckpointError(Exception):
    pass


def _write_stable_npz(path, arrays: dict[str, np.ndarray]) -> None:
    """np.load-compatible zip with fixed entry metadata (byte-stable)."""
    with zipfile.ZipFile(path, "w", compression=zipfile.ZIP_STORED) as zf:
        for name in sorted(arrays):
            buf = io.BytesIO()
            npformat.write_array(buf, np.asanyarray(arrays[name]), allow_pickle=False)
            info = zipfile.ZipInfo(name + ".npy", date_time=(1980, 1, 1, 0, 0, 0))
            info.compress_type = zipfile.ZIP_STORED
            info.external_attr = 0o644 << 16
            zf.writestr(info, buf.getvalue())


def save_checkpoint(model: Seq2SeqModel, path, vocab: Vocab | None = None) -> None:
    meta = {
        "magic": MAGIC,
        "version": FORMAT_VERSION,
        "config": asdict(model.config),
    }
    arrays = {f"param/{k}": v for k, v in model.params.items()}
    arrays["meta"] = np.array(json.dumps(meta, sort_keys=True))
    if vocab is not None:
        arrays["vocab"] = np.array(list(vocab.words[len(RESERVED):]), dtype=str)
    _write_stable_npz(path, arrays)


def load_checkpoint(path, expected_vocab_size: int | None = None):
    """Load (model, vocab-or-None).  ``expected_vocab_size`` lets callers
    refuse checkpoints trained against a different vocabulary."""
    try:
        with np.load(path, allow_pickle=False) as data:
            has_meta = "meta" in data.files
            meta = json.loads(str(data["meta"])) if has_meta else None
            arrays = {k: data[k] for k in data.files if k.startswith("param/")}
            vocab_words = data["vocab"].tolist() if "vocab" in data.files else None
    except (zipfile.BadZipFile, OSError, ValueError, KeyError) as exc:
        raise CheckpointError(f"{path}: corrupt or truncated checkpoint ({exc})") from exc
    if meta is None:
        raise CheckpointError(f"{path}: not a checkpoint (no header)")

    if meta.get("magic") != MAGIC:
        raise CheckpointError(f"{path}: bad magic {meta.get('magic')!r}")
    if meta.get("version") != FORMAT_VERSION:
        raise CheckpointError(
            f"{path}: format version {meta.get('version')} unsupported "
            f"(expected {FORMAT_VERSION})"
        )
    config = ModelConfig(**meta["config"])
    if expected_vocab_size is not None and config.vocab_size != expected_vocab_size:
        raise CheckpointError(
            f"{path}: checkpoint vocabulary size {config.vocab_size} does not "
            f"match expected {expected_vocab_size}"
        )
    params = {k[len("param/"):]: v for k, v in arrays.items()}
    model = Seq2SeqModel(config, params)
    vocab = Vocab(vocab_words) if vocab_words is not None else None
    if vocab is not None and len(vocab) != config.vocab_size:
        raise CheckpointError(
            f"{path}: stored vocabulary has {len(vocab)} entries, config "
            f"says {config.vocab_size}"
        )
    return model, vocab
