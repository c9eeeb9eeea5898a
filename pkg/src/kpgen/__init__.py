"""Unsupervised keyphrase extraction and generation.

Builds a corpus-wide phrase bank of present candidates, draws absent
candidates by stemmed partial matching through an inverted index, ranks
everything with a fused TF-IDF / embedding-similarity score, and trains a
small attention seq2seq generator on its own top-ranked silver labels,
decoded with input-biased beam search.
"""

from .beam import DecodeConfig, biased_beam_search
from .candidates import CandidatePhrase, count_contiguous, extract_present
from .embedding import (
    EmbedConfig,
    SkipGramEmbedder,
    VectorTable,
    embed_document,
    embed_phrase,
    load_vectors,
    save_vectors,
    train_skipgram,
)
from .evaluation import EvalInput, EvalReport, evaluate_corpus
from .generator import Seq2SeqGenerator
from .phrasebank import PhraseBank, coverage_stats, draw_absent
from .phrasebank import build as build_phrase_bank
from .pipeline import KeyphrasePipeline
from .ranking import CorpusStats, make_silver, rank
from .seq2seq import ModelConfig, Seq2SeqModel
from .textproc import Document, Token, make_document, stem, stem_phrase, tokenize
from .training import TrainConfig, train
from .vocab import Vocab

__version__ = "0.1.0"

__all__ = [
    "CandidatePhrase",
    "CorpusStats",
    "DecodeConfig",
    "Document",
    "EmbedConfig",
    "EvalInput",
    "EvalReport",
    "KeyphrasePipeline",
    "ModelConfig",
    "PhraseBank",
    "Seq2SeqGenerator",
    "Seq2SeqModel",
    "SkipGramEmbedder",
    "Token",
    "TrainConfig",
    "VectorTable",
    "Vocab",
    "biased_beam_search",
    "build_phrase_bank",
    "count_contiguous",
    "coverage_stats",
    "draw_absent",
    "embed_document",
    "embed_phrase",
    "evaluate_corpus",
    "extract_present",
    "load_vectors",
    "make_document",
    "make_silver",
    "rank",
    "save_vectors",
    "stem",
    "stem_phrase",
    "tokenize",
    "train",
    "train_skipgram",
]
