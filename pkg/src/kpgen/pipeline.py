"""End-to-end keyphrase pipeline as one scikit-learn style estimator.

``fit`` builds everything from raw documents alone: present candidates are
pooled into the phrase bank, corpus statistics and word vectors are
computed, silver labels are selected by the fused ranker, and (unless
disabled) the seq2seq generator is trained on them.  ``predict`` then
produces ranked present/absent keyphrase lists for any documents, pooling
extracted, bank-drawn and generated candidates through the same ranker.

Ablation switches: ``use_generator=False`` drops the generation model
(bank-only variant); ``use_tfidf=False`` ranks on embedding similarity
alone.
"""

from __future__ import annotations

import logging

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import as_documents, check_seed
from .candidates import count_contiguous, extract_present
from .embedding import EmbedConfig, load_vectors, train_skipgram
from .generator import Seq2SeqGenerator
from .phrasebank import build as build_bank
from .phrasebank import draw_absent
from .ranking import CorpusStats, RankInput, make_silver, rank
from .textproc import Document, stem, stopwords

logger = logging.getLogger(__name__)


class KeyphrasePipeline(BaseEstimator):
    def __init__(
        self,
        max_phrase_len: int = 5,
        use_tfidf: bool = True,
        use_generator: bool = True,
        top_present: int = 5,
        top_absent: int = 5,
        max_output_per_list: int = 50,
        vectors_path=None,
        embed_dim: int = 100,
        embed_window: int = 5,
        embed_negatives: int = 5,
        embed_epochs: int = 8,
        embed_min_count: int = 1,
        embed_learning_rate: float = 0.025,
        gen_vocab_size: int = 50000,
        gen_emb_dim: int = 64,
        gen_hidden: int = 64,
        gen_max_src_len: int = 512,
        gen_learning_rate: float = 0.001,
        gen_lr_decay: float = 0.8,
        gen_lr_decay_every: int = 5,
        gen_epochs: int = 20,
        gen_batch_size: int = 32,
        gen_beam_width: int = 20,
        gen_max_phrase_len: int = 6,
        gen_bias_factor: float = 2.0,
        gen_length_norm: float = 1.0,
        seed: int = 0,
    ):
        self.max_phrase_len = max_phrase_len
        self.use_tfidf = use_tfidf
        self.use_generator = use_generator
        self.top_present = top_present
        self.top_absent = top_absent
        self.max_output_per_list = max_output_per_list
        self.vectors_path = vectors_path
        self.embed_dim = embed_dim
        self.embed_window = embed_window
        self.embed_negatives = embed_negatives
        self.embed_epochs = embed_epochs
        self.embed_min_count = embed_min_count
        self.embed_learning_rate = embed_learning_rate
        self.gen_vocab_size = gen_vocab_size
        self.gen_emb_dim = gen_emb_dim
        self.gen_hidden = gen_hidden
        self.gen_max_src_len = gen_max_src_len
        self.gen_learning_rate = gen_learning_rate
        self.gen_lr_decay = gen_lr_decay
        self.gen_lr_decay_every = gen_lr_decay_every
        self.gen_epochs = gen_epochs
        self.gen_batch_size = gen_batch_size
        self.gen_beam_width = gen_beam_width
        self.gen_max_phrase_len = gen_max_phrase_len
        self.gen_bias_factor = gen_bias_factor
        self.gen_length_norm = gen_length_norm
        self.seed = seed

    def fit(self, X, y=None):
        seed = check_seed(self.seed)
        docs = as_documents(X)
        self.bank_ = build_bank(docs, max_len=self.max_phrase_len)
        self.stats_ = CorpusStats.from_corpus(docs, self.bank_)
        if self.vectors_path is not None:
            self.table_ = load_vectors(self.vectors_path)
        else:
            self.table_ = train_skipgram(
                docs,
                EmbedConfig(
                    dim=self.embed_dim,
                    window=self.embed_window,
                    negatives=self.embed_negatives,
                    epochs=self.embed_epochs,
                    min_count=self.embed_min_count,
                    learning_rate=self.embed_learning_rate,
                ),
                seed=seed,
            )
        self.silver_ = make_silver(
            docs,
            self.bank_,
            self.table_,
            self.stats_,
            top_present=self.top_present,
            top_absent=self.top_absent,
            use_tfidf=self.use_tfidf,
        )
        if self.use_generator and not self.silver_:
            logger.warning(
                "no silver pairs could be selected; continuing without the "
                "generation model"
            )
            self.generator_ = None
        elif self.use_generator:
            by_id = {d.id: d for d in docs}
            pairs_X = [by_id[p.doc_id] for p in self.silver_]
            pairs_y = [[w.casefold() for w in p.surface.split(" ")] for p in self.silver_]
            self.generator_ = Seq2SeqGenerator(
                vocab_size=self.gen_vocab_size,
                emb_dim=self.gen_emb_dim,
                hidden_size=self.gen_hidden,
                max_src_len=self.gen_max_src_len,
                learning_rate=self.gen_learning_rate,
                lr_decay=self.gen_lr_decay,
                lr_decay_every=self.gen_lr_decay_every,
                epochs=self.gen_epochs,
                batch_size=self.gen_batch_size,
                beam_width=self.gen_beam_width,
                max_phrase_len=self.gen_max_phrase_len,
                bias_factor=self.gen_bias_factor,
                length_norm=self.gen_length_norm,
                seed=seed + 1,
            ).fit(pairs_X, pairs_y)
        else:
            self.generator_ = None
        return self

    def predict(self, X) -> list[dict]:
        """Ranked keyphrases per document:
        ``{"id", "present": [...], "absent": [...]}``."""
        check_is_fitted(self, "bank_")
        return [self.predict_document(doc) for doc in as_documents(X)]

    def predict_document(self, doc: Document) -> dict:
        present_pool = list(extract_present(doc, max_len=self.max_phrase_len))
        absent_pool = list(draw_absent(self.bank_, doc))
        if self.generator_ is not None:
            gen_present, gen_absent = self._generated_candidates(doc)
            present_pool.extend(gen_present)
            absent_pool.extend(gen_absent)
        ranked_present, ranked_absent = rank(
            doc,
            present_pool,
            absent_pool,
            self.table_,
            self.stats_,
            use_tfidf=self.use_tfidf,
        )
        # Extracted and generated candidates can share a stem key under
        # different surface forms; the lists are sorted, so keeping the
        # first occurrence keeps the higher-scoring duplicate.
        cap = self.max_output_per_list
        return {
            "id": doc.id,
            "present": [s.surface for s in _dedup_scored(ranked_present)[:cap]],
            "absent": [s.surface for s in _dedup_scored(ranked_absent)[:cap]],
        }

    def _generated_candidates(self, doc: Document):
        """Generated phrases, classified by contiguous occurrence.

        The extractor's candidate hygiene applies here too: phrases with
        stopword, punctuation or pure-digit tokens are discarded.
        """
        present, absent = [], []
        sw = stopwords()
        for g in self.generator_.generate(doc):
            if any(w in sw or not any(ch.isalpha() for ch in w) for w in g.words):
                continue
            stems = tuple(stem(w) for w in g.words)
            item = RankInput(
                surface=" ".join(g.words),
                stems=stems,
                stem_key=g.stem_key,
                words=g.words,
            )
            if count_contiguous(doc, stems) > 0:
                present.append(item)
            else:
                absent.append(item)
        return present, absent


def _dedup_scored(scored):
    seen = set()
    out = []
    for s in scored:
        if s.stem_key in seen:
            continue
        seen.add(s.stem_key)
        out.append(s)
    return out
