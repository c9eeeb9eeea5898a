"""Pin the published default hyperparameters so refactors cannot drift them."""

from kpgen.beam import DecodeConfig
from kpgen.generator import Seq2SeqGenerator
from kpgen.seq2seq import ModelConfig
from kpgen.training import TrainConfig


def test_model_defaults():
    cfg = ModelConfig(vocab_size=100)
    assert cfg.emb_dim == 200
    assert cfg.hidden == 256
    assert cfg.max_src_len == 512


def test_decode_defaults():
    cfg = DecodeConfig()
    assert cfg.beam_width == 20
    assert cfg.max_phrase_len == 6
    assert cfg.bias_factor == 2.0
    assert cfg.length_norm == 1.0


def test_train_defaults():
    cfg = TrainConfig()
    assert cfg.learning_rate == 0.001
    assert cfg.lr_decay == 0.8
    assert cfg.lr_decay_every == 5


def test_generator_defaults():
    gen = Seq2SeqGenerator()
    assert gen.vocab_size == 50000
    assert gen.hidden_size == 256
    assert gen.emb_dim == 200
    assert gen.max_src_len == 512
    assert gen.beam_width == 20
    assert gen.bias_factor == 2.0


def test_vocab_build_default_cap():
    import inspect

    from kpgen.vocab import Vocab

    assert inspect.signature(Vocab.build).parameters["max_words"].default == 50000


def test_embed_defaults():
    from kpgen.embedding import EmbedConfig

    cfg = EmbedConfig()
    assert cfg.dim == 300
    assert cfg.window == 5
    assert cfg.negatives == 5
