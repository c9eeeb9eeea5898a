import numpy as np
import pytest

from kpgen.textproc import Document, make_document


@pytest.fixture
def tiny_docs() -> list[Document]:
    return [
        make_document("d1", "Data Mining Tools", "the data mining of large data sets ."),
        make_document("d2", "Neural Network Models", "a neural network for data mining ."),
        make_document("d3", "Information Security", "the security breach was recent ."),
        make_document(
            "d4",
            "Management Systems",
            "an information system with security management in the enterprise .",
        ),
    ]


def random_word(rng: np.random.Generator, alphabet="abcdefgh", lo=3, hi=8) -> str:
    n = int(rng.integers(lo, hi))
    return "".join(alphabet[i] for i in rng.integers(0, len(alphabet), n))


def random_corpus(rng: np.random.Generator, n_docs: int, vocab_size: int = 30):
    """Small random documents over a tight vocabulary (lots of stem
    collisions on purpose)."""
    vocab = sorted({random_word(rng) for _ in range(vocab_size)})
    stops = ["the", "of", "and", "is", "a"]
    docs = []
    for i in range(n_docs):
        n_tokens = int(rng.integers(5, 40))
        words = []
        for _ in range(n_tokens):
            if rng.random() < 0.35:
                words.append(stops[int(rng.integers(0, len(stops)))])
            else:
                words.append(vocab[int(rng.integers(0, len(vocab)))])
        docs.append(make_document(f"r{i}", "", " ".join(words)))
    return docs
