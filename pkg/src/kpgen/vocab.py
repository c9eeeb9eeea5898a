"""Token vocabulary for the generation model."""

from __future__ import annotations

from collections import Counter

from .textproc import stem

PAD_ID, BOS_ID, EOS_ID, UNK_ID = 0, 1, 2, 3
RESERVED = ("<pad>", "<bos>", "<eos>", "<unk>")


class Vocab:
    """The most frequent corpus words plus the four reserved tokens.

    Frequency ties break lexicographically so builds are reproducible.
    """

    def __init__(self, words):
        words = tuple(words)
        self.words: tuple[str, ...] = RESERVED + words
        if len(set(self.words)) != len(self.words):
            raise ValueError("vocabulary contains duplicate words")
        self.ids: dict[str, int] = {w: i for i, w in enumerate(self.words)}
        self._stems: tuple[str, ...] | None = None

    @classmethod
    def build(cls, token_seqs, max_words: int = 50000) -> "Vocab":
        """``max_words`` counts content words; reserved tokens are extra."""
        counts = Counter()
        for seq in token_seqs:
            counts.update(seq)
        for r in RESERVED:
            counts.pop(r, None)
        ordered = sorted(counts, key=lambda w: (-counts[w], w))
        return cls(ordered[:max_words])

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.ids

    def id_of(self, word: str) -> int:
        return self.ids.get(word, UNK_ID)

    def word_of(self, idx: int) -> str:
        return self.words[idx]

    def encode(self, words, add_eos: bool = False) -> list[int]:
        ids = [self.id_of(w) for w in words]
        if add_eos:
            ids.append(EOS_ID)
        return ids

    def decode(self, ids, strip_reserved: bool = True) -> list[str]:
        out = []
        for i in ids:
            if strip_reserved and i in (PAD_ID, BOS_ID, EOS_ID):
                continue
            out.append(self.words[i])
        return out

    def stems(self) -> tuple[str, ...]:
        """Porter stems aligned with ids; reserved tokens get empty stems."""
        if self._stems is None:
            self._stems = tuple(
                "" if i < len(RESERVED) else stem(w)
                for i, w in enumerate(self.words)
            )
        return self._stems
