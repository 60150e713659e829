"""Seeded synthetic inputs for demos and tests."""

from __future__ import annotations

import itertools
import random

_ONSETS = ["", "b", "c", "d", "f", "g", "h", "l", "m", "n", "p", "r", "s", "t", "v", "w", "th", "st"]
_VOWELS = ["a", "e", "i", "o", "u", "ea", "ou"]
_CODAS = ["", "n", "r", "s", "t", "l", "nd", "st"]


def vocabulary(size: int) -> list[str]:
    """``size`` distinct pronounceable words, shortest first."""
    syllables = [o + v + c for o, v, c in itertools.product(_ONSETS, _VOWELS, _CODAS)]
    words: list[str] = []
    seen = set()
    for n in itertools.count(1):
        for combo in itertools.product(syllables, repeat=n):
            w = "".join(combo)
            if w not in seen:
                seen.add(w)
                words.append(w)
                if len(words) == size:
                    return words
    raise AssertionError("unreachable")


def zipf_corpus(
    n_bytes: int,
    seed: int = 0,
    vocab_size: int = 20000,
    exponent: float = 1.07,
    line_tokens: tuple[int, int] = (5, 25),
) -> list[str]:
    """Lines of Zipf-distributed tokens totalling at least ``n_bytes`` UTF-8 bytes."""
    rng = random.Random(seed)
    vocab = vocabulary(vocab_size)
    # frequent words are the short ones, as in natural text
    cum = list(itertools.accumulate(1.0 / (r ** exponent) for r in range(1, vocab_size + 1)))
    lines: list[str] = []
    total = 0
    while total < n_bytes:
        k = rng.randint(*line_tokens)
        line = " ".join(rng.choices(vocab, cum_weights=cum, k=k))
        lines.append(line)
        total += len(line.encode("utf-8")) + 1
    return lines


def random_corpus(rng: random.Random, n_docs: int, max_len: int, vocab: int) -> list[tuple[int, str]]:
    words = vocabulary(vocab)
    return [
        (i, " ".join(rng.choice(words) for _ in range(rng.randint(0, max_len))))
        for i in range(n_docs)
    ]


def random_mean_records(
    rng: random.Random, n: int, n_keys: int, lo: int = -100, hi: int = 100
) -> list[tuple[str, int]]:
    return [(f"k{rng.randrange(n_keys)}", rng.randint(lo, hi)) for _ in range(n)]
