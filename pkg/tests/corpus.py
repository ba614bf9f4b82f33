"""Seeded random inputs shared by the tests.

The corpus parameters are fixed here once; tests must not filter it.
"""

from __future__ import annotations

import random
from functools import lru_cache

from stripcut.braids import BraidWord, Letter
from stripcut.curves import act, round_pants

CORPUS_SEED = 20240601
CORPUS_SIZE = 500


def random_word(rng: random.Random, n: int, length: int, bands: float = 0.0) -> BraidWord:
    letters = []
    for _ in range(length):
        i = rng.randint(1, n - 1)
        j = rng.randint(i + 1, n)
        e = rng.choice((1, -1))
        if j > i + 1 and rng.random() < bands:
            letters.append(Letter.band(i, j, e))
        else:
            letters.append(Letter.sigma(i, e))
    return BraidWord(n, tuple(letters))


@lru_cache(maxsize=None)
def pants_corpus(seed: int = CORPUS_SEED, size: int = CORPUS_SIZE, n_max: int = 6):
    """``[(word, act(word, round_pants(n)))]`` with 3 <= n <= n_max, words of length <= 7."""
    rng = random.Random(seed)
    out = []
    for _ in range(size):
        n = rng.randint(3, n_max)
        w = random_word(rng, n, rng.randint(0, 7), bands=0.3)
        out.append((w, act(w, round_pants(n))))
    return tuple(out)
