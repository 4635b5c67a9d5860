from __future__ import annotations

import os
import random
from functools import lru_cache
from pathlib import Path

import pytest

from core.language import Language, load_language

LANG_DIR = Path(__file__).resolve().parent.parent / "languages"

# языки, на которых гоняется дифференциальное перечисление
ENUM_LANGS = ("l_ab", "l_aabb", "l_abc5", "two_or_zero_a", "contains_a", "three_a_one_b")


@lru_cache(maxsize=None)
def lang(name: str) -> Language:
    return load_language(LANG_DIR / f"{name}.lang")


def scale() -> int:
    """INFIX_TEST_SCALE: множитель числа слов в тяжёлых тестах (по умолчанию 1)."""
    return max(1, int(os.getenv("INFIX_TEST_SCALE", "1")))


def random_word(rng: random.Random, language: Language, n: int, neutral_ratio: float = 0.3):
    k = len(language.alphabet)
    neutral = sorted(language.neutral)
    other = [a for a in range(k) if a not in language.neutral]
    out = []
    for _ in range(n):
        if neutral and (not other or rng.random() < neutral_ratio):
            out.append(rng.choice(neutral))
        else:
            out.append(rng.choice(other))
    return out


@pytest.fixture
def load():
    return lang


@pytest.fixture
def rng():
    return random.Random(1234)
