import random

import pytest

from core.adhoc_enum import (
    ADHOC_CELLS,
    AdhocSession,
    enumerate_a_sigma_a,
    enumerate_bstar_a,
    enumerate_odd_a,
    match_adhoc,
)
from core.instrument import Meter
from core.occlists import LetterIndex
from core.oracle import brute_enumerate
from tests.conftest import lang, random_word, scale
from utils.error_handler import StaleSession

E = frozenset({2})


def index_of(language, text):
    return LetterIndex.build(language.encode(text), len(language.alphabet))


def test_bstar_a_examples():
    language = lang("bstar_a")
    assert set(enumerate_bstar_a(index_of(language, "ebea"), 0, 1, E)) == {(1, 4), (2, 4), (3, 4), (4, 4)}
    assert list(enumerate_bstar_a(index_of(language, "eee"), 0, 1, E)) == []
    assert set(enumerate_bstar_a(index_of(language, "aa"), 0, 1, E)) == {(1, 1), (2, 2)}


def test_a_sigma_a_examples():
    language = lang("a_sigma_a")
    assert set(enumerate_a_sigma_a(index_of(language, "aea"), 0, E)) == {(1, 3)}
    assert list(enumerate_a_sigma_a(index_of(language, "a"), 0, E)) == []
    word = language.encode("aaa")
    index = LetterIndex.build(word, 3)
    assert set(enumerate_a_sigma_a(index, 0, E)) == brute_enumerate(language.dfa, word)


def test_odd_a_examples():
    language = lang("odd_a")
    e = frozenset({1})
    assert set(enumerate_odd_a(index_of(language, "aea"), 0, e)) == {(1, 1), (1, 2), (2, 3), (3, 3)}
    assert list(enumerate_odd_a(index_of(language, "e"), 0, e)) == []
    assert set(enumerate_odd_a(index_of(language, "aaa"), 0, e)) == {(1, 1), (2, 2), (3, 3), (1, 3)}


@pytest.mark.parametrize(
    "name,kind",
    [("bstar_a", "bstar_a"), ("a_sigma_a", "a_sigma_a"), ("odd_a", "odd_a")],
)
def test_fingerprints(name, kind):
    match = match_adhoc(lang(name))
    assert match is not None and match.kind == kind
    assert match.roles[0] == lang(name).alphabet.index["a"]


@pytest.mark.parametrize("name", ["l_ab", "contains_a", "a_star"])
def test_no_fingerprint(name):
    assert match_adhoc(lang(name)) is None


@pytest.mark.parametrize("name", ["bstar_a", "a_sigma_a", "odd_a"])
def test_matches_oracle(name):
    language = lang(name)
    match = match_adhoc(language)
    rng = random.Random(name)
    k = len(language.alphabet)
    for _ in range(100 * scale()):
        word = random_word(rng, language, rng.randint(1, 60), neutral_ratio=0.4)
        index = LetterIndex.build(word, k)
        out = list(AdhocSession(index, match))
        assert len(out) == len(set(out))
        assert set(out) == brute_enumerate(language.dfa, word)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["bstar_a", "a_sigma_a", "odd_a"])
def test_matches_oracle_full_scale(name):
    language = lang(name)
    match = match_adhoc(language)
    rng = random.Random(f"full-{name}")
    k = len(language.alphabet)
    for _ in range(500 * scale()):
        word = random_word(rng, language, rng.randint(1, 200), neutral_ratio=0.4)
        out = list(AdhocSession(LetterIndex.build(word, k), match))
        assert len(out) == len(set(out))
        assert set(out) == brute_enumerate(language.dfa, word)


def test_stale_after_update():
    language = lang("odd_a")
    index = index_of(language, "aeaea")
    session = AdhocSession(index, match_adhoc(language))
    next(session)
    index.apply_substitution(2, 0)
    with pytest.raises(StaleSession):
        next(session)


@pytest.mark.parametrize("name", ["bstar_a", "a_sigma_a", "odd_a"])
def test_constant_delay_and_cells(name):
    language = lang(name)
    match = match_adhoc(language)
    rng = random.Random(7)
    k = len(language.alphabet)
    delays = []
    for n in (50, 500):
        meter = Meter()
        index = LetterIndex.build(random_word(rng, language, n, neutral_ratio=0.6), k, meter)
        session = AdhocSession(index, match, meter)
        worst, before = 0, meter.ops
        for _ in range(2000):
            if next(session, None) is None:
                break
            worst = max(worst, meter.ops - before)
            before = meter.ops
        delays.append(worst)
        assert meter.mem.high_water == ADHOC_CELLS
    assert max(delays) <= 6


@pytest.mark.parametrize("name", ["bstar_a", "a_sigma_a", "odd_a"])
def test_no_allocations_while_enumerating(name):
    language = lang(name)
    match = match_adhoc(language)
    rng = random.Random(f"alloc-{name}")
    k = len(language.alphabet)
    for _ in range(10):
        meter = Meter()
        word = random_word(rng, language, rng.randint(1, 80), neutral_ratio=0.4)
        session = AdhocSession(LetterIndex.build(word, k, meter), match, meter)
        allocations, live = meter.mem.allocations, meter.mem.live
        for _ in session:
            assert meter.mem.allocations == allocations
            assert meter.mem.live == live
        assert meter.mem.allocations == allocations
