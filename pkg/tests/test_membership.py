import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.instrument import Meter
from core.membership import MonoidTree
from tests.conftest import lang
from utils.error_handler import PositionOutOfRange


def test_node_count_and_root():
    language = lang("contains_a")
    tree = MonoidTree.build(language.encode("eae"), language.monoid)
    assert len(tree.value) == 2 * 3 - 1
    assert tree.test()
    tree.update(2, language.alphabet.index["b"])
    assert not tree.test()


def test_single_letter_word():
    language = lang("contains_a")
    tree = MonoidTree.build([0], language.monoid)
    assert len(tree.value) == 1
    assert tree.depth() == 1
    assert tree.test()


def test_update_out_of_range():
    language = lang("contains_a")
    tree = MonoidTree.build(language.encode("ab"), language.monoid)
    with pytest.raises(PositionOutOfRange):
        tree.update(3, 0)


def test_update_cost_is_depth_bounded():
    language = lang("l_aabb")
    rng = random.Random(3)
    for n in (1, 2, 7, 64, 1000):
        meter = Meter()
        tree = MonoidTree.build([rng.randrange(3) for _ in range(n)], language.monoid, meter)
        assert tree.depth() <= math.ceil(math.log2(n)) + 1
        before = meter.ops
        tree.update(rng.randint(1, n), 0)
        assert meter.ops - before <= math.ceil(math.log2(n)) + 1


@settings(max_examples=150, deadline=None)
@given(
    st.lists(st.integers(0, 2), min_size=1, max_size=40),
    st.lists(st.tuples(st.integers(1, 40), st.integers(0, 2)), max_size=30),
)
def test_root_tracks_dfa_membership(word, subs):
    language = lang("l_ab")
    tree = MonoidTree.build(word, language.monoid)
    current = list(word)
    v = tree.version
    for i, a in subs:
        if i > len(word):
            continue
        tree.update(i, a)
        current[i - 1] = a
        assert tree.test() == language.dfa.accepts(current)
    assert tree.version == v + sum(1 for i, _ in subs if i <= len(word))
    assert tree.root() == language.monoid.image(current)


def test_checksum_restores():
    language = lang("contains_a")
    word = language.encode("ebaeb")
    tree = MonoidTree.build(word, language.monoid)
    before = tree.checksum()
    tree.update(3, 2)
    assert tree.checksum() != before
    tree.update(3, word[2])
    assert tree.checksum() == before
