import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from core.oracle import li_oracle, ri_oracle
from core.ri_li import combine_left_lists, init_li, init_ri, update_li, update_ri
from core.occlists import LetterIndex
from core.traversal import MaxLeftTraversal, MinTraversal
from utils.error_handler import LimitNotTracked, TraversalOverrun


def sweep_ri(word, p, letters):
    """RI от n+1 до 1 через update_ri; возвращает список (r, RI-снимок)."""
    n = len(word)
    R = init_ri(letters, p, n)
    out = []
    for r in range(n, 0, -1):
        update_ri(R, r, word[r - 1])
        out.append((r, R.snapshot()))
    return out


def test_ri_two_letter_example():
    # w = "ba", a=0, b=1
    R = ri_oracle([1, 0], 1, 3, (0, 1))
    assert R.tracked == {0: [2], 1: [1]}
    assert R.context[2][1] == [1]
    assert dict(sweep_ri([1, 0], 3, (0, 1)))[1] == R.snapshot()


def test_ri_at_n_tracks_last_letter_only():
    R = init_ri((0, 1), 2, 4)
    update_ri(R, 4, 1)
    assert R.tracked == {0: [], 1: [4]}
    assert R.snapshot() == ri_oracle([0, 0, 1, 1], 4, 2, (0, 1)).snapshot()


def test_ri_ignores_neutral_letters():
    R = init_ri((0,), 2, 3)
    update_ri(R, 3, 2)
    assert R.tracked == {0: []} and R.context == {}


def test_update_ri_requires_consecutive_r():
    R = init_ri((0,), 2, 5)
    with pytest.raises(AssertionError):
        update_ri(R, 3, 0)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(0, 2), min_size=1, max_size=40), st.integers(2, 4))
def test_ri_matches_oracle_at_every_r(word, p):
    letters = (0, 1)  # 2 нейтральная
    for r, snap in sweep_ri(word, p, letters):
        assert snap == ri_oracle(word, r, p, letters).snapshot()


# --- LI ---
def test_combine_left_lists():
    assert combine_left_lists([1, 3, 5], [5, 8], 3) == [3, 5, 8]
    assert combine_left_lists([1, 3], [], 3) == [1, 3]
    assert combine_left_lists([1, 3], [6, 7, 9], 3) == [6, 7, 9]
    assert combine_left_lists([], [2], 2) == [2]


def test_li_at_r1():
    L = init_li((0, 1), 3, 4, 1)
    assert L.snapshot() == li_oracle([0, 0, 0, 1], 4, 4, 3, (0, 1)).snapshot()
    L = init_li((0, 1), 3, 4, 2)
    assert L.last == {0: [], 1: []}


@settings(max_examples=150, deadline=None)
@given(
    st.lists(st.integers(0, 2), min_size=2, max_size=40),
    st.integers(2, 4),
    st.data(),
)
def test_li_chain_matches_oracle(word, p, data):
    # пределы растут, каждый следующий отслеживается RI на предыдущем
    letters = (0, 1)
    n = len(word)
    r1 = data.draw(st.integers(1, n))
    L = init_li(letters, p, r1, word[r1 - 1])
    for _ in range(6):
        R = ri_oracle(word, L.limit, p, letters)
        if not R.context:
            break
        limit = data.draw(st.sampled_from(sorted(R.context)))
        L = update_li(L, R, limit)
        assert L.snapshot() == li_oracle(word, r1, limit, p, letters).snapshot()


def test_update_li_same_limit_copies():
    L = init_li((0,), 2, 3, 0)
    R = ri_oracle([0, 0, 0, 0], 3, 2, (0,))
    same = update_li(L, R, 3)
    assert same.snapshot() == L.snapshot() and same is not L


def test_update_li_untracked_limit():
    L = init_li((0,), 2, 1, 0)
    R = ri_oracle([0, 2, 2, 0], 1, 2, (0,))
    with pytest.raises(LimitNotTracked):
        update_li(L, R, 3)


# --- Фоновые обходы ---
def test_min_traversal_keeps_smallest():
    index = LetterIndex.build([0, 1, 0, 0, 1, 0], 2)
    index.apply_substitution(1, 1)
    index.apply_substitution(1, 0)  # 1 теперь в конце порядка вставки
    trav = MinTraversal(0, index.lists[0], 2)
    for _ in range(2):
        trav.step()
    assert trav.finish() == [1, 3]


def test_maxleft_traversal_bounded_by_r1():
    index = LetterIndex.build([1, 1, 1, 1, 0, 0, 0, 0], 2)
    trav = MaxLeftTraversal(1, index.lists[1], 2, 3)
    trav.step()
    trav.step()
    assert trav.finish() == [2, 3]


def test_finish_too_early_raises():
    index = LetterIndex.build([0] * 6, 1)
    trav = MinTraversal(0, index.lists[0], 2)
    trav.step()
    with pytest.raises(TraversalOverrun):
        trav.finish()
