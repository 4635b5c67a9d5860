import itertools

import pytest

from core.classify import (
    CondFamily,
    classify,
    cond_member,
    is_aperiodic,
    is_zg,
    sample_words,
    threshold,
    validate_threshold,
    with_threshold,
)
from core.dfa import compile_min_dfa
from core.monoid import syntactic_monoid
from core.regex import Alphabet, parse_regex
from tests.conftest import ENUM_LANGS, lang
from utils.error_handler import NotSemiExtensible


def monoid_of(regex, letters):
    alphabet = Alphabet.of(letters)
    return syntactic_monoid(compile_min_dfa(parse_regex(regex, alphabet), alphabet))


@pytest.mark.parametrize("name", ["zg_l1", "zg_l2", "zg_l3", "zg_l4", "zg_l5"])
def test_classification_languages_are_zg(name):
    assert lang(name).report.is_zg


def test_classification_table():
    l_ab = lang("l_ab").report
    assert (l_ab.is_zg, l_ab.is_extensible, l_ab.is_semi_extensible_zg) == (True, False, True)

    bstar = lang("bstar_a").report
    assert not bstar.is_zg
    assert not bstar.is_extensible

    odd = lang("odd_a").report
    assert odd.is_zg
    assert not odd.is_semi_extensible_zg

    assert lang("l_aabb").report.is_extensible
    assert lang("two_or_zero_a").report.is_semi_extensible_zg

    contains = lang("contains_a").report
    assert (contains.is_extensible, contains.is_zg, contains.is_semi_extensible_zg) == (True, True, True)


def test_semi_extensible_languages_are_aperiodic():
    for name in ("l_ab", "l_aabb", "l_abc5", "two_or_zero_a", "contains_a", "three_a_one_b"):
        report = lang(name).report
        assert report.is_semi_extensible_zg
        assert report.is_aperiodic


def test_aperiodic_examples():
    assert is_aperiodic(monoid_of("a*", "ab"))
    assert not is_aperiodic(monoid_of("(aa)*", "a"))
    assert is_zg(monoid_of("(aa)*", "a"))


def test_threshold_from_monoid():
    m = monoid_of("a*b(a|b)*", "ab")  # «есть b»: {1, 0}
    assert m.size == 2
    assert threshold(m) == 3


def test_threshold_rejected_outside_class():
    with pytest.raises(NotSemiExtensible):
        threshold(lang("odd_a").monoid)


def test_hand_threshold_for_l_ab():
    language = lang("l_ab")
    assert language.report.threshold == 3
    assert language.report.threshold_source == "override"
    m = syntactic_monoid(language.dfa)
    auto = classify(language.dfa, m)
    assert auto.threshold == m.size + 1
    samples = sample_words(3, 500, 14, seed=11, exhaustive_len=4)
    assert validate_threshold(m, language.family, 3, samples)


def test_with_threshold_bounds():
    report = lang("l_ab").report
    with pytest.raises(NotSemiExtensible):
        with_threshold(report, 1)
    with pytest.raises(NotSemiExtensible):
        with_threshold(lang("odd_a").report, 3)


def test_bad_threshold_yields_counterexample():
    # p=2 для L_ab: u=aab, T={a}, u без T это "b" ∈ Cond({a}), но aab ∉ L_ab
    language = lang("l_ab")
    aab = tuple(language.encode("aab"))
    check = validate_threshold(language.monoid, language.family, 2, [aab])
    assert not check
    assert check.counterexample == (aab, frozenset({0}))


# --- Cond(S) ---
def test_cond_l_ab_is_everything():
    language = lang("l_ab")
    a, b = 0, 1
    for n in range(5):
        for w in itertools.product([b], repeat=n):
            assert cond_member(language.family, {a}, w)


def test_cond_l_aabb_needs_two_b():
    language = lang("l_aabb")
    assert not cond_member(language.family, {0}, [1])
    assert cond_member(language.family, {0}, [1, 1])


def test_cond_l5_order_of_rare_letters():
    language = lang("l_abc5")
    assert cond_member(language.family, {0}, language.encode("bc"))
    assert not cond_member(language.family, {0}, language.encode("cb"))


def test_cond_memo_is_consistent():
    family = CondFamily(lang("l_aabb").dfa, {2})
    first = family.member(family.mask({0}), (1, 1))
    assert family.member(family.mask({0}), (1, 1)) == first


def test_cond_rejects_letters_of_s():
    family = lang("l_aabb").family
    with pytest.raises(AssertionError):
        cond_member(family, {0}, [0])


def test_report_lines_order():
    lines = lang("l_ab").report.lines(lang("l_ab").alphabet)
    keys = [line.split(":")[0] for line in lines]
    assert keys == [
        "is_zg",
        "is_aperiodic",
        "is_extensible",
        "is_semi_extensible_zg",
        "threshold",
        "neutral",
        "monoid_size",
    ]
    assert "neutral: e" in lines


@pytest.mark.parametrize("name", ENUM_LANGS)
def test_larger_threshold_stays_valid(name):
    language = lang(name)
    p_min = language.report.threshold
    samples = list(sample_words(len(language.alphabet), 500, 14, seed=3, exhaustive_len=3))
    passed = [
        bool(validate_threshold(language.monoid, language.family, p, samples))
        for p in range(p_min, p_min + 4)
    ]
    assert passed[0]
    for now, later in zip(passed, passed[1:]):
        assert later or not now
