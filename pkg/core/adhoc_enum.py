from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Callable, Dict, FrozenSet, Iterator, Optional, Tuple

from core.dfa import compile_min_dfa, dfa_equivalent
from core.instrument import NULL_METER, Meter
from core.occlists import LetterIndex
from core.regex import Dot, RegexAst, Star, Sym, concat_of, union_of
from utils.error_handler import StaleSession, UnsupportedLanguage

logger = logging.getLogger("infix.adhoc")

Infix = Tuple[int, int]

# Курсоры Λ, позиции якорей и границы расширения
ADHOC_CELLS = 12


# ---------------------------------------------------------------------
# Перечислители (генераторы); word 1-based, слот 0 пустой
# ---------------------------------------------------------------------
def _bstar_a(index: LetterIndex, a: int, b: int, neutral: FrozenSet[int], meter: Meter) -> Iterator[Infix]:
    """(b|N)*aN*: ровно одна a, слева только b и N, справа только N."""
    word, n = index.word, index.n
    left_ok = neutral | {b}
    for q in index.lists[a]:
        ll = q
        while True:
            rr = q
            while True:
                meter.tick()
                yield (ll, rr)
                if rr == n or word[rr + 1] not in neutral:
                    break
                rr += 1
            if ll == 1 or word[ll - 1] not in left_ok:
                break
            ll -= 1


def _a_sigma_a(index: LetterIndex, a: int, neutral: FrozenSet[int], meter: Meter) -> Iterator[Infix]:
    """N*a.*aN*: первая и последняя ненейтральные буквы это разные a."""
    word, n = index.word, index.n
    occ = index.lists[a]
    for x in occ:
        cursor = occ.retrieve(after=x)
        while True:
            y = cursor.advance()
            if y is None:
                break
            i, j = (x, y) if x < y else (y, x)
            ll = i
            while True:
                rr = j
                while True:
                    meter.tick()
                    yield (ll, rr)
                    if rr == n or word[rr + 1] not in neutral:
                        break
                    rr += 1
                if ll == 1 or word[ll - 1] not in neutral:
                    break
                ll -= 1


def _odd_a(index: LetterIndex, a: int, neutral: FrozenSet[int], meter: Meter) -> Iterator[Infix]:
    """
    Нечётное число a и больше ничего, кроме N. Инфикс с 2k+1 буквами a
    выдаётся ровно один раз: от своей средней a.
    """
    word, n = index.word, index.n
    for q in index.lists[a]:
        lo, hi = q, q  # крайние a текущего уровня
        while True:
            # (ll, rr): ll в (предыдущая a или стоп, lo], rr в [hi, следующая a или стоп)
            ll = lo
            left_stop = None
            right_stop = None
            while True:
                rr = hi
                while True:
                    meter.tick()
                    yield (ll, rr)
                    if rr == n:
                        right_stop = n + 1
                        break
                    if word[rr + 1] not in neutral:
                        right_stop = rr + 1
                        break
                    rr += 1
                if ll == 1:
                    left_stop = 0
                    break
                if word[ll - 1] not in neutral:
                    left_stop = ll - 1
                    break
                ll -= 1
            # следующий уровень: по одной a с каждой стороны
            if left_stop == 0 or right_stop == n + 1:
                break
            if word[left_stop] != a or word[right_stop] != a:
                break
            lo, hi = left_stop, right_stop


# ---------------------------------------------------------------------
# Шаблоны и сопоставление
# ---------------------------------------------------------------------
def _neutral_star(neutral) -> RegexAst:
    return Star(union_of([Sym(x) for x in sorted(neutral)]))


def template_bstar_a(a: int, b: int, neutral) -> RegexAst:
    return concat_of(Star(union_of([Sym(b)] + [Sym(x) for x in sorted(neutral)])), Sym(a), _neutral_star(neutral))


def template_a_sigma_a(a: int, neutral) -> RegexAst:
    n_star = _neutral_star(neutral)
    return concat_of(n_star, Sym(a), Star(Dot()), Sym(a), n_star)


def template_odd_a(a: int, neutral) -> RegexAst:
    n_star = _neutral_star(neutral)
    pair = concat_of(n_star, Sym(a), n_star, Sym(a))
    return concat_of(n_star, Sym(a), Star(pair), n_star)


@dataclass(frozen=True)
class AdhocMatch:
    kind: str
    roles: Tuple[int, ...]
    neutral: FrozenSet[int]


KINDS = ("bstar_a", "a_sigma_a", "odd_a")


def match_adhoc(language) -> Optional[AdhocMatch]:
    """Пробует все назначения ролей; сравнивает канонические минимальные DFA."""
    alphabet, neutral = language.alphabet, language.report.neutral
    candidates = [x for x in range(len(alphabet)) if x not in neutral]
    tries = []
    for a, b in itertools.permutations(candidates, 2):
        tries.append(("bstar_a", (a, b), template_bstar_a(a, b, neutral)))
    for a in candidates:
        tries.append(("a_sigma_a", (a,), template_a_sigma_a(a, neutral)))
    for a in candidates:
        tries.append(("odd_a", (a,), template_odd_a(a, neutral)))
    for kind, roles, ast in tries:
        if dfa_equivalent(language.dfa, compile_min_dfa(ast, alphabet)):
            logger.info("[ADHOC] language=%s kind=%s roles=%s", language.name, kind, roles)
            return AdhocMatch(kind, roles, frozenset(neutral))
    return None


_RUNNERS: Dict[str, Callable[..., Iterator[Infix]]] = {
    "bstar_a": _bstar_a,
    "a_sigma_a": _a_sigma_a,
    "odd_a": _odd_a,
}


class AdhocSession:
    """Курсор ad-hoc перечислителя; только читает слово и Λ."""

    def __init__(self, index: LetterIndex, match: AdhocMatch, meter: Meter = NULL_METER) -> None:
        if match.kind not in _RUNNERS:
            raise UnsupportedLanguage(f"unknown ad-hoc enumerator {match.kind!r}")
        self.index = index
        self.match = match
        self._version = index.version
        self._meter = meter
        meter.alloc(ADHOC_CELLS)
        runner = _RUNNERS[match.kind]
        self._gen: Optional[Iterator[Infix]] = runner(index, *match.roles, match.neutral, meter)

    def __iter__(self) -> "AdhocSession":
        return self

    def __next__(self) -> Infix:
        if self.index.version != self._version:
            raise StaleSession("word updated after the enumeration started")
        if self._gen is None:
            raise StopIteration
        try:
            return next(self._gen)
        except StopIteration:
            self.close()
            raise

    def close(self) -> None:
        if self._gen is None:
            return
        self._gen.close()
        self._gen = None
        self._meter.release(ADHOC_CELLS)

    @property
    def exhausted(self) -> bool:
        return self._gen is None

    def cells(self) -> int:
        return ADHOC_CELLS


def enumerate_bstar_a(index: LetterIndex, a: int, b: int, neutral, meter: Meter = NULL_METER) -> AdhocSession:
    return AdhocSession(index, AdhocMatch("bstar_a", (a, b), frozenset(neutral)), meter)


def enumerate_a_sigma_a(index: LetterIndex, a: int, neutral, meter: Meter = NULL_METER) -> AdhocSession:
    return AdhocSession(index, AdhocMatch("a_sigma_a", (a,), frozenset(neutral)), meter)


def enumerate_odd_a(index: LetterIndex, a: int, neutral, meter: Meter = NULL_METER) -> AdhocSession:
    return AdhocSession(index, AdhocMatch("odd_a", (a,), frozenset(neutral)), meter)
