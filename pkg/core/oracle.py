from __future__ import annotations

import logging
import random
from collections import deque
from dataclasses import dataclass
from typing import FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from core.dfa import Dfa
from core.ri_li import LeftInfo, RightInfo

logger = logging.getLogger("infix.oracle")

# Эталонные реализации для дифференциальных тестов. Намеренно наивные:
# ни один код модулей перечисления здесь не используется.
# word здесь обычная последовательность (0-based), позиции 1-based.

Infix = Tuple[int, int]


# ---------------------------------------------------------------------
# Перечисление перебором
# ---------------------------------------------------------------------
def brute_enumerate(dfa: Dfa, word: Sequence[int]) -> Set[Infix]:
    """Все [i, j], для которых word[i..j] ∈ L; DFA запускается с каждой позиции."""
    rows, finals = dfa.rows, dfa.finals
    out: Set[Infix] = set()
    n = len(word)
    for i in range(1, n + 1):
        q = dfa.initial
        for j in range(i, n + 1):
            q = rows[q][word[j - 1]]
            if finals[q]:
                out.add((i, j))
    return out


def brute_count(dfa: Dfa, word: Sequence[int]) -> int:
    return len(brute_enumerate(dfa, word))


# ---------------------------------------------------------------------
# RI / LI прямым сканированием
# ---------------------------------------------------------------------
def _positions(word: Sequence[int], a: int, lo: int, hi: int) -> List[int]:
    return [i for i in range(max(lo, 1), min(hi, len(word)) + 1) if word[i - 1] == a]


def ri_oracle(word: Sequence[int], r: int, p: int, letters: Sequence[int]) -> RightInfo:
    n = len(word)
    tracked = {a: _positions(word, a, r, n)[:p] for a in letters}
    context = {}
    for a in letters:
        for t in tracked[a]:
            context[t] = {b: _positions(word, b, r, t)[-p:] for b in letters}
    return RightInfo(tuple(letters), p, r, tracked, context)


def li_oracle(
    word: Sequence[int], r1: int, limit: int, p: int, letters: Sequence[int]
) -> LeftInfo:
    last = {a: _positions(word, a, r1, limit)[-p:] for a in letters}
    return LeftInfo(tuple(letters), p, r1, limit, last)


# ---------------------------------------------------------------------
# Cond(S) поиском в графе произведения
# ---------------------------------------------------------------------
def neutral_by_dfa(dfa: Dfa) -> FrozenSet[int]:
    """Для минимального DFA: буква нейтральна iff действует тождественно."""
    rows = dfa.rows
    return frozenset(
        a
        for a in range(len(dfa.alphabet))
        if all(rows[q][a] == q for q in range(dfa.num_states))
    )


def cond_oracle(
    dfa: Dfa,
    s: Iterable[int],
    subword: Sequence[int],
    neutral: Optional[Iterable[int]] = None,
) -> bool:
    """
    Есть ли v ∈ L, у которого v без букв S∪N является фактором subword.
    Конфигурация (i, q): i букв subword уже сопоставлено, q состояние DFA.
    Начало фактора любое, конец тоже.
    """
    free_letters = set(s) | set(neutral_by_dfa(dfa) if neutral is None else neutral)
    rows, finals = dfa.rows, dfa.finals
    free = sorted(free_letters)
    m = len(subword)
    start = [(i, dfa.initial) for i in range(m + 1)]
    seen = set(start)
    queue = deque(start)
    while queue:
        i, q = queue.popleft()
        if finals[q]:
            return True
        nxt = [(i, rows[q][a]) for a in free]
        if i < m:
            nxt.append((i + 1, rows[q][subword[i]]))
        for conf in nxt:
            if conf not in seen:
                seen.add(conf)
                queue.append(conf)
    return False


# ---------------------------------------------------------------------
# Пределы r_l с нуля
# ---------------------------------------------------------------------
def limits_oracle(dfa: Dfa, family, word: Sequence[int], p: int) -> List[Tuple[int, int]]:
    """
    Для каждого l сканирует r от n вниз, каждый раз заново считая T и
    редкое подслово, и записывает r+1 при первом отказе.
    """
    neutral = family.neutral
    letters = family.letters
    n = len(word)
    out: List[Tuple[int, int]] = []
    for l in range(1, n + 1):
        r = n
        while True:
            segment = word[l - 1 : r]
            counts = {a: 0 for a in letters}
            for c in segment:
                if c in counts:
                    counts[c] += 1
            t = {a for a in letters if counts[a] >= p}
            if not t:
                break
            rare = [c for c in segment if c not in t and c not in neutral]
            if not cond_oracle(dfa, t, rare, neutral):
                break
            r -= 1
        if r == n:
            # ничего не выдано либо всё редкое сразу: дальше по l пределов нет
            return out
        out.append((l, r + 1))
    return out


# ---------------------------------------------------------------------
# Проверка определений на выборке пар
# ---------------------------------------------------------------------
@dataclass(frozen=True)
class CrosscheckResult:
    agrees: bool
    holds_on_samples: bool
    counterexample: Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]] = None

    def __bool__(self) -> bool:
        return self.agrees


def _erase(word: Sequence[int], erased) -> Tuple[int, ...]:
    return tuple(c for c in word if c not in erased)


def _is_factor(small: Sequence[int], big: Sequence[int]) -> bool:
    m = len(small)
    return any(tuple(big[i : i + m]) == tuple(small) for i in range(len(big) - m + 1))


def _sample_member(dfa: Dfa, rng: random.Random, max_len: int, tries: int = 200):
    k = len(dfa.alphabet)
    for _ in range(tries):
        n = rng.randint(0, max_len)
        v = [rng.randrange(k) for _ in range(n)]
        if dfa.accepts(v):
            return v
    return None


def crosscheck_definitions(
    dfa: Dfa,
    p: int,
    samples: int,
    expected: bool,
    seed: int = 0,
    max_len: int = 12,
) -> CrosscheckResult:
    """
    Монотонное определение: для u с T (буквы, встречающиеся >= p раз) и
    v ∈ L, если v без T∪N фактор u без T∪N, то u ∈ L. Ищем пару, где это
    нарушено, и сравниваем с алгебраическим ответом expected.
    """
    rng = random.Random(seed)
    k = len(dfa.alphabet)
    neutral = neutral_by_dfa(dfa)
    counterexample = None
    for step in range(samples):
        v = _sample_member(dfa, rng, max_len)
        if v is None:
            break
        if step % 2 == 0:
            u = list(v)
            for _ in range(rng.randint(0, max_len)):
                u.insert(rng.randint(0, len(u)), rng.randrange(k))
        else:
            u = [rng.randrange(k) for _ in range(rng.randint(0, max_len))]
        t = {a for a in range(k) if a not in neutral and u.count(a) >= p}
        if not t:
            continue
        erased = t | neutral
        if _is_factor(_erase(v, erased), _erase(u, erased)) and not dfa.accepts(u):
            counterexample = (tuple(u), tuple(v))
            break
    holds = counterexample is None
    if counterexample is not None:
        logger.info("[ORACLE] monotone definition fails u=%s v=%s", *counterexample)
    return CrosscheckResult(holds == expected, holds, counterexample)
