from __future__ import annotations

import itertools
import logging
import random
import threading
from collections import deque
from dataclasses import dataclass, replace
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from core.dfa import Dfa
from core.monoid import Monoid, syntactic_monoid
from utils.error_handler import NotSemiExtensible

logger = logging.getLogger("infix.classify")


@dataclass(frozen=True)
class ClassificationReport:
    is_zg: bool
    is_aperiodic: bool
    is_extensible: bool
    is_semi_extensible_zg: bool
    threshold: Optional[int]
    neutral: FrozenSet[int]
    monoid_size: int
    omega: int = 1
    threshold_source: str = "monoid"

    def lines(self, alphabet=None) -> List[str]:
        """Строки `key: value` в фиксированном порядке для CLI."""

        def b(x: bool) -> str:
            return "true" if x else "false"

        if alphabet is not None:
            neutral = ",".join(alphabet.letters[a] for a in sorted(self.neutral))
        else:
            neutral = ",".join(str(a) for a in sorted(self.neutral))
        return [
            f"is_zg: {b(self.is_zg)}",
            f"is_aperiodic: {b(self.is_aperiodic)}",
            f"is_extensible: {b(self.is_extensible)}",
            f"is_semi_extensible_zg: {b(self.is_semi_extensible_zg)}",
            f"threshold: {self.threshold if self.threshold is not None else '-'}",
            f"neutral: {neutral or '-'}",
            f"monoid_size: {self.monoid_size}",
        ]


# ---------------------------------------------------------------------
# Алгебраические проверки (через образующие, без таблицы |M|^2)
# ---------------------------------------------------------------------
def is_zg(m: Monoid) -> bool:
    """y·x^(ω+1) = x^(ω+1)·y; достаточно проверить y среди образов букв."""
    for x in range(m.size):
        z = m.power(x, m.omega + 1)
        for a in range(len(m.morphism)):
            if m.right[z][a] != m.left[a][z]:
                return False
    return True


def is_aperiodic(m: Monoid) -> bool:
    for x in range(m.size):
        xw = m.power(x, m.omega)
        if xw != m.multiply(xw, x):
            return False
    return True


def is_extensible(m: Monoid) -> bool:
    """Acc замкнуто относительно умножения на образы букв слева и справа."""
    acc = m.accepting
    for x in acc:
        for a in range(len(m.morphism)):
            if m.right[x][a] not in acc or m.left[a][x] not in acc:
                return False
    return True


def _ideal(m: Monoid) -> Set[int]:
    """Двусторонний идеал M·Acc·M, обход графа Кэли от Acc."""
    seen = set(m.accepting)
    queue = deque(seen)
    k = len(m.morphism)
    while queue:
        x = queue.popleft()
        for a in range(k):
            for y in (m.right[x][a], m.left[a][x]):
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
    return seen


def is_semi_extensible_zg(m: Monoid) -> bool:
    if not is_zg(m):
        return False
    powers = [m.power(g, m.omega) for a, g in enumerate(m.morphism) if a not in m.neutral]
    acc = m.accepting
    for x in _ideal(m):
        for e in powers:
            if m.multiply(x, e) not in acc:
                return False
    return True


def threshold(m: Monoid) -> int:
    if not is_semi_extensible_zg(m):
        raise NotSemiExtensible("threshold is only defined for semi-extensible ZG languages")
    return max(2, m.size + 1)


def classify(dfa: Dfa, monoid: Optional[Monoid] = None) -> ClassificationReport:
    m = monoid if monoid is not None else syntactic_monoid(dfa)
    zg = is_zg(m)
    aperiodic = is_aperiodic(m)
    extensible = is_extensible(m)
    semi = is_semi_extensible_zg(m)
    report = ClassificationReport(
        is_zg=zg,
        is_aperiodic=aperiodic,
        is_extensible=extensible,
        is_semi_extensible_zg=semi,
        threshold=max(2, m.size + 1) if semi else None,
        neutral=m.neutral,
        monoid_size=m.size,
        omega=m.omega,
    )
    logger.info(
        "[CLASSIFY] monoid_size=%d omega=%d zg=%s ext=%s semi=%s",
        m.size,
        m.omega,
        zg,
        extensible,
        semi,
    )
    return report


def with_threshold(report: ClassificationReport, p: int) -> ClassificationReport:
    if not report.is_semi_extensible_zg:
        raise NotSemiExtensible("threshold override on a language outside semi-extensible ZG")
    if p < 2:
        raise NotSemiExtensible(f"threshold must be >= 2, got {p}")
    return replace(report, threshold=p, threshold_source="override")


# ---------------------------------------------------------------------
# Cond(S)
# ---------------------------------------------------------------------
class CondFamily:
    """
    Распознаватели для Cond(S) по всем непустым S из ненейтральных букв.

    Для S строится автомат языка L со стёртыми буквами S∪N (они становятся
    тихими переходами), затем проверяется, есть ли у слова фактор в этом
    языке. Ответы кэшируются по (S, слово).
    """

    def __init__(self, dfa: Dfa, neutral: Iterable[int]) -> None:
        self.dfa = dfa
        self.neutral = frozenset(neutral)
        self.letters = tuple(a for a in range(len(dfa.alphabet)) if a not in self.neutral)
        self._closures: Dict[int, Tuple[List[FrozenSet[int]], FrozenSet[int]]] = {}
        self._memo: Dict[Tuple[int, Tuple[int, ...]], bool] = {}
        self._lock = threading.Lock()

    def mask(self, letters: Iterable[int]) -> int:
        out = 0
        for a in letters:
            out |= 1 << a
        return out

    def _closure_table(self, s_mask: int):
        entry = self._closures.get(s_mask)
        if entry is not None:
            return entry
        free = [a for a in range(len(self.dfa.alphabet)) if (s_mask >> a) & 1 or a in self.neutral]
        rows = self.dfa.rows
        table = []
        for q in range(self.dfa.num_states):
            seen = {q}
            stack = [q]
            while stack:
                x = stack.pop()
                for a in free:
                    y = rows[x][a]
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            table.append(frozenset(seen))
        entry = (table, table[self.dfa.initial])
        with self._lock:
            self._closures[s_mask] = entry
        return entry

    def _recognize(self, s_mask: int, subword: Sequence[int]) -> bool:
        table, start = self._closure_table(s_mask)
        finals = self.dfa.finals
        rows = self.dfa.rows
        if any(finals[q] for q in start):
            return True
        current: FrozenSet[int] = start
        for c in subword:
            nxt: Set[int] = set(start)
            for q in current:
                nxt |= table[rows[q][c]]
            if any(finals[q] for q in nxt):
                return True
            current = frozenset(nxt)
        return False

    def member(self, s_mask: int, subword: Tuple[int, ...]) -> bool:
        key = (s_mask, subword)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        for c in subword:
            assert not (s_mask >> c) & 1 and c not in self.neutral, (
                f"letter {c} of S or N in Cond subword"
            )
        out = self._recognize(s_mask, subword)
        with self._lock:
            self._memo[key] = out
        return out


def cond_member(family: CondFamily, s: Iterable[int], subword: Sequence[int]) -> bool:
    s = frozenset(s)
    assert s and not (s & family.neutral), "S must be a non-empty set of non-neutral letters"
    return family.member(family.mask(s), tuple(subword))


@dataclass(frozen=True)
class ThresholdCheck:
    ok: bool
    counterexample: Optional[Tuple[Tuple[int, ...], FrozenSet[int]]] = None

    def __bool__(self) -> bool:
        return self.ok


def validate_threshold(
    m: Monoid, family: CondFamily, p: int, samples: Iterable[Sequence[int]]
) -> ThresholdCheck:
    """Для каждого u с непустым T: u_{-(T∪N)} ∈ Cond(T) iff u ∈ L."""
    dfa = family.dfa
    for u in samples:
        counts: Dict[int, int] = {}
        for c in u:
            counts[c] = counts.get(c, 0) + 1
        t = frozenset(a for a in family.letters if counts.get(a, 0) >= p)
        if not t:
            continue
        rest = tuple(c for c in u if c not in t and c not in family.neutral)
        if cond_member(family, t, rest) != dfa.accepts(u):
            logger.warning("[THRESHOLD] p=%d counterexample=%s T=%s", p, list(u), sorted(t))
            return ThresholdCheck(False, (tuple(u), t))
    return ThresholdCheck(True)


def sample_words(k: int, count: int, max_len: int, seed: int, exhaustive_len: int = 0):
    """Случайные слова длины <= max_len плюс все слова длины <= exhaustive_len."""
    rng = random.Random(seed)
    for n in range(exhaustive_len + 1):
        for w in itertools.product(range(k), repeat=n):
            yield w
    for _ in range(count):
        n = rng.randint(0, max_len)
        yield tuple(rng.randrange(k) for _ in range(n))
