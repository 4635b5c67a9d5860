from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Sequence, Set, Tuple

from core.classify import ClassificationReport, CondFamily
from core.instrument import NULL_METER, Meter
from core.occlists import LetterIndex
from core.ri_li import (
    LeftInfo,
    RightInfo,
    combine_left_lists,
    init_li,
    init_ri,
    update_li,
    update_ri,
)
from core.traversal import MaxLeftTraversal, MinTraversal, _Traversal
from utils.error_handler import (
    InternalInvariantError,
    NotSemiExtensibleZg,
    RareOverflow,
    StaleSession,
    assert_invariant,
)

logger = logging.getLogger("infix.semiext")

Infix = Tuple[int, int]
Delta = Dict[int, List[int]]


@dataclass
class SessionDiagnostics:
    """Журнал для тестов: нарушает постоянную память, в замерах выключен."""

    limits: List[Tuple[int, int]] = field(default_factory=list)
    left_infos: List[Tuple[int, Tuple]] = field(default_factory=list)
    right_infos: List[Tuple[int, int, Tuple]] = field(default_factory=list)
    min_results: Dict[int, List[int]] = field(default_factory=dict)
    maxleft_results: Dict[int, List[int]] = field(default_factory=dict)
    rare_lookups: List[Tuple[int, int, int, List[int]]] = field(default_factory=list)
    checked_outputs: int = 0


def get_rare(
    L_prev: LeftInfo,
    R_prev: RightInfo,
    l: int,
    r: int,
    maxleft: Sequence[int],
    a: int,
) -> List[int]:
    """
    Все вхождения редкой буквы a в w[l, r-1]: до p последних a левее r1
    (max-left обход), LI на предыдущем пределе и отслеживаемые позиции RI
    на предыдущем пределе, обрезанные по [l, r-1].
    """
    left = combine_left_lists(maxleft, L_prev.last[a], L_prev.p)
    # LI кончается на r_{l-1} включительно, а r может опуститься до него
    out = [x for x in left if l <= x < r]
    seam = left[-1] if left else 0
    for x in R_prev.tracked[a]:
        if x >= r:
            break
        if x > seam and x >= l:
            out.append(x)
    return out


class SemiExtSession:
    """
    Перечисление L-инфиксов для полурасширяемого ZG языка с постоянной
    задержкой и постоянной дополнительной памятью. Только читает слово и Λ;
    любое обновление после старта делает сессию недействительной.
    """

    def __init__(
        self,
        index: LetterIndex,
        report: ClassificationReport,
        family: CondFamily,
        meter: Meter = NULL_METER,
        diagnostics: bool = False,
    ) -> None:
        if not report.is_semi_extensible_zg or report.threshold is None:
            raise NotSemiExtensibleZg("constant-memory enumeration needs a semi-extensible ZG language")
        self.index = index
        self.family = family
        self.dfa = family.dfa
        self.p = report.threshold
        self.letters: Tuple[int, ...] = family.letters
        self._letter_set = frozenset(self.letters)
        self.r1: Optional[int] = None
        self.diag: Optional[SessionDiagnostics] = SessionDiagnostics() if diagnostics else None
        self._version = index.version
        self._meter = meter
        self._min: Dict[int, MinTraversal] = {}
        self._maxleft: Dict[int, MaxLeftTraversal] = {}
        self._active: List[_Traversal] = []
        self._cells = self.cells()
        meter.alloc(self._cells)
        self._gen: Optional[Iterator[Infix]] = self._run()

    # ------------------------------------------------------------------
    # Курсор
    # ------------------------------------------------------------------
    def __iter__(self) -> "SemiExtSession":
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
        self._meter.release(self._cells)

    @property
    def exhausted(self) -> bool:
        return self._gen is None

    def cells(self) -> int:
        """Ёмкость всех структур сессии; зависит только от |Σ| и p."""
        k, p, total = len(self.letters), self.p, self.index.k
        return (
            2 * total  # nocc, nocc'
            + k * p  # Δ
            + k  # T
            + 2 * RightInfo.capacity(k, p)  # R, R_-1
            + 2 * LeftInfo.capacity(k, p)  # L, L_-1
            + 2 * k * _Traversal.capacity(p)  # min и max-left обходы
            + 2 * (k * (p - 1) + 2)  # позиции и подслово для ProduceRemaining
            + 8  # l, r, r1, предел и флаги
        )

    def limits(self) -> List[Tuple[int, int]]:
        if self.diag is None:
            raise ValueError("limits are only recorded in diagnostics mode")
        return list(self.diag.limits)

    # ------------------------------------------------------------------
    # Фоновые обходы
    # ------------------------------------------------------------------
    def _background_step(self) -> None:
        for trav in self._active:
            trav.step()

    def finish_min_traversal(self, a: int) -> List[int]:
        out = self._min[a].finish()
        if self.diag is not None:
            self.diag.min_results[a] = list(out)
        return out

    def finish_maxleft_traversal(self, a: int) -> List[int]:
        out = self._maxleft[a].finish()
        if self.diag is not None:
            self.diag.maxleft_results[a] = list(out)
        return out

    # ------------------------------------------------------------------
    # Редкие буквы
    # ------------------------------------------------------------------
    def get_rare_occurrences_single(
        self,
        a: int,
        l: int,
        hi: int,
        L_prev: Optional[LeftInfo],
        R_prev: Optional[RightInfo],
    ) -> List[int]:
        """Все вхождения a в w[l, hi]; a редкая в этом диапазоне."""
        self._meter.tick()
        if l == 1:
            out = [x for x in self.finish_min_traversal(a) if x <= hi]
        else:
            out = get_rare(L_prev, R_prev, l, hi + 1, self.finish_maxleft_traversal(a), a)
        assert_invariant(
            len(out) < self.p,
            RareOverflow,
            "rare letter has too many occurrences",
            letter=a,
            l=l,
            hi=hi,
            found=len(out),
        )
        if self.diag is not None:
            self.diag.rare_lookups.append((a, l, hi, list(out)))
        return out

    def get_rare_occurrences(
        self,
        l: int,
        r: int,
        L_prev: Optional[LeftInfo],
        R_prev: Optional[RightInfo],
        nocc: Sequence[int],
    ) -> Delta:
        delta: Delta = {}
        for a in self.letters:
            if nocc[a] < self.p:
                delta[a] = self.get_rare_occurrences_single(a, l, r, L_prev, R_prev)
        return delta

    def _rare_positions(self, delta: Delta) -> List[int]:
        positions = sorted(itertools.chain.from_iterable(delta.values()))
        self._meter.tick(len(positions) + 1)
        return positions

    def cond_test_delta(self, delta: Delta, T: Set[int]) -> bool:
        word = self.index.word
        subword = tuple(word[x] for x in self._rare_positions(delta))
        return self.family.member(self.family.mask(T), subword)

    # ------------------------------------------------------------------
    # Случай "все редкие"
    # ------------------------------------------------------------------
    def produce_remaining(self, l: int, r: int, delta: Delta) -> Iterator[Infix]:
        """Все L-инфиксы [i, j] с l <= i <= j <= r."""
        return self._produce(l, r, delta, only_left=False)

    def produce_remaining_l(self, l: int, r: int, delta: Delta) -> Iterator[Infix]:
        """Все L-инфиксы [l, j] с j <= r."""
        return self._produce(l, r, delta, only_left=True)

    def _produce(self, l: int, r: int, delta: Delta, only_left: bool) -> Iterator[Infix]:
        meter = self._meter
        word = self.index.word
        for a, lst in delta.items():
            assert_invariant(len(lst) < self.p, RareOverflow, "rare list too long", letter=a)
        pos = self._rare_positions(delta)
        m = len(pos)
        # границы: p_0 = l-1, p_{m+1} = r+1
        bounds = [l - 1] + pos + [r + 1]
        sub = [word[x] for x in pos]
        rows, finals = self.dfa.rows, self.dfa.finals

        if self.dfa.accepts_empty:
            # инфиксы только из нейтральных букв между соседними позициями
            gaps = (1,) if only_left else range(1, m + 2)
            for i in gaps:
                lo, hi = bounds[i - 1] + 1, bounds[i] - 1
                for ll in ((l,) if only_left else range(lo, hi + 1)):
                    if ll > hi:
                        break
                    for rr in range(ll, hi + 1):
                        meter.tick()
                        yield (ll, rr)

        for i in ((1,) if only_left else range(1, m + 1)):
            q = self.dfa.initial
            for j in range(i, m + 1):
                meter.tick()
                q = rows[q][sub[j - 1]]
                if not finals[q]:
                    continue
                lefts = (l,) if only_left else range(bounds[i - 1] + 1, bounds[i] + 1)
                for ll in lefts:
                    for rr in range(bounds[j], bounds[j + 1]):
                        meter.tick()
                        yield (ll, rr)

    # ------------------------------------------------------------------
    # Основной цикл
    # ------------------------------------------------------------------
    def _run(self) -> Iterator[Infix]:
        index, meter, diag = self.index, self._meter, self.diag
        word, n, p = index.word, index.n, self.p
        letters, letter_set = self.letters, self._letter_set

        nocc = [index.count(a) for a in range(index.k)]
        self._min = {a: MinTraversal(a, index.lists[a], p) for a in letters}
        self._active = list(self._min.values())
        L_prev: Optional[LeftInfo] = None
        R_prev: Optional[RightInfo] = None

        for l in range(1, n + 1):
            r = n
            nocc2 = list(nocc)
            meter.tick(len(nocc2))
            R = init_ri(letters, p, n)
            delta = self.get_rare_occurrences(l, r, L_prev, R_prev, nocc2)
            T = {a for a in letters if nocc2[a] >= p}

            while T and self.cond_test_delta(delta, T):
                if diag is not None:
                    assert_invariant(
                        self.dfa.accepts(word[l : r + 1]),
                        InternalInvariantError,
                        "main loop emitted an infix outside L",
                        l=l,
                        r=r,
                    )
                    diag.checked_outputs += 1
                yield (l, r)
                a = word[r]
                nocc2[a] -= 1
                meter.tick()
                if a in letter_set:
                    if nocc2[a] == p - 1:
                        # a только что стала редкой
                        T.discard(a)
                        delta[a] = self.get_rare_occurrences_single(a, l, r - 1, L_prev, R_prev)
                    elif nocc2[a] < p - 1:
                        gone = delta[a].pop()
                        assert_invariant(gone == r, RareOverflow, "rare list out of sync", letter=a, r=r)
                update_ri(R, r, a, meter)
                if diag is not None:
                    diag.right_infos.append((l, r, R.snapshot()))
                r -= 1
                self._background_step()

            if T:
                # no-cond: меньшие r для этого l ничего не дают
                if r == n:
                    return
            else:
                # all-rare: Δ содержит все ненейтральные буквы w[l, r]
                if r == n:
                    yield from self.produce_remaining(l, n, delta)
                    return
                yield from self.produce_remaining_l(l, r, delta)

            limit = r + 1
            if l == 1:
                self.r1 = limit
                self._maxleft = {a: MaxLeftTraversal(a, index.lists[a], p, limit) for a in letters}
                self._active = list(self._maxleft.values())
                L = init_li(letters, p, limit, word[limit])
            else:
                L = update_li(L_prev, R_prev, limit, meter)
            if diag is not None:
                diag.limits.append((l, limit))
                diag.left_infos.append((l, L.snapshot()))
            if logger.isEnabledFor(logging.DEBUG):
                logger.debug("[SEMIEXT][LIMIT] l=%d r=%d", l, limit)
            R_prev, L_prev = R, L
            nocc[word[l]] -= 1
            meter.tick()
            self._background_step()


def start_session(
    index: LetterIndex,
    report: ClassificationReport,
    family: CondFamily,
    meter: Meter = NULL_METER,
    diagnostics: bool = False,
) -> SemiExtSession:
    session = SemiExtSession(index, report, family, meter, diagnostics)
    logger.info(
        "[SEMIEXT] start n=%d p=%d letters=%d cells=%d",
        index.n,
        session.p,
        len(session.letters),
        session._cells,
    )
    return session
