from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from core.instrument import NULL_METER, Meter
from utils.error_handler import LimitNotTracked, assert_invariant

# Все списки позиций отсортированы по возрастанию, концы диапазонов включительно.


@dataclass
class RightInfo:
    """
    Правая информация при текущем r.

    tracked[a]   до p первых a с позиции r вправо;
    context[t][b] для отслеживаемой позиции t: до p последних b в [r, t].
    Хранится только для ненейтральных букв.
    """

    letters: Tuple[int, ...]
    p: int
    r: int
    tracked: Dict[int, List[int]] = field(default_factory=dict)
    context: Dict[int, Dict[int, List[int]]] = field(default_factory=dict)

    def snapshot(self) -> Tuple:
        tracked = tuple((a, tuple(self.tracked.get(a, ()))) for a in self.letters)
        context = tuple(
            (t, tuple((b, tuple(self.context[t].get(b, ()))) for b in self.letters))
            for t in sorted(self.context)
        )
        return (self.r, tracked, context)

    def copy(self) -> "RightInfo":
        return RightInfo(
            self.letters,
            self.p,
            self.r,
            {a: list(v) for a, v in self.tracked.items()},
            {t: {b: list(v) for b, v in ctx.items()} for t, ctx in self.context.items()},
        )

    @staticmethod
    def capacity(k: int, p: int) -> int:
        return k * p + k * p * k * p + 1


@dataclass
class LeftInfo:
    """Левая информация на пределе r_l: до p последних a в [r1, r_l]."""

    letters: Tuple[int, ...]
    p: int
    r1: int
    limit: int
    last: Dict[int, List[int]] = field(default_factory=dict)

    def snapshot(self) -> Tuple:
        return (
            self.r1,
            self.limit,
            tuple((a, tuple(self.last.get(a, ()))) for a in self.letters),
        )

    @staticmethod
    def capacity(k: int, p: int) -> int:
        return k * p + 2


# ---------------------------------------------------------------------
# RI
# ---------------------------------------------------------------------
def init_ri(letters: Sequence[int], p: int, n: int) -> RightInfo:
    """Пустая RI "при n+1"; первое update_ri(·, n) даёт RI при n."""
    return RightInfo(
        tuple(letters),
        p,
        n + 1,
        {a: [] for a in letters},
        {},
    )


def update_ri(R: RightInfo, r: int, c: int, meter: Meter = NULL_METER) -> RightInfo:
    """
    Сдвиг r на одну позицию влево: позиция r с буквой c входит в диапазон.
    Изменяет R на месте и возвращает его.
    """
    assert r == R.r - 1, f"update_ri expects r={R.r - 1}, got {r}"
    R.r = r
    if c not in R.tracked:
        # нейтральная буква: ничего не меняется
        meter.tick()
        return R
    p = R.p
    for ctx in R.context.values():
        meter.tick()
        lst = ctx[c]
        if len(lst) < p:
            lst.insert(0, r)
    tracked = R.tracked[c]
    tracked.insert(0, r)
    meter.tick()
    if len(tracked) > p:
        dropped = tracked.pop()
        del R.context[dropped]
    ctx = {b: [] for b in R.letters}
    ctx[c].append(r)
    R.context[r] = ctx
    return R


# ---------------------------------------------------------------------
# LI
# ---------------------------------------------------------------------
def combine_left_lists(outer: Sequence[int], inner: Sequence[int], p: int) -> List[int]:
    """
    outer покрывает [r1, i], inner покрывает [i, j]. Результат: до p последних
    из объединения; позиция i может встретиться в обоих списках.
    """
    if len(inner) >= p:
        return list(inner[-p:])
    if inner:
        seam = inner[0]
        merged = [x for x in outer if x < seam]
        merged.extend(inner)
    else:
        merged = list(outer)
    return merged[-p:]


def init_li(letters: Sequence[int], p: int, r1: int, c: int) -> LeftInfo:
    last: Dict[int, List[int]] = {a: [] for a in letters}
    if c in last:
        last[c].append(r1)
    return LeftInfo(tuple(letters), p, r1, r1, last)


def update_li(
    L_prev: LeftInfo, R_prev: RightInfo, limit: int, meter: Meter = NULL_METER
) -> LeftInfo:
    """LI на новом пределе по LI и RI на предыдущем пределе."""
    meter.tick()
    if limit == L_prev.limit:
        return LeftInfo(
            L_prev.letters,
            L_prev.p,
            L_prev.r1,
            limit,
            {a: list(v) for a, v in L_prev.last.items()},
        )
    assert_invariant(
        R_prev.r == L_prev.limit and limit in R_prev.context,
        LimitNotTracked,
        "new limit is not tracked by the previous right information",
        limit=limit,
        previous=L_prev.limit,
    )
    ctx = R_prev.context[limit]
    last = {}
    for b in L_prev.letters:
        meter.tick()
        last[b] = combine_left_lists(L_prev.last[b], ctx[b], L_prev.p)
    return LeftInfo(L_prev.letters, L_prev.p, L_prev.r1, limit, last)
