from __future__ import annotations

import logging
from collections import deque
from math import gcd
from typing import Dict, FrozenSet, List, Optional, Tuple

import numpy as np

from core.dfa import Dfa
from core.env_loader import load_and_check_env
from utils.error_handler import MonoidTooLarge

logger = logging.getLogger("infix.monoid")

# полная таблица умножения строится только для маленьких моноидов
TABLE_LIMIT = 200


class Monoid:
    """
    Моноид переходов минимального DFA (= синтаксический моноид языка).

    Элемент m задаётся преобразованием состояний elements[m]; элемент 0 это
    тождество. Для слова uv преобразование равно t_v[t_u] (сначала u, потом v).
    Граф Кэли хранится в обе стороны: right[m][a] = m·α(a), left[a][m] = α(a)·m.
    """

    def __init__(
        self,
        dfa: Dfa,
        elements: np.ndarray,
        right: List[List[int]],
        morphism: List[int],
    ) -> None:
        self.dfa = dfa
        self.elements = elements
        self.right = right
        self.morphism = morphism
        self.identity = 0
        self._ids: Dict[bytes, int] = {elements[m].tobytes(): m for m in range(len(elements))}
        self._products: Dict[Tuple[int, int], int] = {}
        self.left = [[self.multiply(g, m) for m in range(self.size)] for g in morphism]
        init = dfa.initial
        finals = dfa.finals
        self.accepting: FrozenSet[int] = frozenset(
            m for m in range(self.size) if finals[int(elements[m][init])]
        )
        self.omega = idempotent_power(self)
        self.neutral: FrozenSet[int] = neutral_letters(self)

    @property
    def size(self) -> int:
        return int(self.elements.shape[0])

    def __len__(self) -> int:
        return self.size

    def multiply(self, x: int, y: int) -> int:
        key = (x, y)
        out = self._products.get(key)
        if out is None:
            composed = self.elements[y][self.elements[x]]
            out = self._ids[composed.tobytes()]
            self._products[key] = out
        return out

    def power(self, x: int, k: int) -> int:
        result, base = self.identity, x
        while k > 0:
            if k & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            k >>= 1
        return result

    def image(self, letters) -> int:
        """α(w) по графу Кэли."""
        m = self.identity
        right = self.right
        for a in letters:
            m = right[m][a]
        return m

    def table(self) -> np.ndarray:
        if self.size > TABLE_LIMIT:
            raise MonoidTooLarge(
                f"multiplication table requested for |M|={self.size} > {TABLE_LIMIT}"
            )
        n = self.size
        out = np.zeros((n, n), dtype=np.int32)
        for x in range(n):
            for y in range(n):
                out[x, y] = self.multiply(x, y)
        return out

    def index_period(self, x: int) -> Tuple[int, int]:
        """Индекс и период циклической подполугруппы элемента x."""
        seen: Dict[int, int] = {}
        m, k = x, 1
        while m not in seen:
            seen[m] = k
            m = self.multiply(m, x)
            k += 1
        return seen[m], k - seen[m]


def syntactic_monoid(dfa: Dfa, limit: Optional[int] = None) -> Monoid:
    """Замыкание образов букв по композиции (BFS), с ограничителем размера."""
    if limit is None:
        limit = load_and_check_env()["MONOID_LIMIT"]
    q, k = dfa.delta.shape
    generators = [np.ascontiguousarray(dfa.delta[:, a]) for a in range(k)]
    identity = np.arange(q, dtype=np.int32)
    ids: Dict[bytes, int] = {identity.tobytes(): 0}
    elements = [identity]
    right: List[List[int]] = []
    queue = deque([0])
    while queue:
        m = queue.popleft()
        row = []
        for g in generators:
            nxt = g[elements[m]]
            key = nxt.tobytes()
            idx = ids.get(key)
            if idx is None:
                idx = len(elements)
                if idx >= limit:
                    raise MonoidTooLarge(
                        f"syntactic monoid exceeds {limit} elements",
                        payload={"limit": limit, "states": q},
                    )
                ids[key] = idx
                elements.append(nxt)
                queue.append(idx)
            row.append(idx)
        right.append(row)
    # BFS добавляет строки в порядке номеров элементов
    morphism = [right[0][a] for a in range(k)]
    monoid = Monoid(dfa, np.stack(elements), right, morphism)
    logger.info("[MONOID] size=%d omega=%d neutral=%s", monoid.size, monoid.omega, sorted(monoid.neutral))
    return monoid


def idempotent_power(m: Monoid) -> int:
    """Наименьшее k >= 1, при котором x^k идемпотентен для всех x."""
    max_index, period = 1, 1
    for x in range(m.size):
        idx, per = m.index_period(x)
        max_index = max(max_index, idx)
        period = period * per // gcd(period, per)
    # наименьшее кратное периода, не меньшее максимального индекса
    return -(-max_index // period) * period


def neutral_letters(m: Monoid) -> FrozenSet[int]:
    return frozenset(a for a, g in enumerate(m.morphism) if g == m.identity)
