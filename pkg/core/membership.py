from __future__ import annotations

import zlib
from typing import List, Sequence

import numpy as np

from core.instrument import NULL_METER, Meter
from core.monoid import Monoid
from utils.error_handler import PositionOutOfRange


class MonoidTree:
    """
    Ψ для алгоритма even-odd: сбалансированное дерево из 2n-1 узлов над
    листьями α(w[i]); внутренний узел хранит произведение детей (левый·правый).
    update O(log n), test O(1) по корню.
    """

    def __init__(self, monoid: Monoid, n: int, meter: Meter = NULL_METER) -> None:
        if n < 1:
            raise PositionOutOfRange("word must have at least one letter")
        self.monoid = monoid
        self.n = n
        size = 2 * n - 1
        self.value = np.zeros(size, dtype=np.int32)
        self.left_child: List[int] = [-1] * size
        self.right_child: List[int] = [-1] * size
        self.parent: List[int] = [-1] * size
        self.leaf: List[int] = [-1] * (n + 1)
        self.version = 0
        self._meter = meter
        self._shape()

    def _shape(self) -> None:
        # корень 0, разбиение отрезка пополам, без рекурсии
        next_id = 1
        stack = [(0, 1, self.n)]
        while stack:
            node, lo, hi = stack.pop()
            if lo == hi:
                self.leaf[lo] = node
                continue
            mid = (lo + hi) // 2
            left, right = next_id, next_id + 1
            next_id += 2
            self.left_child[node] = left
            self.right_child[node] = right
            self.parent[left] = node
            self.parent[right] = node
            stack.append((left, lo, mid))
            stack.append((right, mid + 1, hi))

    @classmethod
    def build(cls, word: Sequence[int], monoid: Monoid, meter: Meter = NULL_METER) -> "MonoidTree":
        tree = cls(monoid, len(word), meter)
        morphism = monoid.morphism
        for i, a in enumerate(word, start=1):
            meter.tick()
            tree.value[tree.leaf[i]] = morphism[a]
        # дети всегда имеют больший номер, чем родитель
        for node in range(len(tree.value) - 1, -1, -1):
            left = tree.left_child[node]
            if left >= 0:
                meter.tick()
                tree.value[node] = monoid.multiply(
                    int(tree.value[left]), int(tree.value[tree.right_child[node]])
                )
        return tree

    def update(self, i: int, a: int) -> None:
        if not 1 <= i <= self.n:
            raise PositionOutOfRange(f"position {i} out of range 1..{self.n}", payload={"i": i})
        meter = self._meter
        meter.tick()
        node = self.leaf[i]
        self.value[node] = self.monoid.morphism[a]
        node = self.parent[node]
        value = self.value
        while node >= 0:
            meter.tick()
            value[node] = self.monoid.multiply(
                int(value[self.left_child[node]]), int(value[self.right_child[node]])
            )
            node = self.parent[node]
        self.version += 1

    def test(self) -> bool:
        self._meter.tick()
        return int(self.value[0]) in self.monoid.accepting

    def root(self) -> int:
        return int(self.value[0])

    def cells(self) -> int:
        return 4 * len(self.value) + self.n + 1

    def checksum(self) -> int:
        return zlib.crc32(self.value.tobytes())

    def depth(self) -> int:
        d, node = 0, self.leaf[self.n]
        while node >= 0:
            d += 1
            node = self.parent[node]
        return d
