from __future__ import annotations

import bisect
from typing import List, Optional

from core.occlists import OccurrenceCursor, OccurrenceList
from utils.error_handler import TraversalOverrun, assert_invariant


class _Traversal:
    """
    Фоновый обход одного Λ_a: один элемент за шаг, буфер из не более p
    крайних позиций просмотренного префикса. Список заморожен на время сессии.
    """

    kind = "base"

    def __init__(self, letter: int, occ: OccurrenceList, p: int) -> None:
        self.letter = letter
        self.p = p
        self.total = len(occ)
        self.visited = 0
        self.buffer: List[int] = []
        self.done = False
        self._cursor: Optional[OccurrenceCursor] = occ.retrieve()
        self._result: Optional[List[int]] = None

    def _keep(self, x: int) -> None:
        raise NotImplementedError

    def step(self) -> None:
        if self.done:
            return
        x = self._cursor.advance()
        if x is None:
            self.done = True
            self._cursor = None
            return
        self.visited += 1
        self._keep(x)

    @property
    def remaining(self) -> int:
        return self.total - self.visited

    def finish(self) -> List[int]:
        """Дочитать остаток (не более p элементов) и вернуть буфер по возрастанию."""
        if self._result is not None:
            return self._result
        assert_invariant(
            self.remaining <= self.p,
            TraversalOverrun,
            f"{self.kind} traversal finished too early",
            letter=self.letter,
            remaining=self.remaining,
            p=self.p,
        )
        while not self.done:
            self.step()
        self._result = list(self.buffer)
        return self._result

    @staticmethod
    def capacity(p: int) -> int:
        # буфер, курсор, счётчики, флаг и сохранённый результат
        return 2 * p + 4


class MinTraversal(_Traversal):
    """Хранит не более p наименьших просмотренных позиций."""

    kind = "min"

    def _keep(self, x: int) -> None:
        buf = self.buffer
        if len(buf) < self.p:
            bisect.insort(buf, x)
        elif x < buf[-1]:
            buf.pop()
            bisect.insort(buf, x)


class MaxLeftTraversal(_Traversal):
    """Хранит не более p наибольших просмотренных позиций, не правее r1."""

    kind = "max-left"

    def __init__(self, letter: int, occ: OccurrenceList, p: int, r1: int) -> None:
        super().__init__(letter, occ, p)
        self.r1 = r1

    def _keep(self, x: int) -> None:
        if x > self.r1:
            return
        buf = self.buffer
        if len(buf) < self.p:
            bisect.insort(buf, x)
        elif x > buf[0]:
            buf.pop(0)
            bisect.insort(buf, x)
