from __future__ import annotations

import zlib
from typing import Iterator, List, Optional, Sequence

import numpy as np

from core.instrument import NULL_METER, Meter
from utils.error_handler import (
    DuplicateInsert,
    MissingDelete,
    PositionOutOfRange,
    StaleCursor,
)

# 0 как "нет узла": позиции 1-based
_NIL = 0


class OccurrenceList:
    """
    Неупорядоченное множество позиций 1..n с O(1) insert/delete/count.

    Арена из n+1 узлов выделяется один раз: узел позиции i живёт в слоте i,
    prev/next образуют двусвязный список в порядке вставки. Обход идёт в
    порядке вставки, а НЕ по возрастанию.
    """

    __slots__ = ("n", "present", "prev", "next", "head", "tail", "count_", "version", "_meter")

    def __init__(self, n: int, meter: Meter = NULL_METER) -> None:
        self.n = n
        self.present = np.zeros(n + 1, dtype=np.bool_)
        self.prev = np.zeros(n + 1, dtype=np.int64)
        self.next = np.zeros(n + 1, dtype=np.int64)
        self.head = _NIL
        self.tail = _NIL
        self.count_ = 0
        self.version = 0
        self._meter = meter

    def insert(self, i: int) -> None:
        self._meter.tick()
        if self.present[i]:
            raise DuplicateInsert(f"position {i} already stored", payload={"i": i})
        self.present[i] = True
        self.prev[i] = self.tail
        self.next[i] = _NIL
        if self.tail == _NIL:
            self.head = i
        else:
            self.next[self.tail] = i
        self.tail = i
        self.count_ += 1
        self.version += 1

    def delete(self, i: int) -> None:
        self._meter.tick()
        if not self.present[i]:
            raise MissingDelete(f"position {i} not stored", payload={"i": i})
        p, q = int(self.prev[i]), int(self.next[i])
        if p == _NIL:
            self.head = q
        else:
            self.next[p] = q
        if q == _NIL:
            self.tail = p
        else:
            self.prev[q] = p
        self.present[i] = False
        self.prev[i] = _NIL
        self.next[i] = _NIL
        self.count_ -= 1
        self.version += 1

    def count(self) -> int:
        self._meter.tick()
        return self.count_

    def __len__(self) -> int:
        return self.count_

    def __contains__(self, i: int) -> bool:
        return bool(self.present[i])

    def retrieve(self, after: Optional[int] = None) -> "OccurrenceCursor":
        """Курсор в порядке вставки; `after` начинает сразу после данного элемента."""
        if after is None:
            start = self.head
        else:
            if not self.present[after]:
                raise MissingDelete(f"cursor start {after} not stored", payload={"i": after})
            start = int(self.next[after])
        return OccurrenceCursor(self, start)

    def __iter__(self) -> Iterator[int]:
        cur = self.retrieve()
        while True:
            x = cur.advance()
            if x is None:
                return
            yield x

    def cells(self) -> int:
        return 3 * (self.n + 1) + 4

    def checksum(self) -> int:
        crc = zlib.crc32(self.present.tobytes())
        crc = zlib.crc32(self.prev.tobytes(), crc)
        crc = zlib.crc32(self.next.tobytes(), crc)
        return zlib.crc32(np.array([self.head, self.tail, self.count_], dtype=np.int64).tobytes(), crc)


class OccurrenceCursor:
    """Курсор по замороженному списку; изменение списка делает курсор недействительным."""

    __slots__ = ("_list", "_node", "_version")

    def __init__(self, occ: OccurrenceList, start: int) -> None:
        self._list = occ
        self._node = start
        self._version = occ.version

    def advance(self) -> Optional[int]:
        occ = self._list
        occ._meter.tick()
        if occ.version != self._version:
            raise StaleCursor("occurrence list modified during traversal")
        node = self._node
        if node == _NIL:
            return None
        self._node = int(occ.next[node])
        return node

    @property
    def exhausted(self) -> bool:
        return self._node == _NIL


class LetterIndex:
    """Λ: по списку вхождений на букву плюс копия слова (1-based, слот 0 пустой)."""

    def __init__(self, k: int, n: int, meter: Meter = NULL_METER) -> None:
        if n < 1:
            raise PositionOutOfRange("word must have at least one letter")
        self.k = k
        self.n = n
        self.word: List[int] = [-1] * (n + 1)
        self.lists = [OccurrenceList(n, meter) for _ in range(k)]
        self.version = 0
        self._meter = meter

    @classmethod
    def build(cls, word: Sequence[int], k: int, meter: Meter = NULL_METER) -> "LetterIndex":
        index = cls(k, len(word), meter)
        for i, a in enumerate(word, start=1):
            index.word[i] = a
            index.lists[a].insert(i)
        return index

    def count(self, a: int) -> int:
        return self.lists[a].count()

    def apply_substitution(self, i: int, a: int) -> int:
        if not 1 <= i <= self.n:
            raise PositionOutOfRange(f"position {i} out of range 1..{self.n}", payload={"i": i})
        self._meter.tick()
        b = self.word[i]
        if b == a:
            return b
        self.version += 1
        self.lists[b].delete(i)
        self.lists[a].insert(i)
        self.word[i] = a
        return b

    def letters(self) -> List[int]:
        return self.word[1:]

    def cells(self) -> int:
        return (self.n + 1) + sum(lst.cells() for lst in self.lists) + 2

    def checksum(self) -> int:
        crc = zlib.crc32(np.asarray(self.word, dtype=np.int64).tobytes())
        for lst in self.lists:
            crc = zlib.crc32(lst.checksum().to_bytes(4, "little"), crc)
        return crc

    def audit(self) -> bool:
        """Полная проверка разбиения (для тестов)."""
        seen = [0] * (self.n + 1)
        for a, lst in enumerate(self.lists):
            members = list(lst)
            if len(members) != len(lst):
                return False
            for i in members:
                if self.word[i] != a:
                    return False
                seen[i] += 1
        return all(seen[i] == 1 for i in range(1, self.n + 1))
