from __future__ import annotations

import logging
from typing import Generator, Iterator, List, Optional, Tuple

from core.classify import ClassificationReport
from core.instrument import NULL_METER, Meter
from core.membership import MonoidTree
from core.occlists import LetterIndex
from utils.error_handler import NoNeutralLetter, NotExtensible, UpdateDuringEnumeration

logger = logging.getLogger("infix.simple")

Infix = Tuple[int, int]


def enumerate_l(
    tree: MonoidTree, word: List[int], l: int, e: int
) -> Generator[Infix, None, bool]:
    """
    Все L-инфиксы с левым концом l. На входе Ψ хранит e^(l-1)·w[l..n];
    на выходе то же самое. Возвращает True, если хоть что-то выдано.
    """
    n = tree.n
    r = n
    if not tree.test():
        # w[l..n] не в L: по расширяемости меньшие r тоже не в L
        return False
    # вниз по r: чётные r
    while r >= l and tree.test():
        if r % 2 == 0:
            yield (l, r)
        tree.update(r, e)
        r -= 1
    # вверх по r с восстановлением: нечётные r
    while r < n:
        r += 1
        tree.update(r, word[r])
        if r % 2 == 1:
            yield (l, r)
    return True


class SimpleSession:
    """
    Курсор even-odd перечисления для расширяемого L с нейтральной буквой.

    Сессия временно портит Ψ (подставляет e) и возвращает его в исходное
    состояние к моменту исчерпания или close(). Пока сессия активна,
    обновления слова запрещены.
    """

    def __init__(
        self,
        index: LetterIndex,
        tree: MonoidTree,
        e: int,
        meter: Meter = NULL_METER,
    ) -> None:
        self.index = index
        self.tree = tree
        self.e = e
        self.exhausted = False
        self._meter = meter
        self._index_version = index.version
        self._tree_version = tree.version
        meter.alloc(self.cells())
        self._gen: Optional[Iterator[Infix]] = self._run()

    def _run(self) -> Iterator[Infix]:
        tree, word, e = self.tree, self.index.word, self.e
        n = tree.n
        l = 1
        for l in range(1, n + 1):
            if l % 2 == 0:
                found = yield from enumerate_l(tree, word, l, e)
                if not found:
                    # дальше по l результатов нет: сразу назад
                    break
            tree.update(l, e)
        for back in range(l, 0, -1):
            tree.update(back, word[back])
            if back % 2 == 1:
                yield from enumerate_l(tree, word, back, e)

    def __iter__(self) -> "SimpleSession":
        return self

    def __next__(self) -> Infix:
        if self._gen is None:
            raise StopIteration
        if self.index.version != self._index_version or self.tree.version != self._tree_version:
            raise UpdateDuringEnumeration("word or membership structure changed during enumeration")
        try:
            out = next(self._gen)
        except StopIteration:
            self._finish()
            raise
        self._tree_version = self.tree.version
        return out

    def _finish(self) -> None:
        self._gen = None
        self.exhausted = True
        self._meter.release(self.cells())

    def close(self) -> None:
        """Прерывание: вернуть Ψ к текущему слову."""
        if self._gen is None:
            return
        self._gen.close()
        tree, word = self.tree, self.index.word
        morphism = tree.monoid.morphism
        restored = 0
        for i in range(1, tree.n + 1):
            if int(tree.value[tree.leaf[i]]) != morphism[word[i]]:
                tree.update(i, word[i])
                restored += 1
        logger.debug("[SIMPLE] close restored=%d", restored)
        self._finish()

    @property
    def active(self) -> bool:
        return self._gen is not None

    def cells(self) -> int:
        # фаза, l, l', r и флаг; дерево учитывается отдельно
        return 5


def enumerate_extensible(
    index: LetterIndex,
    tree: MonoidTree,
    report: ClassificationReport,
    e: Optional[int] = None,
    meter: Meter = NULL_METER,
) -> SimpleSession:
    if not report.is_extensible:
        raise NotExtensible("even-odd enumeration needs an extensible language")
    if not report.neutral:
        raise NoNeutralLetter("even-odd enumeration needs a neutral letter")
    if e is None:
        e = min(report.neutral)
    elif e not in report.neutral:
        raise NoNeutralLetter(f"letter {e} is not neutral")
    return SimpleSession(index, tree, e, meter)
