from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple, Union

from core.adhoc_enum import AdhocMatch, AdhocSession, match_adhoc
from core.instrument import NULL_METER, Meter
from core.language import Language
from core.membership import MonoidTree
from core.occlists import LetterIndex
from core.oracle import brute_enumerate
from core.semiext_enum import start_session
from core.simple_enum import SimpleSession, enumerate_extensible
from utils.error_handler import (
    PositionOutOfRange,
    StaleSession,
    UnknownSymbol,
    UnsupportedLanguage,
    UpdateDuringEnumeration,
)

logger = logging.getLogger("infix.engine")

Infix = Tuple[int, int]

STRATEGIES = ("adhoc", "semiext", "simple", "oracle-only")


@dataclass(frozen=True)
class Strategy:
    name: str
    adhoc: Optional[AdhocMatch] = None

    @property
    def guaranteed(self) -> bool:
        """Есть ли у стратегии оценки задержки (oracle-only квадратичная)."""
        return self.name != "oracle-only"


def select_strategy(language: Language) -> Strategy:
    """adhoc по отпечатку -> semiext -> simple (расширяемый + e) -> oracle-only."""
    report = language.report
    match = match_adhoc(language)
    if match is not None:
        return Strategy("adhoc", match)
    if report.is_semi_extensible_zg and report.threshold is not None:
        return Strategy("semiext")
    if report.is_extensible and report.neutral:
        return Strategy("simple")
    return Strategy("oracle-only")


class OracleSession:
    """Квадратичный запасной путь: перебор при старте, затем выдача по одному."""

    def __init__(self, index: LetterIndex, language: Language) -> None:
        self.index = index
        self._version = index.version
        self._items: Optional[Iterator[Infix]] = iter(
            sorted(brute_enumerate(language.dfa, index.letters()))
        )

    def __iter__(self) -> "OracleSession":
        return self

    def __next__(self) -> Infix:
        if self.index.version != self._version:
            raise StaleSession("word updated after the enumeration started")
        if self._items is None:
            raise StopIteration
        try:
            return next(self._items)
        except StopIteration:
            self._items = None
            raise

    def close(self) -> None:
        self._items = None


Session = Union[AdhocSession, SimpleSession, OracleSession]


class InfixEngine:
    """
    Слово + Λ (+ Ψ для even-odd и запросов member) + выбранная стратегия.
    Обновления идут только через substitute().
    """

    def __init__(
        self,
        language: Language,
        word: Union[str, Sequence[int]],
        meter: Meter = NULL_METER,
        strategy: Optional[Strategy] = None,
    ) -> None:
        self.language = language
        self.meter = meter
        letters = language.encode(word) if isinstance(word, str) else list(word)
        if not letters:
            raise PositionOutOfRange("word must have at least one letter")
        self.strategy = strategy or select_strategy(language)
        meter.checkpoint("build:start")
        self.index = LetterIndex.build(letters, len(language.alphabet), meter)
        self.tree: Optional[MonoidTree] = None
        if self.strategy.name == "simple":
            self.tree = MonoidTree.build(letters, language.monoid, meter)
        meter.checkpoint("build:end")
        self._simple: Optional[SimpleSession] = None
        logger.info(
            "[ENGINE] language=%s n=%d strategy=%s",
            language.name,
            self.n,
            self.strategy.name,
        )

    # ------------------------------------------------------------------
    @property
    def n(self) -> int:
        return self.index.n

    @property
    def word(self) -> str:
        return self.language.alphabet.decode(self.index.letters())

    def letters(self) -> List[int]:
        return self.index.letters()

    def cells(self) -> int:
        """Постоянные структуры: Λ и, если построено, Ψ."""
        return self.index.cells() + (self.tree.cells() if self.tree is not None else 0)

    # ------------------------------------------------------------------
    # Обновления
    # ------------------------------------------------------------------
    def substitute(self, i: int, letter: Union[str, int]) -> None:
        if isinstance(letter, str):
            if letter not in self.language.alphabet.index:
                raise UnknownSymbol(f"letter {letter!r} not in alphabet")
            a = self.language.alphabet.index[letter]
        else:
            a = letter
        if not 0 <= a < len(self.language.alphabet):
            raise UnknownSymbol(f"letter id {a} not in alphabet")
        if self._simple is not None and self._simple.active:
            raise UpdateDuringEnumeration("close the running enumeration before updating the word")
        old = self.index.apply_substitution(i, a)
        if self.tree is not None and old != a:
            self.tree.update(i, a)

    # ------------------------------------------------------------------
    # Запросы
    # ------------------------------------------------------------------
    def enumerate(self, meter: Optional[Meter] = None, diagnostics: bool = False) -> Session:
        meter = self.meter if meter is None else meter
        name = self.strategy.name
        if name == "adhoc":
            return AdhocSession(self.index, self.strategy.adhoc, meter)
        if name == "semiext":
            report, family = self.language.report, self.language.family
            return start_session(self.index, report, family, meter, diagnostics)
        if name == "simple":
            if self._simple is not None and self._simple.active:
                self._simple.close()
            self._simple = enumerate_extensible(self.index, self.tree, self.language.report, meter=meter)
            return self._simple
        if name == "oracle-only":
            return OracleSession(self.index, self.language)
        raise UnsupportedLanguage(f"unknown strategy {name!r}")

    def member(self) -> bool:
        """w ∈ L по Ψ; дерево строится при первом запросе и дальше обновляется."""
        if self._simple is not None and self._simple.active:
            raise UpdateDuringEnumeration("membership structure is held by a running enumeration")
        if self.tree is None:
            self.tree = MonoidTree.build(self.index.letters(), self.language.monoid, self.meter)
        return self.tree.test()

    def count_results(self) -> int:
        return sum(1 for _ in self.enumerate())
