from __future__ import annotations

import logging
from typing import Any, Dict, Optional, Type

logger = logging.getLogger("infix")


# === Специализированные исключения ===
class InfixError(Exception):
    """Базовое исключение движка перечисления L-инфиксов."""

    def __init__(
        self,
        message: str,
        code: Optional[str] = None,
        offset: Optional[int] = None,
        line: Optional[int] = None,
        payload: Optional[Dict[str, Any]] = None,
    ) -> None:
        super().__init__(message)
        self.message = message
        self.code = code or type(self).__name__
        self.offset = offset
        self.line = line
        self.payload = payload or {}

    def __str__(self) -> str:
        where = []
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.offset is not None:
            where.append(f"offset {self.offset}")
        if where:
            return f"{self.message} ({', '.join(where)})"
        return self.message


# --- Ошибки входных данных (exit code 1) ---
class RegexSyntaxError(InfixError):
    """Синтаксическая ошибка в регулярном выражении (offset = байтовая позиция)."""


class UnknownSymbol(InfixError):
    """Символ не входит в алфавит."""


class LanguageFileError(InfixError):
    """Некорректный файл языка (line = номер строки)."""


class ScriptError(InfixError):
    """Некорректная команда сценария run."""


class PositionOutOfRange(InfixError):
    """Позиция вне 1..n."""


class ThresholdRejected(InfixError):
    """Явный порог из файла языка не прошёл проверку."""


class NeutralHintRejected(InfixError):
    """neutral-hint указывает букву, которая не нейтральна."""


# --- Неподдерживаемые операции (exit code 2) ---
class MonoidTooLarge(InfixError):
    """Синтаксический моноид больше ограничителя INFIX_MONOID_LIMIT."""


class UnsupportedLanguage(InfixError):
    """Для языка нет перечислителя с гарантиями сложности."""


class NotSemiExtensible(InfixError):
    """Порог запрошен для языка вне класса semi-extensible ZG."""


class NotSemiExtensibleZg(InfixError):
    """Сессия semiext запущена для языка вне класса semi-extensible ZG."""


class NotExtensible(InfixError):
    """Алгоритм even-odd требует расширяемый язык."""


class NoNeutralLetter(InfixError):
    """Алгоритм even-odd требует нейтральную букву."""


# --- Протокол сессий ---
class StaleSession(InfixError):
    """Слово изменилось после старта сессии."""


class UpdateDuringEnumeration(InfixError):
    """Обновление во время активной сессии, которая владеет Ψ."""


class StaleCursor(InfixError):
    """Список вхождений изменился во время обхода курсором."""


# --- Внутренние инварианты (баги, а не ошибки пользователя) ---
class InternalInvariantError(InfixError):
    """Нарушен внутренний инвариант алгоритма."""


class DuplicateInsert(InternalInvariantError):
    """Insert элемента, который уже в списке."""


class MissingDelete(InternalInvariantError):
    """Delete элемента, которого нет в списке."""


class TraversalOverrun(InternalInvariantError):
    """При завершении фонового обхода осталось больше p элементов."""


class LimitNotTracked(InternalInvariantError):
    """Новый предел не отслеживается в RI предыдущего предела."""


class RareOverflow(InternalInvariantError):
    """Список редких вхождений достиг p элементов."""


# === Классификация для CLI ===
INPUT_ERRORS = frozenset(
    {
        RegexSyntaxError,
        UnknownSymbol,
        LanguageFileError,
        ScriptError,
        PositionOutOfRange,
        ThresholdRejected,
        NeutralHintRejected,
    }
)

UNSUPPORTED_ERRORS = frozenset(
    {
        MonoidTooLarge,
        UnsupportedLanguage,
        NotSemiExtensible,
        NotSemiExtensibleZg,
        NotExtensible,
        NoNeutralLetter,
    }
)


def exit_code_for(exc: BaseException) -> int:
    """0 успех, 1 ошибка ввода, 2 неподдерживаемая операция."""
    for cls in type(exc).__mro__:
        if cls in INPUT_ERRORS:
            return 1
        if cls in UNSUPPORTED_ERRORS:
            return 2
    if isinstance(exc, (OSError, ValueError)):
        return 1
    return 1


# === Утилита: проверка инварианта с логированием ===
def assert_invariant(
    condition: bool,
    exc_cls: Type[InternalInvariantError],
    message: str,
    **payload: Any,
) -> None:
    if condition:
        return
    logger.error("[INVARIANT][%s] %s payload=%s", exc_cls.__name__, message, payload)
    raise exc_cls(message, payload=payload)
