from __future__ import annotations

from typing import Dict, Optional

from core.env_loader import load_and_check_env


class OpCounter:
    """Монотонный счётчик абстрактных шагов с контрольными точками по фазам."""

    __slots__ = ("ops", "checkpoints")

    def __init__(self) -> None:
        self.ops = 0
        self.checkpoints: Dict[str, int] = {}

    def checkpoint(self, name: str) -> int:
        self.checkpoints[name] = self.ops
        return self.ops


class MemCounter:
    """Живые дополнительные ячейки (в машинных словах) и их максимум."""

    __slots__ = ("live", "high_water", "allocations")

    def __init__(self) -> None:
        self.live = 0
        self.high_water = 0
        self.allocations = 0

    def reset_high_water(self) -> None:
        self.high_water = self.live


class Meter:
    enabled = True

    def __init__(self) -> None:
        self.op = OpCounter()
        self.mem = MemCounter()

    @property
    def ops(self) -> int:
        return self.op.ops

    def tick(self, k: int = 1) -> None:
        self.op.ops += k

    def alloc(self, cells: int) -> None:
        mem = self.mem
        mem.live += cells
        mem.allocations += 1
        if mem.live > mem.high_water:
            mem.high_water = mem.live

    def release(self, cells: int) -> None:
        self.mem.live -= cells

    def checkpoint(self, name: str) -> int:
        return self.op.checkpoint(name)


class NullMeter(Meter):
    """Отключённый счётчик: все вызовы пустые."""

    enabled = False

    def tick(self, k: int = 1) -> None:
        pass

    def alloc(self, cells: int) -> None:
        pass

    def release(self, cells: int) -> None:
        pass


NULL_METER = NullMeter()


def make_meter(enabled: Optional[bool] = None) -> Meter:
    """Счётчик по конфигу INFIX_METER, если enabled не задан явно."""
    if enabled is None:
        enabled = load_and_check_env()["METER"]
    return Meter() if enabled else NULL_METER
