# core/bench_log.py
from __future__ import annotations

import logging
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, Iterable, List, Optional

import pandas as pd

from core.engine import InfixEngine, Strategy, select_strategy
from core.env_loader import load_and_check_env
from core.instrument import Meter
from core.language import Language
from utils.error_handler import (
    InternalInvariantError,
    NoNeutralLetter,
    NotExtensible,
    UnsupportedLanguage,
    assert_invariant,
)

logger = logging.getLogger("infix.bench")

FIELDS = [
    "language",
    "n",
    "seed",
    "preprocess_ops",
    "max_update_ops",
    "max_delay_ops",
    "extra_enum_cells",
    "total_cells",
]

LAYOUTS = ("tail", "uniform")


@dataclass(frozen=True)
class Workload:
    """
    tail: слово из нейтральной буквы, кроме окна длины window в конце;
    замены попадают в окно. uniform: буквы по всему слову.
    """

    layout: str = "tail"
    window: int = 64
    neutral_ratio: float = 0.5
    updates: int = 20
    enumerations: int = 3
    max_outputs: int = 5000

    @classmethod
    def from_config(cls, ops: int, layout: str = "tail", cfg: Optional[Dict] = None) -> "Workload":
        cfg = cfg or load_and_check_env()
        return cls(
            layout=layout,
            window=cfg["BENCH_WINDOW"],
            updates=ops,
            max_outputs=cfg["BENCH_MAX_OUTPUTS"],
        )


class BenchReport:
    """Строки замеров в DataFrame с фиксированными колонками FIELDS."""

    def __init__(self, frame: Optional[pd.DataFrame] = None) -> None:
        self.frame = frame if frame is not None else pd.DataFrame(columns=FIELDS)

    def add(self, row: Dict) -> None:
        missing = [k for k in FIELDS if k not in row]
        if missing:
            raise ValueError(f"bench row misses {', '.join(missing)}")
        new = pd.DataFrame([{k: row[k] for k in FIELDS}], columns=FIELDS)
        self.frame = new if self.frame.empty else pd.concat([self.frame, new], ignore_index=True)

    def extend(self, rows: Iterable[Dict]) -> "BenchReport":
        for row in rows:
            self.add(row)
        return self

    def rows(self) -> List[Dict]:
        return self.frame.to_dict(orient="records")

    def column(self, name: str) -> List:
        return self.frame[name].tolist()

    def __len__(self) -> int:
        return len(self.frame)


# ---------------------------------------------------------------------
# Генерация рабочей нагрузки
# ---------------------------------------------------------------------
def _draw(rng: random.Random, neutral: List[int], other: List[int], ratio: float) -> int:
    if neutral and (not other or rng.random() < ratio):
        return rng.choice(neutral)
    return rng.choice(other)


def make_word(language: Language, n: int, rng: random.Random, workload: Workload) -> List[int]:
    k = len(language.alphabet)
    neutral = sorted(language.neutral)
    other = [a for a in range(k) if a not in language.neutral]
    if workload.layout not in LAYOUTS:
        raise ValueError(f"unknown layout {workload.layout!r}")
    if workload.layout == "uniform" or not neutral:
        if workload.layout == "tail":
            logger.warning("[BENCH] language=%s has no neutral letter, using uniform layout", language.name)
        return [_draw(rng, neutral, other, workload.neutral_ratio) for _ in range(n)]
    w = min(workload.window, n)
    window = [_draw(rng, neutral, other, workload.neutral_ratio) for _ in range(w)]
    return [neutral[0]] * (n - w) + window


def _update_range(n: int, word_layout: str, window: int, has_neutral: bool):
    if word_layout == "tail" and has_neutral:
        w = min(window, n)
        return n - w + 1, w
    return 1, n


# ---------------------------------------------------------------------
# Замеры
# ---------------------------------------------------------------------
def _measure(
    language: Language,
    n: int,
    seed: int,
    workload: Workload,
    strategy: Strategy,
) -> Dict:
    # один генератор на всё: окно и замены совпадают для разных n
    rng = random.Random(seed)
    word = make_word(language, n, rng, workload)
    meter = Meter()
    engine = InfixEngine(language, word, meter, strategy)
    preprocess_ops = meter.ops

    lo, width = _update_range(n, workload.layout, workload.window, bool(language.neutral))
    k = len(language.alphabet)
    max_update = 0
    max_delay = 0
    extra_cells = 0
    per_round = max(1, workload.updates // max(1, workload.enumerations))
    done_updates = 0

    for _ in range(workload.enumerations):
        for _ in range(per_round):
            if done_updates >= workload.updates:
                break
            pos = lo + rng.randrange(width)
            before = meter.ops
            engine.substitute(pos, rng.randrange(k))
            max_update = max(max_update, meter.ops - before)
            done_updates += 1

        tree_sum = engine.tree.checksum() if engine.tree is not None else None
        meter.mem.reset_high_water()
        base_cells = meter.mem.live
        before = meter.ops
        session = engine.enumerate(meter)
        outputs = 0
        while outputs < workload.max_outputs:
            try:
                next(session)
            except StopIteration:
                # исчерпание тоже часть задержки
                max_delay = max(max_delay, meter.ops - before)
                break
            max_delay = max(max_delay, meter.ops - before)
            before = meter.ops
            outputs += 1
        else:
            # прерывание (восстановление Ψ) в задержку не входит
            session.close()
        extra = meter.mem.high_water - base_cells
        if strategy.name == "simple":
            extra += engine.tree.cells()
        extra_cells = max(extra_cells, extra)
        if tree_sum is not None:
            assert_invariant(
                engine.tree.checksum() == tree_sum,
                InternalInvariantError,
                "membership tree not restored after enumeration",
                n=n,
            )
        logger.debug("[BENCH] language=%s n=%d outputs=%d", language.name, n, outputs)

    row = {
        "language": language.name,
        "n": n,
        "seed": seed,
        "preprocess_ops": preprocess_ops,
        "max_update_ops": max_update,
        "max_delay_ops": max_delay,
        "extra_enum_cells": extra_cells,
        "total_cells": engine.cells() + extra_cells,
    }
    logger.info(
        "[BENCH] language=%s n=%d strategy=%s delay=%d cells=%d",
        language.name,
        n,
        strategy.name,
        max_delay,
        extra_cells,
    )
    return row


def profile_enumeration(
    language: Language,
    n: int,
    seed: int,
    workload: Optional[Workload] = None,
    allow_oracle: bool = False,
) -> Dict:
    strategy = select_strategy(language)
    if not strategy.guaranteed and not allow_oracle:
        raise UnsupportedLanguage(
            f"language {language.name} has no constant-delay strategy (use --allow-oracle)"
        )
    return _measure(language, n, seed, workload or Workload(), strategy)


def profile_simple_enum(
    language: Language, n: int, seed: int, workload: Optional[Workload] = None
) -> Dict:
    report = language.report
    if not report.is_extensible:
        raise NotExtensible(f"language {language.name} is not extensible")
    if not report.neutral:
        raise NoNeutralLetter(f"language {language.name} has no neutral letter")
    return _measure(language, n, seed, workload or Workload(), Strategy("simple"))


# ---------------------------------------------------------------------
# CSV и график
# ---------------------------------------------------------------------
def emit_csv(report: BenchReport, path) -> None:
    if len(report) == 0:
        raise ValueError("bench report is empty")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    report.frame[FIELDS].to_csv(path, index=False)
    logger.info("[BENCH] wrote %d rows to %s", len(report), path)


def read_csv(path) -> BenchReport:
    frame = pd.read_csv(path, dtype={"language": str})
    if list(frame.columns) != FIELDS:
        raise ValueError(f"unexpected bench header {list(frame.columns)}")
    return BenchReport(frame)


def plot_report(report: BenchReport, path) -> None:
    """max_delay_ops и extra_enum_cells от n, по линии на язык."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, axes = plt.subplots(1, 2, figsize=(10, 4))
    for name, group in report.frame.groupby("language"):
        group = group.sort_values("n")
        axes[0].plot(group["n"], group["max_delay_ops"], marker="o", label=name)
        axes[1].plot(group["n"], group["extra_enum_cells"], marker="o", label=name)
    for ax, title in zip(axes, ("max_delay_ops", "extra_enum_cells")):
        ax.set_xscale("log")
        ax.set_xlabel("n")
        ax.set_title(title)
        ax.grid(True)
        ax.legend()
    fig.tight_layout()
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path)
    plt.close(fig)
