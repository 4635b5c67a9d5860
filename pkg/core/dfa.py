from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Sequence, Tuple

import numpy as np

from core.regex import (
    Alphabet,
    Concat,
    Dot,
    Eps,
    Inter,
    Opt,
    Plus,
    RegexAst,
    Star,
    Sym,
    Union,
)

logger = logging.getLogger("infix.dfa")


@dataclass(frozen=True, eq=False)
class Dfa:
    """
    Полный детерминированный автомат. Состояние 0 начальное.
    delta[q, a] -> q', accepting[q] -> bool.
    """

    alphabet: Alphabet
    delta: np.ndarray
    accepting: np.ndarray
    initial: int = 0
    rows: List[List[int]] = field(init=False, repr=False, compare=False)
    finals: List[bool] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        # списки быстрее numpy-скаляров в горячих циклах
        object.__setattr__(self, "rows", self.delta.tolist())
        object.__setattr__(self, "finals", [bool(x) for x in self.accepting])

    @property
    def num_states(self) -> int:
        return int(self.delta.shape[0])

    def run(self, state: int, letters: Sequence[int]) -> int:
        rows = self.rows
        for a in letters:
            state = rows[state][a]
        return state

    def accepts(self, letters: Sequence[int]) -> bool:
        return self.finals[self.run(self.initial, letters)]

    @property
    def accepts_empty(self) -> bool:
        return self.finals[self.initial]

    def same_as(self, other: "Dfa") -> bool:
        return (
            self.alphabet == other.alphabet
            and self.delta.shape == other.delta.shape
            and bool(np.array_equal(self.delta, other.delta))
            and bool(np.array_equal(self.accepting, other.accepting))
        )


def dfa_accepts(dfa: Dfa, letters: Sequence[int]) -> bool:
    return dfa.accepts(letters)


def dfa_equivalent(first: Dfa, second: Dfa) -> bool:
    """Минимальные автоматы в канонической нумерации равны iff языки равны."""
    return first.same_as(second)


# ---------------------------------------------------------------------
# Thompson NFA
# ---------------------------------------------------------------------
class _Nfa:
    def __init__(self, k: int) -> None:
        self.k = k
        self.eps: List[List[int]] = []
        self.moves: List[List[Tuple[int, int]]] = []

    def state(self) -> int:
        self.eps.append([])
        self.moves.append([])
        return len(self.eps) - 1

    def build(self, node: RegexAst) -> Tuple[int, int]:
        if isinstance(node, Sym):
            s, t = self.state(), self.state()
            self.moves[s].append((node.letter, t))
            return s, t
        if isinstance(node, Dot):
            s, t = self.state(), self.state()
            for a in range(self.k):
                self.moves[s].append((a, t))
            return s, t
        if isinstance(node, Eps):
            s, t = self.state(), self.state()
            self.eps[s].append(t)
            return s, t
        if isinstance(node, Concat):
            s1, t1 = self.build(node.left)
            s2, t2 = self.build(node.right)
            self.eps[t1].append(s2)
            return s1, t2
        if isinstance(node, Union):
            s, t = self.state(), self.state()
            for child in (node.left, node.right):
                cs, ct = self.build(child)
                self.eps[s].append(cs)
                self.eps[ct].append(t)
            return s, t
        if isinstance(node, (Star, Plus, Opt)):
            s, t = self.state(), self.state()
            cs, ct = self.build(node.inner)
            self.eps[s].append(cs)
            self.eps[ct].append(t)
            if not isinstance(node, Plus):
                self.eps[s].append(t)
            if not isinstance(node, Opt):
                self.eps[ct].append(cs)
            return s, t
        if isinstance(node, Inter):
            return self.embed(_intersect(node, self.k))
        raise TypeError(f"unknown regex node {node!r}")

    def embed(self, table: Tuple[np.ndarray, np.ndarray]) -> Tuple[int, int]:
        """Встраивает готовый DFA как фрагмент NFA."""
        delta, accepting = table
        base = len(self.eps)
        for _ in range(delta.shape[0]):
            self.state()
        t = self.state()
        for q in range(delta.shape[0]):
            for a in range(self.k):
                self.moves[base + q].append((a, base + int(delta[q, a])))
            if accepting[q]:
                self.eps[base + q].append(t)
        return base, t

    def closure(self, states) -> FrozenSet[int]:
        seen = set(states)
        stack = list(states)
        while stack:
            q = stack.pop()
            for t in self.eps[q]:
                if t not in seen:
                    seen.add(t)
                    stack.append(t)
        return frozenset(seen)


def _determinize(nfa: _Nfa, start: int, accept: int) -> Tuple[np.ndarray, np.ndarray]:
    """Построение подмножеств; пустое множество становится стоком."""
    k = nfa.k
    first = nfa.closure([start])
    ids: Dict[FrozenSet[int], int] = {first: 0}
    order = [first]
    rows: List[List[int]] = []
    i = 0
    while i < len(order):
        current = order[i]
        targets: List[List[int]] = [[] for _ in range(k)]
        for q in current:
            for a, t in nfa.moves[q]:
                targets[a].append(t)
        row = []
        for a in range(k):
            nxt = nfa.closure(targets[a])
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
            row.append(ids[nxt])
        rows.append(row)
        i += 1
    delta = np.array(rows, dtype=np.int32).reshape(len(order), k)
    accepting = np.array([accept in s for s in order], dtype=bool)
    return delta, accepting


def _minimize(delta: np.ndarray, accepting: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Уточнение разбиения (Мур) + каноническая BFS-нумерация от состояния 0."""
    n, k = delta.shape
    table = delta.tolist()
    cls = [1 if x else 0 for x in accepting.tolist()]
    count = len(set(cls))
    while True:
        signatures: Dict[Tuple[int, ...], int] = {}
        new_cls = []
        for q in range(n):
            sig = (cls[q],) + tuple(cls[t] for t in table[q])
            new_cls.append(signatures.setdefault(sig, len(signatures)))
        cls = new_cls
        if len(signatures) == count:
            break
        count = len(signatures)

    # BFS от начального класса: одинаковые языки дают одинаковые таблицы
    canon = {cls[0]: 0}
    rep = {cls[q]: q for q in range(n)}
    queue = deque([cls[0]])
    rows: List[List[int]] = []
    finals: List[bool] = []
    while queue:
        c = queue.popleft()
        q = rep[c]
        row = []
        for a in range(k):
            tc = cls[table[q][a]]
            if tc not in canon:
                canon[tc] = len(canon)
                queue.append(tc)
            row.append(canon[tc])
        rows.append(row)
        finals.append(bool(accepting[q]))
    return (
        np.array(rows, dtype=np.int32).reshape(len(rows), k),
        np.array(finals, dtype=bool),
    )


def _product(
    left: Tuple[np.ndarray, np.ndarray], right: Tuple[np.ndarray, np.ndarray]
) -> Tuple[np.ndarray, np.ndarray]:
    """Произведение автоматов: обход достижимых пар (как crawl в greenery)."""
    (d1, f1), (d2, f2) = left, right
    k = d1.shape[1]
    t1, t2 = d1.tolist(), d2.tolist()
    ids = {(0, 0): 0}
    order = [(0, 0)]
    rows = []
    i = 0
    while i < len(order):
        q1, q2 = order[i]
        row = []
        for a in range(k):
            nxt = (t1[q1][a], t2[q2][a])
            if nxt not in ids:
                ids[nxt] = len(order)
                order.append(nxt)
            row.append(ids[nxt])
        rows.append(row)
        i += 1
    delta = np.array(rows, dtype=np.int32).reshape(len(order), k)
    accepting = np.array([bool(f1[a]) and bool(f2[b]) for a, b in order], dtype=bool)
    return delta, accepting


def _compile_table(node: RegexAst, k: int) -> Tuple[np.ndarray, np.ndarray]:
    if isinstance(node, Inter):
        return _intersect(node, k)
    nfa = _Nfa(k)
    start, accept = nfa.build(node)
    return _minimize(*_determinize(nfa, start, accept))


def _intersect(node: Inter, k: int) -> Tuple[np.ndarray, np.ndarray]:
    return _minimize(*_product(_compile_table(node.left, k), _compile_table(node.right, k)))


def compile_min_dfa(ast: RegexAst, alphabet: Alphabet) -> Dfa:
    delta, accepting = _compile_table(ast, len(alphabet))
    logger.debug("[DFA] states=%d letters=%d", delta.shape[0], len(alphabet))
    return Dfa(alphabet=alphabet, delta=delta, accepting=accepting)


def from_table(alphabet: Alphabet, delta, accepting) -> Dfa:
    """Минимизирует произвольную полную таблицу переходов (начальное состояние 0)."""
    d, f = _minimize(np.asarray(delta, dtype=np.int32), np.asarray(accepting, dtype=bool))
    return Dfa(alphabet=alphabet, delta=d, accepting=f)
