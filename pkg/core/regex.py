from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Sequence, Tuple, Union as _U

from utils.error_handler import RegexSyntaxError, UnknownSymbol

# Зарезервированные символы грамматики
RESERVED = frozenset("|&*+?()~.,#:")


@dataclass(frozen=True)
class Alphabet:
    letters: Tuple[str, ...]
    index: Dict[str, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.letters:
            raise UnknownSymbol("alphabet must contain at least one letter")
        for pos, s in enumerate(self.letters):
            if len(s) != 1 or not s.isprintable() or s.isspace() or s in RESERVED:
                raise UnknownSymbol(f"bad alphabet symbol {s!r}", offset=pos)
        if len(set(self.letters)) != len(self.letters):
            raise UnknownSymbol("alphabet symbols must be distinct")
        object.__setattr__(self, "index", {s: i for i, s in enumerate(self.letters)})

    @classmethod
    def of(cls, symbols: Iterable[str]) -> "Alphabet":
        return cls(tuple(symbols))

    def __len__(self) -> int:
        return len(self.letters)

    def encode(self, text: str) -> List[int]:
        out = []
        for pos, ch in enumerate(text):
            if ch not in self.index:
                raise UnknownSymbol(f"symbol {ch!r} not in alphabet", offset=pos)
            out.append(self.index[ch])
        return out

    def decode(self, ids: Sequence[int]) -> str:
        return "".join(self.letters[i] for i in ids)


# ---------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------
@dataclass(frozen=True)
class Sym:
    letter: int


@dataclass(frozen=True)
class Eps:
    pass


@dataclass(frozen=True)
class Dot:
    pass


@dataclass(frozen=True)
class Concat:
    left: "RegexAst"
    right: "RegexAst"


@dataclass(frozen=True)
class Union:
    left: "RegexAst"
    right: "RegexAst"


@dataclass(frozen=True)
class Inter:
    left: "RegexAst"
    right: "RegexAst"


@dataclass(frozen=True)
class Star:
    inner: "RegexAst"


@dataclass(frozen=True)
class Plus:
    inner: "RegexAst"


@dataclass(frozen=True)
class Opt:
    inner: "RegexAst"


RegexAst = _U[Sym, Eps, Dot, Concat, Union, Inter, Star, Plus, Opt]


def union_of(nodes: Sequence[RegexAst]) -> RegexAst:
    """Объединение списка узлов; пустой список даёт ~ (только пустое слово под звездой)."""
    if not nodes:
        return Eps()
    out = nodes[0]
    for node in nodes[1:]:
        out = Union(out, node)
    return out


def concat_of(*nodes: RegexAst) -> RegexAst:
    out = nodes[0]
    for node in nodes[1:]:
        out = Concat(out, node)
    return out


# ---------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------
class _Parser:
    def __init__(self, text: str, alphabet: Alphabet) -> None:
        self.text = text
        self.alphabet = alphabet
        self.pos = 0

    def _offset(self, pos: int) -> int:
        # байтовый сдвиг, а не индекс символа
        return len(self.text[:pos].encode("utf-8"))

    def error(self, message: str, pos: int = None) -> RegexSyntaxError:
        p = self.pos if pos is None else pos
        return RegexSyntaxError(message, offset=self._offset(p))

    def peek(self) -> str:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def parse(self) -> RegexAst:
        node = self.union()
        ch = self.peek()
        if ch == ")":
            raise self.error("unbalanced parenthesis")
        if ch:
            raise self.error(f"unexpected {ch!r}")
        return node

    def union(self) -> RegexAst:
        node = self.inter()
        while self.peek() == "|":
            self.pos += 1
            node = Union(node, self.inter())
        return node

    def inter(self) -> RegexAst:
        node = self.concat()
        while self.peek() == "&":
            self.pos += 1
            node = Inter(node, self.concat())
        return node

    def concat(self) -> RegexAst:
        parts: List[RegexAst] = []
        while True:
            ch = self.peek()
            if ch in ("", "|", "&", ")"):
                break
            parts.append(self.postfix())
        if not parts:
            raise self.error("expected expression")
        return concat_of(*parts)

    def postfix(self) -> RegexAst:
        node = self.atom()
        while True:
            ch = self.peek()
            if ch == "*":
                node = Star(node)
            elif ch == "+":
                node = Plus(node)
            elif ch == "?":
                node = Opt(node)
            else:
                return node
            self.pos += 1

    def atom(self) -> RegexAst:
        ch = self.peek()
        start = self.pos
        if ch == "(":
            self.pos += 1
            node = self.union()
            if self.peek() != ")":
                raise self.error("missing closing parenthesis")
            self.pos += 1
            return node
        self.pos += 1
        if ch == "~":
            return Eps()
        if ch == ".":
            return Dot()
        if ch in ("*", "+", "?"):
            raise self.error(f"dangling operator {ch!r}", start)
        if ch not in self.alphabet.index:
            raise UnknownSymbol(f"symbol {ch!r} not in alphabet", offset=self._offset(start))
        return Sym(self.alphabet.index[ch])


def parse_regex(text: str, alphabet: Alphabet) -> RegexAst:
    """Разбор выражения: `|` < `&` < конкатенация < постфиксные `* + ?`."""
    return _Parser(text, alphabet).parse()
