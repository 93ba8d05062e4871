"""Expression syntax shared by the CLI and the tests.

Grammar (whitespace is insignificant)::

    expr    := term (("+" | "-") term)*
    term    := unary ("*" unary)*
    unary   := "-" unary | power
    power   := atom ("^" INT)?
    atom    := INT | label | "Ch" "(" INT ")" | "R" | "V" INT | "U" INT
             | "(" expr ")"
    label   := factor ("." factor)*
    factor  := "(" index+ ")"
    index   := "~"? INT

A parenthesised group made only of indices is a factor, so ``(3)`` is the
one-index factor (the unit), not the integer 3.  ``~`` marks an index on the
opposite side and is only allowed in nice mode; ``R``, ``V``, ``U`` only in
hkn mode.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

MODES = ("nice", "perfect", "hkn")


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}")

    def pretty(self) -> str:
        return f"{self.args[0]}\n  {self.text}\n  {' ' * self.pos}^"


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Label:
    # each factor: (codirected indices, opposite indices)
    factors: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...]


@dataclass(frozen=True)
class Chern:
    index: int


@dataclass(frozen=True)
class Gen:
    name: str  # "R", "V" or "U"
    index: int = 0


@dataclass(frozen=True)
class Neg:
    arg: "Expr"


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exp: int


Expr = Union[Num, Label, Chern, Gen, Neg, BinOp, Pow]

_TOKEN = re.compile(r"\s*(?:(\d+)|(Ch)|([RVU])|(.))", re.DOTALL)


def tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m.end() == pos or not m.group(0).strip():
            break
        num, ch, gen, other = m.groups()
        start = m.end() - len(m.group(0).lstrip())
        if num:
            toks.append(("int", num, start))
        elif ch:
            toks.append(("ch", ch, start))
        elif gen:
            toks.append(("gen", gen, start))
        else:
            if other not in "()+-*.~^":
                raise ParseError(f"unexpected character {other!r}", text, start)
            toks.append((other, other, start))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, mode: str, n: int):
        if mode not in MODES:
            raise ValueError(f"unknown mode {mode!r}")
        self.text = text
        self.mode = mode
        self.n = n
        self.toks = tokenize(text)
        self.i = 0

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self, kind: str | None = None):
        tok = self.peek()
        if kind is not None and tok[0] != kind:
            self.error(f"expected {kind!r}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def error(self, msg: str, pos: int | None = None):
        raise ParseError(msg, self.text, self.peek()[2] if pos is None else pos)

    def index(self, tok, limit: int | None = None) -> int:
        value = int(tok[1])
        top = self.n if limit is None else limit
        if not 1 <= value <= top:
            self.error(f"index {value} out of range 1..{top}", tok[2])
        return value

    def parse(self) -> Expr:
        if self.peek()[0] == "end":
            self.error("empty expression")
        e = self.expr()
        if self.peek()[0] != "end":
            self.error(f"unexpected {self.peek()[1]!r}")
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek()[0] in "+-":
            op = self.take()[0]
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek()[0] == "*":
            self.take()
            e = BinOp("*", e, self.unary())
        return e

    def unary(self) -> Expr:
        if self.peek()[0] == "-":
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            base = Pow(base, int(self.take("int")[1]))
        return base

    def atom(self) -> Expr:
        kind, value, pos = self.peek()
        if kind == "int":
            self.take()
            return Num(int(value))
        if kind == "ch":
            self.take()
            self.take("(")
            idx = self.index(self.take("int"))
            self.take(")")
            return Chern(idx)
        if kind == "gen":
            if self.mode != "hkn":
                self.error(f"{value} is only available in hkn mode", pos)
            self.take()
            if value == "R":
                return Gen("R")
            return Gen(value, self.index(self.take("int"), self.n - 1))
        if kind == "(":
            if self._looks_like_factor():
                return self.label()
            self.take()
            e = self.expr()
            self.take(")")
            return e
        self.error(f"unexpected {value or 'end of input'!r}", pos)

    def _looks_like_factor(self) -> bool:
        # Two adjacent indices or a "~" can only occur inside a factor, so
        # such groups commit to the label branch even when malformed.
        k = 1
        count = 0
        while True:
            kind = self.peek(k)[0]
            if kind == "~":
                return True
            if kind == "int":
                count += 1
                k += 1
                continue
            return count > 1 or (kind == ")" and count > 0)

    def label(self) -> Label:
        factors = [self.factor()]
        while self.peek()[0] == ".":
            self.take()
            if self.peek()[0] != "(":
                self.error("expected a factor after '.'")
            factors.append(self.factor())
        seen: set[int] = set()
        for I, J in factors:
            for i in I + J:
                if i in seen:
                    self.error(f"index {i} appears in two factors of one label")
                seen.add(i)
        return Label(tuple(factors))

    def factor(self) -> tuple[tuple[int, ...], tuple[int, ...]]:
        if self.mode == "hkn":
            self.error("labels are not available in hkn mode")
        self.take("(")
        I: list[int] = []
        J: list[int] = []
        while self.peek()[0] not in (")", "end"):
            bar = False
            if self.peek()[0] == "~":
                if self.mode != "nice":
                    self.error("'~' is not allowed in perfect mode")
                self.take()
                bar = True
            tok = self.take("int")
            i = self.index(tok)
            if i in I or i in J:
                self.error(f"index {i} repeated within factor", tok[2])
            (J if bar else I).append(i)
        self.take(")")
        return tuple(I), tuple(J)


def parse(text: str, mode: str = "nice", n: int = 0) -> Expr:
    return _Parser(text, mode, n).parse()
