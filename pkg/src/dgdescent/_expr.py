"""Tiny recursive-descent parser for polynomial expressions.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INTEGER)?
    atom   := INTEGER | IDENT | '(' expr ')'

Division is only allowed by nonzero rational constants.  The parser is
generic: identifiers are resolved by a callback and the arithmetic is done
by whatever objects the callback returns (they must support ``+ - *`` with
each other and with rationals, and ``**`` with non-negative ints).
"""

from __future__ import annotations

import re
from typing import Callable

from .commalg.groebner import QQ


class ExprError(ValueError):
    def __init__(self, msg: str, col: int):
        super().__init__(f"{msg} (column {col + 1})")
        self.msg = msg
        self.col = col


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_']*)|(\S))")


def tokenize(text: str):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(1):
            toks.append(("num", m.group(1), m.start(1)))
        elif m.group(2):
            toks.append(("id", m.group(2), m.start(2)))
        elif m.group(3):
            toks.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    toks.append(("end", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, lookup: Callable[[str, int], object], one):
        self.toks = tokenize(text)
        self.i = 0
        self.lookup = lookup
        self.one = one

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def expect(self, val):
        tok = self.take()
        if tok[1] != val:
            raise ExprError(f"expected {val!r}, got {tok[1] or 'end of input'!r}", tok[2])

    def expr(self):
        v = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            w = self.term()
            v = v + w if op == "+" else v - w
        return v

    def term(self):
        v = self.unary()
        while self.peek()[1] in ("*", "/"):
            _, op, col = self.take()
            w = self.unary()
            if op == "*":
                v = v * w
            else:
                c = _constant(w)
                if c is None or c == 0:
                    raise ExprError("division only by nonzero rational constants", col)
                v = v * (QQ(1) / c)
        return v

    def unary(self):
        if self.peek()[1] == "-":
            self.take()
            return -self.unary()
        if self.peek()[1] == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "num":
                raise ExprError("exponent must be a non-negative integer", tok[2])
            return base ** int(tok[1])
        return base

    def atom(self):
        kind, val, col = self.take()
        if kind == "num":
            return self.one * QQ(int(val))
        if kind == "id":
            return self.lookup(val, col)
        if val == "(":
            v = self.expr()
            self.expect(")")
            return v
        raise ExprError(f"unexpected {val or 'end of input'!r}", col)


def _constant(v):
    if isinstance(v, (int,)) or type(v).__name__ in ("mpq", "Fraction"):
        return QQ(v)
    const = getattr(v, "constant_value", None)
    return const() if const else None


def parse_expression(text: str, lookup: Callable[[str, int], object], one):
    """Parse ``text``; ``one`` is the unit of the target ring."""
    p = _Parser(text, lookup, one)
    v = p.expr()
    tok = p.peek()
    if tok[0] != "end":
        raise ExprError(f"unexpected {tok[1]!r}", tok[2])
    return v
