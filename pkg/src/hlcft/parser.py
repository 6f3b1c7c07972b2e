"""Expression language for series, symbols and Witt vectors.

Grammar (LL(1))::

    symsum := sterm (("+" | "-") sterm)*
    sterm  := ["-"] [INT "*"] symbol
    symbol := "{" expr ("," expr)* "}"
    witt   := "w" "(" expr (";" expr)* ")"
    expr   := term (("+" | "-") term)*
    term   := unary (("*" | "/") unary)*
    unary  := "-" unary | power
    power  := atom ["^" ["-"] INT]
    atom   := INT | "g" | "t" INT | "(" expr ")"

``g`` is the residue-field generator, ``t1..tn`` the local parameters.
"""
from __future__ import annotations

import re
from dataclasses import dataclass


class ParseError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        self.pos = pos
        line = text.count("\n", 0, pos) + 1
        col = pos - (text.rfind("\n", 0, pos) + 1) + 1
        self.line, self.col = line, col
        super().__init__(f"{message} at line {line}, column {col}")


# -- AST ----------------------------------------------------------------------

@dataclass(frozen=True)
class Int:
    value: int


@dataclass(frozen=True)
class Gen:
    pass


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exp: int


@dataclass(frozen=True)
class Symbol:
    entries: tuple


@dataclass(frozen=True)
class SymSum:
    terms: tuple  # of (coefficient, Symbol)


@dataclass(frozen=True)
class Witt:
    comps: tuple


# -- lexer ----------------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<var>t\d+)|(?P<name>[A-Za-z_]\w*)|(?P<op>[-+*/^{}(),;]))")


def _tokens(text: str):
    pos = 0
    out = []
    while True:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            rest = text[pos:]
            if rest.strip():
                bad = pos + len(rest) - len(rest.lstrip())
                raise ParseError(f"unexpected character {text[bad]!r}", text, bad)
            out.append(("end", None, len(text)))
            return out
        start = m.start(m.lastgroup)
        kind = m.lastgroup
        val = m.group(kind)
        if kind == "int":
            val = int(val)
        elif kind == "var":
            val = int(val[1:])
        out.append((kind, val, start))
        pos = m.end()


class _Parser:
    def __init__(self, text: str, n=None):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0
        self.n = n

    def peek(self):
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise ParseError(msg, self.text, tok[2])

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def is_op(self, *ops):
        kind, val, _ = self.peek()
        return kind == "op" and val in ops

    def expect(self, op):
        if not self.is_op(op):
            self.error(f"expected {op!r}")
        return self.take()

    def finish(self, node):
        if self.peek()[0] != "end":
            self.error("unexpected trailing input")
        return node

    # expressions
    def expr(self):
        node = self.term()
        while self.is_op("+", "-"):
            op = self.take()[1]
            node = BinOp(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.is_op("*", "/"):
            op = self.take()[1]
            node = BinOp(op, node, self.unary())
        return node

    def unary(self):
        if self.is_op("-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.is_op("^"):
            self.take()
            sign = 1
            if self.is_op("-"):
                self.take()
                sign = -1
            kind, val, _ = self.peek()
            if kind != "int":
                self.error("expected an integer exponent")
            self.take()
            return Pow(base, sign * val)
        return base

    def atom(self):
        tok = self.peek()
        kind, val, _ = tok
        if kind == "int":
            self.take()
            return Int(val)
        if kind == "var":
            if val < 1 or (self.n is not None and val > self.n):
                self.error(f"unknown variable t{val}")
            self.take()
            return Var(val)
        if kind == "name":
            if val == "g":
                self.take()
                return Gen()
            self.error(f"unknown name {val!r}")
        if self.is_op("("):
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        self.error("expected an expression")

    # compound
    def symbol(self):
        self.expect("{")
        entries = [self.expr()]
        while self.is_op(","):
            self.take()
            entries.append(self.expr())
        self.expect("}")
        return Symbol(tuple(entries))

    def sterm(self, sign):
        if self.is_op("-"):
            self.take()
            sign = -sign
        coef = 1
        kind, val, _ = self.peek()
        if kind == "int":
            self.take()
            coef = val
            self.expect("*")
        return sign * coef, self.symbol()

    def symsum(self):
        terms = [self.sterm(1)]
        while self.is_op("+", "-"):
            sign = 1 if self.take()[1] == "+" else -1
            terms.append(self.sterm(sign))
        degs = {len(s.entries) for _, s in terms}
        if len(degs) > 1:
            self.error("symbols of different degree in one sum", self.toks[0])
        return SymSum(tuple(terms))

    def witt(self):
        kind, val, _ = self.peek()
        if kind != "name" or val != "w":
            self.error("expected a Witt literal w(...)")
        self.take()
        self.expect("(")
        comps = [self.expr()]
        while self.is_op(";"):
            self.take()
            comps.append(self.expr())
        self.expect(")")
        return Witt(tuple(comps))


def parse_expr(text: str, n=None):
    p = _Parser(text, n)
    return p.finish(p.expr())


def parse_symsum(text: str, n=None) -> SymSum:
    p = _Parser(text, n)
    return p.finish(p.symsum())


def parse_witt(text: str, n=None) -> Witt:
    p = _Parser(text, n)
    return p.finish(p.witt())


def parse(text: str, n=None):
    """Any of: symbol sum, Witt literal, series expression."""
    p = _Parser(text, n)
    kind, val, _ = p.peek()
    # a symbol sum starts with ["-"] [INT "*"] "{"
    look = [t[1] if t[0] == "op" else t[0] for t in p.toks[:4]]
    if look[:1] == ["-"]:
        look = look[1:]
    if look[:1] == ["{"] or look[:3] == ["int", "*", "{"]:
        return p.finish(p.symsum())
    if kind == "name" and val == "w":
        return p.finish(p.witt())
    return p.finish(p.expr())


# -- printer ----------------------------------------------------------------------

_PREC = {"+": 1, "-": 1, "*": 2, "/": 2}


def to_text(node, ctx=0) -> str:
    """Canonical text; parse(to_text(a)) == a."""
    if isinstance(node, Int):
        return str(node.value)
    if isinstance(node, Gen):
        return "g"
    if isinstance(node, Var):
        return f"t{node.index}"
    if isinstance(node, Neg):
        s = "-" + to_text(node.arg, 3)
        return f"({s})" if ctx > 3 else s
    if isinstance(node, Pow):
        s = f"{to_text(node.base, 5)}^{node.exp}"
        return f"({s})" if ctx >= 5 else s
    if isinstance(node, BinOp):
        prec = _PREC[node.op]
        left = to_text(node.left, prec)
        right = to_text(node.right, prec + 1)
        s = f"{left} {node.op} {right}" if prec == 1 else f"{left}{node.op}{right}"
        return f"({s})" if ctx > prec else s
    if isinstance(node, Symbol):
        return "{" + ", ".join(to_text(e) for e in node.entries) + "}"
    if isinstance(node, SymSum):
        parts = []
        for k, (c, sym) in enumerate(node.terms):
            body = to_text(sym)
            mag = abs(c)
            core = body if mag == 1 else f"{mag}*{body}"
            if k == 0:
                parts.append(("-" if c < 0 else "") + core)
            else:
                parts.append((" - " if c < 0 else " + ") + core)
        return "".join(parts)
    if isinstance(node, Witt):
        return "w(" + "; ".join(to_text(c) for c in node.comps) + ")"
    raise TypeError(f"not an AST node: {node!r}")
