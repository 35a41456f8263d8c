"""Text grammar for formulas, and the matching printer.

    formula := disj
    disj    := conj ('or' conj)*
    conj    := unary ('and' unary)*
    unary   := 'not' unary | ('exists' | 'forall') NAME (',' NAME)* '.' formula
             | '(' formula ')' | atom
    atom    := term ('=' | '!=') term
    term    := ['-'] prod (('+' | '-') prod)*
    prod    := factor ('*' factor)*
    factor  := '0' | '1' | NAME | '#' NAME | '(' term ')' | '-' factor

A quantifier's body extends as far to the right as possible.  ``a != b``
is read as ``not a = b`` and printed back the same way.
"""

from __future__ import annotations

import re

from .syntax import (ONE, ZERO, Add, And, Eq, Exists, Forall, Mul, Neg, Not, One, Or,
                     Param, Var, Zero)

KEYWORDS = {"not", "and", "or", "exists", "forall"}
_TOKEN = re.compile(r"\s*(?:(!=|[=+*\-().,#])|([A-Za-z_][A-Za-z_0-9]*)|(\d+)|(\S))")


class FormulaSyntaxError(ValueError):
    def __init__(self, message, text, pos):
        super().__init__(f"{message} at position {pos}: {text[:pos]}<HERE>{text[pos:]}")
        self.pos = pos


def _tokens(text):
    out = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos and not m.group(0):
            break
        sym, name, num, bad = m.groups()
        if sym is None and name is None and num is None and bad is None:
            break
        start = m.end() - len(m.group(0).lstrip())
        if bad is not None:
            raise FormulaSyntaxError(f"unexpected character {bad!r}", text, start)
        kind = "sym" if sym else "name" if name else "num"
        out.append((kind, sym or name or num, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokens(text)
        self.i = 0

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def fail(self, msg):
        raise FormulaSyntaxError(msg, self.text, self.peek()[2])

    def expect(self, value):
        t = self.peek()
        if t[1] != value or t[0] == "end":
            self.fail(f"expected {value!r}")
        return self.take()

    def is_kw(self, word):
        t = self.peek()
        return t[0] == "name" and t[1] == word

    # formulas
    def formula(self):
        return self.disj()

    def disj(self):
        parts = [self.conj()]
        while self.is_kw("or"):
            self.take()
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self):
        parts = [self.unary()]
        while self.is_kw("and"):
            self.take()
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self):
        if self.is_kw("not"):
            self.take()
            return Not(self.unary())
        if self.is_kw("exists") or self.is_kw("forall"):
            kind = self.take()[1]
            names = [self.name()]
            while self.peek()[1] == ",":
                self.take()
                names.append(self.name())
            self.expect(".")
            body = self.formula()
            cls = Exists if kind == "exists" else Forall
            for n in reversed(names):
                body = cls(n, body)
            return body
        if self.peek()[1] == "(":
            save = self.i
            try:
                return self.atom()
            except FormulaSyntaxError:
                self.i = save
            self.take()
            f = self.formula()
            self.expect(")")
            return f
        return self.atom()

    def name(self):
        t = self.peek()
        if t[0] != "name" or t[1] in KEYWORDS:
            self.fail("expected a variable name")
        return self.take()[1]

    def atom(self):
        left = self.term()
        t = self.peek()
        if t[1] == "=":
            self.take()
            return Eq(left, self.term())
        if t[1] == "!=":
            self.take()
            return Not(Eq(left, self.term()))
        self.fail("expected '=' or '!='")

    # terms
    def term(self):
        if self.peek()[1] == "-":
            self.take()
            acc = Neg(self.prod())
        else:
            acc = self.prod()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "sym":
            op = self.take()[1]
            rhs = self.prod()
            acc = Add(acc, rhs if op == "+" else Neg(rhs))
        return acc

    def prod(self):
        acc = self.factor()
        while self.peek()[1] == "*":
            self.take()
            acc = Mul(acc, self.factor())
        return acc

    def factor(self):
        t = self.peek()
        if t[0] == "num":
            if t[1] not in ("0", "1"):
                self.fail("only the numerals 0 and 1 exist in the ring language")
            self.take()
            return ZERO if t[1] == "0" else ONE
        if t[1] == "#":
            self.take()
            return Param(self.name())
        if t[1] == "(":
            self.take()
            inner = self.term()
            self.expect(")")
            return inner
        if t[1] == "-":
            self.take()
            return Neg(self.factor())
        if t[0] == "name" and t[1] not in KEYWORDS:
            return Var(self.take()[1])
        self.fail("expected a term")


def parse(text):
    """Parse a formula; raises FormulaSyntaxError with the offending position."""
    p = _Parser(text)
    f = p.formula()
    if p.peek()[0] != "end":
        p.fail("unexpected trailing input")
    return f


def parse_term(text):
    p = _Parser(text)
    t = p.term()
    if p.peek()[0] != "end":
        p.fail("unexpected trailing input")
    return t


# ---------------------------------------------------------------------------
# printing


def format_term(t, prec=0):
    # prec: 0 sum context, 1 product context, 2 factor context
    if isinstance(t, Zero):
        return "0"
    if isinstance(t, One):
        return "1"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Param):
        return "#" + t.name
    if isinstance(t, Add):
        left = format_term(t.left, 0)
        if isinstance(t.right, Neg):
            s = f"{left} - {format_term(t.right.arg, 1)}"
        else:
            s = f"{left} + {format_term(t.right, 1)}"
        return f"({s})" if prec > 0 else s
    if isinstance(t, Mul):
        s = f"{format_term(t.left, 1)}*{format_term(t.right, 2)}"
        return f"({s})" if prec > 1 else s
    if isinstance(t, Neg):
        s = f"-{format_term(t.arg, 2)}"
        return f"({s})" if prec > 0 else s
    raise TypeError(t)


def _open_right(f):
    """Does the printed form end in a quantifier body (which extends rightwards)?"""
    while isinstance(f, Not):
        f = f.arg
    return isinstance(f, (Exists, Forall))


def format_formula(f, top=True):
    if isinstance(f, Eq):
        return f"{format_term(f.left)} = {format_term(f.right)}"
    if isinstance(f, Not):
        a = f.arg
        if isinstance(a, Eq):
            return f"{format_term(a.left)} != {format_term(a.right)}"
        inner = format_formula(a, False)
        if isinstance(a, (And, Or)) and len(a.args) > 1:
            inner = f"({inner})"
        return f"not {inner}"
    if isinstance(f, (Exists, Forall)):
        kw = "exists" if isinstance(f, Exists) else "forall"
        return f"{kw} {f.var}. {format_formula(f.body)}"
    if isinstance(f, (And, Or)):
        if not f.args:
            return "0 = 0" if isinstance(f, And) else "0 = 1"
        if len(f.args) == 1:
            return format_formula(f.args[0], top)
        word = " and " if isinstance(f, And) else " or "
        parts = []
        for i, a in enumerate(f.args):
            s = format_formula(a, False)
            nested = isinstance(a, (And, Or)) and len(a.args) > 1
            if nested and (type(a) is type(f) or isinstance(a, Or)):
                s = f"({s})"
            elif _open_right(a) and i < len(f.args) - 1:
                s = f"({s})"
            parts.append(s)
        return word.join(parts)
    raise TypeError(f)
