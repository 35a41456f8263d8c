"""Plain-text polynomial grammar with integer coefficients.

    expr   := ['-'] term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' INT)?
    atom   := INT | NAME | '(' expr ')'

Polynomials are dicts mapping exponent tuples (one slot per variable, in
the order given) to nonzero integer coefficients.
"""

from __future__ import annotations

import re
from collections import defaultdict

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\S))")


class PolySyntaxError(ValueError):
    def __init__(self, message, text, pos):
        super().__init__(f"{message} at position {pos} in {text!r}")
        self.pos = pos


def _tokenize(text):
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        num, name, sym = m.groups()
        start = m.start(1) if num else m.start(2) if name else m.start(3)
        if num:
            out.append(("int", int(num), start))
        elif name:
            out.append(("name", name, start))
        else:
            out.append(("sym", sym, start))
        pos = m.end()
    out.append(("end", None, len(text)))
    return out


class _Parser:
    # intermediate polys: {frozenset((name, exp), ...): coeff}

    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self):
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, msg):
        raise PolySyntaxError(msg, self.text, self.peek()[2])

    def parse(self):
        p = self.expr()
        if self.peek()[0] != "end":
            self.fail("unexpected token")
        return p

    def expr(self):
        sign = 1
        if self.peek()[:2] == ("sym", "-"):
            self.take()
            sign = -1
        acc = _scale(self.term(), sign)
        while self.peek()[0] == "sym" and self.peek()[1] in "+-":
            op = self.take()[1]
            acc = _add(acc, _scale(self.term(), 1 if op == "+" else -1))
        return acc

    def term(self):
        acc = self.factor()
        while self.peek()[:2] == ("sym", "*"):
            self.take()
            acc = _mul(acc, self.factor())
        return acc

    def factor(self):
        base = self.atom()
        if self.peek()[:2] == ("sym", "^"):
            self.take()
            kind, val, _ = self.peek()
            if kind != "int":
                self.fail("expected integer exponent")
            self.take()
            out = {frozenset(): 1}
            for _ in range(val):
                out = _mul(out, base)
            return out
        return base

    def atom(self):
        kind, val, _ = self.peek()
        if kind == "int":
            self.take()
            return {frozenset(): val} if val else {}
        if kind == "name":
            self.take()
            return {frozenset([(val, 1)]): 1}
        if (kind, val) == ("sym", "("):
            self.take()
            inner = self.expr()
            if self.peek()[:2] != ("sym", ")"):
                self.fail("expected ')'")
            self.take()
            return inner
        if (kind, val) == ("sym", "-"):
            self.take()
            return _scale(self.factor(), -1)
        self.fail("expected a number, a name or '('")


def _add(a, b):
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, 0) + v
        if out[k] == 0:
            del out[k]
    return out


def _scale(a, c):
    return {k: c * v for k, v in a.items()} if c else {}


def _mul(a, b):
    out = defaultdict(int)
    for ka, va in a.items():
        for kb, vb in b.items():
            exps = dict(ka)
            for name, e in kb:
                exps[name] = exps.get(name, 0) + e
            out[frozenset(exps.items())] += va * vb
    return {k: v for k, v in out.items() if v}


def parse_polynomial(text, variables=None):
    """Parse ``text``; return ``(poly, variables)``.

    With ``variables`` given, unknown names are an error; otherwise names are
    collected in order of first appearance.
    """
    raw = _Parser(text).parse()
    if variables is None:
        seen = []
        for tok in _tokenize(text):
            if tok[0] == "name" and tok[1] not in seen:
                seen.append(tok[1])
        variables = seen
    variables = list(variables)
    index = {v: i for i, v in enumerate(variables)}
    out = {}
    for key, coeff in raw.items():
        exps = [0] * len(variables)
        for name, e in key:
            if name not in index:
                raise PolySyntaxError(f"unknown variable {name!r}", text, text.find(name))
            exps[index[name]] = e
        out[tuple(exps)] = out.get(tuple(exps), 0) + coeff
    return {k: v for k, v in out.items() if v}, variables


def format_monomial(exps, variables):
    parts = []
    for name, e in zip(variables, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts)


def format_polynomial(poly, variables):
    """Inverse of :func:`parse_polynomial`, highest total degree first."""
    if not poly:
        return "0"
    keys = sorted(poly, key=lambda k: (sum(k), k), reverse=True)
    out = ""
    for k in keys:
        c = poly[k]
        mono = format_monomial(k, variables)
        mag = abs(c)
        body = mono if (mono and mag == 1) else (f"{mag}*{mono}" if mono else str(mag))
        if not out:
            out = ("-" if c < 0 else "") + body
        else:
            out += ("-" if c < 0 else "+") + body
    return out
