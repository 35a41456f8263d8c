"""Sparse polynomials over element codes of a finite ring or field.

A monomial is a sorted tuple of ``(variable id, exponent)`` pairs, so new
variables can be introduced without re-padding existing polynomials.  A
polynomial is a dict ``{monomial: nonzero code}``.
"""

from __future__ import annotations

import numpy as np

from ..fields import FieldTower

ONE_MONO = ()


class CodeArith:
    """Scalar and vectorized arithmetic on codes of a LocalRing or FieldTower."""

    def __init__(self, domain):
        self.domain = domain
        self.is_field = isinstance(domain, FieldTower)
        if self.is_field:
            n = domain.size
            a = np.arange(n)
            self._add = np.asarray(domain.add(a[:, None], a[None, :]), dtype=np.int64)
            self._mul = np.asarray(domain.mul(a[:, None], a[None, :]), dtype=np.int64)
            self._neg = np.asarray(domain.neg(a), dtype=np.int64)
            self.one = 1
        else:
            t = domain.tables
            if t is not None:
                self._add, self._mul, self._neg = (np.asarray(x, dtype=np.int64) for x in t)
            else:
                self._add = self._mul = self._neg = None
            self.one = domain.one_code
        self.size = domain.size

    @property
    def tables(self):
        return self._add is not None

    def add(self, a, b):
        if self._add is not None:
            return self._add[a, b]
        return self.domain.add_codes(a, b)

    def mul(self, a, b):
        if self._mul is not None:
            return self._mul[a, b]
        return self.domain.mul_codes(a, b)

    def neg(self, a):
        if self._neg is not None:
            return self._neg[a]
        return self.domain.neg_codes(a)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def power(self, a, n):
        out = np.broadcast_to(np.asarray(self.one), np.shape(a)).copy() if np.ndim(a) else self.one
        base = a
        while n:
            if n & 1:
                out = self.mul(out, base)
            n >>= 1
            if n:
                base = self.mul(base, base)
        return out


def mono_mul(m1, m2):
    if not m1:
        return m2
    if not m2:
        return m1
    d = dict(m1)
    for v, e in m2:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_pow(m, k):
    return tuple((v, e * k) for v, e in m) if k else ONE_MONO


def mono_vars(m):
    return [v for v, _ in m]


def variables(p):
    out = set()
    for m in p:
        out.update(mono_vars(m))
    return sorted(out)


def const(A, c):
    c = int(c)
    return {ONE_MONO: c} if c else {}


def var(A, v, coeff=None):
    c = int(A.one if coeff is None else coeff)
    return {((v, 1),): c} if c else {}


def add(A, p, q):
    out = dict(p)
    for m, c in q.items():
        s = int(A.add(out.get(m, 0), c))
        if s:
            out[m] = s
        else:
            out.pop(m, None)
    return out


def neg(A, p):
    return {m: int(A.neg(c)) for m, c in p.items()}


def sub(A, p, q):
    return add(A, p, neg(A, q))


def scale(A, c, p):
    out = {}
    for m, d in p.items():
        s = int(A.mul(c, d))
        if s:
            out[m] = s
    return out


def mul(A, p, q):
    out = {}
    for m1, c1 in p.items():
        for m2, c2 in q.items():
            c = int(A.mul(c1, c2))
            if not c:
                continue
            m = mono_mul(m1, m2)
            s = int(A.add(out.get(m, 0), c))
            if s:
                out[m] = s
            else:
                out.pop(m, None)
    return out


def power(A, p, n):
    out = const(A, A.one)
    base = p
    while n:
        if n & 1:
            out = mul(A, out, base)
        n >>= 1
        if n:
            base = mul(A, base, base)
    return out


def substitute(A, p, images):
    """p with variable v replaced by the polynomial ``images[v]`` (others kept)."""
    out = {}
    cache = {}
    for m, c in p.items():
        term = const(A, c)
        for v, e in m:
            if v in images:
                key = (v, e)
                if key not in cache:
                    cache[key] = power(A, images[v], e)
                term = mul(A, term, cache[key])
            else:
                term = mul(A, term, {((v, e),): A.one})
        out = add(A, out, term)
    return out


def rename(p, mapping):
    out = {}
    for m, c in p.items():
        out[tuple(sorted((mapping.get(v, v), e) for v, e in m))] = c
    return out


def frobenius_exps(p, q):
    """Q(T^q): every exponent multiplied by q."""
    return {tuple((v, e * q) for v, e in m): c for m, c in p.items()}


def map_coeffs(p, f):
    out = {}
    for m, c in p.items():
        d = int(f(c))
        if d:
            out[m] = d
    return out


def degree(p):
    return max((sum(e for _, e in m) for m in p), default=0)


def evaluate(A, p, env, shape=()):
    """Evaluate on arrays of codes: ``env[v]`` is a code or an array of codes."""
    acc = np.zeros(shape, dtype=np.int64)
    pw = {}
    for m, c in p.items():
        t = np.full(shape, c, dtype=np.int64)
        for v, e in m:
            key = (v, e)
            if key not in pw:
                pw[key] = A.power(np.asarray(env[v], dtype=np.int64), e)
            t = A.mul(t, pw[key])
        acc = A.add(acc, t)
    return acc


def format_poly(p, names, coeff_fmt=str):
    if not p:
        return "0"
    terms = []
    for m in sorted(p, key=lambda m: (-sum(e for _, e in m), m)):
        c = coeff_fmt(p[m])
        word = "*".join(names[v] if e == 1 else f"{names[v]}^{e}" for v, e in m)
        if not word:
            terms.append(c)
        elif c == "1":
            terms.append(word)
        else:
            terms.append(f"({c})*{word}")
    return " + ".join(terms)
