"""Polynomial systems over finite local rings and the brute-force oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import _kernels
from ..localring import BudgetError, RingElement
from . import sparse as sp
from .sparse import CodeArith

DEFAULT_BUDGET = 10**7
CHUNK = 1 << 15


def dense_to_sparse(ring, poly):
    """{dense exponent tuple: RingElement or code} -> sparse code polynomial."""
    out = {}
    for exps, c in poly.items():
        code = ring.code_of(c)
        if code:
            out[tuple((v, e) for v, e in enumerate(exps) if e)] = code
    return out


@dataclass
class PolySystem:
    """Equations P_j = 0 (j < M) and inequations P_j != 0 over ``ring``."""

    ring: object
    variables: tuple
    equations: list
    inequations: list

    def __post_init__(self):
        self.variables = tuple(self.variables)
        n = len(self.variables)
        for poly in list(self.equations) + list(self.inequations):
            for exps, c in poly.items():
                if len(exps) != n:
                    raise ValueError(f"exponent tuple {exps} does not match {n} variables")
                if isinstance(c, RingElement) and c.ring is not self.ring:
                    raise ValueError("coefficient from a different ring")

    @property
    def n(self):
        return len(self.variables)

    @property
    def polys(self):
        return list(self.equations) + list(self.inequations)

    def sparse_polys(self):
        return [dense_to_sparse(self.ring, p) for p in self.polys]

    def values(self, point):
        """Values of every polynomial at ``point`` (ring elements or codes)."""
        R = self.ring
        A = CodeArith(R)
        env = {i: R.code_of(x) for i, x in enumerate(point)}
        return [R.from_code(int(sp.evaluate(A, p, env))) for p in self.sparse_polys()]

    def is_solution(self, point):
        vals = self.values(point)
        m = len(self.equations)
        return all(not v for v in vals[:m]) and all(bool(v) for v in vals[m:])

    def map(self, hom):
        """The same system with coefficients pushed through a ring map."""
        S = hom.target

        def push(poly):
            return {k: hom(v if isinstance(v, RingElement) else self.ring.from_code(v)) for k, v in poly.items()}

        return PolySystem(S, self.variables, [push(p) for p in self.equations],
                          [push(p) for p in self.inequations])

    def format(self):
        R = self.ring
        names = list(self.variables)
        fmt = R.label
        lines = [f"vars {' '.join(names)}", "[equations]"]
        sps = self.sparse_polys()
        m = len(self.equations)
        lines += [sp.format_poly(p, names, fmt) for p in sps[:m]]
        lines.append("[inequations]")
        lines += [sp.format_poly(p, names, fmt) for p in sps[m:]]
        return "\n".join(lines)


def _check_budget(count, budget, what):
    if count > budget:
        raise BudgetError(f"{what} needs {count} assignments, budget {int(budget)}", int(budget))


def solve_bruteforce(system, budget=DEFAULT_BUDGET, backend=None):
    """First solution in lexicographic code order (variable 0 most significant), or None."""
    R = system.ring
    n = system.n
    size = R.size
    total = size**n
    _check_budget(total, budget, "brute-force search")
    polys = system.sparse_polys()
    m = len(system.equations)
    A = CodeArith(R)
    if n == 0:
        vals = [int(p.get((), 0)) for p in polys]
        ok = all(v == 0 for v in vals[:m]) and all(v != 0 for v in vals[m:])
        return () if ok else None
    if A.tables:
        hit = _scan_tables(A, polys, m, n, size, total, backend)
    else:
        hit = _scan_vectors(A, polys, m, n, size, total)
    if hit < 0:
        return None
    digits = []
    for _ in range(n):
        digits.append(hit % size)
        hit //= size
    return tuple(R.from_code(c) for c in reversed(digits))


def _scan_tables(A, polys, m, n, size, total, backend):
    coeffs, exps, ptr = [], [], [0]
    maxe = 1
    for p in polys:
        for mono, c in p.items():
            row = [0] * n
            for v, e in mono:
                row[v] = e
                maxe = max(maxe, e)
            coeffs.append(c)
            exps.append(row)
        ptr.append(len(coeffs))
    codes = np.arange(size, dtype=np.int64)
    pows = np.empty((maxe + 1, size), dtype=np.int64)
    pows[0] = A.one
    for e in range(1, maxe + 1):
        pows[e] = A.mul(pows[e - 1], codes)
    exps = np.array(exps, dtype=np.int64).reshape(-1, n)
    return _kernels.poly_scan(A._add, A._mul, pows, np.array(coeffs, dtype=np.int64), exps,
                              np.array(ptr, dtype=np.int64), m, size, 0, total, backend=backend)


def _digits(idx, size, n):
    out = []
    rest = idx.copy()
    for _ in range(n):
        out.append(rest % size)
        rest //= size
    return out[::-1]


def _scan_vectors(A, polys, m, n, size, total):
    for lo in range(0, total, CHUNK):
        idx = np.arange(lo, min(total, lo + CHUNK), dtype=np.int64)
        env = dict(enumerate(_digits(idx, size, n)))
        ok = np.ones(idx.size, dtype=bool)
        for j, p in enumerate(polys):
            val = sp.evaluate(A, p, env, idx.shape)
            ok &= (val == 0) if j < m else (val != 0)
            if not ok.any():
                break
        hit = np.flatnonzero(ok)
        if hit.size:
            return int(lo + hit[0])
    return -1


def solve_field_system(F, free, equations, inequation_groups=(), derived=(), budget=DEFAULT_BUDGET):
    """Brute-force search over ``F^len(free)``.

    ``derived`` lists ``(var, source, table)`` with var = table[source], applied
    in order after the free variables are assigned.  Each inequation group is
    satisfied when one of its polynomials is nonzero.  Returns {var: code} or None.
    """
    A = CodeArith(F)
    size = F.size
    n = len(free)
    total = size**n
    _check_budget(total, budget, "residue-field search")
    for lo in range(0, max(total, 1), CHUNK):
        idx = np.arange(lo, min(total, lo + CHUNK), dtype=np.int64)
        env = dict(zip(free, _digits(idx, size, n)))
        for v, src, table in derived:
            env[v] = np.asarray(table)[env[src]] if np.ndim(env[src]) else int(table[env[src]])
        ok = np.ones(idx.size, dtype=bool)
        for p in equations:
            ok &= sp.evaluate(A, p, env, idx.shape) == 0
            if not ok.any():
                break
        for group in inequation_groups:
            if not ok.any():
                break
            anyz = np.zeros(idx.size, dtype=bool)
            for p in group:
                anyz |= sp.evaluate(A, p, env, idx.shape) != 0
            ok &= anyz
        hit = np.flatnonzero(ok)
        if hit.size:
            i = int(hit[0])
            return {v: int(np.broadcast_to(c, idx.shape)[i]) for v, c in env.items()}
    return None
