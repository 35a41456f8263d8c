"""Canonical row spaces over Z/p^e (Howell form) and over finite fields (RREF).

Everything a ring computation needs reduces to three questions about a
finitely generated submodule of R^n: is ``v`` in it, what is the canonical
residue of ``v`` modulo it, and what is the kernel of a matrix.  Over a
field reduced echelon form answers all three; over Z/p^e plain echelon
form does not (zero divisors), so we keep the Howell form: pivots are
powers of p, entries above a pivot ``p^k`` lie in ``[0, p^k)``, and the span
is closed under the "multiply a row by p^(e-k)" operation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .fields import FieldTower


class CoefficientRing:
    p: int
    e: int

    @property
    def modulus(self):
        return self.p**self.e

    @property
    def size(self):
        raise NotImplementedError


@dataclass(frozen=True)
class IntegersMod(CoefficientRing):
    """Z/p^e."""

    p: int
    e: int = 1

    def __post_init__(self):
        from .fields import is_prime

        if not is_prime(self.p) or self.e < 1:
            raise ValueError(f"Z/{self.p}^{self.e} is not a valid coefficient ring")

    @property
    def size(self):
        return self.p**self.e

    @property
    def is_field(self):
        return self.e == 1

    def __repr__(self):
        return f"Z/{self.modulus}" if self.e > 1 else f"F_{self.p}"


@dataclass(frozen=True, eq=False)
class Field(CoefficientRing):
    tower: FieldTower

    @property
    def p(self):
        return self.tower.p

    @property
    def e(self):
        return 1

    @property
    def size(self):
        return self.tower.size

    is_field = True

    def __eq__(self, other):
        return isinstance(other, Field) and self.tower.same_field(other.tower)

    def __hash__(self):
        return hash(("field", self.p, self.tower.degree))

    def __repr__(self):
        return f"F_{self.size}"


def _as_zmod(ring):
    if isinstance(ring, Field) and ring.tower.degree == 1:
        return IntegersMod(ring.p, 1)
    return ring


@dataclass(frozen=True, eq=False)
class RowSpace:
    """Canonical generating matrix of a submodule of ``ring^ncols``."""

    ring: CoefficientRing
    ncols: int
    rows: np.ndarray  # (r, ncols) int64, canonical
    pivcols: np.ndarray  # (r,)
    pivvals: np.ndarray  # (r,) pivot entries (p^k, or 1 over a field)
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __eq__(self, other):
        return (isinstance(other, RowSpace) and self.ring == other.ring
                and self.ncols == other.ncols and self.rows.shape == other.rows.shape
                and bool(np.array_equal(self.rows, other.rows)))

    def __hash__(self):
        return hash((self.ncols, self.rows.tobytes()))

    @property
    def rank(self):
        return self.rows.shape[0]

    def log_size(self):
        """log_p of the number of elements of the span."""
        ring = self.ring
        if isinstance(ring, Field) and ring.tower.degree > 1:
            return self.rank * ring.tower.degree
        total = 0
        for v in self.pivvals:
            k = 0
            v = int(v)
            while v % ring.p == 0 and v > 1:
                v //= ring.p
                k += 1
            total += ring.e - k
        return total

    def size(self):
        return self.ring.p ** self.log_size()

    def reduce(self, v):
        return reduce(v, self)

    def contains(self, v):
        return not np.any(reduce(v, self))

    def contains_space(self, other):
        return not np.any(reduce(other.rows, self)) if other.rank else True

    def elements(self):
        """All members of the span (exhaustive, for tests and small spaces)."""
        ring = _as_zmod(self.ring)
        if isinstance(ring, Field):
            F = ring.tower
            out = []
            for coeffs in itertools.product(range(F.size), repeat=self.rank):
                acc = np.zeros(self.ncols, dtype=np.int64)
                for c, row in zip(coeffs, self.rows):
                    acc = np.asarray(F.add(acc, F.mul(c, row)))
                out.append(tuple(int(x) for x in acc))
            return sorted(set(out))
        mod = ring.modulus
        ranges = [range(mod // int(v)) for v in self.pivvals]
        out = set()
        for coeffs in itertools.product(*ranges):
            acc = np.zeros(self.ncols, dtype=np.int64)
            for c, row in zip(coeffs, self.rows):
                acc = (acc + c * row) % mod
            out.add(tuple(int(x) for x in acc))
        return sorted(out)


def _valuation(col, p, e):
    val = np.full(col.shape, e, dtype=np.int64)
    pk = 1
    for k in range(e):
        hit = (val == e) & (col % (pk * p) != 0)
        val[hit] = k
        pk *= p
    return val


def _howell(M, p, e):
    mod = p**e
    M = np.asarray(M, dtype=np.int64) % mod
    if M.ndim == 1:
        M = M.reshape(1, -1)
    ncols = M.shape[1]
    active = M[np.any(M != 0, axis=1)].copy()
    alive = np.ones(active.shape[0], dtype=bool)
    P = np.zeros((ncols, ncols), dtype=np.int64)  # pivot rows found so far
    pcol, pval = [], []
    for c in range(ncols):
        live = np.flatnonzero(alive)
        if live.size == 0:
            break
        col = active[live, c]
        sel = np.flatnonzero(col)
        if sel.size == 0:
            continue
        nz = live[sel]
        vals = _valuation(col[sel], p, e)
        j = int(np.argmin(vals))
        i = int(nz[j])
        k = int(vals[j])
        pk = p**k
        unit = int(active[i, c]) // pk
        row = active[i] * pow(unit, -1, mod) % mod
        alive[i] = False
        # only rows with a nonzero entry in column c change
        upd = nz[nz != i]
        if upd.size:
            f = active[upd, c] // pk
            active[upd] = (active[upd] - f[:, None] * row) % mod
            alive[upd] = np.any(active[upd] != 0, axis=1)
        if k > 0:
            extra = (row * p ** (e - k)) % mod
            if np.any(extra):
                active = np.vstack([active, extra])
                alive = np.append(alive, True)
        n = len(pcol)
        if n:
            t = P[:n, c] // pk
            P[:n] = (P[:n] - t[:, None] * row) % mod
        P[n] = row
        pcol.append(c)
        pval.append(pk)
    rows = P[:len(pcol)].copy()
    return rows, np.array(pcol, dtype=np.int64), np.array(pval, dtype=np.int64)


def _rref_field(M, F):
    M = np.asarray(M, dtype=np.int64)
    if M.ndim == 1:
        M = M.reshape(1, -1)
    ncols = M.shape[1]
    active = M[np.any(M != 0, axis=1)]
    prow, pcol = [], []
    for c in range(ncols):
        if active.shape[0] == 0:
            break
        nz = np.flatnonzero(active[:, c])
        if nz.size == 0:
            continue
        i = int(nz[0])
        row = np.asarray(F.mul(F.inv(int(active[i, c])), active[i]), dtype=np.int64)
        others = np.delete(active, i, axis=0)
        for j in range(others.shape[0]):
            f = int(others[j, c])
            if f:
                others[j] = F.sub(others[j], F.mul(f, row))
        active = others[np.any(others != 0, axis=1)]
        for j in range(len(prow)):
            f = int(prow[j][c])
            if f:
                prow[j] = np.asarray(F.sub(prow[j], F.mul(f, row)), dtype=np.int64)
        prow.append(row)
        pcol.append(c)
    rows = np.array(prow, dtype=np.int64).reshape(len(prow), ncols)
    return rows, np.array(pcol, dtype=np.int64), np.ones(len(pcol), dtype=np.int64)


def canonicalize(rows, ring, ncols=None):
    """Canonical form of the module spanned by ``rows``."""
    rows = np.asarray(rows, dtype=np.int64)
    if rows.ndim == 1:
        rows = rows.reshape(1, -1) if rows.size else rows.reshape(0, ncols or 0)
    if ncols is None:
        ncols = rows.shape[1]
    if rows.shape[0] == 0:
        rows = np.zeros((0, ncols), dtype=np.int64)
    z = _as_zmod(ring)
    if isinstance(z, Field):
        H, pc, pv = _rref_field(rows, z.tower)
    else:
        H, pc, pv = _howell(rows, z.p, z.e)
    return RowSpace(ring, ncols, H, pc, pv)


def zero_space(ring, ncols):
    return canonicalize(np.zeros((0, ncols), dtype=np.int64), ring, ncols)


def full_space(ring, ncols):
    return canonicalize(np.eye(ncols, dtype=np.int64), ring, ncols)


def reduce(v, S):
    """Canonical residue of ``v`` (a vector or a batch of row vectors) modulo ``S``."""
    v = np.asarray(v, dtype=np.int64)
    single = v.ndim == 1
    V = v.reshape(1, -1) if single else v
    if V.shape[1] != S.ncols:
        raise ValueError(f"dimension mismatch: {V.shape[1]} vs {S.ncols}")
    z = _as_zmod(S.ring)
    if isinstance(z, Field):
        F = z.tower
        V = V.copy()
        for r in range(S.rank):
            c = S.pivcols[r]
            for b in range(V.shape[0]):
                f = int(V[b, c])
                if f:
                    V[b] = F.sub(V[b], F.mul(f, S.rows[r]))
        out = V
    else:
        out = _kernels.reduce_batch(V, S.rows, S.pivcols, S.pivvals, z.modulus)
    return out[0] if single else out


def sum_spaces(A, B):
    return canonicalize(np.vstack([A.rows, B.rows]), A.ring, A.ncols)


def kernel(A, ring):
    """Canonical generating set of ``{x : x A = 0}``."""
    A = np.asarray(A, dtype=np.int64)
    m, n = A.shape
    aug = np.hstack([A, np.eye(m, dtype=np.int64)])
    S = canonicalize(aug, ring, n + m)
    keep = S.pivcols >= n
    return canonicalize(S.rows[keep][:, n:], ring, m)


def intersect(A, B):
    """Intersection of two row spaces via the kernel of the stacked matrix."""
    n = A.ncols
    if A.rank == 0 or B.rank == 0:
        return zero_space(A.ring, n)
    K = kernel(np.vstack([A.rows, B.rows]), A.ring)
    if K.rank == 0:
        return zero_space(A.ring, n)
    z = _as_zmod(A.ring)
    coeff = K.rows[:, : A.rank]
    if isinstance(z, Field):
        F = z.tower
        vecs = []
        for row in coeff:
            acc = np.zeros(n, dtype=np.int64)
            for c, r in zip(row, A.rows):
                acc = np.asarray(F.add(acc, F.mul(int(c), r)))
            vecs.append(acc)
        return canonicalize(np.array(vecs), A.ring, n)
    return canonicalize(coeff @ A.rows % z.modulus, A.ring, n)


@dataclass(frozen=True, eq=False)
class Solver:
    """Express vectors as combinations of fixed generator rows."""

    ring: CoefficientRing
    ngens: int
    ncols: int
    space: RowSpace  # Howell form of [G | I]

    def express(self, b):
        """Return ``x`` with ``x G = b`` or None if ``b`` is not in the span."""
        b = np.asarray(b, dtype=np.int64)
        single = b.ndim == 1
        B = b.reshape(1, -1) if single else b
        aug = np.hstack([B, np.zeros((B.shape[0], self.ngens), dtype=np.int64)])
        res = reduce(aug, self.space)
        ok = ~np.any(res[:, : self.ncols] != 0, axis=1)
        z = _as_zmod(self.ring)
        if isinstance(z, Field):
            x = np.asarray(z.tower.neg(res[:, self.ncols:]), dtype=np.int64)
        else:
            x = (-res[:, self.ncols:]) % z.modulus
        if single:
            return x[0] if ok[0] else None
        return x, ok


def solver(G, ring):
    G = np.asarray(G, dtype=np.int64)
    m, n = G.shape
    aug = np.hstack([G, np.eye(m, dtype=np.int64)])
    return Solver(ring, m, n, canonicalize(aug, ring, n + m))


def solve(G, b, ring):
    """A solution ``x`` of ``x G = b``, or None."""
    return solver(G, ring).express(b)
