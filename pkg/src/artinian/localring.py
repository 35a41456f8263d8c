"""Finite Artinian local rings.

A ring is stored as a module over its prime ring Z/p^e.  Elements are
integer vectors over a list of *coordinates*; each coordinate is a word in
the ring's algebra generators (presentation variables, plus the field
generator ``t`` when the coefficient field is not prime, plus any adjoined
roots).  The vectors are taken modulo a relation module ``W`` kept in Howell
form, so the reduced vector is a canonical normal form.  Multiplication uses
a structure-constant tensor ``T[i, j, :]`` (the reduced product of
coordinates ``i`` and ``j``).

Presentations are turned into this form by linear algebra over the finite
monomial span (no Groebner bases), which works the same way over Z/p^e and
over finite fields.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernels
from .fields import FieldTower, make_prime_field
from .linalg import Field, IntegersMod, RowSpace, canonicalize, kernel, reduce, solve
from .poly import format_monomial, parse_polynomial

DEFAULT_MAX_DEGREE = 12
TABLE_LIMIT = 1024


class RingError(ValueError):
    pass


class PresentationError(RingError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NonNilpotentError(PresentationError):
    pass


class InfiniteQuotientError(PresentationError):
    pass


class NonLocalError(PresentationError):
    pass


class BudgetError(RingError):
    def __init__(self, message, bound):
        super().__init__(message)
        self.bound = bound


# ---------------------------------------------------------------------------
# monomial orders and presentations


@dataclass(frozen=True)
class MonomialOrder:
    kind: str = "grlex"
    arity: int = 0

    def __post_init__(self):
        if self.kind not in ("lex", "grlex"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def key(self, exps):
        exps = tuple(exps)
        return (sum(exps), exps) if self.kind == "grlex" else exps

    def less(self, a, b):
        return self.key(a) < self.key(b)

    def sort(self, exps, descending=False):
        return sorted(exps, key=self.key, reverse=descending)


def _monomials(mu, max_deg):
    """All exponent tuples of total degree <= max_deg."""
    out = []
    for d in range(max_deg + 1):
        for c in itertools.combinations_with_replacement(range(mu), d):
            e = [0] * mu
            for i in c:
                e[i] += 1
            out.append(tuple(e))
    return out


@dataclass(frozen=True, eq=False)
class Presentation:
    """``coeff[X_1..X_mu] / (relations)``.

    Relation coefficients are ints: residues mod p^e for ``IntegersMod``,
    field codes for ``Field``.
    """

    coeff: object
    variables: tuple
    relations: tuple  # tuple of dicts {exps: coeff}
    order: MonomialOrder
    max_degree: int = DEFAULT_MAX_DEGREE

    @classmethod
    def from_text(cls, coeff, variables, relations, order="grlex",
                  max_degree=DEFAULT_MAX_DEGREE, bounds=None):
        variables = tuple(variables)
        rels = []
        for r in relations:
            if isinstance(r, str):
                poly, _ = parse_polynomial(r, variables)
            else:
                poly = dict(r)
            rels.append(_coerce_poly(coeff, poly))
        for name, n in (bounds or {}).items():
            e = [0] * len(variables)
            e[variables.index(name)] = n
            rels.append({tuple(e): 1})
        if isinstance(order, str):
            order = MonomialOrder(order, len(variables))
        return cls(coeff, variables, tuple(rels), order, max_degree)

    def format_relation(self, poly):
        if isinstance(self.coeff, Field) and self.coeff.tower.degree > 1:
            F = self.coeff.tower
            terms = []
            for exps, c in sorted(poly.items(), key=lambda kv: self.order.key(kv[0]), reverse=True):
                mono = format_monomial(exps, self.variables)
                cs = F.format(c)
                cs = f"({cs})" if "+" in cs else cs
                terms.append(mono if cs == "1" and mono else (f"{cs}*{mono}" if mono else cs))
            return "+".join(terms) or "0"
        from .poly import format_polynomial

        return format_polynomial(poly, self.variables)


def _coerce_poly(coeff, poly):
    out = {}
    if isinstance(coeff, Field):
        F = coeff.tower
        for k, c in poly.items():
            c = F.from_int(c)
            if c:
                out[tuple(k)] = c
    else:
        for k, c in poly.items():
            c = int(c) % coeff.modulus
            if c:
                out[tuple(k)] = c
    return out


# ---------------------------------------------------------------------------
# helpers on the coefficient side


class _Coeffs:
    """Uniform view of Z/p^e or F_{p^k} as a free Z/p^e-module of rank k."""

    def __init__(self, coeff):
        if isinstance(coeff, Field):
            self.F = coeff.tower
            self.p, self.e, self.k = self.F.p, 1, self.F.degree
        else:
            self.F = None
            self.p, self.e, self.k = coeff.p, coeff.e, 1
        self.mod = self.p**self.e

    def digits_times_tpow(self, c, j):
        """Digits of ``c * t^j`` (length k)."""
        if self.F is None:
            return [c % self.mod]
        F = self.F
        tj = F.power(F.generator(), j) if F.degree > 1 else 1
        return [int(x) for x in F.digits(int(F.mul(c, tj)))]


def _poly_rows(cf, polys, mu, multipliers, col_index, ncols, truncate_deg=None):
    """Rows for m * r * t^j over all multipliers m, relations r and j < k."""
    rows = []
    for r in polys:
        for m in multipliers:
            for j in range(cf.k):
                row = np.zeros(ncols, dtype=np.int64)
                nz = False
                for exps, c in r.items():
                    ex = tuple(a + b for a, b in zip(exps, m))
                    if truncate_deg is not None and sum(ex) >= truncate_deg:
                        continue
                    digs = cf.digits_times_tpow(c, j)
                    for jj, dgt in enumerate(digs):
                        if dgt:
                            idx = col_index.get((ex, jj))
                            if idx is None:
                                raise KeyError(ex)
                            row[idx] = (row[idx] + dgt) % cf.mod
                            nz = True
                if nz:
                    rows.append(row)
    if not rows:
        return np.zeros((0, ncols), dtype=np.int64)
    return np.array(rows, dtype=np.int64)


def _columns(order, mu, k, max_deg):
    monos = order.sort(_monomials(mu, max_deg), descending=True) if mu else [()]
    if max_deg < 0:
        monos = []
    cols = [(m, j) for m in monos for j in range(k - 1, -1, -1)]
    return cols, {c: i for i, c in enumerate(cols)}


def _unit_vector(n, i):
    v = np.zeros(n, dtype=np.int64)
    v[i] = 1
    return v


# ---------------------------------------------------------------------------
# the ring


class LocalRing:
    """A finite local ring in coordinate form (see module docstring)."""

    is_local = True

    def __init__(self, *, p, e, W, T, one, residue_field, residue_images,
                 gen_names, gen_words, coord_words, x_names, x_vecs,
                 order=None, presentation=None, name="R", gen_relations=None):
        self.p = p
        self.e = e
        self.modulus = p**e
        self.base = IntegersMod(p, e)
        self.W = W
        self.N = W.ncols
        self.T = T
        self.one_vec = one
        self.residue_field = residue_field
        self.residue_images = np.asarray(residue_images, dtype=np.int64)
        self.gen_names = tuple(gen_names)
        self.gen_words = gen_words  # element vector of each algebra generator
        self.coord_words = tuple(tuple(w) for w in coord_words)
        self.x_names = tuple(x_names)
        self.x_vecs = [np.asarray(v, dtype=np.int64) for v in x_vecs]
        self.order = order or MonomialOrder("grlex", len(self.x_names))
        self.presentation = presentation
        self.name = name
        # optional hint: per algebra generator, univariate relation data
        self.gen_relations = gen_relations or {}
        ranges = np.full(self.N, self.modulus, dtype=np.int64)
        for c, v in zip(W.pivcols, W.pivvals):
            ranges[c] = v
        self.ranges = ranges
        self.strides = np.ones(self.N, dtype=np.int64)
        for i in range(self.N - 2, -1, -1):
            self.strides[i] = self.strides[i + 1] * ranges[i + 1]
        self.log_size = int(sum(_logp(int(r), p) for r in ranges))
        self.size = p**self.log_size

    # -- element plumbing ---------------------------------------------------
    def reduce(self, V):
        return reduce(np.asarray(V, dtype=np.int64) % self.modulus, self.W) if self.W.rank else np.asarray(V, dtype=np.int64) % self.modulus

    def add_vec(self, A, B):
        return self.reduce(np.asarray(A) + np.asarray(B))

    def sub_vec(self, A, B):
        return self.reduce(np.asarray(A) - np.asarray(B))

    def neg_vec(self, A):
        return self.reduce(-np.asarray(A))

    def scale_vec(self, A, n):
        return self.reduce(np.asarray(A) * int(n))

    def mul_vec(self, A, B):
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        single = A.ndim == 1 and B.ndim == 1
        A2 = A.reshape(-1, self.N)
        B2 = B.reshape(-1, self.N)
        if A2.shape[0] != B2.shape[0]:
            A2, B2 = np.broadcast_arrays(A2, B2)
            A2, B2 = np.ascontiguousarray(A2), np.ascontiguousarray(B2)
        out = self.reduce(_kernels.bilinear_batch(A2, B2, self.T, self.modulus))
        return out[0] if single else out

    def pow_vec(self, A, n):
        result = np.broadcast_to(self.one_vec, np.shape(A)).copy()
        base = np.asarray(A, dtype=np.int64)
        while n:
            if n & 1:
                result = self.mul_vec(result, base)
            n >>= 1
            if n:
                base = self.mul_vec(base, base)
        return result

    def zero_vec(self):
        return np.zeros(self.N, dtype=np.int64)

    def encode(self, V):
        V = np.asarray(V, dtype=np.int64)
        return V @ self.strides

    def decode(self, codes):
        codes = np.asarray(codes, dtype=np.int64)
        return (codes[..., None] // self.strides) % self.ranges

    @cached_property
    def all_vectors(self):
        return self.decode(np.arange(self.size, dtype=np.int64))

    def element(self, v):
        if isinstance(v, RingElement):
            return v
        if isinstance(v, (int, np.integer)):
            return RingElement(self, tuple(int(x) for x in self.scale_vec(self.one_vec, int(v))))
        return RingElement(self, tuple(int(x) for x in self.reduce(v)))

    def from_code(self, code):
        return RingElement(self, tuple(int(x) for x in self.decode(int(code))))

    def code_of(self, x):
        if isinstance(x, RingElement):
            return int(self.encode(np.array(x.vec)))
        if isinstance(x, (int, np.integer)):
            return int(x)
        return int(self.encode(self.reduce(x)))

    @property
    def zero(self):
        return RingElement(self, (0,) * self.N)

    @property
    def one(self):
        return RingElement(self, tuple(int(x) for x in self.one_vec))

    def gen(self, name):
        return RingElement(self, tuple(int(x) for x in self.gen_words[self.gen_names.index(name)]))

    def x(self, i):
        return RingElement(self, tuple(int(x) for x in self.x_vecs[i]))

    def elements(self):
        return [self.from_code(c) for c in range(self.size)]

    def parse_element(self, text):
        """Evaluate a polynomial in the algebra generators (integer coefficients)."""
        poly, _ = parse_polynomial(text, self.gen_names)
        return self.eval_poly(poly)

    def eval_poly(self, poly, images=None):
        images = images if images is not None else self.gen_words
        acc = self.zero_vec()
        for exps, c in poly.items():
            term = self.scale_vec(self.one_vec, c)
            for g, n in zip(images, exps):
                if n:
                    term = self.mul_vec(term, self.pow_vec(g, n))
            acc = self.add_vec(acc, term)
        return RingElement(self, tuple(int(x) for x in acc))

    def format(self, vec):
        terms = []
        F = self.residue_field
        for i in np.argsort([sum(w) for w in self.coord_words], kind="stable")[::-1][::-1]:
            c = int(vec[i])
            if not c:
                continue
            word = format_monomial(self.coord_words[i], self.gen_names)
            if not word:
                terms.append(str(c))
            elif c == 1:
                terms.append(word)
            else:
                terms.append(f"{c}*{word}")
        del F
        return " + ".join(terms) if terms else "0"

    def __repr__(self):
        return f"LocalRing({self.name}, |R|={self.size})"

    # -- tables for the model checker --------------------------------------
    @cached_property
    def tables(self):
        """(add, mul, neg) tables over element codes, or None when too large."""
        if self.size > TABLE_LIMIT:
            return None
        V = self.all_vectors
        n = self.size
        A = np.repeat(V, n, axis=0)
        B = np.tile(V, (n, 1))
        add = self.encode(self.add_vec(A, B)).reshape(n, n)
        mul = self.encode(self.mul_vec(A, B)).reshape(n, n)
        neg = self.encode(self.neg_vec(V))
        return add.astype(np.int32), mul.astype(np.int32), neg.astype(np.int32)

    def add_codes(self, a, b):
        t = self.tables
        if t is not None:
            return t[0][a, b]
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        return self.encode(self.add_vec(self.decode(a), self.decode(b)))

    def mul_codes(self, a, b):
        t = self.tables
        if t is not None:
            return t[1][a, b]
        a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
        shape = a.shape
        out = self.mul_vec(self.decode(a.ravel()).reshape(-1, self.N), self.decode(b.ravel()).reshape(-1, self.N))
        return self.encode(out).reshape(shape)

    def neg_codes(self, a):
        t = self.tables
        if t is not None:
            return t[2][a]
        return self.encode(self.neg_vec(self.decode(a)))

    @property
    def zero_code(self):
        return 0

    @cached_property
    def one_code(self):
        return int(self.encode(self.one_vec))

    def label(self, code):
        return self.format(self.decode(int(code)))

    # -- residue map ----------------------------------------------------------
    def residue_vec(self, V):
        """Residue codes (in the residue field) of element vectors."""
        F = self.residue_field
        V = np.asarray(V, dtype=np.int64) % self.p
        digs = F.digits(self.residue_images)  # (N, f)
        tot = (V @ digs) % self.p
        return tot @ (self.p ** np.arange(F.degree))

    def residue(self, x):
        return self.residue_field.element(int(self.residue_vec(np.array(x.vec))))

    @cached_property
    def residue_codes(self):
        return self.residue_vec(self.all_vectors)

    @cached_property
    def lift_basis(self):
        """Element vectors lifting the F_p-basis t^j of the residue field."""
        F = self.residue_field
        f = F.degree
        digs = F.digits(self.residue_images) % self.p  # (N, f)
        out = []
        for j in range(f):
            target = np.zeros(f, dtype=np.int64)
            target[j] = 1
            x = solve(digs, target, IntegersMod(self.p))
            assert x is not None, "residue map not surjective"
            out.append(self.reduce(x))
        return np.array(out, dtype=np.int64).reshape(f, self.N)

    def lift_vec(self, codes):
        """Additive section of the residue map on residue codes."""
        F = self.residue_field
        D = F.digits(np.asarray(codes, dtype=np.int64))
        return self.reduce(D @ self.lift_basis)

    def is_equicharacteristic(self):
        return self.e == 1 or not np.any(self.scale_vec(self.one_vec, self.p))

    @cached_property
    def characteristic(self):
        n = 1
        while np.any(self.scale_vec(self.one_vec, n)):
            n *= self.p
        return n

    # -- ideals -----------------------------------------------------------------
    def _span_rows(self, gens):
        """Module generators g * b_c for every generator g and coordinate c."""
        gens = [np.asarray(g, dtype=np.int64) for g in gens]
        if not gens:
            return np.zeros((0, self.N), dtype=np.int64)
        G = np.repeat(np.array(gens), self.N, axis=0)
        E = np.tile(np.eye(self.N, dtype=np.int64), (len(gens), 1))
        return self.mul_vec(G, E)

    def ideal(self, gens):
        gens = [np.asarray(g.vec if isinstance(g, RingElement) else g, dtype=np.int64) for g in gens]
        rows = np.vstack([self._span_rows(gens), self.W.rows]) if gens else self.W.rows
        return Ideal(self, tuple(tuple(int(x) for x in g) for g in gens), canonicalize(rows, self.base, self.N))

    def module_ideal(self, rows):
        """Ideal whose underlying module is already spanned by ``rows``."""
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, self.N)
        space = canonicalize(np.vstack([rows, self.W.rows]), self.base, self.N)
        return Ideal(self, tuple(tuple(int(x) for x in r) for r in rows), space)

    @cached_property
    def unit_ideal(self):
        return self.ideal([self.one_vec])

    @cached_property
    def zero_ideal(self):
        return self.ideal([])

    @cached_property
    def maximal_ideal(self):
        F = self.residue_field
        digs = F.digits(self.residue_images) % self.p
        K = kernel(digs, IntegersMod(self.p))
        rows = np.vstack([K.rows, self.p * np.eye(self.N, dtype=np.int64)])
        m = self.module_ideal(rows)
        gens = [g for g in self.x_vecs]
        if gens and self.ideal(gens) == m:
            return Ideal(self, tuple(tuple(int(x) for x in g) for g in gens), m.space)
        return m

    def ideal_product(self, I, J):
        A = _ideal_module_gens(I)
        B = _ideal_module_gens(J)
        if len(A) == 0 or len(B) == 0:
            return self.zero_ideal
        P = self.mul_vec(np.repeat(A, len(B), axis=0), np.tile(B, (len(A), 1)))
        return self.module_ideal(P)

    def ideal_sum(self, I, J):
        return self.module_ideal(np.vstack([I.space.rows, J.space.rows]))

    @cached_property
    def m_powers(self):
        """[m^0 = R, m, m^2, ..., m^exp = 0]."""
        out = [self.unit_ideal, self.maximal_ideal]
        while not out[-1].is_zero():
            out.append(self.ideal_product(out[-1], self.maximal_ideal))
            if len(out) > 4 * self.log_size + 4:  # pragma: no cover
                raise RingError("maximal ideal is not nilpotent")
        return out

    def annihilator(self, I):
        gens = [np.asarray(g, dtype=np.int64) for g in (I.generators or [])]
        if not gens:
            gens = list(I.space.rows)
        gens = [g for g in gens if np.any(self.reduce(g))]
        if not gens:
            return self.unit_ideal
        return self.module_ideal(self._common_kernel([self._mult_matrix(g) for g in gens]))

    def _mult_matrix(self, g):
        return self.mul_vec(np.eye(self.N, dtype=np.int64), np.tile(g, (self.N, 1)))

    def _common_kernel(self, mats):
        """Rows x (mod W) with x M_i in W for every i."""
        N = self.N
        w = self.W.rows
        s = len(mats)
        top = np.hstack(mats)
        blocks = [top]
        for i in range(s):
            if w.shape[0]:
                blk = np.zeros((w.shape[0], N * s), dtype=np.int64)
                blk[:, i * N:(i + 1) * N] = w
                blocks.append(blk)
        K = kernel(np.vstack(blocks), self.base)
        rows = K.rows[:, :N] if K.rank else np.zeros((0, N), dtype=np.int64)
        return rows

    def colon_m(self, I):
        """(I : m) = {r : r m in I}."""
        mats = []
        for g in self.maximal_ideal.generators or list(self.maximal_ideal.space.rows):
            mats.append(self._mult_matrix(np.asarray(g)))
        if not mats:
            return self.unit_ideal
        # x M_i in I.space: same trick with I's module in place of W
        N = self.N
        w = I.space.rows
        s = len(mats)
        blocks = [np.hstack(mats)]
        for i in range(s):
            if w.shape[0]:
                blk = np.zeros((w.shape[0], N * s), dtype=np.int64)
                blk[:, i * N:(i + 1) * N] = w
                blocks.append(blk)
        K = kernel(np.vstack(blocks), self.base)
        return self.module_ideal(K.rows[:, :N] if K.rank else np.zeros((0, N), dtype=np.int64))

    # -- invariants ----------------------------------------------------------------
    @property
    def residue_degree(self):
        return self.residue_field.degree

    def _kappa_log(self, logp, what):
        f = self.residue_degree
        if logp % f:
            raise RingError(f"{what}: p-log {logp} is not a multiple of [kappa:F_p]={f}")
        return logp // f

    @cached_property
    def length(self):
        ell = self._kappa_log(self.log_size, "length")
        assert sum(self._kappa_log(a.log_size() - b.log_size(), "socle series")
                   for a, b in zip(self.socle_series[1:], self.socle_series)) == ell
        return ell

    @cached_property
    def socle_series(self):
        chain = [self.zero_ideal]
        while chain[-1].log_size() < self.log_size:
            chain.append(self.colon_m(chain[-1]))
            if chain[-1].log_size() == chain[-2].log_size():  # pragma: no cover
                raise RingError("socle series stalled")
        return chain

    @cached_property
    def embedding_dimension(self):
        mp = self.m_powers
        nxt = mp[2] if len(mp) > 2 else self.zero_ideal
        return self._kappa_log(mp[1].log_size() - nxt.log_size(), "embedding dimension")

    @cached_property
    def exponent(self):
        return len(self.m_powers) - 1

    @cached_property
    def socle(self):
        return self.annihilator(self.maximal_ideal)

    @cached_property
    def cm_type(self):
        return self._kappa_log(self.socle.log_size(), "type")

    def is_gorenstein(self):
        return self.cm_type == 1

    def invariants(self):
        return {"size": self.size, "length": self.length,
                "embdim": self.embedding_dimension, "exponent": self.exponent,
                "type": self.cm_type, "gorenstein": self.is_gorenstein()}

    # -- standard monomials -------------------------------------------------------
    def x_power(self, alpha):
        v = self.one_vec.copy()
        for g, a in zip(self.x_vecs, alpha):
            if a:
                v = self.mul_vec(v, self.pow_vec(g, a))
        return v

    @cached_property
    def _delta(self):
        mu = len(self.x_vecs)
        support = [a for a in _monomials(mu, self.exponent - 1)] if mu else [()]
        ordered = self.order.sort(support, descending=True)
        rows = self.W.rows
        space = self.W
        delta = []
        for alpha in ordered:
            v = self.x_power(alpha)
            if not space.contains(v):
                delta.append(alpha)
            new = self._span_rows([v])
            rows = np.vstack([space.rows, new])
            space = canonicalize(rows, self.base, self.N)
        delta.reverse()
        return delta

    def delta_support(self):
        """(Delta_R ascending in the monomial order, E_R as element vectors)."""
        d = list(self._delta)
        return d, [self.x_power(a) for a in d]

    def a_ideal(self, alpha):
        """The ideal generated by x^beta for all beta > alpha."""
        mu = len(self.x_vecs)
        bigger = [b for b in _monomials(mu, self.exponent) if self.order.less(alpha, b)]
        return self.ideal([self.x_power(b) for b in bigger])

    # -- involution check ------------------------------------------------------------
    def ann_involution_check(self, max_principal=4096):
        """Ann(Ann(I)) == I over principal and 2-generated monomial ideals."""
        seen = set()
        fam = []
        if self.size <= max_principal:
            for v in self.all_vectors:
                fam.append([v])
        coords = [_unit_vector(self.N, i) for i in range(self.N)]
        _, E = self.delta_support()
        mons = [self.reduce(c) for c in coords] + list(E)
        for a, b in itertools.combinations(range(len(mons)), 2):
            fam.append([mons[a], mons[b]])
        for gens in fam:
            I = self.ideal(gens)
            key = I.space.rows.tobytes()
            if key in seen:
                continue
            seen.add(key)
            J = self.annihilator(self.annihilator(I))
            if J != I:
                return False, I
        return True, None

    def check_locality(self):
        """Exhaustive: the non-units are exactly the nilpotents and closed under +."""
        res = self.residue_codes
        nonunit = np.flatnonzero(res == 0)
        V = self.all_vectors[nonunit]
        P = V.copy()
        for _ in range(self.exponent):
            P = self.mul_vec(P, V) if P.shape[0] else P
        if np.any(P if self.exponent else 0):
            return False
        return True


def _logp(n, p):
    k = 0
    while n > 1:
        n //= p
        k += 1
    return k


def _ideal_module_gens(I):
    rows = I.space.rows
    return rows[np.any(I.ring.reduce(rows) != 0, axis=1)] if rows.shape[0] else rows


@dataclass(frozen=True, eq=False)
class Ideal:
    ring: LocalRing
    generators: tuple
    space: RowSpace

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.space == other.space

    def __hash__(self):
        return hash(self.space)

    def __le__(self, other):
        return other.space.contains_space(self.space)

    def contains(self, x):
        v = np.asarray(x.vec if isinstance(x, RingElement) else x, dtype=np.int64)
        return self.space.contains(v % self.ring.modulus)

    def log_size(self):
        return self.space.log_size() - self.ring.W.log_size()

    def size(self):
        return self.ring.p ** self.log_size()

    def is_zero(self):
        return self.log_size() == 0

    def member_mask(self):
        V = self.ring.all_vectors
        return ~np.any(reduce(V, self.space) != 0, axis=1)

    def __repr__(self):
        gens = ", ".join(self.ring.format(np.array(g)) for g in self.generators[:6])
        return f"Ideal({gens}; |I|={self.size()})"


@dataclass(frozen=True, eq=False)
class RingElement:
    ring: LocalRing
    vec: tuple

    def _o(self, o):
        if isinstance(o, RingElement):
            if o.ring is not self.ring:
                raise RingError("elements of different rings")
            return np.array(o.vec, dtype=np.int64)
        return self.ring.scale_vec(self.ring.one_vec, int(o))

    def _wrap(self, v):
        return RingElement(self.ring, tuple(int(x) for x in v))

    def __add__(self, o):
        return self._wrap(self.ring.add_vec(np.array(self.vec), self._o(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return self._wrap(self.ring.sub_vec(np.array(self.vec), self._o(o)))

    def __rsub__(self, o):
        return self._wrap(self.ring.sub_vec(self._o(o), np.array(self.vec)))

    def __neg__(self):
        return self._wrap(self.ring.neg_vec(np.array(self.vec)))

    def __mul__(self, o):
        return self._wrap(self.ring.mul_vec(np.array(self.vec), self._o(o)))

    __rmul__ = __mul__

    def __pow__(self, n):
        return self._wrap(self.ring.pow_vec(np.array(self.vec), n))

    def __eq__(self, o):
        if isinstance(o, RingElement):
            return o.ring is self.ring and o.vec == self.vec
        if isinstance(o, int):
            return self == self.ring.element(o)
        return NotImplemented

    def __hash__(self):
        return hash(self.vec)

    def __bool__(self):
        return any(self.vec)

    def is_unit(self):
        return int(self.ring.residue_vec(np.array(self.vec))) != 0

    def is_nilpotent(self):
        return not self.is_unit()

    def inverse(self):
        if not self.is_unit():
            raise ZeroDivisionError("not a unit")
        R = self.ring
        # x^(|R^*| - 1) with |R^*| = |R| - |m|
        order = R.size - R.maximal_ideal.size()
        return self ** (order - 1)

    @property
    def code(self):
        return self.ring.code_of(self)

    def __repr__(self):
        return self.ring.format(self.vec)

    __str__ = __repr__


# ---------------------------------------------------------------------------
# construction from a presentation


def _exact_contains(cf, pres, targets, col_deg):
    """Are all target monomials in the ideal, using multipliers up to col_deg?"""
    mu = len(pres.variables)
    cols, idx = _columns(pres.order, mu, cf.k, col_deg)
    rows = []
    for r in pres.relations:
        rd = max(sum(k) for k in r) if r else 0
        mults = _monomials(mu, col_deg - rd) if col_deg >= rd else []
        rows.append(_poly_rows(cf, [r], mu, mults, idx, len(cols)))
    M = np.vstack(rows) if rows else np.zeros((0, len(cols)), dtype=np.int64)
    S = canonicalize(M, IntegersMod(cf.p, cf.e), len(cols))
    for t in targets:
        for j in range(cf.k):
            v = np.zeros(len(cols), dtype=np.int64)
            v[idx[(t, j)]] = 1
            if not S.contains(v):
                return False, t
    return True, None


def build(pres, name=None):
    """Build the LocalRing presented by ``pres``."""
    coeff = pres.coeff
    if isinstance(coeff, FieldTower):
        coeff = Field(coeff)
        pres = Presentation(coeff, pres.variables, pres.relations, pres.order, pres.max_degree)
    cf = _Coeffs(coeff)
    mu = len(pres.variables)
    base = IntegersMod(cf.p, cf.e)
    cap = pres.max_degree
    rels = [r for r in pres.relations if r]
    maxrel = max((sum(k) for r in rels for k in r), default=0)

    # smallest d with every degree-d monomial in I + m^(d+1)
    d = None
    for D in range(0, cap + 1):
        cols, idx = _columns(pres.order, mu, cf.k, D)
        mults = _monomials(mu, D)
        M = _poly_rows(cf, rels, mu, mults, idx, len(cols), truncate_deg=D + 1)
        S = canonicalize(M, base, len(cols))
        top = [m for m in _monomials(mu, D) if sum(m) == D]
        ok = True
        for m in top:
            for j in range(cf.k):
                if not S.contains(_unit_vector(len(cols), idx[(m, j)])):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            d = D
            break
    if d is None:
        cols, idx = _columns(pres.order, mu, cf.k, cap)
        M = _poly_rows(cf, rels, mu, _monomials(mu, cap), idx, len(cols), truncate_deg=cap + 1)
        S = canonicalize(M, base, len(cols))
        for i, v in enumerate(pres.variables):
            e = [0] * mu
            e[i] = cap
            if not S.contains(_unit_vector(len(cols), idx[(tuple(e), 0)])):
                raise NonNilpotentError(
                    f"variable {v} is not nilpotent below degree {cap}", witness=v)
        raise InfiniteQuotientError(
            f"quotient does not stabilize below degree {cap}", witness=cap)
    if d == 0:
        ok, _ = _exact_contains(cf, pres, [tuple([0] * mu)], max(maxrel, 0) + cap)
        if ok:
            raise NonLocalError("relations generate the unit ideal", witness="1")
        raise NonNilpotentError(
            "a relation is a unit modulo the variables, so they cannot all be nilpotent",
            witness=pres.variables[0] if mu else None)
    targets = [m for m in _monomials(mu, d) if sum(m) == d]
    ok, wit = _exact_contains(cf, pres, targets, max(d, maxrel) + cap)
    if not ok:
        raise NonLocalError(
            f"monomial {format_monomial(wit, pres.variables)} lies in I + m^{d + 1} but not in I: "
            "the quotient is not local at the origin", witness=wit)

    # final module: monomials of degree < d modulo truncated relations
    cols, idx = _columns(pres.order, mu, cf.k, d - 1)
    n_full = len(cols)
    M = _poly_rows(cf, rels, mu, _monomials(mu, d - 1), idx, n_full, truncate_deg=d)
    S = canonicalize(M, base, n_full)
    pivval = np.full(n_full, cf.mod, dtype=np.int64)
    pivval[S.pivcols] = S.pivvals
    live = np.flatnonzero(pivval > 1)
    keep_rows = pivval[S.pivcols] > 1
    W = canonicalize(S.rows[keep_rows][:, live], base, len(live))
    live_cols = [cols[i] for i in live]

    def full_to_live(vecs):
        vecs = np.atleast_2d(vecs)
        return reduce(vecs % cf.mod, S)[:, live] if S.rank else (vecs % cf.mod)[:, live]

    # structure constants
    N = len(live)
    F = cf.F
    T = np.zeros((N, N, N), dtype=np.int64)
    prods = []
    for a in range(N):
        for b in range(N):
            (ma, ja), (mb, jb) = live_cols[a], live_cols[b]
            v = np.zeros(n_full, dtype=np.int64)
            ex = tuple(x + y for x, y in zip(ma, mb))
            if sum(ex) < d:
                if F is None:
                    v[idx[(ex, 0)]] = 1
                else:
                    c = F.power(F.generator(), ja + jb) if F.degree > 1 else 1
                    for jj, dg in enumerate(F.digits(c)):
                        if dg:
                            v[idx[(ex, jj)]] = dg
            prods.append(v)
    if N:
        T = full_to_live(np.array(prods)).reshape(N, N, N)
    one_full = np.zeros(n_full, dtype=np.int64)
    one_full[idx[(tuple([0] * mu), 0)]] = 1
    one = full_to_live(one_full)[0]

    # residue field and images of coordinates
    if F is None:
        kappa = make_prime_field(cf.p)
    else:
        kappa = F
    res = np.zeros(N, dtype=np.int64)
    for i, (m, j) in enumerate(live_cols):
        if sum(m) == 0:
            res[i] = kappa.power(kappa.generator(), j) if kappa.degree > 1 else 1
    # algebra generators: variables, plus the field generator
    gen_names = list(pres.variables)
    gen_vecs = []
    for i in range(mu):
        e = [0] * mu
        e[i] = 1
        v = np.zeros(n_full, dtype=np.int64)
        if d > 1:
            v[idx[(tuple(e), 0)]] = 1
        gen_vecs.append(full_to_live(v)[0])
    has_t = F is not None and F.degree > 1
    gen_rel = {}
    if has_t:
        gen_names.append("t")
        v = np.zeros(n_full, dtype=np.int64)
        g = F.generator()
        for jj, dg in enumerate(F.digits(g)):
            if dg:
                v[idx[(tuple([0] * mu), jj)]] = dg
        gen_vecs.append(full_to_live(v)[0])
        gen_rel["t"] = tuple(F.modulus)
    coord_words = []
    for m, j in live_cols:
        coord_words.append(tuple(m) + ((j,) if has_t else ()))
    x_names = list(pres.variables)
    x_vecs = list(gen_vecs[:mu])
    ring = LocalRing(p=cf.p, e=cf.e, W=W, T=T, one=one, residue_field=kappa,
                     residue_images=res, gen_names=gen_names, gen_words=gen_vecs,
                     coord_words=coord_words, x_names=x_names, x_vecs=x_vecs,
                     order=MonomialOrder(pres.order.kind, mu), presentation=pres,
                     name=name or "R", gen_relations=gen_rel)
    _complete_x(ring)
    # locality: m is nilpotent and R/m is the field kappa
    ring.m_powers  # noqa: B018 - raises if m is not nilpotent
    return ring


def _complete_x(ring):
    """Append p to the generators x when the variables do not generate m."""
    m = ring.maximal_ideal
    gens = list(ring.x_vecs)
    if gens and ring.ideal(gens) == m:
        return
    if not gens and m.is_zero():
        return
    pv = ring.scale_vec(ring.one_vec, ring.p)
    cand = gens + [pv]
    if ring.ideal(cand) == m:
        ring.x_vecs = cand
        ring.x_names = ring.x_names + (str(ring.p),)
        ring.order = MonomialOrder(ring.order.kind, len(cand))
    else:  # pragma: no cover - table rings with unusual generators
        raise RingError("could not find generators of the maximal ideal")
    ring.__dict__.pop("maximal_ideal", None)


def from_text(spec_lines, name=None):
    from .io import parse_ring_text

    return parse_ring_text(spec_lines, name=name)


def polynomial_ring_quotient(coeff, variables, relations, order="grlex", max_degree=DEFAULT_MAX_DEGREE, name=None):
    """Convenience: build(Presentation.from_text(...))."""
    if isinstance(coeff, FieldTower):
        coeff = Field(coeff) if coeff.degree > 1 else IntegersMod(coeff.p, 1)
    elif isinstance(coeff, Field) and coeff.tower.degree == 1:
        coeff = IntegersMod(coeff.p, 1)
    return build(Presentation.from_text(coeff, variables, relations, order, max_degree), name=name)


# ---------------------------------------------------------------------------
# constructions from the existence proofs


def _table_ring(p, e, full_rows, n_full, T_full, one_full, residue_field, res_full,
                gen_names, gen_full, coord_words, x_full, x_names, order, name, gen_relations=None):
    """Canonicalize a ring given on a free module of rank n_full."""
    base = IntegersMod(p, e)
    mod = p**e
    S = canonicalize(full_rows, base, n_full)
    pivval = np.full(n_full, mod, dtype=np.int64)
    pivval[S.pivcols] = S.pivvals
    live = np.flatnonzero(pivval > 1)
    W = canonicalize(S.rows[pivval[S.pivcols] > 1][:, live], base, len(live))

    def f2l(v):
        v = np.atleast_2d(np.asarray(v, dtype=np.int64)) % mod
        return reduce(v, S)[:, live] if S.rank else v[:, live]

    N = len(live)
    T = f2l(T_full[np.ix_(live, live)].reshape(N * N, n_full)).reshape(N, N, N) if N else np.zeros((0, 0, 0), dtype=np.int64)
    ring = LocalRing(p=p, e=e, W=W, T=T, one=f2l(one_full)[0], residue_field=residue_field,
                     residue_images=np.asarray(res_full)[live], gen_names=gen_names,
                     gen_words=[f2l(g)[0] for g in gen_full],
                     coord_words=[coord_words[i] for i in live],
                     x_names=x_names, x_vecs=[f2l(g)[0] for g in x_full],
                     order=order, name=name, gen_relations=gen_relations)
    return ring


def _blocks(R, n):
    """Coordinates of R[T] truncated at T^n: block i holds b_c T^i."""
    N = R.N
    return N * n


def socle_extension(R, var="T"):
    """R[T]/(T^2, mT); length goes up by one."""
    while var in R.gen_names:
        var += "'"
    N = R.N
    n_full = 2 * N
    rows = [np.hstack([R.W.rows, np.zeros_like(R.W.rows)]),
            np.hstack([np.zeros_like(R.W.rows), R.W.rows])]
    mrows = R.maximal_ideal.space.rows
    rows.append(np.hstack([np.zeros_like(mrows), mrows]))
    full_rows = np.vstack(rows)
    T_full = np.zeros((n_full, n_full, n_full), dtype=np.int64)
    T_full[:N, :N, :N] = R.T
    T_full[:N, N:, N:] = R.T
    T_full[N:, :N, N:] = R.T
    one = np.concatenate([R.one_vec, np.zeros(N, dtype=np.int64)])
    res = np.concatenate([R.residue_images, np.zeros(N, dtype=np.int64)])
    gen_names = list(R.gen_names) + [var]
    gens = [np.concatenate([g, np.zeros(N, dtype=np.int64)]) for g in R.gen_words]
    tvec = np.concatenate([np.zeros(N, dtype=np.int64), R.one_vec])
    gens.append(tvec)
    words = [tuple(w) + (0,) for w in R.coord_words] + [tuple(w) + (1,) for w in R.coord_words]
    x_full = [np.concatenate([g, np.zeros(N, dtype=np.int64)]) for g in R.x_vecs] + [tvec]
    gen_rel = dict(R.gen_relations)
    out = _table_ring(R.p, R.e, full_rows, n_full, T_full, one, R.residue_field, res,
                      gen_names, gens, words, x_full, R.x_names + (var,),
                      MonomialOrder(R.order.kind, len(R.x_vecs) + 1), f"{R.name}[{var}]/({var}^2,m{var})",
                      gen_rel)
    out.parent_ring = R
    return out


def _coeff_vectors(R, P):
    """Coefficient vectors of a polynomial in T over R (list low -> high)."""
    out = []
    for c in P:
        if isinstance(c, RingElement):
            out.append(np.array(c.vec, dtype=np.int64))
        elif isinstance(c, (int, np.integer)):
            out.append(R.scale_vec(R.one_vec, int(c)))
        else:
            out.append(R.reduce(np.asarray(c, dtype=np.int64)))
    return out


def parse_poly_over(R, text, var="T"):
    """Coefficient list of a polynomial in ``var`` whose coefficients are words in R's generators."""
    names = list(R.gen_names) + [var]
    poly, _ = parse_polynomial(text, names)
    deg = max((k[-1] for k in poly), default=0)
    coeffs = [dict() for _ in range(deg + 1)]
    for k, c in poly.items():
        coeffs[k[-1]][k[:-1]] = coeffs[k[-1]].get(k[:-1], 0) + c
    return [R.eval_poly(cpoly) for cpoly in coeffs]


def adjoin_root(R, P, var="T"):
    """R[T]/(P) for monic P whose reduction is irreducible over kappa."""
    from .fields import ReducibleError, extend

    if isinstance(P, str):
        P = parse_poly_over(R, P, var)
    coeffs = _coeff_vectors(R, P)
    while len(coeffs) > 1 and not np.any(coeffs[-1]):
        coeffs.pop()
    n = len(coeffs) - 1
    if n < 1:
        raise RingError("adjoin_root needs a nonconstant polynomial")
    if not np.array_equal(coeffs[-1], R.one_vec):
        raise RingError("adjoin_root needs a monic polynomial")
    if n == 1:
        return R
    kappa = R.residue_field
    pbar = [int(R.residue_vec(c)) for c in coeffs]
    try:
        lam = extend(kappa, pbar)
    except ReducibleError as exc:
        raise RingError(f"the reduction modulo m is reducible: {exc}") from exc
    emb = lam.embedding_from(kappa)
    N = R.N
    n_full = N * n
    # T^s as R-coefficient vectors for s < 2n - 1
    tp = []
    for s in range(2 * n - 1):
        if s < n:
            row = [R.zero_vec() for _ in range(n)]
            row[s] = R.one_vec.copy()
        else:
            prev = tp[s - 1]
            # T * prev: shift, then reduce T^n = -sum c_i T^i
            top = prev[n - 1]
            row = [R.zero_vec()] + [prev[i] for i in range(n - 1)]
            for i in range(n):
                row[i] = R.sub_vec(row[i], R.mul_vec(top, coeffs[i]))
        tp.append(row)
    T_full = np.zeros((n_full, n_full, n_full), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            combo = tp[i + j]
            # products b_a b_b times combo[k] for every a, b
            for k in range(n):
                if not np.any(combo[k]):
                    continue
                prod = R.T.reshape(N * N, N)  # b_a b_b
                blk = R.mul_vec(prod, np.tile(combo[k], (N * N, 1))).reshape(N, N, N)
                T_full[i * N:(i + 1) * N, j * N:(j + 1) * N, k * N:(k + 1) * N] = (
                    T_full[i * N:(i + 1) * N, j * N:(j + 1) * N, k * N:(k + 1) * N] + blk) % R.modulus
    Wr = R.W.rows
    rows = []
    for i in range(n):
        blk = np.zeros((Wr.shape[0], n_full), dtype=np.int64)
        blk[:, i * N:(i + 1) * N] = Wr
        rows.append(blk)
    full_rows = np.vstack(rows) if rows else np.zeros((0, n_full), dtype=np.int64)
    one = np.zeros(n_full, dtype=np.int64)
    one[:N] = R.one_vec
    tbar = lam.adjoined
    res = np.zeros(n_full, dtype=np.int64)
    for i in range(n):
        ti = lam.power(tbar, i)
        for a in range(N):
            res[i * N + a] = int(lam.mul(int(emb[R.residue_images[a]]), ti))
    gens = []
    for g in R.gen_words:
        v = np.zeros(n_full, dtype=np.int64)
        v[:N] = g
        gens.append(v)
    tv = np.zeros(n_full, dtype=np.int64)
    tv[N:2 * N] = R.one_vec
    gens.append(tv)
    words = [tuple(w) + (i,) for i in range(n) for w in R.coord_words]
    x_full = []
    for g in R.x_vecs:
        v = np.zeros(n_full, dtype=np.int64)
        v[:N] = g
        x_full.append(v)
    gen_rel = dict(R.gen_relations)
    gen_rel[var] = ("over", tuple(tuple(int(x) for x in c) for c in coeffs))
    out = _table_ring(R.p, R.e, full_rows, n_full, T_full, one, lam, res,
                      list(R.gen_names) + [var], gens, words, x_full, R.x_names,
                      R.order, f"{R.name}[{var}]/(P)", gen_rel)
    out.parent_ring = R
    out.adjoined_poly = coeffs
    return out


def base_change(R, lam):
    """R tensor_kappa lam for an equicharacteristic R with a presentation."""
    if not R.is_equicharacteristic():
        raise RingError("base_change needs an equicharacteristic ring")
    pres = R.presentation
    if pres is None:
        raise RingError("base_change needs a ring built from a presentation")
    kappa = R.residue_field
    if lam.same_field(kappa):
        return R
    if lam.degree % kappa.degree:
        raise RingError(f"F_{lam.size} does not contain F_{kappa.size}")
    emb = lam.embedding_from(kappa)
    rels = []
    for r in pres.relations:
        rels.append({k: int(emb[int(c) % kappa.size]) for k, c in r.items() if c})
    coeff = Field(lam)
    new = Presentation(coeff, pres.variables, tuple(rels), pres.order, pres.max_degree)
    S = build(new, name=f"{R.name} (x) F_{lam.size}")
    S.base_ring = R
    return S


# ---------------------------------------------------------------------------
# non-local finite rings (negative fixtures)


class TableRing:
    """A finite commutative ring given by add/mul tables on codes 0..n-1."""

    def __init__(self, add, mul, zero, one, labels=None, name="ring"):
        self.add = np.asarray(add, dtype=np.int32)
        self.mul = np.asarray(mul, dtype=np.int32)
        self.size = self.add.shape[0]
        self.zero_code = zero
        self.one_code = one
        self.neg = np.array([int(np.flatnonzero(self.add[a] == zero)[0]) for a in range(self.size)], dtype=np.int32)
        self.labels = labels
        self.name = name
        self.tables = (self.add, self.mul, self.neg)
        units = np.any(self.mul == one, axis=1)
        self.unit_mask = units
        nonunits = np.flatnonzero(~units)
        s = self.add[np.ix_(nonunits, nonunits)]
        self.is_local = bool(self.size > 1 and not np.any(units[s]))

    def add_codes(self, a, b):
        return self.add[a, b]

    def mul_codes(self, a, b):
        return self.mul[a, b]

    def neg_codes(self, a):
        return self.neg[a]

    def code_of(self, x):
        return int(x)

    def label(self, code):
        return self.labels[code] if self.labels else str(code)

    def __repr__(self):
        return f"TableRing({self.name}, n={self.size})"


def zero_ring():
    z = np.zeros((1, 1), dtype=np.int32)
    return TableRing(z, z, 0, 0, ["0"], "0")


def _ring_tables(R):
    if isinstance(R, TableRing):
        return R.add, R.mul, R.zero_code, R.one_code, [R.label(i) for i in range(R.size)]
    add, mul, _ = R.tables
    return add, mul, 0, R.one_code, [R.label(i) for i in range(R.size)]


def product_ring(R1, R2):
    """The componentwise product ring; collapses when a factor is the zero ring."""
    if R2.size == 1:
        return R1
    if R1.size == 1:
        return R2
    a1, m1, z1, o1, l1 = _ring_tables(R1)
    a2, m2, z2, o2, l2 = _ring_tables(R2)
    n1, n2 = R1.size, R2.size
    i1, i2 = np.divmod(np.arange(n1 * n2), n2)
    add = a1[i1[:, None], i1[None, :]] * n2 + a2[i2[:, None], i2[None, :]]
    mul = m1[i1[:, None], i1[None, :]] * n2 + m2[i2[:, None], i2[None, :]]
    labels = [f"({l1[a]}, {l2[b]})" for a, b in zip(i1, i2)]
    return TableRing(add, mul, z1 * n2 + z2, o1 * n2 + o2, labels,
                     f"{getattr(R1, 'name', 'R1')} x {getattr(R2, 'name', 'R2')}")


# ---------------------------------------------------------------------------
# homomorphisms


@dataclass(frozen=True, eq=False)
class RingHom:
    source: LocalRing
    target: LocalRing
    images: tuple  # target vectors of the source's algebra generators
    matrix: np.ndarray  # (N_source, N_target) images of coordinates
    injective: bool
    kernel_witness: object = None

    def __call__(self, x):
        v = np.array(x.vec if isinstance(x, RingElement) else x, dtype=np.int64)
        return self.target.element(v @ self.matrix)

    def apply_vec(self, V):
        return self.target.reduce(np.asarray(V, dtype=np.int64) @ self.matrix)

    def is_local(self):
        B = self.target
        for g in self.source.maximal_ideal.space.rows:
            if int(B.residue_vec(self.apply_vec(g))) != 0:
                return False
        return True


class HomError(RingError):
    pass


def _coord_images(A, B, images):
    out = []
    for w in A.coord_words:
        v = B.one_vec.copy()
        for g, n in zip(images, w):
            if n:
                v = B.mul_vec(v, B.pow_vec(g, n))
        out.append(v)
    return np.array(out, dtype=np.int64).reshape(A.N, B.N)


def hom_check(A, B, images):
    """Return the RingHom determined by generator images, or raise HomError with a witness."""
    if isinstance(images, dict):
        images = [images[g] for g in A.gen_names]
    imgs = [np.array(x.vec, dtype=np.int64) if isinstance(x, RingElement) else B.reduce(np.asarray(x)) for x in images]
    if len(imgs) != len(A.gen_names):
        raise HomError(f"need {len(A.gen_names)} generator images, got {len(imgs)}")
    if A.p != B.p:
        raise HomError("characteristics differ")
    if np.any(B.scale_vec(B.one_vec, A.modulus)):
        raise HomError(f"{A.modulus} is not zero in the target")
    Phi = _coord_images(A, B, imgs)
    if not np.array_equal(B.reduce(A.one_vec @ Phi), B.one_vec):
        raise HomError("1 does not map to 1", )
    if A.W.rank:
        bad = np.flatnonzero(np.any(B.reduce(A.W.rows @ Phi) != 0, axis=1))
        if bad.size:
            raise HomError("a relation does not map to zero", )
    n = A.N
    if n:
        lhs = B.mul_vec(np.repeat(Phi, n, axis=0), np.tile(Phi, (n, 1)))
        rhs = B.reduce(A.T.reshape(n * n, n) @ Phi)
        bad = np.flatnonzero(np.any(lhs != rhs, axis=1))
        if bad.size:
            i, j = divmod(int(bad[0]), n)
            raise HomError(f"not multiplicative on coordinates {i}, {j}")
    # injectivity: size of the image module
    img = canonicalize(np.vstack([Phi % B.modulus, B.W.rows]), B.base, B.N)
    image_log = img.log_size() - B.W.log_size()
    injective = image_log == A.log_size
    witness = None
    if not injective:
        Kr = _hom_kernel(A, B, Phi)
        witness = A.element(Kr) if Kr is not None else None
    hom = RingHom(A, B, tuple(imgs), Phi, injective, witness)
    assert hom.is_local(), "homomorphism of local rings is not local"
    return hom


def _hom_kernel(A, B, Phi):
    N = A.N
    w = B.W.rows
    blocks = [Phi % B.modulus]
    if w.shape[0]:
        blocks.append(w)
    K = kernel(np.vstack(blocks), B.base)
    for row in K.rows:
        x = A.reduce(row[:N])
        if np.any(x):
            return x
    return None


def univariate_relation(R, g):
    """Least n and coefficients a_i in Z/p^e with g^n = sum_{i<n} a_i g^i."""
    g = np.asarray(g, dtype=np.int64)
    powers = [R.one_vec.copy()]
    while True:
        nxt = R.mul_vec(powers[-1], g)
        G = np.vstack(powers + [R.W.rows]) if R.W.rank else np.vstack(powers)
        x = solve(G, nxt, R.base)
        if x is not None:
            return len(powers), [int(c) for c in x[:len(powers)]]
        powers.append(nxt)


def _candidates(A, B, i, chosen):
    """Target elements that may be the image of A's i-th algebra generator."""
    name = A.gen_names[i]
    g = A.gen_words[i]
    V = B.all_vectors
    rel = A.gen_relations.get(name)
    if rel is not None and rel[0] == "over":
        # monic polynomial over the parent ring: evaluate the parent's images
        parent = A.parent_ring
        k = len(parent.gen_names)
        Phi = _coord_images(parent, B, chosen[:k])
        coeffs = [B.reduce(np.array(c) @ Phi) for c in rel[1]]
        acc = np.tile(coeffs[-1], (V.shape[0], 1))
        for c in reversed(coeffs[:-1]):
            acc = B.add_vec(B.mul_vec(acc, V), np.tile(c, (V.shape[0], 1)))
        return np.flatnonzero(~np.any(acc != 0, axis=1))
    n, a = univariate_relation(A, g)
    acc = np.tile(B.one_vec, (V.shape[0], 1))
    for _ in range(n):
        acc = B.mul_vec(acc, V)
    for i_, c in enumerate(a):
        if c:
            acc = B.sub_vec(acc, B.scale_vec(B.pow_vec(V, i_), c))
    return np.flatnonzero(~np.any(acc != 0, axis=1))


def iter_homs(A, B, injective_only=True, budget=10**6):
    """Every homomorphism A -> B, by search over generator images."""
    k = len(A.gen_names)
    # order: generators whose candidate sets do not depend on others first
    V = B.all_vectors

    def rec(i, chosen, count):
        if i == k:
            try:
                h = hom_check(A, B, chosen)
            except HomError:
                return
            if h.injective or not injective_only:
                yield h
            return
        cand = _candidates(A, B, i, chosen)
        for c in cand:
            yield from rec(i + 1, chosen + [V[c]], count)

    # budget estimate from independent candidate counts
    est = 1
    for i in range(k):
        rel = A.gen_relations.get(A.gen_names[i])
        if rel is not None and rel[0] == "over":
            continue
        est *= max(len(_candidates(A, B, i, [])), 1)
    if est > budget:
        raise BudgetError(f"hom search needs {est} candidates, bound {budget}", budget)
    yield from rec(0, [], 0)


def find_embedding(A, B, images=None, budget=10**6):
    """An injective RingHom A -> B, or None."""
    if images is not None:
        try:
            h = hom_check(A, B, images)
        except HomError:
            return None
        h = h if h.injective else None
    else:
        h = next(iter_homs(A, B, True, budget), None)
    if h is not None and not h.is_local():
        raise AssertionError("a ring map between local rings must be local")
    return h
