"""Witt maps and Witt-base coordinates for finite local rings of mixed
characteristic.

q is a power of p with q = 0 in R and a = b (mod m)  =>  a^q = b^q.  The
Witt map sends u in the residue field to b^q where b lifts the q-th root of
u; it is a multiplicative section of the residue map.  Every element of a
ring with standard monomials E_R = {x^alpha} has a unique expansion
sum omega(u_alpha) x^alpha, computed level by level along powers of m.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .fields import FieldElement, frobenius_inverse_power
from .linalg import IntegersMod, solve


class WittError(ValueError):
    pass


def _vp(n, p):
    k = 0
    while n and n % p == 0:
        n //= p
        k += 1
    return k


def _digit_sum(n, p):
    s = 0
    while n:
        s += n % p
        n //= p
    return s


def binomial_valuation(q, i, p):
    """v_p(C(q, i)) by Legendre's digit-sum formula."""
    return (_digit_sum(i, p) + _digit_sum(q - i, p) - _digit_sum(q, p)) // (p - 1)


def choose_q(p, e):
    """Least q = p^N with p^e | C(q, i) for 1 <= i <= max(e - 1, 1).

    The i = 1 term makes q itself divisible by p^e, so q = 0 in any ring whose
    characteristic divides p^e.
    """
    if e < 1:
        raise ValueError("e must be >= 1")
    q = 1
    while True:
        if all(_vp(comb(q, i), p) >= e for i in range(1, max(e - 1, 1) + 1)):
            return q
        q *= p


def teichmuller_table(R, q):
    """Element vectors omega(u) for every residue code u (shape (|kappa|, N))."""
    F = R.residue_field
    codes = np.arange(F.size)
    roots = np.array([frobenius_inverse_power(FieldElement(F, int(u)), q).value for u in codes])
    lifts = R.lift_vec(roots)
    return R.pow_vec(lifts, q)


@dataclass
class WittContext:
    ring: object
    q: int
    exponent: int
    omega_table: np.ndarray
    delta: list
    basis: list
    _levels: dict = field(default_factory=dict, repr=False)

    @property
    def kappa(self):
        return self.ring.residue_field

    @property
    def p(self):
        return self.ring.p


def witt_context(R, q=None):
    """Build the Witt frame of a mixed-characteristic ring ``R``."""
    if R.is_equicharacteristic():
        raise WittError("Witt maps are defined here for mixed characteristic only (p != 0 in R)")
    e = R.exponent
    q = q or choose_q(R.p, e)
    table = teichmuller_table(R, q)
    # independence of the lift: shift every lift by an element of m
    if R.x_vecs:
        F = R.residue_field
        roots = np.array([frobenius_inverse_power(FieldElement(F, u), q).value for u in range(F.size)])
        other = R.pow_vec(R.add_vec(R.lift_vec(roots), np.broadcast_to(R.x_vecs[0], (F.size, R.N))), q)
        if np.any(other != table):
            raise WittError(f"q = {q} is too small: the q-th power depends on the lift")
    delta, basis = R.delta_support()
    return WittContext(R, q, e, table, delta, basis)


def witt_map(ctx, u):
    """omega(u) as a ring element; ``u`` is a residue code or FieldElement."""
    u = u.value if isinstance(u, FieldElement) else int(u)
    return ctx.ring.element(ctx.omega_table[u])


def witt_vectors(ctx, q=None):
    """The codes of W = {a^q : a in R}."""
    R = ctx.ring
    q = q or ctx.q
    return np.unique(R.encode(R.pow_vec(R.all_vectors, q)))


def lemma32_check(ctx):
    """Witt vectors with equal residues are equal; W is unchanged when q grows by p."""
    R = ctx.ring
    W = witt_vectors(ctx)
    res = R.residue_codes[W]
    if np.unique(res).size != W.size:
        return False
    if not np.array_equal(W, witt_vectors(ctx, ctx.q * R.p)):
        return False
    table_codes = np.unique(R.encode(ctx.omega_table))
    return bool(np.array_equal(np.sort(table_codes), W))


def _level_data(ctx, k):
    """Generator rows for the level-k solve: F_p-basis images omega(t^j) x^alpha
    for |alpha| = k, followed by the module rows of m^{k+1}."""
    hit = ctx._levels.get(k)
    if hit is not None:
        return hit
    R = ctx.ring
    F = ctx.kappa
    idx = [i for i, a in enumerate(ctx.delta) if sum(a) == k]
    gens = []
    for i in idx:
        for j in range(F.degree):
            w = ctx.omega_table[R.p**j]
            gens.append(R.mul_vec(w, ctx.basis[i]))
    mp = R.m_powers
    nxt = mp[k + 1].space.rows if k + 1 < len(mp) else R.W.rows
    G = np.vstack([np.array(gens, dtype=np.int64).reshape(-1, R.N), nxt]) if len(nxt) else np.array(gens)
    ctx._levels[k] = (idx, len(gens), G)
    return ctx._levels[k]


def witt_decompose(ctx, r):
    """Residue codes (u_alpha) over Delta_R with r = sum omega(u_alpha) x^alpha."""
    R = ctx.ring
    F = ctx.kappa
    base = IntegersMod(R.p, R.e)
    vec = np.asarray(r.vec if hasattr(r, "vec") else r, dtype=np.int64)
    vec = R.reduce(vec)
    out = [0] * len(ctx.delta)
    for k in range(ctx.exponent + 1):
        if not np.any(vec):
            break
        idx, ng, G = _level_data(ctx, k)
        if not idx:
            continue
        x = solve(G, vec, base)
        if x is None:
            raise WittError(f"level {k}: element not in the span of the standard monomials "
                            "(the monomial order must be graded)")
        for n, i in enumerate(idx):
            digs = [int(x[n * F.degree + j]) % R.p for j in range(F.degree)]
            u = int(F.from_digits(digs))
            out[i] = u
            if u:
                vec = R.sub_vec(vec, R.mul_vec(ctx.omega_table[u], ctx.basis[i]))
    if np.any(vec):
        raise WittError("decomposition left a nonzero remainder")
    return tuple(out)


def nabla(ctx, u):
    """sum omega(u_alpha) x^alpha for one coefficient tuple."""
    R = ctx.ring
    if len(u) != len(ctx.delta):
        raise WittError(f"expected {len(ctx.delta)} coefficients, got {len(u)}")
    acc = R.zero_vec()
    for c, b in zip(u, ctx.basis):
        c = c.value if isinstance(c, FieldElement) else int(c)
        if c:
            acc = R.add_vec(acc, R.mul_vec(ctx.omega_table[c], b))
    return R.element(acc)


def nabla_many(ctx, us):
    """Componentwise nabla on a tuple of coefficient tuples."""
    return tuple(nabla(ctx, u) for u in us)


def nabla_table(R, table, basis):
    """Codes of sum table[u_alpha] * basis_alpha over all coefficient tuples
    (axis i indexes the residue code of coefficient i)."""
    k = table.shape[0]
    terms = [R.encode(R.mul_vec(table, np.broadcast_to(b, table.shape))) for b in basis]
    acc = np.zeros((), dtype=np.int64)
    for i, t in enumerate(terms):
        shape = [1] * len(terms)
        shape[i] = k
        acc = R.add_codes(acc, t.reshape(shape)) if R.tables is not None else \
            _add_codes_any(R, acc, t.reshape(shape))
    return np.broadcast_to(acc, (k,) * len(terms))


def _add_codes_any(R, a, b):
    a, b = np.broadcast_arrays(np.asarray(a), np.asarray(b))
    return R.encode(R.add_vec(R.decode(a.ravel()), R.decode(b.ravel()))).reshape(a.shape)


def unique_representation_check(R):
    """Exhaustive: u -> sum c(u_alpha) x^alpha is a bijection kappa^|Delta| -> R,
    where c is the coefficient field (equicharacteristic) or omega (mixed)."""
    delta, basis = R.delta_support()
    q = choose_q(R.p, max(R.exponent, 1))
    table = teichmuller_table(R, q)
    if R.residue_field.size ** len(delta) != R.size:
        return False
    codes = nabla_table(R, table, basis).ravel()
    return np.unique(codes).size == R.size


def omega_is_additive(ctx):
    """First pair (u, v) with omega(u + v) != omega(u) + omega(v), or None."""
    R = ctx.ring
    F = ctx.kappa
    for u in range(F.size):
        for v in range(F.size):
            lhs = ctx.omega_table[F.add(u, v)]
            rhs = R.add_vec(ctx.omega_table[u], ctx.omega_table[v])
            if np.any(lhs != rhs):
                return (u, v)
    return None


def chain_check(ctx):
    """a(alpha_l) < ... < a(alpha_1) = m with each quotient of size |kappa|."""
    R = ctx.ring
    sizes = [R.a_ideal(a).size() for a in ctx.delta]
    if sizes[0] != R.maximal_ideal.size():
        return False
    kap = ctx.kappa.size
    return all(big == kap * small for big, small in zip(sizes, sizes[1:])) and sizes[-1] == 1
