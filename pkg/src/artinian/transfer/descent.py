"""Coordinate descent of polynomials from a local ring to its residue field.

Every element of R is ``sum c(u_a) x^a`` over the standard monomials, with
``c`` the coefficient field section (equicharacteristic) or the Witt map
(mixed characteristic).  Substituting such expansions into a polynomial
and collecting coordinates yields polynomials over the residue field.

Convention: in polynomials over R a variable stands for ``c(value)``; in
polynomials over the residue field it stands for the value itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..fields import FieldElement, frobenius_inverse_power
from ..linalg import solver
from ..localring import RingError
from ..witt import WittContext, choose_q, teichmuller_table, witt_context, witt_decompose
from . import sparse as sp
from .sparse import CodeArith
from .systems import dense_to_sparse


class DescentError(RingError):
    pass


# ---------------------------------------------------------------------------
# frames: coefficient section, standard monomials, decomposition


def equichar_q(R):
    """Least power of p that is at least the exponent of R."""
    q = R.p
    while q < max(R.exponent, 1):
        q *= R.p
    return q


def coefficient_frame(R):
    """WittContext of R: the Witt frame in mixed characteristic, the
    coefficient field frame (same shape) in equal characteristic."""
    if not R.is_equicharacteristic():
        return witt_context(R)
    q = equichar_q(R)
    delta, basis = R.delta_support()
    return WittContext(R, q, R.exponent, teichmuller_table(R, q), delta, basis)


def frame_in(S, hom, ctx):
    """The frame of ``ctx.ring`` transported into an extension S along ``hom``:
    same q and the images of the standard monomials."""
    basis = [hom.apply_vec(b) for b in ctx.basis]
    return WittContext(S, ctx.q, S.exponent, teichmuller_table(S, ctx.q), list(ctx.delta), basis)


def residue_embedding(hom):
    """Residue-field codes of the source mapped to residue codes of the target."""
    A, B = hom.source, hom.target
    kap = A.residue_field
    lifts = A.lift_vec(np.arange(kap.size))
    return np.asarray(B.residue_vec(hom.apply_vec(lifts)), dtype=np.int64)


def frobenius_root_table(F, q):
    return np.array([frobenius_inverse_power(FieldElement(F, u), q).value for u in range(F.size)],
                    dtype=np.int64)


class _Frame:
    """Cached code-level data of a frame."""

    def __init__(self, ctx):
        R = ctx.ring
        self.ctx = ctx
        self.ring = R
        self.A = CodeArith(R)
        self.kappa = R.residue_field
        self.K = CodeArith(self.kappa)
        self.omega = np.asarray(R.encode(ctx.omega_table), dtype=np.int64)
        self.basis = [int(c) for c in R.encode(np.array(ctx.basis).reshape(-1, R.N))]
        self.residue = np.asarray(R.residue_codes, dtype=np.int64)
        self.l = len(ctx.delta)
        self._dec = {}

    def decompose(self, code):
        code = int(code)
        hit = self._dec.get(code)
        if hit is None:
            hit = witt_decompose(self.ctx, self.ring.decode(code)) if code else (0,) * self.l
            self._dec[code] = hit
        return hit

    def nabla_codes(self, U):
        """Codes of sum omega(U[..., a]) E_a for an array of residue codes."""
        U = np.asarray(U, dtype=np.int64)
        acc = np.zeros(U.shape[:-1], dtype=np.int64)
        for a, e in enumerate(self.basis):
            acc = self.A.add(acc, self.A.mul(self.omega[U[..., a]], e))
        return acc


# ---------------------------------------------------------------------------
# results


@dataclass
class VariableInventory:
    """Names of the residue-field variables: U_{i,a} for coordinates, W for q-th roots."""

    names: list = field(default_factory=list)
    unknowns: dict = field(default_factory=dict)  # (i, a) -> id
    roots: dict = field(default_factory=dict)  # z -> w with w^q = z
    derived: list = field(default_factory=list)  # (w, z) in creation order

    def unknown(self, i, a, label=None):
        key = (i, a)
        if key not in self.unknowns:
            self.unknowns[key] = len(self.names)
            self.names.append(label or f"u{i + 1}_{a}")
        return self.unknowns[key]

    def root(self, z):
        if z not in self.roots:
            w = len(self.names)
            self.names.append(f"w{len(self.derived) + 1}")
            self.roots[z] = w
            self.derived.append((w, z))
        return self.roots[z]

    @property
    def free(self):
        return [self.unknowns[k] for k in sorted(self.unknowns)]


@dataclass
class DescentResult:
    """Residue-field coordinate polynomials ``polys[j][a]`` of each input polynomial."""

    ring: object
    q: int
    delta: list
    inventory: VariableInventory
    polys: list
    trace: list

    @property
    def field(self):
        return self.ring.residue_field

    def side_conditions(self):
        """The formula w^q = z for every auxiliary variable, as text."""
        names = self.inventory.names
        return [f"{names[w]}^{self.q} = {names[z]}" for w, z in self.inventory.derived]

    def format(self):
        names = self.inventory.names
        F = self.field
        lines = []
        for j, ps in enumerate(self.polys):
            for a, p in zip(self.delta, ps):
                lines.append(f"p[{j}][{a}] = {sp.format_poly(p, names, F.format)}")
        lines += self.side_conditions()
        return "\n".join(lines)


def _expansion_images(frame, inv, n):
    return {i: {((inv.unknown(i, a), 1),): e for a, e in enumerate(frame.basis) if e}
            for i in range(n)}


def _collect(frame, expanded):
    """Split sum c_g Y^g into coordinate polynomials: c_g = sum omega(u_a) E_a."""
    out = [dict() for _ in range(frame.l)]
    for mono, c in expanded.items():
        for a, u in enumerate(frame.decompose(c)):
            if u:
                out[a][mono] = int(u)
    return out


def descend_equichar(R, system, frame=None):
    """Coordinate polynomials over kappa of every polynomial of ``system``."""
    if not R.is_equicharacteristic():
        raise DescentError("descend_equichar needs an equicharacteristic ring")
    frame = frame or _Frame(coefficient_frame(R))
    inv = VariableInventory()
    images = _expansion_images(frame, inv, system.n)
    polys = []
    for P in system.sparse_polys():
        expanded = sp.substitute(frame.A, P, images)
        polys.append(_collect(frame, expanded))
    return DescentResult(R, frame.ctx.q, list(frame.ctx.delta), inv, polys, [])


# ---------------------------------------------------------------------------
# lifted polynomial and correction terms


@dataclass
class LiftResult:
    Q: dict
    P: dict
    h: list  # one polynomial per generator x_i of m
    D: dict  # Q(T^q) - P(T)^q


def _membership_solver(frame):
    hit = getattr(frame, "_msolver", None)
    if hit is None:
        R = frame.ring
        eye = np.eye(R.N, dtype=np.int64)
        rows = [R.mul_vec(np.broadcast_to(x, (R.N, R.N)), eye) for x in R.x_vecs]
        G = np.vstack(rows + [R.W.rows]) if R.x_vecs else R.W.rows
        hit = solver(G, R.base)
        frame._msolver = hit
    return hit


def lift_polynomial_witt(ctx, Q, frame=None):
    """P and h_1..h_mu with P(T)^q = Q(T^q) - sum x_i h_i(T)."""
    frame = frame or _Frame(ctx)
    R = frame.ring
    A = frame.A
    q = ctx.q
    roots = frobenius_root_table(frame.kappa, q)
    lifts = np.asarray(R.encode(R.lift_vec(roots)), dtype=np.int64)
    P = {}
    for mono, c in Q.items():
        acc = 0
        for a, u in enumerate(frame.decompose(c)):
            if u:
                acc = int(A.add(acc, A.mul(lifts[u], frame.basis[a])))
        if acc:
            P[mono] = acc
    D = sp.sub(A, sp.frobenius_exps(Q, q), sp.power(A, P, q))
    mu = len(R.x_vecs)
    h = [dict() for _ in range(mu)]
    S = _membership_solver(frame)
    for mono, d in D.items():
        if frame.residue[d]:
            raise DescentError("Q(T^q) - P^q has a unit coefficient (internal error)")
        x = S.express(R.decode(d))
        if x is None:
            raise DescentError("coefficient of Q(T^q) - P^q is not in sum x_i R (internal error)")
        for i in range(mu):
            c = int(R.encode(R.reduce(x[i * R.N:(i + 1) * R.N])))
            if c:
                h[i][mono] = c
    return LiftResult(Q, P, h, D)


def lift_identity_check(ctx, lift, frame=None, target=None):
    """Exhaustive check of Q(w(v^q)) = w(Qbar(v^q)) + sum x_i h_i(w(v)) over v in kappa^n.

    ``target`` optionally gives ``(frame_S, hom)`` to check in an extension."""
    frame = frame or _Frame(ctx)
    if target is None:
        fS, emb, push = frame, np.arange(frame.kappa.size), (lambda c: c)
    else:
        fS, hom = target
        emb = residue_embedding(hom)
        push = _code_pusher(hom)
    R = fS.ring
    A, K = fS.A, fS.K
    q = ctx.q
    vs = sorted(set(sp.variables(lift.Q)) | {v for h in lift.h for v in sp.variables(h)})
    n = len(vs)
    F = fS.kappa
    grids = np.indices((F.size,) * n).reshape(n, -1) if n else np.zeros((0, 1), dtype=np.int64)
    shape = grids.shape[1:]
    vq = {v: K.power(grids[k], q) for k, v in enumerate(vs)}
    om = fS.omega
    Qs = sp.map_coeffs(lift.Q, push)
    lhs = sp.evaluate(A, Qs, {v: om[vq[v]] for v in vs}, shape)
    qbar = {m: int(emb[frame.residue[c]]) for m, c in lift.Q.items() if frame.residue[c]}
    rhs = om[sp.evaluate(K, qbar, vq, shape)]
    env = {v: om[grids[k]] for k, v in enumerate(vs)}
    xs = [int(R.encode(x)) for x in _pushed_x(frame, target)]
    for x, h in zip(xs, lift.h):
        rhs = A.add(rhs, A.mul(x, sp.evaluate(A, sp.map_coeffs(h, push), env, shape)))
    bad = np.flatnonzero(np.asarray(lhs) != np.asarray(rhs))
    if bad.size:
        return False, tuple(int(grids[k, bad[0]]) for k in range(n))
    return True, None


def _code_pusher(hom):
    A, B = hom.source, hom.target
    cache = {}

    def push(c):
        c = int(c)
        if c not in cache:
            cache[c] = int(B.encode(hom.apply_vec(A.decode(c))))
        return cache[c]

    return push


def _pushed_x(frame, target):
    R = frame.ring
    if target is None:
        return [np.asarray(x) for x in R.x_vecs]
    _, hom = target
    return [hom.apply_vec(x) for x in R.x_vecs]


# ---------------------------------------------------------------------------
# mixed-characteristic descent


def descend_mixed(ctx, system, frame=None):
    """Residue coordinate polynomials p[j][a](U, W) and side conditions w^q = z.

    For u over any same-length extension, with each w the q-th root of its z:
    P_j(nabla(u)) = sum_a omega(p[j][a](u, w)) x^a.
    """
    R = ctx.ring
    if R.is_equicharacteristic():
        raise DescentError("descend_mixed needs mixed characteristic")
    if not R.is_gorenstein():
        raise DescentError(f"descend_mixed needs a Gorenstein ring (type {R.cm_type})")
    frame = frame or _Frame(ctx)
    inv = VariableInventory()
    images = _expansion_images(frame, inv, system.n)
    polys, trace = [], []
    for j, P in enumerate(system.sparse_polys()):
        ps, tr = _descend_one(frame, inv, sp.substitute(frame.A, P, images))
        polys.append(ps)
        trace += [dict(t, poly=j) for t in tr]
    return DescentResult(R, ctx.q, list(ctx.delta), inv, polys, trace)


def _descend_one(frame, inv, expanded):
    R = frame.ring
    A = frame.A
    l = frame.l
    om = frame.omega
    Q = [dict() for _ in range(l)]
    for a, coords in enumerate(_collect(frame, expanded)):
        Q[a] = {m: int(om[u]) for m, u in coords.items()}
    xcodes = [int(c) for c in R.encode(np.array(R.x_vecs).reshape(-1, R.N))]
    ps, trace = [], []
    for b in range(l):
        Qb = Q[b]
        ps.append(sp.map_coeffs(Qb, lambda c: frame.residue[c]))
        prods = [int(A.mul(x, frame.basis[b])) for x in xcodes]
        if not Qb or not any(prods):
            trace.append({"index": b, "lifted": False})
            continue
        lift = lift_polynomial_witt(frame.ctx, Qb, frame)
        mapping = {z: inv.root(z) for z in sp.variables(Qb)}
        for i, h in enumerate(lift.h):
            if not prods[i]:
                continue
            for mono, c in sp.rename(h, mapping).items():
                e = int(A.mul(prods[i], c))
                if not e:
                    continue
                u = frame.decompose(e)
                if any(u[d] for d in range(b + 1)):
                    raise DescentError("correction term below the current index (internal error)")
                for d in range(b + 1, l):
                    if u[d]:
                        Q[d] = sp.add(A, Q[d], {mono: int(om[u[d]])})
        trace.append({"index": b, "lifted": True, "roots": dict(mapping),
                      "h_terms": sum(len(h) for h in lift.h)})
    return ps, trace


def descent_identity_check(desc, system, frame_S, hom=None, points=None):
    """Check P_j(nabla(u)) = sum omega(p[j][a](u, w)) x^a in an extension.

    ``frame_S`` is the frame transported into S (or R's own frame with hom None).
    ``points`` is an array (k, n*l) of residue codes of S; default: all of them.
    Returns (ok, first failing u or None)."""
    S = frame_S.ring
    A, K = frame_S.A, frame_S.K
    inv = desc.inventory
    if hom is None:
        emb = np.arange(S.residue_field.size)
        push = (lambda c: c)
    else:
        emb = residue_embedding(hom)
        push = _code_pusher(hom)
    free = inv.free
    n_free = len(free)
    if points is None:
        F = S.residue_field
        points = np.indices((F.size,) * n_free).reshape(n_free, -1).T if n_free else np.zeros((1, 0), dtype=np.int64)
    points = np.asarray(points, dtype=np.int64)
    shape = points.shape[:1]
    env = {v: points[:, k] for k, v in enumerate(free)}
    roots = frobenius_root_table(S.residue_field, desc.q)
    for w, z in inv.derived:
        env[w] = roots[env[z]]
    n = system.n
    l = len(desc.delta)
    t = {}
    for i in range(n):
        U = np.stack([env[inv.unknowns[(i, a)]] for a in range(l)], axis=-1)
        t[i] = frame_S.nabla_codes(U)
    for P, ps in zip(system.sparse_polys(), desc.polys):
        lhs = sp.evaluate(A, sp.map_coeffs(P, push), t, shape)
        rhs = np.zeros(shape, dtype=np.int64)
        for a, p in enumerate(ps):
            pv = sp.evaluate(K, {m: int(emb[c]) for m, c in p.items()}, env, shape)
            rhs = A.add(rhs, A.mul(frame_S.omega[pv], frame_S.basis[a]))
        bad = np.flatnonzero(np.asarray(lhs) != np.asarray(rhs))
        if bad.size:
            return False, tuple(int(x) for x in points[bad[0]])
    return True, None


def single_poly_system(R, poly, n):
    """A one-equation PolySystem from a sparse or dense polynomial."""
    from .systems import PolySystem

    if poly and not isinstance(next(iter(poly)), tuple):
        raise TypeError("polynomial keys must be tuples")
    dense = {}
    for mono, c in poly.items():
        if mono and isinstance(mono[0], tuple):
            exps = [0] * n
            for v, e in mono:
                exps[v] = e
            mono = tuple(exps)
        elif len(mono) != n:
            mono = tuple(mono) + (0,) * (n - len(mono))
        dense[mono] = R.from_code(c) if isinstance(c, (int, np.integer)) else c
    return PolySystem(R, tuple(f"T{i + 1}" for i in range(n)), [dense], [])


__all__ = ["DescentError", "DescentResult", "LiftResult", "VariableInventory", "choose_q",
           "coefficient_frame", "dense_to_sparse", "descend_equichar", "descend_mixed",
           "descent_identity_check", "equichar_q", "frame_in", "frobenius_root_table",
           "lift_identity_check", "lift_polynomial_witt", "residue_embedding", "single_poly_system"]
