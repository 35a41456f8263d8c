"""Existential transfer: a solution over an extension gives one over R after
growing the residue field.

The residue-field search replaces an algebraically closed residue field:
candidate fields are tried in increasing degree among the subfields of the
extension's residue field, and the report names the field that was needed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..fields import FieldTower, is_irreducible
from ..localring import HomError, RingError, adjoin_root, base_change, hom_check
from . import sparse as sp
from ..witt import teichmuller_table
from .descent import (_Frame, coefficient_frame, descend_equichar, descend_mixed, equichar_q,
                      frame_in, frobenius_root_table, residue_embedding)
from .systems import DEFAULT_BUDGET, solve_bruteforce, solve_field_system


class TransferError(RingError):
    pass


# ---------------------------------------------------------------------------
# inclusions and growth


def inclusion(R, S, images=None):
    """The ring map R -> S sending each generator to the same-named generator of S.

    The field generator ``t`` of an equicharacteristic R goes to the element of
    S's coefficient field with the same residue.  Raises TransferError unless
    the map is an injective homomorphism."""
    if images is None:
        images = []
        for g, vec in zip(R.gen_names, R.gen_words):
            if g in S.gen_names and g != "t":
                images.append(S.gen_words[S.gen_names.index(g)])
            elif g == "t" and R.is_equicharacteristic():
                lam, kap = S.residue_field, R.residue_field
                u = int(R.residue_vec(vec))
                code = int(lam.embedding_from(kap)[u])
                images.append(teichmuller_table(S, equichar_q(S))[code])
            else:
                raise TransferError(f"generator {g!r} has no counterpart in the extension")
    try:
        h = hom_check(R, S, images)
    except HomError as exc:
        raise TransferError(f"not a ring map: {exc}") from exc
    if not h.injective:
        raise TransferError(f"not injective: {h.kernel_witness} maps to 0")
    return h


def identity_hom(R):
    return hom_check(R, R, list(R.gen_words))


def growth_degrees(kappa, lam):
    """Degrees of the fields between kappa and lam, ascending."""
    k, d = kappa.degree, lam.degree
    if d % k:
        raise TransferError(f"F_{lam.size} does not contain F_{kappa.size}")
    return [m for m in range(k, d + 1, k) if d % m == 0]


def _first_irreducible(F, n):
    """First monic irreducible polynomial of degree n over F in code order."""
    import itertools

    for tail in itertools.product(range(F.size), repeat=n):
        f = list(reversed(tail)) + [1]
        if is_irreducible(F, f):
            return f
    raise TransferError(f"no irreducible polynomial of degree {n}")  # pragma: no cover


def grow(R, degree):
    """(R_K, R -> R_K) with residue field of the given degree, same length."""
    kap = R.residue_field
    if degree == kap.degree:
        return R, identity_hom(R)
    if degree % kap.degree:
        raise TransferError(f"degree {degree} is not a multiple of {kap.degree}")
    if R.is_equicharacteristic():
        RK = base_change(R, FieldTower(R.p, degree))
        return RK, inclusion(R, RK)
    f = _first_irreducible(kap, degree // kap.degree)
    om = coefficient_frame(R).omega_table
    coeffs = [om[int(c)] for c in f]
    name = "V"
    while name in R.gen_names:
        name += "'"
    RK = adjoin_root(R, coeffs, var=name)
    RK.name = f"{R.name}[{name}]"
    return RK, inclusion(R, RK)


# ---------------------------------------------------------------------------
# results


@dataclass
class GrowthStep:
    degree: int
    field_size: int
    descended: bool  # the residue-field system has a solution
    oracle: object = None  # brute force over the grown ring (None when not run)


@dataclass
class TransferResult:
    solution: tuple  # elements of ``ring``
    ring: object  # R itself or its growth
    field: object  # residue field of ``ring``
    coordinates: dict  # residue-field values of all variables (u and w)
    extension_coordinates: dict  # the same data for the given solution over S
    witnessed: list  # per inequation: the index a with p_a(t) != 0 over S
    steps: list = field(default_factory=list)
    descent: object = None

    @property
    def grew(self):
        return self.field.degree > self.steps[0].degree

    def summary(self):
        F = self.field
        sol = ", ".join(str(x) for x in self.solution)
        return f"solution ({sol}) over residue field F_{F.size}"


# ---------------------------------------------------------------------------
# the procedure


def _extension_coordinates(desc, frame_S, t):
    S = frame_S.ring
    inv = desc.inventory
    coords = {}
    for i, x in enumerate(t):
        u = frame_S.decompose(S.code_of(x))
        for a, c in enumerate(u):
            coords[inv.unknowns[(i, a)]] = int(c)
    roots = frobenius_root_table(S.residue_field, desc.q)
    for w, z in inv.derived:
        coords[w] = int(roots[coords[z]])
    return coords


def _residue_system(desc, n_eq, emb):
    """Equations and inequation groups over the target field."""
    def push(p):
        return {m: int(emb[c]) for m, c in p.items() if emb[c]}

    eqs = [push(p) for ps in desc.polys[:n_eq] for p in ps]
    eqs = [p for p in eqs if p]
    groups = [[push(p) for p in ps] for ps in desc.polys[n_eq:]]
    return eqs, groups


def _holds(F, eqs, groups, env):
    A = sp.CodeArith(F)
    if any(int(sp.evaluate(A, p, env)) for p in eqs):
        return False
    return all(any(int(sp.evaluate(A, p, env)) for p in g) for g in groups)


def existential_transfer(R, S, system, t, hom=None, budget=DEFAULT_BUDGET, oracle=False,
                         stop_at_first=True):
    """A solution of ``system`` over R (grown) from a solution ``t`` over S.

    With ``oracle`` the brute-force solver runs over every grown ring as well,
    and each GrowthStep records both outcomes."""
    if not R.is_gorenstein():
        raise TransferError(f"R is not Gorenstein (type {R.cm_type})")
    return _transfer(R, S, system, t, hom, budget, oracle, stop_at_first)


def _transfer(R, S, system, t, hom, budget, oracle, stop_at_first):
    if system.ring is not R:
        raise TransferError("the system must be over R")
    if R.length != S.length:
        raise TransferError(f"lengths differ: {R.length} vs {S.length}")
    hom = hom or inclusion(R, S)
    if len(t) != system.n:
        raise TransferError(f"expected {system.n} values, got {len(t)}")
    t = tuple(S.element(x) if not hasattr(x, "ring") else x for x in t)
    if not system.map(hom).is_solution(t):
        raise TransferError("t does not solve the system over S")
    ctx = coefficient_frame(R)
    frame = _Frame(ctx)
    if R.is_equicharacteristic():
        desc = descend_equichar(R, system, frame)
    else:
        desc = descend_mixed(ctx, system, frame)
    frame_S = _Frame(frame_in(S, hom, ctx))
    coords_S = _extension_coordinates(desc, frame_S, t)
    n_eq = len(system.equations)
    lam = S.residue_field
    emb_S = residue_embedding(hom)
    eqs_S, groups_S = _residue_system(desc, n_eq, emb_S)
    if not _holds(lam, eqs_S, groups_S, coords_S):
        raise TransferError("descended system fails at the coordinates of t (internal error)")
    A_lam = sp.CodeArith(lam)
    witnessed = []
    for g in groups_S:
        vals = [int(sp.evaluate(A_lam, p, coords_S)) for p in g]
        witnessed.append(next(a for a, v in enumerate(vals) if v))
    inv = desc.inventory
    steps = []
    found = None
    for d in growth_degrees(R.residue_field, lam):
        RK, homK = grow(R, d)
        K = RK.residue_field
        embK = residue_embedding(homK)
        eqs, groups = _residue_system(desc, n_eq, embK)
        roots = frobenius_root_table(K, desc.q)
        derived = [(w, z, roots) for w, z in inv.derived]
        sol = solve_field_system(K, inv.free, eqs, groups, derived, budget)
        step = GrowthStep(d, K.size, sol is not None)
        if oracle:
            step.oracle = solve_bruteforce(system.map(homK), budget) is not None
        steps.append(step)
        if sol is not None and found is None:
            frame_K = _Frame(frame_in(RK, homK, ctx))
            l = len(desc.delta)
            point = []
            for i in range(system.n):
                U = np.array([sol[inv.unknowns[(i, a)]] for a in range(l)], dtype=np.int64)
                point.append(RK.from_code(int(frame_K.nabla_codes(U))))
            if not system.map(homK).is_solution(point):
                raise TransferError("reconstructed point is not a solution (internal error)")
            found = TransferResult(tuple(point), RK, K, sol, coords_S, witnessed, steps, desc)
            if stop_at_first:
                break
    if found is None:
        raise TransferError("no solution after growing to the extension's residue field (internal error)")
    return found


def transfer_equichar(R, system, S, s, hom=None, budget=DEFAULT_BUDGET, oracle=False,
                      stop_at_first=True):
    """Equicharacteristic transfer from S = R (x) lambda back to R (grown)."""
    if not R.is_equicharacteristic():
        raise TransferError("transfer_equichar needs an equicharacteristic ring")
    return _transfer(R, S, system, s, hom, budget, oracle, stop_at_first)
