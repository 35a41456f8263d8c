"""Two worked constructions: a Gorenstein extension of a type-2 ring of
length 5, and a bounded search for an amalgam of two length-2 rings."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..fields import FieldTower, is_prime
from ..linalg import IntegersMod, canonicalize
from ..localring import hom_check, iter_homs, polynomial_ring_quotient
from . import sparse as sp

# ---------------------------------------------------------------------------
# length-5 example

_A, _B, _C, _X, _Y, _Z = range(6)
_NAMES = ["A", "B", "C", "X", "Y", "Z"]


@dataclass
class ExampleReport:
    p: int
    checks: dict = field(default_factory=dict)
    values: dict = field(default_factory=dict)
    seconds: float = 0.0

    @property
    def passed(self):
        return all(self.checks.values())

    def format(self):
        lines = [f"p = {self.p}"]
        lines += [f"{k}: {v}" for k, v in self.values.items()]
        lines += [f"{k}: {'ok' if v else 'FAIL'}" for k, v in self.checks.items()]
        return "\n".join(lines)


class _Carrier:
    """F_p[A,B,C]/(A^2+B^2+C^2) (x) F_p[X,Y,Z]/(X^2-Y^2, X^2-Z^2, XY, XZ, YZ).

    Normal forms: A^2 -> -B^2 - C^2; Y^2, Z^2 -> X^2; mixed XYZ products and
    XYZ-degree >= 3 -> 0."""

    def __init__(self, p):
        self.F = FieldTower(p)
        self.K = sp.CodeArith(self.F)

    def mono(self, **exps):
        return tuple(sorted((_NAMES.index(k), e) for k, e in exps.items() if e))

    def poly(self, terms):
        out = {}
        for c, m in terms:
            out = sp.add(self.K, out, {m: c % self.F.p})
        return out

    def reduce_xyz(self, p):
        out = {}
        for m, c in p.items():
            d = dict(m)
            a, b, cz = d.get(_X, 0), d.get(_Y, 0), d.get(_Z, 0)
            deg = a + b + cz
            if deg >= 3:
                continue
            if deg == 2:
                if max(a, b, cz) < 2:
                    continue
                d[_X], d[_Y], d[_Z] = 2, 0, 0
            key = tuple(sorted((v, e) for v, e in d.items() if e))
            out = sp.add(self.K, out, {key: c})
        return out

    def normal_form(self, p):
        p = self.reduce_xyz(p)
        rule = self.poly([(-1, self.mono(B=2)), (-1, self.mono(C=2))])
        while True:
            hit = [m for m in p if dict(m).get(_A, 0) >= 2]
            if not hit:
                return p
            out = {m: c for m, c in p.items() if dict(m).get(_A, 0) < 2}
            for m in hit:
                d = dict(m)
                d[_A] -= 2
                rest = {tuple(sorted((v, e) for v, e in d.items() if e)): p[m]}
                out = sp.add(self.K, out, sp.mul(self.K, rest, rule))
            p = out

    def mul(self, p, q):
        return self.normal_form(sp.mul(self.K, p, q))


def example_1_8(p):
    """Verify the length-5 type-2 ring, its Gorenstein target and the embedding."""
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")
    if p == 2:
        raise ValueError("p = 2 is excluded: A^2 + B^2 + C^2 = (A + B + C)^2 over F_2")
    start = time.perf_counter()
    rep = ExampleReport(p)
    F = FieldTower(p)
    R = polynomial_ring_quotient(F, ["S", "T"], ["S^2", "S*T^2", "T^3"], name=f"F_{p}[S,T]/(S^2,ST^2,T^3)")
    inv = R.invariants()
    rep.values["R"] = (f"length {inv['length']} embdim {inv['embdim']} exponent {inv['exponent']} "
                       f"type {inv['type']}")
    rep.checks["R invariants (5, 2, 3, 2)"] = (inv["length"], inv["embdim"], inv["exponent"], inv["type"]) == (5, 2, 3, 2)
    tgt = polynomial_ring_quotient(F, ["X", "Y", "Z"], ["X^2 - Y^2", "X^2 - Z^2", "X*Y", "X*Z", "Y*Z"],
                                   name=f"F_{p}[X,Y,Z]/b")
    ti = tgt.invariants()
    rep.values["target"] = (f"length {ti['length']} embdim {ti['embdim']} exponent {ti['exponent']} "
                            f"type {ti['type']}")
    rep.checks["target Gorenstein of length 5"] = ti["gorenstein"] and ti["length"] == 5
    rep.checks["target embdim 3, exponent 3"] = (ti["embdim"], ti["exponent"]) == (3, 3)

    C = _Carrier(p)
    K = C.K
    phi_S = C.poly([(1, C.mono(A=1, X=1)), (1, C.mono(B=1, Y=1)), (1, C.mono(C=1, Z=1))])
    phi_T = C.poly([(1, C.mono(B=1, X=1))])
    square = C.reduce_xyz(sp.mul(K, phi_S, phi_S))
    quadric_x2 = C.poly([(1, C.mono(A=2, X=2)), (1, C.mono(B=2, X=2)), (1, C.mono(C=2, X=2))])
    rep.checks["phi(S)^2 = (A^2+B^2+C^2) X^2"] = square == quadric_x2
    rep.checks["phi(S^2) = 0"] = not C.normal_form(square)
    rep.checks["phi(S T^2) = 0"] = not C.mul(phi_S, C.mul(phi_T, phi_T))
    rep.checks["phi(T^3) = 0"] = not C.mul(phi_T, C.mul(phi_T, phi_T))

    # injectivity: images of 1, S, T, ST, T^2 are linearly independent over F_p
    one = C.poly([(1, ())])
    images = [one, phi_S, phi_T, C.mul(phi_S, phi_T), C.mul(phi_T, phi_T)]
    expected = [one, phi_S, phi_T,
                C.poly([(1, C.mono(A=1, B=1, X=2))]), C.poly([(1, C.mono(B=2, X=2))])]
    rep.checks["images u + v(AX+BY+CZ) + wBX + xABX^2 + yB^2X^2"] = images == expected
    monos = sorted({m for im in images for m in im})
    M = np.array([[im.get(m, 0) for m in monos] for im in images], dtype=np.int64)
    rank = canonicalize(M, IntegersMod(p), len(monos)).rank
    rep.values["rank of images"] = rank
    rep.checks["phi injective"] = rank == 5
    coeff_monos = [C.mono(), C.mono(A=1), C.mono(B=1), C.mono(C=1), C.mono(A=1, B=1), C.mono(B=2)]
    nfs = [C.normal_form({m: 1}) for m in coeff_monos]
    rep.checks["1, A, B, C, AB, B^2 independent normal forms"] = (
        all(nf == {m: 1} for nf, m in zip(nfs, coeff_monos)) and len(set(coeff_monos)) == 6)
    rep.seconds = time.perf_counter() - start
    return rep


# ---------------------------------------------------------------------------
# bounded amalgam search


@dataclass
class AmalgamReport:
    p: int
    degrees: tuple
    bound: int
    fields: list = field(default_factory=list)  # per candidate m: dict of counts
    amalgam: object = None  # (m, psi_1 images, psi_2 images) when found
    seconds: float = 0.0

    @property
    def found(self):
        return self.amalgam is not None

    def format(self):
        k1, k2 = self.degrees
        lines = [f"p = {self.p}, theta degrees ({k1}, {k2}), bound m <= {self.bound}"]
        if not self.fields:
            lines.append("no candidate fields below bound")
        for f in self.fields:
            lines.append(f"m = {f['m']}: {f['embeddings'][0]} x {f['embeddings'][1]} embeddings, "
                         f"{f['commuting']} commuting pairs")
        lines.append("amalgam found" if self.found else
                     f"no amalgam with residue field of degree <= {self.bound} (bounded search)")
        return "\n".join(lines)


def _length_two(p, k):
    return polynomial_ring_quotient(FieldTower(p, k), ["T"], ["T^2"], name=f"F_{p ** k}[T]/(T^2)")


def amalgam_search(p=2, k1=2, k2=3, bound=6, budget=10**6):
    """Search all embeddings of R_k = F_{p^k}[T]/(T^2) into F_{p^m}[T]/(T^2)
    (lcm(k1, k2) | m <= bound) for a pair that agrees on V = F_p[X,Y]/(X,Y)^2,
    where V -> R_k sends X to theta_k T and Y to T (theta_k generates F_{p^k}).
    With k1 == k2 both maps are the same, so an amalgam exists."""
    start = time.perf_counter()
    rep = AmalgamReport(p, (k1, k2), bound)
    V = polynomial_ring_quotient(FieldTower(p), ["X", "Y"], ["X^2", "X*Y", "Y^2"], name="V")
    rings, maps = [], []
    for k in (k1, k2):
        Rk = _length_two(p, k)
        T = Rk.gen("T")
        theta = Rk.gen("t") if "t" in Rk.gen_names else Rk.one
        phi = hom_check(V, Rk, [theta * T, T])
        if not phi.injective:
            raise ValueError(f"theta of degree {k} does not give an embedding of V")
        rings.append(Rk)
        maps.append(phi)
    L = math.lcm(k1, k2)
    for m in range(1, bound + 1):
        if m % L:
            continue
        U = _length_two(p, m)
        keys = []
        counts = []
        for Rk, phi in zip(rings, maps):
            table = {}
            n = 0
            for psi in iter_homs(Rk, U, injective_only=True, budget=budget):
                if not psi.is_local():
                    raise AssertionError("an embedding of local rings is not local")
                n += 1
                key = tuple(int(U.encode(psi.apply_vec(phi.apply_vec(g)))) for g in V.gen_words)
                entry = table.setdefault(key, [0, psi.images])
                entry[0] += 1
            keys.append(table)
            counts.append(n)
        common = set(keys[0]) & set(keys[1])
        pairs = sum(keys[0][c][0] * keys[1][c][0] for c in common)
        rep.fields.append({"m": m, "embeddings": tuple(counts), "commuting": pairs})
        if common and rep.amalgam is None:
            key = min(common)
            rep.amalgam = (m, [U.format(v) for v in keys[0][key][1]], [U.format(v) for v in keys[1][key][1]])
    rep.seconds = time.perf_counter() - start
    return rep
