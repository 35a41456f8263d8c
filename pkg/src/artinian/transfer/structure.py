"""Structure of a same-length extension of a Gorenstein local ring."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

import numpy as np

from ..fields import FieldTower
from ..localring import HomError, RingError, base_change, hom_check
from ..witt import nabla_table, teichmuller_table
from .descent import coefficient_frame, equichar_q, frame_in, residue_embedding
from .procedure import TransferError, inclusion


@dataclass
class StructureReport:
    checks: dict = field(default_factory=dict)  # name -> bool
    witnesses: dict = field(default_factory=dict)  # name -> text for failed checks

    @property
    def passed(self):
        return bool(self.checks) and all(self.checks.values())

    def record(self, name, ok, witness=None):
        self.checks[name] = bool(ok)
        if not ok:
            self.witnesses[name] = witness or "failed"
        return ok

    def format(self):
        lines = []
        for k, v in self.checks.items():
            lines.append(f"{k}: {'ok' if v else 'FAIL'}" + ("" if v else f" ({self.witnesses[k]})"))
        return "\n".join(lines)


def extension_structure_check(R, S, images=None):
    """Check that S is the expected same-length extension of the Gorenstein ring R.

    ``images`` are the images of R's generators in S (default: by name).
    Equal characteristic: S is R (x)_kappa lambda.  Mixed: mS is the maximal
    ideal, the standard monomials of R form a Witt base of S, Soc(S) = eta S
    and S is free over R of rank [lambda : kappa]."""
    rep = StructureReport()
    if not rep.record("gorenstein", R.is_gorenstein(), f"R has type {R.cm_type}"):
        return rep
    if not rep.record("same length", R.length == S.length, f"lengths {R.length} and {S.length}"):
        return rep
    try:
        if images is None:
            hom = inclusion(R, S)
        else:
            hom = hom_check(R, S, images)
    except (TransferError, HomError) as exc:
        rep.record("embedding", False, str(exc))
        return rep
    if not rep.record("embedding", hom.injective, f"{hom.kernel_witness} is in the kernel"):
        return rep
    kap, lam = R.residue_field, S.residue_field
    f, rem = divmod(lam.degree, kap.degree)
    if not rep.record("residue degree", rem == 0, f"F_{lam.size} over F_{kap.size}"):
        return rep
    if R.is_equicharacteristic():
        _equichar_checks(rep, R, S, hom)
    else:
        _mixed_checks(rep, R, S, hom, f)
    return rep


def _witt_base(rep, R, S, hom, name):
    ctx = frame_in(S, hom, coefficient_frame(R))
    codes = nabla_table(S, ctx.omega_table, ctx.basis).ravel()
    uniq = np.unique(codes).size
    ok = uniq == S.size and codes.size == S.size
    rep.record(name, ok, f"{uniq} distinct sums of {codes.size} for |S| = {S.size}")
    return ctx


def _equichar_checks(rep, R, S, hom):
    lam = S.residue_field
    rep.record("size", S.size == lam.size ** R.length, f"|S| = {S.size}, |lambda|^l = {lam.size ** R.length}")
    _witt_base(rep, R, S, hom, "basis")
    try:
        B = base_change(R, FieldTower(R.p, lam.degree))
    except RingError as exc:
        rep.record("base change", False, str(exc))
        return
    images = []
    for g in B.gen_names:
        if g == "t":
            images.append(teichmuller_table(S, equichar_q(S))[_field_gen_image(B, S)])
        else:
            images.append(hom.apply_vec(R.gen_words[R.gen_names.index(g)]))
    try:
        iso = hom_check(B, S, images)
        ok = iso.injective and B.size == S.size
        rep.record("base change", ok, "map from R (x) lambda is not bijective")
    except HomError as exc:
        rep.record("base change", False, str(exc))


def _field_gen_image(B, S):
    """Residue code in S of the field generator of B = R (x) lambda."""
    lamB, lamS = B.residue_field, S.residue_field
    u = int(B.residue_vec(B.gen("t").vec))
    return int(lamS.embedding_from(lamB)[u])


def _mixed_checks(rep, R, S, hom, f):
    mS = S.ideal([hom.apply_vec(v) for v in R.maximal_ideal.space.rows])
    rep.record("mS maximal", mS == S.maximal_ideal,
               f"|mS| = {mS.size()}, |n| = {S.maximal_ideal.size()}")
    ctx = _witt_base(rep, R, S, hom, "Witt base")
    eta = ctx.basis[-1]
    eta_S = S.ideal([eta])
    rep.record("socle", eta_S == S.socle, f"|eta S| = {eta_S.size()}, |Soc S| = {S.socle.size()}")
    # freeness: R^f -> S, (r_i) -> sum r_i s_i with s_i lifting a kappa-basis of lambda
    lam, kap = S.residue_field, R.residue_field
    emb = residue_embedding(hom)
    g = lam.generator()
    basis = [lam.power(g, i) for i in range(f)]
    if not _spans(lam, kap, emb, basis):
        basis = _kappa_basis(lam, kap, emb, f)
    lifts = S.lift_vec(np.array(basis))
    RV = hom.apply_vec(R.all_vectors)
    codes = np.zeros((1,), dtype=np.int64)
    for s in lifts:
        terms = S.encode(S.mul_vec(RV, np.broadcast_to(s, RV.shape)))
        codes = np.asarray(S.add_codes(codes[:, None], terms[None, :])).ravel() if S.tables is not None \
            else S.encode(S.add_vec(S.decode(np.repeat(codes, terms.size)), S.decode(np.tile(terms, codes.size))))
    uniq = np.unique(codes).size
    rep.record("free of rank [lambda:kappa]", uniq == S.size and codes.size == S.size,
               f"{uniq} distinct images of |R|^{f} = {codes.size} tuples, |S| = {S.size}")


def _spans(lam, kap, emb, basis):
    combos = set()
    for cs in itertools.product(range(kap.size), repeat=len(basis)):
        acc = 0
        for c, b in zip(cs, basis):
            acc = int(lam.add(acc, lam.mul(int(emb[c]), b)))
        combos.add(acc)
    return len(combos) == lam.size


def _kappa_basis(lam, kap, emb, f):
    for cand in itertools.combinations(range(1, lam.size), f):
        if _spans(lam, kap, emb, list(cand)):
            return list(cand)
    raise TransferError("no basis of the residue extension")  # pragma: no cover
