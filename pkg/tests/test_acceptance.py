"""Acceptance suite: one test per criterion, each printing a PASS or FAIL line."""

import time
from math import comb

import numpy as np
import pytest
from conftest import RING_FILES, ring, z4
from fol_support import CATALOGUE, red_agreement
from transfer_support import extension_pairs, random_system, solvable_systems

from artinian import fol
from artinian.fol import builders as B
from artinian.io import parse_ring_text
from artinian.localring import product_ring
from artinian.transfer import (amalgam_search, descend_mixed, descent_identity_check, example_1_8,
                               existential_transfer, extension_structure_check, lift_identity_check,
                               lift_polynomial_witt)
from artinian.transfer.descent import _Frame
from artinian.witt import (binomial_valuation, choose_q, lemma32_check, nabla, omega_is_additive,
                           unique_representation_check, witt_context, witt_decompose)


@pytest.fixture
def verdict(capsys):
    def report(n, ok, detail):
        with capsys.disabled():
            print(f"\n{'PASS' if ok else 'FAIL'} criterion {n}: {detail}")
        assert ok, detail
    return report


def fixtures():
    return [ring(n) for n in RING_FILES] + [z4()]


def test_criterion_01_length_five_example(verdict):
    details, ok = [], True
    for p in (3, 5):
        rep = example_1_8(p)
        inv = rep.values["R"]
        ok &= rep.passed and inv == "length 5 embdim 2 exponent 3 type 2" and rep.seconds < 10
        details.append(f"p={p}: {inv}, target Gorenstein, embedding verified in {rep.seconds:.1f}s")
    verdict(1, ok, "; ".join(details))


LEMMA_RINGS = ["f2_t2", "f2_t3", "f2_xy2", "f3_t2", "f2_xy_gor", "z4_x", "z8", "z9", "f4_t2", "f3_x2y2"]


def test_criterion_02_reduction_modulo_ideals(verdict):
    start = time.perf_counter()
    checked, failures = 0, []
    for name in LEMMA_RINGS:
        try:
            checked += red_agreement(ring(name), CATALOGUE, use_tags=False)
        except AssertionError as exc:
            failures.append(str(exc))
    secs = time.perf_counter() - start
    ok = not failures and secs < 60 and len(CATALOGUE) >= 10 and len(LEMMA_RINGS) >= 6
    verdict(2, ok, f"{len(LEMMA_RINGS)} rings, {len(CATALOGUE)} formulas, {checked} (ideal, formula) "
                   f"truth tables agree, {len(failures)} mismatches, {secs:.1f}s")


def test_criterion_03_axiom_semantics(verdict):
    bad = []
    rings = fixtures()
    for R in rings:
        for l in range(1, 6):
            if fol.eval_fast(R, B.art(l)) != (R.length <= l):
                bad.append(f"{R.name} art({l})")
            if fol.eval_fast(R, B.art_exact(l)) != (R.length == l):
                bad.append(f"{R.name} art_exact({l})")
    products = [product_ring(ring("f2_t2"), ring("f2_t2")), product_ring(ring("f3_t2"), ring("f5")),
                product_ring(z4(), ring("f2_t2"))]
    for P in products:
        if fol.eval_fast(P, B.loc()) or fol.eval_reference(P, B.loc()):
            bad.append(f"loc holds on {P.name}")
    mass = B.mass("x")
    for R in rings:
        _, tab = fol.truth_table(R, mass, ["x"], use_tags=False)
        m = R.maximal_ideal
        want = np.array([R.annihilator(R.ideal([v])) == m for v in R.all_vectors])
        if not np.array_equal(tab.astype(bool), want):
            bad.append(f"{R.name} Mass")
        if fol.eval_fast(R, B.min_sentence()) != R.is_gorenstein():
            bad.append(f"{R.name} Min")
    verdict(3, not bad, f"art/art_exact for l<=5 on {len(rings)} fixtures, loc false on {len(products)} "
                        f"products, Mass exhaustive, Min vs Gorenstein; disagreements: {bad or 'none'}")


def test_criterion_04_length_sentences(verdict):
    bad = []
    for l in range(1, 6):
        if str(fol.shape(B.len_(l))) != "∃_1":
            bad.append(f"shape len({l}) = {fol.shape(B.len_(l))}")
    rings = fixtures()
    crosschecked = 0
    for R in rings:
        for l in range(1, 6):
            v = fol.eval_fast(R, B.len_(l))
            if R.size ** l <= 2 * 10**5:
                crosschecked += 1
                if v != fol.eval_fast(R, B.len_(l), use_tags=False):
                    bad.append(f"{R.name} len({l}) tagged vs untagged")
            if v and R.length < l:
                bad.append(f"{R.name} len({l}) but length {R.length}")
            if R.is_gorenstein() and R.length >= l and not v:
                bad.append(f"{R.name} Gorenstein of length {R.length} but not len({l})")
    verdict(4, not bad, f"shape ∃_1 for l<=5, implications on {len(rings)} fixtures, "
                        f"{crosschecked} untagged cross-checks; disagreements: {bad or 'none'}")


EXTRA_RINGS = {
    "F_3[X,Y]/(X^3,Y^2)": "field 3 1\nvars X Y\nrelations\nX^3\nY^2\n",
    "Z/27": "zmod 3 3\n",
    "Z/9[X]/(X^2-3,3X)": "zmod 3 2\nvars X\nrelations\nX^2 - 3\n3*X\n",
    "GR(8,2)": "zmod 2 3\nadjoin W: W^2 + W + 1\n",
}


def test_criterion_05_basis_and_length(verdict):
    rings = fixtures() + [parse_ring_text(t, name=n) for n, t in EXTRA_RINGS.items()]
    bad = []
    for R in rings:
        delta, _ = R.delta_support()
        if R.size != R.residue_field.size ** R.length or len(delta) != R.length:
            bad.append(R.name)
        if R.size <= 729 and not unique_representation_check(R):
            bad.append(f"{R.name} representation")
    both = {R.is_equicharacteristic() for R in rings}
    verdict(5, not bad and both == {True, False} and max(R.size for R in rings) == 729,
            f"{len(rings)} rings up to |R| = 729 in both characteristics; failures: {bad or 'none'}")


MIXED = ["z4_x", "galois4_2", "z8", "z9", "z4_t2", "z4x_w"]


def _q_oracle(p, e):
    q = p
    while not all(binomial_valuation(q, i, p) >= e for i in range(1, max(e - 1, 1) + 1)):
        q *= p
    return q


def test_criterion_06_witt_suite(verdict):
    bad = []
    for (p, e), q in {(2, 2): 4, (3, 2): 9, (2, 3): 16}.items():
        if not choose_q(p, e) == q == _q_oracle(p, e):
            bad.append(f"choose_q({p},{e})")
        if any(binomial_valuation(q, i, p) != _vp(comb(q, i), p) for i in range(q + 1)):
            bad.append(f"valuation oracle at q={q}")
    rings = [ring(n) for n in MIXED]
    for R in rings:
        ctx = witt_context(R)
        F = R.residue_field
        om = ctx.omega_table
        for u in range(F.size):
            if int(R.residue_vec(om[u])) != u:
                bad.append(f"{R.name} section")
            for v in range(F.size):
                if not np.array_equal(om[int(F.mul(u, v))], R.mul_vec(om[u], om[v])):
                    bad.append(f"{R.name} multiplicative")
        if not lemma32_check(ctx):
            bad.append(f"{R.name} lemma 3.2")
        for code in range(R.size):
            r = R.from_code(code)
            if nabla(ctx, witt_decompose(ctx, r)) != r:
                bad.append(f"{R.name} round trip at {r}")
                break
    witness = omega_is_additive(witt_context(ring("galois4_2")))
    ok = not bad and witness is not None
    verdict(6, ok, f"choose_q 4, 9, 16; section, q-th power and round trip on {len(rings)} mixed rings; "
                   f"non-additive pair on GR(4,2): {witness}; failures: {bad or 'none'}")


def _vp(n, p):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def test_criterion_07_lifting_and_descent_identities(verdict):
    start = time.perf_counter()
    names = ["z4", "z4_x", "galois4_2", "z4_t2", "z8"]
    counts, bad = {}, []
    for name in names:
        R = z4() if name == "z4" else ring(name)
        assert R.residue_field.size <= 4
        ctx = witt_context(R)
        frame = _Frame(ctx)
        rng = np.random.default_rng(2024)
        n = 0
        for _ in range(10):
            system = random_system(R, rng, 2, n_eq=1, n_ineq=1)
            for Q in system.sparse_polys():
                if not lift_identity_check(ctx, lift_polynomial_witt(ctx, Q, frame), frame)[0]:
                    bad.append(f"{name} lift")
            if not descent_identity_check(descend_mixed(ctx, system, frame), system, frame)[0]:
                bad.append(f"{name} descent")
            n += 1
        counts[name] = n
    secs = time.perf_counter() - start
    verdict(7, not bad and secs < 120 and min(counts.values()) >= 10,
            f"{sum(counts.values())} generated systems (2 polynomials each) on {len(names)} mixed rings, "
            f"exhaustive over residue inputs, {secs:.1f}s; failures: {bad or 'none'}")


def test_criterion_08_extension_structure(verdict):
    bad, passed = [], 0
    for R, S, h in extension_pairs():
        rep = extension_structure_check(R, S, images=[h.apply_vec(g) for g in R.gen_words])
        need = {"base change"} if R.is_equicharacteristic() else {
            "mS maximal", "Witt base", "socle", "free of rank [lambda:kappa]"}
        if rep.passed and need <= set(rep.checks):
            passed += 1
        else:
            bad.append(f"{R.name} -> {S.name}")
    mutated = []
    S = ring("z4x_w")
    for images in ([S.zero], [S.element(2)]):
        mutated.append(extension_structure_check(ring("z4_x"), S, images=images))
    F4 = ring("f4_t2")
    mutated.append(extension_structure_check(ring("f2_t2"), F4, images=[F4.zero]))
    caught = sum(1 for rep in mutated if not rep.passed and rep.witnesses)
    verdict(8, not bad and caught == len(mutated),
            f"{passed} constructed extensions pass, {caught}/{len(mutated)} mutated embeddings fail "
            f"with witnesses; failures: {bad or 'none'}")


def test_criterion_09_transfer_matches_oracle(verdict):
    total, grew, bad = 0, 0, []
    for R, S, h, system, t in solvable_systems(60, seed=9):
        r = existential_transfer(R, S, system, t, hom=h, oracle=True, stop_at_first=False)
        if any(s.descended != s.oracle for s in r.steps):
            bad.append(system.format())
        total += 1
        grew += r.grew
    verdict(9, not bad and total >= 50,
            f"{total} systems over {len(extension_pairs())} extension pairs, {grew} needed field growth, "
            f"{len(bad)} disagreements between descent and brute force")


def test_criterion_10_bounded_amalgam_refutation(verdict):
    start = time.perf_counter()
    rep = amalgam_search(2, 2, 3, 6)
    sanity = amalgam_search(2, 2, 2, 4)
    secs = time.perf_counter() - start
    f = rep.fields[-1] if rep.fields else {}
    ok = not rep.found and f.get("m") == 6 and sanity.found and secs < 300
    verdict(10, ok, f"over F_64: {f.get('embeddings')} embeddings, {f.get('commuting')} commuting pairs, "
                    f"no amalgam; equal degrees give an amalgam; {secs:.1f}s")
