import numpy as np
import pytest
from conftest import DATA, ring, z4
from transfer_support import extension_pairs, random_poly, random_system, solvable_systems

from artinian.fields import FieldTower
from artinian.io import load_system, parse_ring_text, parse_system_text
from artinian.localring import BudgetError, base_change
from artinian.transfer import (DescentError, PolySystem, TransferError, amalgam_search, coefficient_frame,
                               descend_equichar, descend_mixed, descent_identity_check, example_1_8,
                               existential_transfer, extension_structure_check, frame_in, grow,
                               growth_degrees, inclusion, lift_identity_check, lift_polynomial_witt,
                               solve_bruteforce, transfer_equichar)
from artinian.transfer.descent import _Frame, single_poly_system
from artinian.witt import witt_context

MIXED_SMALL = ["z4", "z4_x", "galois4_2", "z4_t2", "z8"]


def get(name):
    return z4() if name == "z4" else ring(name)


# systems and the oracle


def test_system_file_and_solution():
    R = z4()
    S = ring("galois4_2")
    # x^2 + 1 has no root in Z/4 (squares are 0 and 1) but has one in F_2[T]/(T^2)
    assert solve_bruteforce(load_system(R, DATA / "sqrt_m1.sys")) is None
    assert solve_bruteforce(load_system(ring("f2_t2"), DATA / "sqrt_m1.sys")) is not None
    s = parse_system_text(R, "vars x\n[equations]\nx^2 + x + 1\n")
    assert solve_bruteforce(s) is None
    t = solve_bruteforce(s.map(inclusion(R, S)))
    assert t is not None and s.map(inclusion(R, S)).is_solution(t)


def test_bruteforce_is_first_in_code_order():
    R = ring("f3_t2")
    s = parse_system_text(R, "vars x\n[equations]\nx^2\n[inequations]\nx\n")
    sol = solve_bruteforce(s)
    codes = [c for c in range(R.size) if s.is_solution([R.from_code(c)])]
    assert R.code_of(sol[0]) == codes[0]


def test_bruteforce_budget():
    R = ring("z4x_w")
    s = parse_system_text(R, "vars a b c d\n[equations]\na*b*c*d + 1\n")
    with pytest.raises(BudgetError) as exc:
        solve_bruteforce(s, budget=1000)
    assert exc.value.bound == 1000


def test_system_rejects_bad_arity():
    with pytest.raises(ValueError):
        PolySystem(z4(), ("x",), [{(1, 0): z4().one}], [])


def test_map_pushes_coefficients():
    R, S = ring("z4_x"), ring("z4x_w")
    s = parse_system_text(R, "vars y\n[equations]\ny^2 - X\n")
    m = s.map(inclusion(R, S))
    assert m.ring is S and m.format().startswith("vars y")


# growth


def test_growth_degrees():
    assert growth_degrees(FieldTower(2), FieldTower(2, 6)) == [1, 2, 3, 6]
    assert growth_degrees(FieldTower(2, 2), FieldTower(2, 4)) == [2, 4]
    with pytest.raises(TransferError):
        growth_degrees(FieldTower(2, 2), FieldTower(2, 3))


@pytest.mark.parametrize("name,d", [("z4", 2), ("z4_x", 2), ("z8", 3), ("f2_t3", 2), ("z9", 2)])
def test_grow_keeps_length(name, d):
    R = get(name)
    RK, h = grow(R, d)
    assert RK.length == R.length and RK.residue_field.degree == d and h.injective
    assert RK.size == RK.residue_field.size ** R.length


def test_grow_rejects_bad_degree():
    with pytest.raises(TransferError):
        grow(ring("f4_t2"), 3)


# equal characteristic descent


@pytest.mark.parametrize("d", [2, 3])
def test_descend_equichar_identity(d):
    R = ring("f2_t3")
    S = base_change(R, FieldTower(2, d))
    h = inclusion(R, S)
    rng = np.random.default_rng(d)
    ctx = coefficient_frame(R)
    for _ in range(10):
        system = random_system(R, rng, 2, n_eq=2)
        desc = descend_equichar(R, system, _Frame(ctx))
        assert descent_identity_check(desc, system, _Frame(ctx))[0]
        assert descent_identity_check(desc, system, _Frame(frame_in(S, h, ctx)), hom=h)[0]


def test_descend_mixed_rejects():
    with pytest.raises(DescentError):
        descend_mixed(coefficient_frame(ring("f2_t2")), single_poly_system(ring("f2_t2"), {(1,): 1}, 1))
    ctx = witt_context(ring("z4_t2"))
    # z4_t2 is Gorenstein, so only equal characteristic is rejected here
    assert descend_mixed(ctx, single_poly_system(ring("z4_t2"), {(2,): 1}, 1)).polys


def test_descend_mixed_needs_gorenstein():
    T = parse_ring_text("zmod 2 2\nvars X\nrelations\nX^2\n2*X\n", name="Z4[X]/(X^2,2X)")
    assert T.cm_type == 2
    with pytest.raises(DescentError):
        descend_mixed(witt_context(T), single_poly_system(T, {(1,): 1}, 1))


# mixed characteristic lifting and descent, generated polynomials


@pytest.mark.parametrize("name", MIXED_SMALL)
def test_lift_identity_generated(name):
    R = get(name)
    ctx = witt_context(R)
    frame = _Frame(ctx)
    rng = np.random.default_rng(7)
    for _ in range(10):
        Q = random_system(R, rng, 2).sparse_polys()[0]
        lift = lift_polynomial_witt(ctx, Q, frame)
        ok, witness = lift_identity_check(ctx, lift, frame)
        assert ok, witness


@pytest.mark.parametrize("name", MIXED_SMALL)
def test_descent_identity_generated(name):
    R = get(name)
    ctx = witt_context(R)
    frame = _Frame(ctx)
    rng = np.random.default_rng(11)
    for _ in range(10):
        system = random_system(R, rng, 2, n_eq=1, n_ineq=1)
        desc = descend_mixed(ctx, system, frame)
        ok, witness = descent_identity_check(desc, system, frame)
        assert ok, witness


def test_descent_identity_in_extension():
    R, S, h = extension_pairs()[0]
    ctx = witt_context(R)
    fS = _Frame(frame_in(S, h, ctx))
    rng = np.random.default_rng(3)
    for _ in range(10):
        system = random_system(R, rng, 2)
        desc = descend_mixed(ctx, system)
        assert descent_identity_check(desc, system, fS, hom=h)[0]
        lift = lift_polynomial_witt(ctx, system.sparse_polys()[0])
        assert lift_identity_check(ctx, lift, target=(fS, h))[0]


def test_descent_identity_detects_corruption():
    R = z4()
    ctx = witt_context(R)
    system = parse_system_text(R, "vars x\n[equations]\nx^2 + x + 1\n")
    desc = descend_mixed(ctx, system)
    # u^2 + u + 1 is the constant 1 on F_2, so zero it out instead
    desc.polys[0][0] = {}
    ok, witness = descent_identity_check(desc, system, _Frame(ctx))
    assert not ok and witness is not None


def test_descent_side_conditions():
    R = z4()
    system = parse_system_text(R, "vars x\n[equations]\nx^2 + x + 1\n")
    desc = descend_mixed(witt_context(R), system)
    assert desc.q == 4 and desc.side_conditions() == ["w1^4 = u1_0"]
    assert desc.format().splitlines() == ["p[0][(0,)] = u1_0^2 + u1_0 + 1",
                                          "p[0][(1,)] = w1^6 + w1^4 + w1^2 + u1_1",
                                          "w1^4 = u1_0"]


# structure of extensions


@pytest.mark.parametrize("k", range(len(extension_pairs())))
def test_structure_of_constructed_extensions(k):
    R, S, h = extension_pairs()[k]
    rep = extension_structure_check(R, S, images=[h.apply_vec(g) for g in R.gen_words])
    assert rep.passed, rep.format()
    if R.is_equicharacteristic():
        assert "base change" in rep.checks
    else:
        assert {"mS maximal", "Witt base", "socle", "free of rank [lambda:kappa]"} <= set(rep.checks)


def test_structure_mutated_embeddings_fail():
    R, S = ring("z4_x"), ring("z4x_w")
    rep = extension_structure_check(R, S, images=[S.zero])
    assert not rep.passed and rep.witnesses
    rep = extension_structure_check(R, S, images=[S.element(2)])
    assert not rep.passed and rep.witnesses
    rep = extension_structure_check(ring("f2_t2"), ring("f4_t2"), images=[ring("f4_t2").zero])
    assert not rep.passed and rep.witnesses


def test_structure_requires_gorenstein_and_length():
    rep = extension_structure_check(ring("f2_xy2"), ring("f4_t2"))
    assert rep.checks == {"gorenstein": False}
    rep = extension_structure_check(ring("f2_t2"), ring("f2_t3"))
    assert not rep.checks["same length"]


# the transfer procedure


def test_transfer_needs_growth():
    R, S = z4(), ring("galois4_2")
    system = parse_system_text(R, "vars x\n[equations]\nx^2 + x + 1\n")
    t = solve_bruteforce(system.map(inclusion(R, S)))
    r = existential_transfer(R, S, system, t, oracle=True, stop_at_first=False)
    assert r.grew and r.field.size == 4
    assert [(s.descended, s.oracle) for s in r.steps] == [(False, False), (True, True)]
    assert r.ring.size == 16


def test_transfer_without_growth():
    R, S = ring("f3_t2"), base_change(ring("f3_t2"), FieldTower(3, 2))
    system = parse_system_text(R, "vars x\n[equations]\nx^2 - T\n[inequations]\n1\n")
    t = solve_bruteforce(system.map(inclusion(R, S)))
    if t is None:
        system = parse_system_text(R, "vars x\n[equations]\nx^2 - 1\n")
        t = solve_bruteforce(system.map(inclusion(R, S)))
    r = transfer_equichar(R, system, S, t)
    assert not r.grew and system.is_solution(r.solution)


def test_transfer_rejections():
    R, S = z4(), ring("galois4_2")
    system = parse_system_text(R, "vars x\n[equations]\nx^2 + x + 1\n")
    with pytest.raises(TransferError):
        existential_transfer(R, S, system, (S.zero,))
    with pytest.raises(TransferError):
        existential_transfer(R, S, system, (S.zero, S.zero))
    with pytest.raises(TransferError):
        existential_transfer(R, ring("z4x_w"), system, (ring("z4x_w").zero,))
    T = ring("f2_xy2")
    with pytest.raises(TransferError):
        existential_transfer(T, T, parse_system_text(T, "vars x\n[equations]\nx\n"), (T.zero,))
    with pytest.raises(TransferError):
        transfer_equichar(R, system, S, (S.zero,))


def test_transfer_matches_oracle_on_generated_systems():
    for R, S, h, system, t in solvable_systems(30, seed=5):
        r = existential_transfer(R, S, system, t, hom=h, oracle=True, stop_at_first=False)
        assert all(s.descended == s.oracle for s in r.steps)
        first = next(s for s in r.steps if s.descended)
        assert r.field.size == first.field_size


# worked examples


@pytest.mark.parametrize("p", [3, 5])
def test_example_length_five(p):
    rep = example_1_8(p)
    assert rep.passed, rep.format()
    assert rep.values["rank of images"] == 5


def test_example_rejects_two_and_composite():
    with pytest.raises(ValueError):
        example_1_8(2)
    with pytest.raises(ValueError):
        example_1_8(9)


def test_amalgam_refuted_and_sanity():
    rep = amalgam_search(2, 2, 3, 6)
    assert not rep.found
    assert rep.fields == [{"m": 6, "embeddings": (126, 189), "commuting": 0}]
    assert amalgam_search(2, 2, 2, 4).found
    assert "no candidate fields" in amalgam_search(2, 2, 3, 5).format()
