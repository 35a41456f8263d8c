import itertools

import numpy as np
import pytest
from conftest import RING_FILES, ring, z4

from artinian.fields import FieldTower
from artinian.io import parse_ring_text
from artinian.linalg import IntegersMod
from artinian.localring import (BudgetError, HomError, MonomialOrder, NonLocalError, PresentationError,
                                RingError, adjoin_root, base_change, find_embedding, hom_check,
                                iter_homs, polynomial_ring_quotient, product_ring, socle_extension,
                                zero_ring)


def quotient(p, k, variables, relations, order="grlex"):
    return polynomial_ring_quotient(FieldTower(p, k), variables, relations, order=order)


def z4x():
    return ring("z4_x")


# -- build and invariants ---------------------------------------------------


def test_build_example_ring():
    R = ring("ex18_p3")
    assert R.length == 5 and R.size == 243
    assert (R.embedding_dimension, R.exponent, R.cm_type) == (2, 3, 2)
    assert not R.is_gorenstein()


def test_build_field_quotient():
    R = quotient(2, 1, ["T"], ["T"])
    assert R.size == 2 and R.length == 1


def test_build_z4_x():
    R = z4x()
    assert R.size == 8 and R.length == 3
    assert R.is_gorenstein()
    members = R.all_vectors[R.socle.member_mask()]
    assert sorted(R.format(v) for v in members) == ["0", "2"]


def test_field_invariants():
    R = ring("f5")
    assert (R.length, R.embedding_dimension, R.exponent, R.cm_type) == (1, 0, 1, 1)


def test_target_of_example_gorenstein():
    for p in (3, 5):
        S = quotient(p, 1, ["X", "Y", "Z"], ["X^2 - Y^2", "X^2 - Z^2", "X*Y", "X*Z", "Y*Z"])
        assert (S.length, S.embedding_dimension, S.exponent, S.cm_type) == (5, 3, 3, 1)


def test_non_nilpotent_rejected():
    with pytest.raises(PresentationError, match="nilpotent"):
        quotient(3, 1, ["X"], ["X^2 - 1"])


def test_infinite_quotient_rejected():
    with pytest.raises(PresentationError):
        quotient(2, 1, ["X", "Y"], ["X^2"])


def test_nonlocal_witness():
    with pytest.raises(NonLocalError, match="not local"):
        quotient(2, 1, ["X"], ["X^2 + X"])


def test_socle_two_generated():
    R = ring("f2_xy2")
    assert R.socle == R.maximal_ideal and R.cm_type == 2


def test_socle_t2():
    R = ring("f2_t2")
    assert R.socle == R.ideal([R.gen("T")])


def test_double_annihilator_t3():
    R = ring("f2_t3")
    I = R.ideal([R.gen("T")])
    assert R.annihilator(R.annihilator(I)) == I


@pytest.mark.parametrize("l", [1, 2, 3, 4, 5])
def test_truncated_polynomial_gorenstein(l):
    R = quotient(2, 1, ["T"], [f"T^{l}"])
    assert R.is_gorenstein() and R.length == l


def test_involution_true_t3():
    ok, witness = ring("f2_t3").ann_involution_check()
    assert ok and witness is None


def test_involution_false_xy2():
    R = ring("f2_xy2")
    ok, I = R.ann_involution_check()
    assert not ok
    assert R.annihilator(R.annihilator(I)) != I
    X = R.ideal([R.gen("X")])
    assert R.annihilator(X) == R.maximal_ideal
    assert R.annihilator(R.maximal_ideal) == R.maximal_ideal != X


def test_involution_field():
    assert ring("f5").ann_involution_check()[0]


@pytest.mark.parametrize("name", RING_FILES)
def test_involution_characterises_gorenstein(name):
    R = ring(name)
    assert R.ann_involution_check()[0] == R.is_gorenstein()


@pytest.mark.parametrize("name", RING_FILES)
def test_size_is_residue_power(name):
    R = ring(name)
    assert R.size == R.residue_field.size ** R.length


@pytest.mark.parametrize("name", RING_FILES)
def test_length_equals_socle_series(name):
    R = ring(name)
    assert len(R.socle_series) - 1 == R.length or R.socle_series[-1] == R.unit_ideal


@pytest.mark.parametrize("name", RING_FILES)
def test_nonunits_are_nilpotent_ideal(name):
    R = ring(name)
    assert R.check_locality()
    m = R.maximal_ideal
    for v in R.all_vectors:
        unit = int(R.residue_vec(v)) != 0
        assert m.contains(v) != unit
        if not unit:
            assert not np.any(R.pow_vec(v, R.exponent))


@pytest.mark.parametrize("name", RING_FILES)
def test_delta_cardinality_is_length(name):
    R = ring(name)
    delta, E = R.delta_support()
    assert len(delta) == R.length == len(E)


def test_delta_t3_lex():
    assert ring("f2_t3").delta_support()[0] == [(0,), (1,), (2,)]


def test_delta_example_ring():
    assert len(ring("ex18_p3").delta_support()[0]) == 5


def test_delta_z4_x():
    assert ring("z4_x").delta_support()[0] == [(0,), (1,), (2,)]


def test_unique_representation_equichar():
    # E_R is a kappa-basis: all |kappa|^l combinations are distinct
    for name in RING_FILES:
        R = ring(name)
        if not R.is_equicharacteristic() or R.size > 729:
            continue
        _, E = R.delta_support()
        F = R.residue_field
        seen = set()
        lifts = R.lift_vec(np.arange(F.size))
        for cs in itertools.product(range(F.size), repeat=len(E)):
            acc = R.zero_vec()
            for c, e in zip(cs, E):
                acc = R.add_vec(acc, R.mul_vec(lifts[c], e))
            seen.add(int(R.encode(acc)))
        assert len(seen) == R.size


def test_monomial_order_properties():
    rng = np.random.default_rng(1)
    for kind in ("lex", "grlex"):
        O = MonomialOrder(kind, 3)
        for _ in range(300):
            a, b, w = (tuple(int(x) for x in rng.integers(0, 4, 3)) for _ in range(3))
            assert not O.less(a, (0, 0, 0))
            if O.less(a, b):
                assert O.less(tuple(x + y for x, y in zip(a, w)), tuple(x + y for x, y in zip(b, w)))
            if kind == "grlex" and sum(a) < sum(b):
                assert O.less(a, b)


# -- constructions ----------------------------------------------------------


def test_socle_extension_field():
    S = socle_extension(ring("f5"))
    assert S.length == 2 and S.size == 25


def test_socle_extension_lengths():
    assert socle_extension(ring("f2_t2")).length == 3
    assert socle_extension(ring("ex18_p3")).length == 6


def test_socle_extension_maximal_ideal():
    R = ring("f3_t2")
    S = socle_extension(R)
    m = S.ideal([S.gen("T"), S.gen(S.gen_names[-1])])
    assert m == S.maximal_ideal


def test_adjoin_galois_ring():
    G = adjoin_root(z4(), "T^2 + T + 1")
    assert G.size == 16 and G.length == 2 and G.residue_field.size == 4


def test_adjoin_over_dual_numbers():
    R = ring("f2_t2")
    S = adjoin_root(R, "W^2 + W + 1", var="W")
    assert S.length == 2 and S.size == 16
    assert S.is_gorenstein()


def test_adjoin_linear_returns_ring():
    R = ring("f3_t2")
    assert adjoin_root(R, "W - 1", var="W") is R


def test_adjoin_reducible_rejected():
    with pytest.raises(RingError):
        adjoin_root(z4(), "T^2 + 1")


def test_base_change_dual_numbers():
    S = base_change(ring("f2_t2"), FieldTower(2, 2))
    assert S.size == 16 and S.length == 2 and S.is_gorenstein()


def test_base_change_example_ring():
    S = base_change(ring("ex18_p3"), FieldTower(3, 2))
    assert S.length == 5 and S.size == 9 ** 5
    assert S.delta_support()[0] == ring("ex18_p3").delta_support()[0]


def test_base_change_identity():
    R = ring("f3_t2")
    assert base_change(R, FieldTower(3)) is R


def test_base_change_mixed_rejected():
    with pytest.raises(RingError):
        base_change(z4x(), FieldTower(2, 2))


@pytest.mark.parametrize("name", ["f2_t2", "f3_t2", "f2_t3", "f2_xy_gor"])
def test_base_change_preserves_gorenstein(name):
    R = ring(name)
    S = base_change(R, FieldTower(R.p, 2))
    assert S.length == R.length and S.is_gorenstein() == R.is_gorenstein()


def test_adjoin_preserves_length():
    for name in ("z4_x", "f2_t3", "z8"):
        R = ring(name)
        S = adjoin_root(R, "V^2 + V + 1", var="V")
        assert S.length == R.length


def test_product_loc_fails():
    P = product_ring(ring("f5"), ring("f5"))
    assert P.size == 25 and not P.is_local
    F2 = quotient(2, 1, [], [])
    Q = product_ring(F2, F2)
    assert Q.size == 4 and not Q.is_local


def test_product_sizes():
    F2, F3 = quotient(2, 1, [], []), quotient(3, 1, [], [])
    assert product_ring(F2, F3).size == 6


def test_product_with_zero_ring():
    R = ring("f3_t2")
    assert product_ring(R, zero_ring()) is R


# -- homomorphisms ----------------------------------------------------------


def test_identity_embedding():
    R = ring("ex18_p3")
    h = find_embedding(R, R, list(R.gen_words))
    assert h is not None and h.injective


def test_t2_into_t3():
    A, B = ring("f2_t2"), ring("f2_t3")
    with pytest.raises(HomError):
        hom_check(A, B, [B.gen("T")])
    h = hom_check(A, B, [B.gen("T") * B.gen("T")])
    assert h.injective and h.is_local()


def test_search_returns_local_embeddings():
    A, B = ring("f2_t2"), ring("f4_t2")
    homs = list(iter_homs(A, B))
    assert homs and all(h.injective and h.is_local() for h in homs)
    assert find_embedding(A, B) is not None


def test_search_budget():
    with pytest.raises(BudgetError) as exc:
        list(iter_homs(ring("f2_xy2"), ring("ex18_p3"), budget=10))
    assert exc.value.bound == 10


def test_no_embedding_wrong_characteristic():
    with pytest.raises(HomError):
        hom_check(ring("f2_t2"), ring("f3_t2"), [ring("f3_t2").gen("T")])


def test_kernel_witness():
    A, B = ring("f2_t3"), ring("f2_t3")
    h = hom_check(A, B, [B.gen("T") * B.gen("T")])
    assert not h.injective
    w = h.kernel_witness
    assert w and not h(w)


def test_ring_file_errors_have_lines():
    from artinian.io import InputError
    with pytest.raises(InputError, match=":3:"):
        parse_ring_text("field 2 1\nvars X\nbogus\n")
    with pytest.raises(InputError, match="not prime"):
        parse_ring_text("field 4 1\n")


def test_integers_mod_coefficients():
    R = polynomial_ring_quotient(IntegersMod(2, 2), ["X"], ["X^2 - 2", "2*X"])
    assert R.size == 8
