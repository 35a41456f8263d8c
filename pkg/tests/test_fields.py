import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from artinian.fields import (FieldError, FieldTower, NotPrimeError, ReducibleError, extend,
                             factorization, find_root, frobenius_inverse_power, is_irreducible,
                             make_prime_field, minimal_polynomial, split)

SMALL = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (2, 4), (3, 3), (7, 2)]


def test_prime_field_f2_elements():
    F = make_prime_field(2)
    assert list(F.elements()) == [0, 1]


def test_prime_field_characteristic():
    F = make_prime_field(5)
    assert F.add(1, 4) == 0


def test_nonprime_rejected():
    with pytest.raises(NotPrimeError, match="not prime"):
        make_prime_field(4)


def test_extend_f2_to_f4():
    F4 = extend(make_prime_field(2), "t^2+t+1")
    assert F4.size == 4
    r = F4.element(F4.adjoined)
    assert r * r + r + 1 == F4.element(0)


def test_extend_reducible_witness():
    with pytest.raises(ReducibleError) as exc:
        extend(make_prime_field(2), "t^2+1")
    assert exc.value.factorization == [[1, 1], [1, 1]]
    assert "(t+1)*(t+1)" in str(exc.value)


def test_extend_f3_to_f9():
    F9 = extend(make_prime_field(3), "t^2+1")
    assert F9.size == 9 and F9.parent.size == 3


def test_find_root_absent():
    assert find_root("t^2+t+1", make_prime_field(2)) is None


def test_find_root_primitive_in_f4():
    F4 = FieldTower(2, 2)
    r = find_root("t^2+t+1", F4)
    assert r is not None and r.value not in (0, 1)
    assert F4.power(r.value, 3) == 1


def test_find_root_linear():
    for F in (FieldTower(2), FieldTower(3, 2), FieldTower(5)):
        assert find_root([F.neg(1), 1], F).value == 1


def test_find_root_constant_rejected():
    with pytest.raises(FieldError):
        find_root([1], FieldTower(2))


def test_split_quadratic():
    assert split("t^2+t+1", FieldTower(2)).size == 4


def test_split_already_split():
    F5 = FieldTower(5)
    assert split("(t-1)^3", F5) is F5


def test_split_cubic():
    F2 = FieldTower(2)
    assert is_irreducible(F2, "t^3+t+1")
    assert split("t^3+t+1", F2).size == 8


def test_split_idempotent():
    F4 = split("t^2+t+1", FieldTower(2))
    assert split([1, 1, 1], F4) is F4


def test_frobenius_inverse_trivial():
    F4 = FieldTower(2, 2)
    assert frobenius_inverse_power(F4.element(1), 4).value == 1
    assert frobenius_inverse_power(F4.element(0), 2).value == 0


def test_frobenius_inverse_generator_f9():
    F9 = FieldTower(3, 2)
    g = F9.generator()
    assert F9.power(g, 9) == g
    assert frobenius_inverse_power(F9.element(g), 9).value == g


def test_frobenius_inverse_not_p_power():
    with pytest.raises(FieldError):
        frobenius_inverse_power(FieldTower(3).element(1), 6)


def test_minimal_polynomial_one():
    assert minimal_polynomial(FieldTower(3, 2).element(1)) == [2, 1]


def test_minimal_polynomial_f4():
    F4 = FieldTower(2, 2)
    for x in (2, 3):
        assert minimal_polynomial(F4.element(x)) == [1, 1, 1]


def test_minimal_polynomial_f8():
    F8 = FieldTower(2, 3)
    for x in range(2, 8):
        assert minimal_polynomial(F8.element(x)) in ([1, 1, 0, 1], [1, 0, 1, 1])


@pytest.mark.parametrize("p,k", SMALL)
def test_fermat_exhaustive(p, k):
    F = FieldTower(p, k)
    xs = F.elements()
    out = xs.copy()
    for _ in range(k):  # x -> x^p, k times
        out = np.array([F.power(int(x), p) for x in out])
    assert np.array_equal(out, xs)


@pytest.mark.parametrize("p,k", SMALL)
def test_frobenius_bijective(p, k):
    F = FieldTower(p, k)
    images = {F.power(int(x), p) for x in F.elements()}
    assert len(images) == F.size


@pytest.mark.parametrize("p,k", SMALL)
def test_frobenius_inverse_roundtrip(p, k):
    F = FieldTower(p, k)
    for q in (p, p ** 2, p ** 3):
        for x in F.elements():
            v = frobenius_inverse_power(F.element(int(x)), q)
            assert F.power(v.value, q) == int(x)


@pytest.mark.parametrize("p,k", [(2, 3), (3, 2), (2, 4)])
def test_minimal_polynomial_properties(p, k):
    F = FieldTower(p, k)
    base = FieldTower(p)
    emb = F.embedding_from(base)
    for x in F.elements():
        f = minimal_polynomial(F.element(int(x)))
        assert F.poly_eval([int(emb[c]) for c in f], int(x)) == 0
        assert is_irreducible(base, f)


def test_embedding_is_ring_map():
    F4, F16 = FieldTower(2, 2), FieldTower(2, 4)
    e = F16.embedding_from(F4)
    for a in range(4):
        for b in range(4):
            assert e[F4.add(a, b)] == F16.add(e[a], e[b])
            assert e[F4.mul(a, b)] == F16.mul(e[a], e[b])


def test_factorization_product():
    F = FieldTower(3)
    facs = factorization(F, "t^4 - 1")
    prod = [1]
    for f in facs:
        prod = F.poly_mul(prod, f)
    assert prod == F.poly("t^4 - 1")
    assert all(is_irreducible(F, f) for f in facs)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_field_axioms(pk, data):
    F = FieldTower(*pk)
    a, b, c = (data.draw(st.integers(0, F.size - 1)) for _ in range(3))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(a, b) == F.mul(b, a)
    assert F.add(a, F.neg(a)) == 0
    if a:
        assert F.mul(a, F.inv(a)) == 1
