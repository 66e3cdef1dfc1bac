import itertools

import pytest
from hypothesis import given, strategies as st

from modpimage.errors import CapacityError, DomainError, NonUnitError, ParameterError
from modpimage.ffield import (
    FieldParams, field_of_order, fq_enumerate, fq_inv, fq_mul, gf, is_irreducible,
    subgroup_of_units,
)

from oracles import field_mul

SMALL = [(2, 1), (2, 2), (2, 3), (2, 4), (3, 1), (3, 2), (5, 1), (7, 1)]


def test_mul_examples(F4):
    x = F4.gen()
    assert fq_mul(x, x) == x + 1
    assert fq_mul(x, x + 1) == F4.one()
    for a in fq_enumerate(F4):
        assert fq_mul(F4.one(), a) == a


def test_inv_examples(F4, F7):
    assert fq_inv(F4.one()) == F4.one()
    assert fq_inv(F4.gen()) == F4.gen() + 1
    assert fq_inv(F7(3)) == F7(5)
    with pytest.raises(NonUnitError):
        fq_inv(F4.zero())
    with pytest.raises(ZeroDivisionError):
        F7(0).inverse()


def test_enumerate_order():
    assert [a.code for a in fq_enumerate(gf(2))] == [0, 1]
    for p, d in SMALL:
        els = fq_enumerate(gf(p, d))
        assert len(set(els)) == p**d
        assert els[0].is_zero() and els[1] == gf(p, d).one()
        assert els == fq_enumerate(gf(p, d))
    F16 = gf(2, 4)
    els = set(fq_enumerate(F16))
    assert all(fq_mul(a, b) in els for a in els for b in els)


def test_enumerate_cap():
    with pytest.raises(CapacityError):
        fq_enumerate(gf(2, 4), cap=8)


@pytest.mark.parametrize("p,d", SMALL)
def test_field_axioms_exhaustive(p, d):
    F = gf(p, d)
    els = fq_enumerate(F)
    for a, b in itertools.product(els, repeat=2):
        assert a * b == b * a
        assert (a * b).coeffs == field_mul(F, a.coeffs, b.coeffs)
    for a, b, c in itertools.product(els[: min(8, F.q)], els, els):
        assert (a + b) + c == a + (b + c)
        assert a * (b + c) == a * b + a * c
    for a in els:
        assert a ** F.q == a
        if not a.is_zero():
            assert a * fq_inv(a) == F.one()


@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
def test_field_axioms_f256(i, j, k):
    F = gf(2, 8)
    a, b, c = F.element(i), F.element(j), F.element(k)
    assert (a * b).coeffs == field_mul(F, a.coeffs, b.coeffs)
    assert a * (b + c) == a * b + a * c
    assert (a * b) * c == a * (b * c)


def test_default_moduli():
    assert gf(2, 2).modulus == (1, 1, 1)
    assert gf(2, 3).modulus == (1, 1, 0, 1)
    assert gf(2, 4).modulus == (1, 1, 0, 0, 1)
    assert gf(7).modulus == (0, 1)


def test_params_validation():
    with pytest.raises(ParameterError):
        FieldParams(4, 1, (0, 1))
    with pytest.raises(ParameterError):
        FieldParams(2, 2, (1, 0, 1))  # x^2 + 1 = (x + 1)^2
    assert not is_irreducible((1, 0, 1), 2)
    with pytest.raises(ParameterError):
        fq_mul(gf(2, 2).one(), gf(2, 3).one())
    assert field_of_order(16) == gf(2, 4)
    with pytest.raises(ParameterError):
        field_of_order(12)


def test_theorem_grade():
    assert [q for q in (2, 3, 4, 5, 7, 8) if not field_of_order(q).theorem_grade] == [2, 3, 5]


def test_json_roundtrip(F8):
    assert FieldParams.from_json(F8.to_json()) == F8
    assert F8.to_json() == {"p": 2, "d": 3, "modulus": [1, 1, 0, 1]}


def test_subgroup_examples(F4, F7):
    assert set(subgroup_of_units(F4, F4.one())) == {F4.one()}
    assert set(subgroup_of_units(F4, F4.gen())) == {F4.one(), F4.gen(), F4.gen() + 1}
    assert {a.code for a in subgroup_of_units(F7, F7(2))} == {1, 2, 4}
    with pytest.raises(DomainError):
        subgroup_of_units(F4, F4.zero())


@pytest.mark.parametrize("p,d", SMALL)
def test_subgroups_divide(p, d):
    F = gf(p, d)
    for g in fq_enumerate(F)[1:]:
        D = subgroup_of_units(F, g)
        assert (F.q - 1) % len(D) == 0
        assert all(a * b in D for a in D for b in D)
