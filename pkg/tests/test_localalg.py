import itertools

import pytest
from hypothesis import given, strategies as st

from modpimage.errors import NonUnitError, ParameterError
from modpimage.ffield import fq_enumerate, fq_mul, gf
from modpimage.localalg import AlgebraParams, subalgebra_generated, t_inv, t_mul


@pytest.fixture
def T1(F4):
    return AlgebraParams(F4, 1)


@pytest.fixture
def T2(F4):
    return AlgebraParams(F4, 2)


def test_mul_examples(T1, T2, F4):
    x = F4.gen()
    X1, X2 = T2.X(1), T2.X(2)
    assert t_mul(X1, X2) == T2.zero()
    assert t_mul(T2.one() + X1, T2.one() - X1) == T2.one()
    # (x + X)(x + xX) = x^2 + (x^2 + x)X = (x + 1) + X
    a = T1([x, F4.one()])
    b = T1([x, x])
    assert t_mul(a, b) == T1([x + 1, F4.one()])


def test_inv_examples(T1, F4):
    x = F4.gen()
    X = T1.X(1)
    assert t_inv(T1.one() + X) == T1.one() - X
    for c in fq_enumerate(F4)[1:]:
        assert t_inv(T1.const(c)) == T1.const(c.inverse())
    # x^-1 = x + 1 and x^-2 = x, so (x + X)^-1 = (x + 1) + x X
    assert t_inv(T1([x, F4.one()])) == T1([x + 1, x])
    with pytest.raises(NonUnitError):
        t_inv(X)


def test_params_mismatch(T1, T2):
    with pytest.raises(ParameterError):
        t_mul(T1.one(), T2.one())


@pytest.mark.parametrize("m", [1, 2])
def test_reduction_is_ring_hom(F4, m):
    T = AlgebraParams(F4, m)
    els = T.elements()
    for a, b in itertools.product(els, repeat=2):
        assert t_mul(a, b).reduce() == fq_mul(a.reduce(), b.reduce())
        if a.in_ideal() and b.in_ideal():
            assert t_mul(a, b).is_zero()


def test_inverse_exhaustive(T1):
    for a in T1.elements():
        assert a.is_unit() == (not a.c0.is_zero())
        if a.is_unit():
            assert t_mul(a, t_inv(a)) == T1.one()


@given(st.integers(0, 8**3 - 1), st.integers(0, 8**3 - 1), st.integers(0, 8**3 - 1))
def test_ring_axioms_f8(i, j, k):
    T = AlgebraParams(gf(2, 3), 2)
    a, b, c = T.element(i), T.element(j), T.element(k)
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


def test_subalgebra_examples(F4, T2):
    x = F4.gen()
    empty = subalgebra_generated([], T2)
    assert empty.dim == 1 and len(empty) == 4
    full = subalgebra_generated([T2.X(1), T2.X(2)], T2)
    assert full.dim == 3 and full.is_everything
    g = T2([F4.one(), F4.one(), x])
    sub = subalgebra_generated([g], T2)
    assert sub.dim == 2 and len(sub) == 16 and not sub.is_everything
    assert T2([0, 1, x]) in sub and T2.X(1) not in sub


@given(st.lists(st.integers(0, 63), max_size=3), st.lists(st.integers(0, 63), max_size=2))
def test_subalgebra_idempotent_monotone(xs, ys):
    T = AlgebraParams(gf(2, 2), 2)
    A = [T.element(c) for c in xs]
    B = A + [T.element(c) for c in ys]
    SA = subalgebra_generated(A, T)
    assert subalgebra_generated(list(SA.elements), T).elements == SA.elements
    assert SA.elements <= subalgebra_generated(B, T).elements
