import pytest
from hypothesis import given, settings, strategies as st

from modpimage.errors import CapacityError, DomainError
from modpimage.ffield import full_unit_group, gf, subgroup_of_units, trivial_subgroup
from modpimage.localalg import AlgebraParams
from modpimage.matgrp import (
    GroupSpec, Mat2, conj, embed_unipotent, enumerate_gl2d, enumerate_trace_zero, gl2d_codes,
    group_closure, ideal_matrix, standard_generators,
)

from oracles import gl2d_order, sl2_order


def test_conj_examples(F4):
    one, zero, x = F4.one(), F4.zero(), F4.gen()
    g = Mat2(one, one, zero, one)
    mu = Mat2(zero, one, zero, zero)
    assert conj(g, mu) == mu
    s = Mat2(one, zero, zero, one).scale(x)
    assert conj(s, Mat2(x, one, x, x)) == Mat2(x, one, x, x)
    with pytest.raises(DomainError):
        conj(Mat2(one, one, one, one), mu)


def test_conj_over_algebra(F4):
    T = AlgebraParams(F4, 1)
    one, zero = F4.one(), F4.zero()
    A = Mat2(zero, one, zero, zero)
    g = Mat2(one, zero, one, one)
    mu = ideal_matrix(T, [A])
    out = conj(g, mu)
    assert out.trace().is_zero()
    assert out == ideal_matrix(T, [conj(g, A)])


def test_trace_zero_enumeration(F4):
    mats = enumerate_trace_zero(F4)
    assert len(mats) == 64 and len(set(mats)) == 64
    assert all(A.trace().is_zero() for A in mats)
    assert mats[0].is_zero()
    T = AlgebraParams(F4, 2)
    it = enumerate_trace_zero(T)
    first = [next(it) for _ in range(70)]
    assert first[0].is_zero() and all(A.in_ideal() for A in first)
    with pytest.raises(CapacityError):
        enumerate_trace_zero(gf(2, 8), cap=1000)


def test_embed_unipotent(F4):
    T = AlgebraParams(F4, 1)
    one, zero = F4.one(), F4.zero()
    h = Mat2(zero, one, one, zero)
    mu = ideal_matrix(T, [Mat2(zero, one, zero, zero)])
    g = embed_unipotent(mu, h)
    assert g.reduce() == h
    assert g.det() == T.one()
    with pytest.raises(DomainError):
        embed_unipotent(ideal_matrix(T, [Mat2(one, zero, zero, zero)]), h)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8])
def test_group_orders(q):
    from modpimage.ffield import field_of_order
    F = field_of_order(q)
    assert len(gl2d_codes(GroupSpec(F, trivial_subgroup(F)))) == sl2_order(q)
    assert len(gl2d_codes(GroupSpec(F, full_unit_group(F)))) == gl2d_order(q, q - 1)


def test_intermediate_d():
    F = gf(7)
    D = subgroup_of_units(F, F(2))
    spec = GroupSpec(F, D)
    assert len(enumerate_gl2d(spec)) == gl2d_order(7, 3)
    assert len(group_closure(standard_generators(spec))) == gl2d_order(7, 3)


@pytest.mark.parametrize("q,full", [(4, False), (4, True), (8, False), (5, True)])
def test_standard_generators_generate(q, full):
    from modpimage.ffield import field_of_order
    F = field_of_order(q)
    D = full_unit_group(F) if full else trivial_subgroup(F)
    spec = GroupSpec(F, D)
    assert len(group_closure(standard_generators(spec))) == spec.order()


def test_lifted_closure_order(F4):
    # SL_2(F_4) lifted to T with m = 1: the unipotent kernel has order 4^3
    T = AlgebraParams(F4, 1)
    spec = GroupSpec(T, trivial_subgroup(F4))
    one, zero, X = T.one(), T.zero(), T.X(1)
    gens = standard_generators(spec) + [Mat2(one, X, zero, one), Mat2(one, zero, X, one)]
    assert len(group_closure(gens)) == 64 * sl2_order(4)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 179), st.integers(0, 179), st.integers(0, 63), st.integers(0, 63))
def test_conjugation_is_an_action(i, j, a, b):
    F = gf(2, 2)
    G = enumerate_gl2d(GroupSpec(F, full_unit_group(F)))
    mats = enumerate_trace_zero(F)
    g, h, A, B = G[i], G[j], mats[a], mats[b]
    assert conj(g * h, A) == conj(g, conj(h, A))
    assert conj(g, A + B) == conj(g, A) + conj(g, B)
    assert conj(Mat2.identity(F), A) == A
