import itertools

import pytest
from hypothesis import given, settings, strategies as st

from modpimage.errors import CapacityError, DomainError
from modpimage.ffield import fp_span, fq_enumerate, full_unit_group, trivial_subgroup
from modpimage.modlat import ModuleEmbedding, default_embedding, realize_embedding
from modpimage.tracecensus import (
    census_bruteforce, census_formula, generate_table, realizable_values, traces_generate,
)

from oracles import naive_census


def test_formula_examples():
    assert census_formula(2, 2, 1, 0, 0) == 4
    assert census_formula(2, 2, 1, 0, 1) == 7
    assert census_formula(2, 2, 1, 0, 2) == 13
    assert census_formula(2, 2, 1, 1, 0) == 16
    assert census_formula(7, 1, 1) == 49
    assert census_formula(3, 2, 2) == 729
    with pytest.raises(DomainError):
        census_formula(2, 2, 1, 0, 3)
    with pytest.raises(DomainError):
        census_formula(2, 2, 1)
    with pytest.raises(DomainError):
        census_formula(5, 1, 1, 0, 0)


@pytest.mark.parametrize("m,alpha,beta", [(1, 0, 0), (1, 0, 1), (1, 0, 2), (1, 1, 0), (2, 0, 2), (2, 1, 1)])
def test_bruteforce_matches_naive(F4, D4, m, alpha, beta):
    M = realize_embedding(default_embedding(F4, m, alpha, beta))
    res = census_bruteforce(M, D4)
    naive = naive_census(M, D4) if len(M) <= 64 else None
    assert res.t == census_formula(2, 2, m, alpha, beta)
    if naive is not None:
        assert set(res.traces()) == naive


def _all_embeddings(F, m):
    """Every choice of block scalars for each (alpha, beta) with q = |F|."""
    nonzero = fq_enumerate(F)[1:]
    for alpha in range(m + 1):
        s = m - alpha
        choices = [()]
        for size in range(1, F.d + 1):
            choices += [blk for blk in itertools.combinations(nonzero, size)
                        if len(fp_span(blk)) == 2**size]
        for blocks in itertools.product(choices, repeat=s):
            yield ModuleEmbedding(F, m, alpha, blocks)


@pytest.mark.parametrize("m", [1, 2])
def test_lambda_and_d_independence(F4, m):
    seen = 0
    for e in _all_embeddings(F4, m):
        want = census_formula(2, 2, m, e.alpha, e.beta)
        for D in (trivial_subgroup(F4), full_unit_group(F4)):
            assert census_bruteforce(e, D).t == want, (e, D)
        seen += 1
    assert seen == {1: 1 + 7, 2: 1 + 7 + 7 * 7}[m]


@pytest.mark.parametrize("q", [3, 5, 7])
def test_odd_characteristic(q):
    from modpimage.ffield import field_of_order
    F = field_of_order(q)
    e = default_embedding(F, 1, 1, 0)
    for D in (trivial_subgroup(F), full_unit_group(F)):
        assert census_bruteforce(e, D).t == q**2


def test_chunking_and_workers(F4):
    e = default_embedding(F4, 2, 1, 2)
    ref = census_bruteforce(e)
    for chunk in (1, 7, 60):
        assert (census_bruteforce(e, chunk=chunk).counts == ref.counts).all()
    assert (census_bruteforce(e, workers=2, chunk=11).counts == ref.counts).all()


def test_capacity(F4):
    with pytest.raises(CapacityError) as info:
        census_bruteforce(default_embedding(F4, 1, 1, 0), cap=100)
    assert info.value.required == 64 * 60


def test_traces_generate(F4):
    assert traces_generate(default_embedding(F4, 1, 0, 1)) == (True, 2)
    assert traces_generate(default_embedding(F4, 1, 0, 0)) == (False, 1)
    assert traces_generate(default_embedding(F4, 2, 0, 1))[0] is False
    assert traces_generate(default_embedding(F4, 2, 1, 1))[0] is True


def test_table_shape_and_render():
    tab = generate_table(2, 2, 1, verify=True)
    assert tab.grid() == [[4, 7, 13], [16, None, None]]
    assert all(c.verified for c in tab.cells)
    assert "alpha" in tab.render() and "13" in tab.render()
    notes = {(c["alpha"], c["beta"]) for c in tab.to_json()["cells"] if "note" in c}
    assert notes == {(0, 0)}
    with pytest.raises(DomainError):
        generate_table(3, 1, 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 6), st.integers(0, 4))
def test_realizable_values_injective(d, m):
    vals = realizable_values(2, d, m)
    assert len(vals) == sum(d * (m - a) + 1 for a in range(m + 1))
    assert max(vals) == 2 ** (d * (m + 1))
