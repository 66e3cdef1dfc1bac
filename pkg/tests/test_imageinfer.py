import pytest
from hypothesis import given, settings, strategies as st

from modpimage.errors import DomainError, Unrealizable
from modpimage.imageinfer import ext_degrees, gl2d_order, infer, multiplicity_report
from modpimage.tracecensus import census_formula, realizable_values


def test_infer_examples():
    h = infer(2, 2, 1, 7)
    assert (h.alpha, h.beta) == (0, 1)
    assert h.image == "C2 ⋊ SL2(F4)" and h.structure == "direct"
    assert h.image_order == 2 * 60
    h = infer(2, 2, 1, 16)
    assert (h.alpha, h.beta) == (1, 0) and h.image == "M2^0(F4) ⋊ SL2(F4)"
    assert infer(2, 2, 1, 4).structure == "trivial"
    assert infer(2, 2, 1, 4, d_order=3).image == "GL2(F4)"
    h = infer(7, 1, 1, 49)
    assert h.image_order == 7**3 * 7 * 48 and h.beta is None


def test_unrealizable_neighbours():
    with pytest.raises(Unrealizable) as info:
        infer(2, 2, 1, 8)
    assert (info.value.below, info.value.above) == (7, 13)
    with pytest.raises(Unrealizable) as info:
        infer(2, 2, 1, 17)
    assert (info.value.below, info.value.above) == (16, None)
    with pytest.raises(DomainError):
        infer(2, 2, 1, 0)
    with pytest.raises(DomainError):
        infer(2, 2, 1, 7, d_order=2)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 3), st.data())
def test_infer_inverts_formula(d, m, data):
    alpha = data.draw(st.integers(0, m))
    beta = data.draw(st.integers(0, d * (m - alpha)))
    t = census_formula(2, d, m, alpha, beta)
    h = infer(2, d, m, t)
    assert (h.alpha, h.beta) == (alpha, beta)
    rep = ext_degrees(2, d, m, alpha, beta)
    assert rep.degree == h.image_order // gl2d_order(2**d, 1)
    assert rep.degree == rep.matrix_part_degree * rep.central_part_degree


def test_ext_degrees_parts():
    rep = ext_degrees(2, 2, 1, 0, 1)
    assert (rep.degree, rep.matrix_part_degree, rep.central_part_degree) == (2, 1, 2)
    assert set(rep.parts) == {"central"} and rep.parts["central"]["definable_over_Q"]
    rep = ext_degrees(2, 2, 2, 1, 2)
    assert rep.degree == 2**6 * 4
    assert not rep.parts["matrix"]["definable_over_Q"]
    assert ext_degrees(3, 1, 2).degree == 3**6
    with pytest.raises(DomainError):
        ext_degrees(2, 2, 1, 0, 5)


def test_multiplicity_report():
    v = multiplicity_report([10, 12, 9, 8, 20, 6, 11], 2, 2, 1)
    assert v.verdict == "stable" and v.candidates == [7, 13, 16] and v.excluded == [4]
    assert v.gap_to_next == 6
    v = multiplicity_report([10, 2, 9, 8, 20, 6, 11], 2, 2, 1)
    assert v.verdict == "inconclusive"
    v = multiplicity_report([10] * 5, 2, 2, 1)
    assert any("not a realizable" in r for r in v.reasons)
    v = multiplicity_report({"a": 6, "b": 6, "c": 6, "d": 6}, 2, 2, 1, stream=list("abcd") * 6)
    assert v.verdict == "stable"
    v = multiplicity_report({"a": 6, "b": 6, "c": 6, "d": 6}, 2, 2, 1,
                            stream=["a"] * 6 + ["b"] * 6 + ["c"] * 6 + ["d"] * 6)
    assert "second half" in " ".join(v.reasons)
    with pytest.raises(DomainError):
        multiplicity_report([], 2, 2, 1)


def test_odd_table_single_value():
    assert realizable_values(5, 1, 2) == {125: (2, None)}
