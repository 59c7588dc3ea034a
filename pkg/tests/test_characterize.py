import math
from fractions import Fraction as Fr

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reclab import characterize as ch
from reclab import condmom, hazard, mfunc
from reclab.characterize import GridSpec, IdentityCase, IdentityId, Verdict
from reclab.errors import UsageError


def test_adjacent_spacing_example(expo):
    res = ch.residual(IdentityCase(IdentityId.COR3, (0.0, 2.0), m=2, n=4), expo)
    assert res.lhs == pytest.approx(1.0, rel=1e-12)
    assert res.rhs == 1.0
    assert res.rel_residual <= 1e-8


@pytest.mark.parametrize("s, t", [(0.5, 3.0), (0.25, 6.0), (2.0, 5.0)])
def test_linear_combination_exponential_sides(expo, s, t):
    # d = 1 at k = r = 1, n - m = 1; inner side is -(n-m) u ((d+1)s - t) with u = 1
    case = IdentityCase(IdentityId.THM3, (1.0, s, t, 4.0), k=1, r=1, m=2, n=3)
    res = ch.residual(case, expo)
    assert res.lhs == pytest.approx(-(2 * s - t), rel=1e-10)
    assert res.rhs == pytest.approx(-(2 * s - t), rel=1e-10)
    assert res.rel_residual <= 1e-8


def test_linear_combination_singular_point_not_blown_up(expo):
    case = IdentityCase(IdentityId.THM3, (1.0, 0.5, 2.0, 4.0), k=1, r=3, m=2, n=3)
    assert case.d == 3
    res = ch.residual(case, expo)
    assert abs(res.lhs) < 1e-12 and res.rel_residual < 1e-6


def test_scan_spacing_confirmed_and_negative_control(expo, wtwo):
    assert ch.scan(IdentityId.COR3, expo, tol=1e-6).verdict is Verdict.CONFIRMED
    bad = ch.scan(IdentityId.COR3, wtwo, tol=1e-6)
    assert bad.verdict is Verdict.VIOLATED and bad.max_rel_residual >= 1e-2


def test_hazard_harmonic_mean_fifty_pairs(whalf, expo):
    rng = np.random.default_rng(0)
    for model in (whalf, expo):
        for _ in range(50):
            u, v = np.sort(rng.uniform(0.01, 20.0, 2))
            assert ch.residual(IdentityCase(IdentityId.LEMMA1, (u, v)), model).rel_residual <= 1e-12
    assert ch.scan(IdentityId.LEMMA1, whalf, tol=1e-12).confirmed


def test_hazard_harmonic_mean_fails_elsewhere(wtwo):
    assert ch.scan(IdentityId.LEMMA1, wtwo).verdict is Verdict.VIOLATED
    assert ch.scan(IdentityId.LEMMA1, hazard.linear_quadratic()).verdict is Verdict.VIOLATED


@pytest.mark.parametrize("k", [2, 3, 4])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_h_derivative_moment_exponential(expo, k, r):
    assert ch.scan(IdentityId.NEC_YAB, expo, tol=1e-8, k=k, r=r).confirmed


@pytest.mark.parametrize("k, r", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_h_derivative_moment_higher_degree(expo, k, r):
    # the expectation identity is not tied to p = k + r
    assert ch.scan(IdentityId.NEC_YAB, expo, tol=1e-8, k=k, r=r, p=k + r + 2).confirmed


@pytest.mark.parametrize("k, r", [(2, 1), (2, 2), (3, 1), (3, 3)])
def test_cross_ratio_identities_exponential(expo, k, r):
    assert ch.scan(IdentityId.THM1, expo, tol=1e-8, k=k, r=r).confirmed
    assert ch.scan(IdentityId.COR1, expo, tol=1e-8, k=k, r=r).confirmed


def test_cross_ratio_rejects_k1(expo):
    with pytest.raises(UsageError):
        ch.scan(IdentityId.THM1, expo, k=1)


def test_cross_ratio_regularity_check():
    # (r-1)M_k(l_F, v) vanishes identically when h has degree <= k
    with pytest.raises(UsageError):
        ch.scan(IdentityId.THM1, hazard.exponential(1.0), k=3, r=1, p=3)


@pytest.mark.parametrize("ident", [IdentityId.ADJ_MEAN, IdentityId.WEIGHTS, IdentityId.WEIGHTS2])
def test_weighted_means(expo, wtwo, ident):
    assert ch.scan(ident, expo, tol=1e-8, k=2, r=3).confirmed
    bad = ch.scan(ident, wtwo, k=2, r=3)
    assert bad.verdict is Verdict.VIOLATED and bad.max_rel_residual >= 1e-2


@pytest.mark.parametrize("p", [2, 3, 5])
def test_divided_difference_moments_exponential(expo, p):
    assert ch.scan(IdentityId.BAP05, expo, tol=1e-8, p=p).confirmed
    assert ch.scan(IdentityId.YAB08, expo, tol=1e-8, k=2, p=p + 1).confirmed


def test_an_both_families(expo, whalf, wtwo):
    assert ch.scan(IdentityId.AN, expo, tol=1e-8).confirmed
    assert ch.scan(IdentityId.AN, whalf, tol=1e-8).confirmed
    assert not ch.scan(IdentityId.AN, wtwo).confirmed


@pytest.mark.parametrize("gap", [1, 2, 3])
def test_outer_spacings_equivalent_to_inner(expo, whalf, wtwo, gap):
    for model in (expo, whalf, wtwo):
        a = ch.scan(IdentityId.COR3, model, m=2, n=2 + gap)
        b = ch.scan(IdentityId.SUMSPEC, model, m=2, n=2 + gap)
        assert a.verdict is b.verdict
        for x, y in zip(a.records, b.records):
            assert x.point == y.point
            # sum of outer spacings = (v - u) - inner spacing, so residuals flip sign
            assert abs(abs(x.residual) - abs(y.residual)) <= 1e-12


@pytest.mark.parametrize("k, r, gap", [(1, 1, 1), (1, 2, 2), (2, 1, 1), (2, 3, 3), (3, 3, 2)])
def test_linear_combinations_exponential(expo, k, r, gap):
    m = k + 1
    for ordering in ch.Ordering:
        assert ch.scan(IdentityId.THM3, expo, tol=1e-8, k=k, r=r, m=m, n=m + gap, ordering=ordering).confirmed
    assert ch.scan(IdentityId.COR4, expo, tol=1e-8, m=2, n=2 + gap).confirmed


def test_linear_combination_distinguishes_weibull_half(whalf):
    rep = ch.scan(IdentityId.THM3, whalf, k=1, r=1, m=2, n=3)
    assert rep.verdict is Verdict.VIOLATED and rep.max_rel_residual >= 1e-3


def test_spacing_ratio_equal_weights_holds_on_both(expo, whalf):
    for model in (expo, whalf):
        assert ch.scan(IdentityId.THM2, model, tol=1e-8, k=1, r=1, m=2, n=3).confirmed


def test_spacing_ratio_unequal_weights_fail_on_weibull_half(whalf):
    assert ch.scan(IdentityId.THM2, whalf, k=1, r=2, m=2, n=3).verdict is Verdict.VIOLATED


def test_neighbour_spacing_printed_constant(expo):
    assert ch.scan(IdentityId.COR2, expo, tol=1e-8, k=1, r=1, m=2, n=3).confirmed
    assert not ch.scan(IdentityId.COR2, expo, k=2, r=1, m=3, n=4).confirmed


@pytest.mark.parametrize("ident, kwargs", [
    (IdentityId.THM2, {"k": 2, "m": 2}),
    (IdentityId.COR3, {"m": 1, "n": 3}),
    (IdentityId.COR2, {"m": 2, "n": 4}),
    (IdentityId.COR4, {"m": 3, "n": 3}),
])
def test_parameter_validation(expo, ident, kwargs):
    with pytest.raises(UsageError):
        ch.scan(ident, expo, **kwargs)


def test_identity_case_validation():
    with pytest.raises(UsageError):
        IdentityCase(IdentityId.COR3, (1.0, 2.0, 3.0))
    with pytest.raises(UsageError):
        IdentityCase(IdentityId.COR3, (2.0, 1.0))
    with pytest.raises(UsageError):
        IdentityCase(IdentityId.THM1, (1.0, 5.0, 3.0), k=2)
    with pytest.raises(UsageError):
        IdentityId.parse("thm9")
    assert IdentityId.parse("COR3") is IdentityId.COR3


def test_point_outside_support():
    with pytest.raises(UsageError):
        ch.residual(IdentityCase(IdentityId.COR3, (0.5, 2.0)), hazard.exponential(1.0, 1.0))


# -- grids ---------------------------------------------------------------------


def test_default_grid(expo):
    pts = GridSpec().base_points(expo)
    assert pts == [0.25, 0.5, 1.0, 2.0, 4.0, 8.0]
    assert GridSpec().base_points(hazard.exponential(1.0, 1.0))[0] == 1.25
    assert len(GridSpec().tuples(expo, 2)) == 15
    quads = GridSpec().tuples(expo, 4, seed=3)
    assert len(quads) == 15 and all(list(q) == sorted(q) for q in quads)


def test_grid_subsampling_depends_on_seed(expo):
    big = GridSpec(count=8)
    assert big.tuples(expo, 4, 0) != big.tuples(expo, 4, 1)
    assert big.tuples(expo, 4, 0) == big.tuples(expo, 4, 0)


@pytest.mark.parametrize("text", ["1:2", "a:b:3", "1:2:2.5", "2:1:3", "0:1:1"])
def test_grid_errors(expo, text):
    with pytest.raises(UsageError):
        GridSpec.parse(text).base_points(expo)


def test_grid_parse_scientific():
    assert GridSpec.parse("5e-1:8e0:4e0") == GridSpec(0.5, 8.0, 4)


def test_scan_sorted_and_deterministic(whalf):
    a = ch.scan(IdentityId.THM3, whalf, k=1, r=2, m=2, n=3)
    b = ch.scan(IdentityId.THM3, whalf, k=1, r=2, m=2, n=3)
    assert a == b
    assert [r.point for r in a.records] == sorted(r.point for r in a.records)


def test_enclosing_ordering_assignment():
    assert ch.assign_point(IdentityId.THM3, (1.0, 2.0, 3.0, 4.0), ch.Ordering.ENCLOSING) == (2.0, 1.0, 4.0, 3.0)
    assert ch.assign_point(IdentityId.THM2, (1.0, 2.0, 3.0, 4.0), ch.Ordering.NESTED) == (1.0, 2.0, 3.0, 4.0)


# -- residual arithmetic -----------------------------------------------------------


@settings(max_examples=100, deadline=None)
@given(a=st.floats(-1e6, 1e6), b=st.floats(-1e6, 1e6))
def test_relative_residual_properties(a, b):
    rel = ch.relative_residual(a, b)
    assert rel == ch.relative_residual(b, a)
    assert rel >= 0
    if a == b:
        assert rel == 0
    if abs(a) > 1e-12 or abs(b) > 1e-12:
        assert rel <= 2.0


@settings(max_examples=40, deadline=None)
@given(k=st.integers(1, 3), r=st.integers(1, 3), gap=st.integers(1, 3),
       lo=st.floats(0.1, 3.0), width=st.floats(0.2, 6.0))
def test_exponential_spacing_constant(k, r, gap, lo, width):
    # (d + 2) / (v - u) * E[R_n - R_m] = n - m for every exponential
    model = hazard.exponential(2.0, 0.5)
    m, n = k + 1, k + 1 + gap
    d = n - m + k + r - 2
    u, v = model.l_F + lo, model.l_F + lo + width
    E = condmom.spacing_expectation(model, m, n, k, r, u, v)
    assert (d + 2) / (v - u) * E == pytest.approx(gap, rel=1e-9)


@settings(max_examples=30, deadline=None)
@given(k=st.integers(1, 3), gap=st.integers(1, 3), lo=st.floats(0.1, 4.0), width=st.floats(0.2, 9.0))
def test_weibull_half_equal_weight_constant(k, gap, lo, width):
    m, n = k + 1, k + 1 + gap
    d = n - m + 2 * k - 2
    whalf = hazard.weibull(0.5, 1.0)
    E = condmom.spacing_expectation(whalf, m, n, k, k, lo, lo + width)
    assert (d + 2) / width * E == pytest.approx(gap, rel=1e-9)


def test_weibull_half_unequal_weight_value():
    # closed form (6a + 4b) / (5(a + b)) with a = sqrt(u), b = sqrt(v)
    whalf = hazard.weibull(0.5, 1.0)
    for u, v in [(1.0, 4.0), (4.0, 9.0), (0.25, 16.0)]:
        a, b = math.sqrt(u), math.sqrt(v)
        val = 4 / (v - u) * condmom.spacing_expectation(whalf, 2, 3, 1, 2, u, v)
        assert val == pytest.approx((6 * a + 4 * b) / (5 * (a + b)), rel=1e-12)
    a, b = Fr(1), Fr(2)
    assert (6 * a + 4 * b) / (5 * (a + b)) == Fr(14, 15)


# -- Monte Carlo against quadrature ------------------------------------------------------


MC_CASES = [
    (IdentityId.ADJ_MEAN, {}, (0.5, 2.0)),
    (IdentityId.WEIGHTS, {"k": 3}, (1.0, 4.0)),
    (IdentityId.WEIGHTS2, {"r": 2}, (0.25, 8.0)),
    (IdentityId.BAP05, {"p": 3}, (1.0, 2.0)),
    (IdentityId.YAB08, {"k": 2}, (0.5, 4.0)),
    (IdentityId.NEC_YAB, {"k": 2, "r": 2}, (1.0, 4.0)),
    (IdentityId.NEC_YAB, {"k": 3, "r": 1}, (0.25, 2.0)),
    (IdentityId.THM1, {"k": 2, "r": 1}, (0.5, 1.0, 4.0)),
    (IdentityId.COR1, {"k": 2, "r": 2}, (0.25, 1.0, 8.0)),
    (IdentityId.AN, {}, (1.0, 4.0)),
    (IdentityId.COR2, {"k": 1, "r": 2}, (0.5, 4.0)),
    (IdentityId.COR3, {"m": 2, "n": 4}, (0.5, 8.0)),
    (IdentityId.SUMSPEC, {"m": 2, "n": 3}, (1.0, 2.0)),
    (IdentityId.COR4, {"m": 2, "n": 4}, (0.25, 4.0)),
    (IdentityId.THM2, {"k": 1, "r": 1}, (0.25, 1.0, 2.0, 8.0)),
    (IdentityId.THM2, {"k": 2, "r": 1, "m": 3, "n": 4}, (0.5, 1.0, 4.0, 8.0)),
    (IdentityId.THM3, {"k": 1, "r": 1}, (1.0, 0.5, 8.0, 4.0)),
    (IdentityId.THM3, {"k": 1, "r": 2, "m": 2, "n": 4}, (2.0, 0.25, 8.0, 4.0)),
    (IdentityId.THM3, {"k": 2, "r": 1, "m": 3, "n": 4}, (0.5, 1.0, 2.0, 4.0)),
    (IdentityId.COR3, {"m": 3, "n": 4}, (2.0, 8.0)),
]


@pytest.mark.parametrize("model", [hazard.weibull(0.5, 1.0), hazard.weibull(2.0, 1.0)], ids=str)
@pytest.mark.parametrize("ident, params, point", MC_CASES)
def test_mc_residual_matches_quad(model, ident, params, point):
    case = IdentityCase(ident, point, **params)
    quad = ch.residual(case, model, "quad")
    mc = ch.residual(case, model, "mc", seed=5, samples=20_000)
    if mc.stderr == 0:
        assert mc.residual == pytest.approx(quad.residual, abs=1e-12)
    else:
        assert abs(mc.residual - quad.residual) <= 4 * mc.stderr


def test_mc_scan_verdicts(expo, wtwo):
    ok = ch.scan(IdentityId.COR3, expo, method="mc", samples=20_000)
    assert ok.confirmed and ok.max_zscore <= 4 and ok.samples == 20_000
    bad = ch.scan(IdentityId.COR3, wtwo, method="mc", samples=20_000)
    assert bad.verdict is Verdict.VIOLATED


# -- classification and printed constants ----------------------------------------------------


@pytest.mark.parametrize("model, label", [
    (hazard.exponential(2.0), ch.Classification.EXPONENTIAL),
    (hazard.exponential(0.5, 1.0), ch.Classification.EXPONENTIAL),
    (hazard.weibull(0.5, 1.0), ch.Classification.WEIBULL_HALF),
    (hazard.weibull(0.5, 3.0), ch.Classification.WEIBULL_HALF),
    (hazard.weibull(2.0, 1.0), ch.Classification.NEITHER),
    (hazard.linear_quadratic(), ch.Classification.NEITHER),
])
def test_classify(model, label):
    assert ch.classify(model) is label


def test_errata_rows(expo, whalf):
    rep = ch.errata_report(expo)
    row = rep.find("LHS", 1, 1, 2, 3)
    assert row.status is ch.ErrataStatus.MISMATCH and row.printed == 2.0
    assert row.computed_min == pytest.approx(1.0, abs=1e-8) and row.computed_max == pytest.approx(1.0, abs=1e-8)
    assert rep.find("COR2", 2, 2, 3, 4).status is ch.ErrataStatus.MISMATCH
    assert rep.find("COR2", 1, 1, 2, 3).status is ch.ErrataStatus.MATCH

    half = ch.errata_report(whalf)
    assert half.find("LHS", 1, 1, 2, 3).status is ch.ErrataStatus.MISMATCH
    skewed = half.find("LHS", 1, 2, 2, 3)
    assert skewed.status is ch.ErrataStatus.NONCONSTANT
    assert skewed.value_at(1.0, 4.0) == pytest.approx(14 / 15, abs=1e-8)


def test_errata_needs_characterized_family(wtwo):
    with pytest.raises(UsageError):
        ch.errata_report(wtwo)
