"""Hybrid exact/asymptotic identities: constants, reports, invariance."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zetaladder.errors import DeltaDegenerate, DomainTooSmall
from zetaladder.hybrid import (
    DeltaPair,
    HybridReport,
    _exponents,
    asymptotic_secondary,
    beta_product_elim,
    echf1,
    echf2,
    invariance_scan,
    mixed_product,
    secondary_v1,
    secondary_v2,
    ternary,
    theorem1_constant,
    theorem2_constant,
)

PAIR_35 = DeltaPair(Fraction(1, 3), Fraction(1, 5))
PAIR_HALF1 = DeltaPair(Fraction(1, 2), Fraction(1))
PAIR_12 = DeltaPair(Fraction(1), Fraction(2))

# ---------------------------------------------------------------------------
# delta pairs and exponent algebra
# ---------------------------------------------------------------------------


def test_pair_rejects_equal_deltas():
    with pytest.raises(DeltaDegenerate):
        DeltaPair(Fraction(1, 3), Fraction(1, 3))
    with pytest.raises(DeltaDegenerate):
        DeltaPair(0.25, 0.25)


def test_pair_rejects_nonpositive_deltas():
    with pytest.raises(DomainTooSmall):
        DeltaPair(Fraction(0), Fraction(1, 5))
    with pytest.raises(DomainTooSmall):
        DeltaPair(Fraction(1, 3), Fraction(-1, 5))


def test_pair_helpers():
    assert PAIR_35.is_rational
    assert not DeltaPair(0.3, 0.2).is_rational
    sw = PAIR_35.swapped()
    assert (sw.d3, sw.d4) == (PAIR_35.d4, PAIR_35.d3)
    assert PAIR_35.label() == ("1/3", "1/5")


def test_exponents_one_third_one_fifth_exact():
    a, b, e = _exponents(PAIR_35)
    assert (a, b, e) == (Fraction(3, 2), Fraction(-5, 2), Fraction(1, 2))


@settings(max_examples=50, deadline=None)
@given(
    st.fractions(min_value=Fraction(1, 9), max_value=Fraction(4)),
    st.fractions(min_value=Fraction(1, 9), max_value=Fraction(4)),
)
def test_exponent_sum_rule(d3, d4):
    # the three exponents always satisfy a + b + 1 = 0 and e = d3 * a
    if d3 == d4:
        return
    a, b, e = _exponents(DeltaPair(d3, d4))
    assert a + b + 1 == 0
    assert e == d3 * a
    assert e == -d4 * b


# ---------------------------------------------------------------------------
# theorem constants
# ---------------------------------------------------------------------------


def test_theorem1_constant_one_third_one_fifth():
    # [(6/5)^5 / (4/3)^3]^{1/2} = sqrt(6561/6250) = 81 sqrt(10) / 250
    c = theorem1_constant(PAIR_35)
    assert c == pytest.approx(81.0 * math.sqrt(10.0) / 250.0, rel=1e-15)
    assert c * c == pytest.approx(6561.0 / 6250.0, rel=1e-14)


def test_theorem1_constant_half_one_is_nine_eighths():
    assert theorem1_constant(PAIR_HALF1) == 9.0 / 8.0


def test_theorem2_constant_one_third_one_fifth_exact_rational():
    # (6/5)^5 / (4/3)^3 with unit-numerator deltas is an exact rational
    assert theorem2_constant(PAIR_35) == float(Fraction(6561, 6250))


def test_theorem1_swap_symmetry():
    # swapping inverts the bracket AND negates the exponent, so the constant
    # is swap-symmetric (not inverted)
    for pair in (PAIR_35, PAIR_HALF1, PAIR_12, DeltaPair(0.37, 0.21)):
        assert theorem1_constant(pair.swapped()) == pytest.approx(
            theorem1_constant(pair), rel=1e-12
        )


def test_theorem2_swap_product_is_one():
    for pair in (PAIR_35, PAIR_HALF1, PAIR_12):
        prod = theorem2_constant(pair) * theorem2_constant(pair.swapped())
        assert prod == pytest.approx(1.0, abs=1e-12)


def test_theorem1_floats_match_rational_path():
    exact = theorem1_constant(PAIR_35)
    floaty = theorem1_constant(DeltaPair(1.0 / 3.0, 0.2))
    assert floaty == pytest.approx(exact, rel=1e-12)


# ---------------------------------------------------------------------------
# report plumbing shared by all ops
# ---------------------------------------------------------------------------


def _check_report_shape(rep: HybridReport, formula_id: str) -> None:
    assert rep.formula_id == formula_id
    d = rep.to_dict()
    for key in ("formula_id", "params", "lhs", "rhs", "rel_residual",
                "condition", "points", "error_budget", "timings"):
        assert key in d
    assert d["params"]["L"] >= 100
    assert rep.condition > 0.0
    for rows in rep.points.values():
        for row in rows:
            assert set(row) >= {"r", "alpha", "beta", "segment_lo", "segment_hi"}


# ---------------------------------------------------------------------------
# the identities, at one window each (the acceptance grid runs elsewhere)
# ---------------------------------------------------------------------------


def test_echf1_sums_to_one(factory):
    rep = echf1(factory, 150, 1.0, 1, 2)
    _check_report_shape(rep, "ECHF1")
    assert rep.rhs == 1.0
    assert rep.lhs == pytest.approx(1.0, abs=1e-8)
    assert rep.rel_residual <= 1e-8
    assert rep.extras["term_cos"] + rep.extras["term_sin"] == pytest.approx(
        rep.lhs, rel=1e-12
    )


def test_echf1_equal_depths_allowed(factory):
    rep = echf1(factory, 150, 1.0, 2, 2)
    assert rep.rel_residual <= 1e-8


def test_echf2_two_sides_agree(factory):
    rep = echf2(factory, PAIR_35, 150, 1.0, 1, 2)
    _check_report_shape(rep, "ECHF2")
    assert rep.rel_residual <= 1e-8
    # both sides equal (1+d)^{1/d}-type scaled offsets, so they are O(U)
    assert 0.0 < rep.lhs < 10.0


def test_echf2_swapped_pair_still_holds(factory):
    rep = echf2(factory, PAIR_35.swapped(), 150, 1.0, 1, 2)
    assert rep.rel_residual <= 1e-8


def test_beta_product_elimination(factory):
    rep = beta_product_elim(factory, PAIR_35, 150, 1.0, 2)
    _check_report_shape(rep, "BETA_ELIM_42")
    assert rep.rel_residual <= 1e-8
    assert abs(rep.extras["exp_e"]) == 0.5  # d3 d4 / (d3 - d4) at (1/3, 1/5)
    assert rep.extras["exp_a"] + rep.extras["exp_b"] == pytest.approx(
        -2.0 * rep.extras["exp_e"], abs=1e-12
    )


def test_secondary_v1_one_third_one_fifth(factory):
    rep = secondary_v1(factory, PAIR_35, 150, 1.0, 1, 2)
    _check_report_shape(rep, "SECONDARY1_11")
    assert rep.rel_residual <= 1e-8
    assert rep.rhs == pytest.approx(81.0 * math.sqrt(10.0) / 250.0, rel=1e-14)
    # the as-printed variant (second trig factor also cos^2) must NOT match
    literal = rep.extras["literal_second_trig_lhs"]
    assert abs(literal - rep.rhs) / rep.rhs > 1e-3


def test_secondary_v1_generic_pair(factory):
    rep = secondary_v1(factory, PAIR_HALF1, 150, 1.0, 1, 2)
    _check_report_shape(rep, "SECONDARY1_44")
    assert rep.rel_residual <= 1e-8
    assert rep.rhs == 9.0 / 8.0


def test_mixed_product(factory):
    rep = mixed_product(factory, 150, 1.0, 2)
    _check_report_shape(rep, "MIXED_52")
    assert rep.rel_residual <= 1e-8


def test_echf1_equal_depths_is_mixed_rearranged(factory):
    # with k1 = k2 = k, multiplying the unit sum by the constant-family
    # product gives exactly the mixed identity; both use the same cached
    # chains so the recombination agrees to rounding noise
    e = echf1(factory, 150, 1.0, 2, 2)
    m = mixed_product(factory, 150, 1.0, 2)
    assert e.lhs == pytest.approx(m.lhs / m.rhs, rel=1e-10)


def test_secondary_v2_corrected_prefactor(factory):
    rep = secondary_v2(factory, PAIR_35, 150, 1.0, 1, 2)
    _check_report_shape(rep, "SECONDARY2_54")
    assert rep.rel_residual <= 1e-8
    assert rep.rhs == pytest.approx(theorem2_constant(PAIR_35), rel=1e-14)
    # the as-printed prefactor is identically 1; the corrected one is x3/x4
    assert rep.extras["prefactor"] != 1.0
    assert rep.extras["literal_rel_residual"] > 1e-3


def test_ternary_links_the_two_secondaries(factory):
    rep = ternary(factory, PAIR_35, 150, 1.0, 1, 2, 1, 2)
    _check_report_shape(rep, "TERNARY_61")
    assert rep.rel_residual <= 1e-8
    assert rep.extras["literal_rel_residual"] > 1e-3


def test_asymptotic_anchor_and_deviation(factory):
    rep = asymptotic_secondary(factory, PAIR_35, 150, 1.0, 1, 2)
    _check_report_shape(rep, "ASYMPTOTIC_17")
    # exact anchor: raw lhs deflated by the omega mixture matches the constant
    assert rep.extras["anchor_residual"] <= 1e-8
    dev = rep.extras["deviation"]
    pred = rep.extras["predicted_deviation"]
    assert dev > 0.0
    assert dev / pred == pytest.approx(1.0, abs=0.5)


def test_asymptotic_deviation_shrinks_with_height(factory):
    lo = asymptotic_secondary(factory, PAIR_35, 150, 1.0, 1, 2)
    hi = asymptotic_secondary(factory, PAIR_35, 500, 1.0, 1, 2)
    assert hi.extras["deviation"] < lo.extras["deviation"]


# ---------------------------------------------------------------------------
# invariance scan
# ---------------------------------------------------------------------------


def test_scan_is_deterministic_for_fixed_seed(factory):
    kw = dict(n_samples=3, seed=7, u_range=(0.5, 1.2), l_range=(100, 140),
              k_range=(1, 2), factory=factory)
    a = invariance_scan(PAIR_35, **kw)
    b = invariance_scan(PAIR_35, **kw)
    assert a.samples == b.samples
    assert a.max_rel_dev == b.max_rel_dev
    assert not a.failures


def test_scan_seed_changes_samples(factory):
    kw = dict(n_samples=3, u_range=(0.5, 1.2), l_range=(100, 140),
              k_range=(1, 2), factory=factory)
    a = invariance_scan(PAIR_35, seed=1, **kw)
    b = invariance_scan(PAIR_35, seed=2, **kw)
    assert [p for p, _ in a.samples] != [p for p, _ in b.samples]


def test_scan_values_hug_the_constant(factory):
    scan = invariance_scan(PAIR_35, n_samples=4, seed=11, u_range=(0.5, 1.2),
                           l_range=(100, 150), k_range=(1, 3), factory=factory)
    assert scan.constant == pytest.approx(81.0 * math.sqrt(10.0) / 250.0,
                                          rel=1e-14)
    assert scan.max_rel_dev <= 1e-6
    assert scan.to_dict()["samples"][0]["params"]["k1"] != 0


def test_scan_worker_count_does_not_change_results(config, factory):
    kw = dict(n_samples=3, seed=5, u_range=(0.5, 1.0), l_range=(100, 120),
              k_range=(1, 2), config=config)
    serial = invariance_scan(PAIR_35, factory=factory, **kw)
    parallel = invariance_scan(PAIR_35, workers=2, **kw)
    assert [v for _, v in serial.samples] == [v for _, v in parallel.samples]
    assert serial.max_rel_dev == parallel.max_rel_dev


def test_scan_rejects_degenerate_requests(factory):
    with pytest.raises(DomainTooSmall):
        invariance_scan(PAIR_35, n_samples=1, factory=factory)
    with pytest.raises(DomainTooSmall):
        invariance_scan(DeltaPair(0.3, 0.2), n_samples=3, factory=factory)
