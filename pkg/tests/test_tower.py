"""Iteration towers and mean-value chains: structure, caching, identities."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest

from zetaladder.errors import (
    DomainTooSmall,
    IndexOutOfTower,
    RangeTooLarge,
)
from zetaladder.numerics import integrate
from zetaladder.tower import (
    ChainFactory,
    ChainPoints,
    Segment,
    chain_identity_residual,
    gf_cos2,
    gf_one,
    gf_power,
    gf_sin2,
    lemma_residual,
    make_chain_weight,
)

from _oracles import SIN2_MEAN_QUARTER_PI

# ---------------------------------------------------------------------------
# segments and tower structure
# ---------------------------------------------------------------------------


def test_segment_geometry():
    s = Segment(3.0, 7.0)
    assert s.length == 4.0
    assert s.mid == 5.0
    assert s.contains(5.0)
    assert s.contains(3.0) and s.contains(7.0)  # closed with slack
    assert not s.contains(8.0)


def test_tower_has_k_plus_one_segments(factory):
    tw = factory.tower(150, 1.0, 3)
    assert tw.k == 3
    assert tw.base.lo == pytest.approx(math.pi * 150, abs=1e-12)
    assert tw.base.length == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(IndexOutOfTower):
        tw.segment(4)


def test_tower_segments_climb(factory):
    tw = factory.tower(150, 1.0, 3)
    for r in range(3):
        assert tw.segment(r + 1).lo > tw.segment(r).hi


def test_phi1_maps_segment_endpoints_down(model, factory):
    # seg_{r+1} endpoints are reverse steps of seg_r endpoints, so phi1
    # must map them back within root tolerance amplified by omega
    tw = factory.tower(200, 1.2, 3)
    for r in range(3):
        above, below = tw.segment(r + 1), tw.segment(r)
        assert model.phi1(above.lo) == pytest.approx(below.lo, abs=1e-7)
        assert model.phi1(above.hi) == pytest.approx(below.hi, abs=1e-7)


def test_tower_prefix_is_shared_across_depths(factory):
    shallow = factory.tower(150, 1.0, 2)
    deep = factory.tower(150, 1.0, 4)
    for r in range(3):
        assert deep.segment(r) == shallow.segment(r)


# ---------------------------------------------------------------------------
# window validation
# ---------------------------------------------------------------------------


def test_window_rejects_non_integer_l(factory):
    with pytest.raises(DomainTooSmall):
        factory.tower(150.5, 1.0, 1)


def test_window_rejects_l_below_floor(factory):
    with pytest.raises(DomainTooSmall):
        factory.tower(50, 1.0, 1)


def test_window_rejects_nonpositive_u(factory):
    with pytest.raises(DomainTooSmall):
        factory.tower(150, 0.0, 1)


def test_window_rejects_u_at_half_pi(factory):
    with pytest.raises(RangeTooLarge):
        factory.tower(150, math.pi / 2, 1)


def test_window_rejects_depth_beyond_cap(factory):
    with pytest.raises(IndexOutOfTower):
        factory.tower(150, 1.0, factory.model.config.k_max + 1)


# ---------------------------------------------------------------------------
# generating functions
# ---------------------------------------------------------------------------


def test_trig_masses_partition_the_window():
    for u in (0.3, 1.0, 1.4):
        assert gf_sin2().mass(u) + gf_cos2().mass(u) == pytest.approx(u, abs=1e-15)
        assert gf_one().mass(u) == u


def test_sin2_mass_closed_form():
    u = math.pi / 4
    assert gf_sin2().mass(u) == pytest.approx(math.pi / 8 - 0.25, abs=1e-15)


def test_power_mass_closed_form():
    gf = gf_power(Fraction(1, 3))
    u = 1.2
    assert gf.mass(u) == pytest.approx(u ** (4.0 / 3.0) / (4.0 / 3.0), abs=1e-14)
    assert gf.key == "pow:1/3"


def test_power_rejects_delta_at_minus_one():
    with pytest.raises(DomainTooSmall):
        gf_power(-1)
    with pytest.raises(DomainTooSmall):
        gf_power(Fraction(-3, 2))


# ---------------------------------------------------------------------------
# depth-0 chains: closed forms
# ---------------------------------------------------------------------------


def test_k0_constant_family_returns_midpoint(factory):
    ch = factory.solve(150, 1.0, 0, gf_one())
    assert ch.xi == pytest.approx(math.pi * 150 + 0.5, abs=1e-9)
    assert ch.product == pytest.approx(ch.level, rel=1e-12)


def test_k0_linear_family_returns_midpoint(factory):
    # f(v) = v: mean over [0, U] is U/2, attained at the midpoint
    ch = factory.solve(150, 1.0, 0, gf_power(1))
    assert ch.xi - math.pi * 150 == pytest.approx(0.5, abs=1e-9)


def test_k0_sin2_quarter_pi_closed_form(factory):
    # mean of sin^2 over [0, pi/4] is (1/2)(1 - 2/pi); crossing at arcsin
    u = math.pi / 4
    ch = factory.solve(150, u, 0, gf_sin2())
    assert ch.level == pytest.approx(SIN2_MEAN_QUARTER_PI, abs=1e-14)
    expected = math.asin(math.sqrt(SIN2_MEAN_QUARTER_PI))
    assert ch.xi - math.pi * 150 == pytest.approx(expected, abs=1e-9)


# ---------------------------------------------------------------------------
# solved chains: the defining identity
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("gf_make", [gf_sin2, gf_cos2, gf_one])
def test_chain_identity_holds(model, factory, k, gf_make):
    ch = factory.solve(150, 1.0, k, gf_make())
    assert isinstance(ch, ChainPoints)
    assert chain_identity_residual(model, ch) <= 1e-8
    assert ch.rel_residual <= 1e-8
    assert not ch.flagged


@pytest.mark.parametrize("delta", [Fraction(1, 3), Fraction(1, 5), 1])
def test_chain_identity_holds_for_powers(model, factory, delta):
    ch = factory.solve(200, 1.0, 2, gf_power(delta))
    assert chain_identity_residual(model, ch) <= 1e-8


def test_alpha_points_live_in_their_segments(factory):
    ch = factory.solve(150, 1.0, 3, gf_sin2())
    tw = factory.tower(150, 1.0, 3)
    for r in range(4):
        assert tw.segment(r).contains(float(ch.alpha[r]))


def test_alphas_descend_through_the_tower(factory):
    ch = factory.solve(300, 1.0, 3, gf_cos2())
    a = ch.alpha
    assert all(a[r + 1] > a[r] for r in range(3))  # higher segments upward
    assert a[0] == pytest.approx(math.pi * 300, abs=2.0)


def test_chain_weight_integral_recovers_mass(model, factory):
    # int_{seg_k} g = mass(f): the change of variables collapses the chain
    tw = factory.tower(150, 1.0, 2)
    gf = gf_sin2()
    g = make_chain_weight(model, tw, gf)
    seg = tw.segment(2)
    val = integrate(g, seg.lo, seg.hi, tol=1e-9).value
    assert val == pytest.approx(gf.mass(1.0), abs=1e-7)


# ---------------------------------------------------------------------------
# caching
# ---------------------------------------------------------------------------


def test_solve_returns_cached_object(factory):
    a = factory.solve(150, 1.0, 2, gf_sin2())
    b = factory.solve(150, 1.0, 2, gf_sin2())
    assert a is b


def test_beta_is_cached_constant_chain(factory):
    a = factory.beta(150, 1.0, 2)
    assert a.f_key == "one"
    assert factory.beta(150, 1.0, 2) is a


def test_fresh_factory_reproduces_chains_exactly(model, factory):
    other = ChainFactory(model)
    a = factory.solve(150, 1.0, 2, gf_sin2())
    b = other.solve(150, 1.0, 2, gf_sin2())
    assert float(a.alpha[-1]) == float(b.alpha[-1])
    assert a.product == b.product


# ---------------------------------------------------------------------------
# the mean-value lemma
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("k", [1, 2, 3])
def test_lemma_trig_families(model, factory, k):
    # prod Z~^2(alpha_r) / prod Z~^2(beta_r) = mean(f) / f(alpha_0)
    beta = factory.beta(150, 1.0, k)
    for gf in (gf_sin2(), gf_cos2()):
        alpha = factory.solve(150, 1.0, k, gf)
        assert lemma_residual(model, alpha, beta) <= 1e-6


@pytest.mark.parametrize("delta", [Fraction(1, 3), Fraction(1, 5), 1])
def test_lemma_power_families(model, factory, delta):
    beta = factory.beta(300, 0.5, 2)
    alpha = factory.solve(300, 0.5, 2, gf_power(delta))
    assert lemma_residual(model, alpha, beta) <= 1e-6


def test_lemma_requires_matching_windows(model, factory):
    alpha = factory.solve(150, 1.0, 2, gf_sin2())
    beta_other = factory.beta(150, 1.2, 2)
    with pytest.raises(ValueError):
        lemma_residual(model, alpha, beta_other)


def test_lemma_requires_constant_second_chain(model, factory):
    alpha = factory.solve(150, 1.0, 2, gf_sin2())
    also_alpha = factory.solve(150, 1.0, 2, gf_cos2())
    with pytest.raises(ValueError):
        lemma_residual(model, alpha, also_alpha)


def test_trig_levels_are_complementary(factory):
    # mass partition => levels of sin^2 and cos^2 chains sum to the constant
    # chain's level at the same window
    s = factory.solve(150, 1.0, 2, gf_sin2())
    c = factory.solve(150, 1.0, 2, gf_cos2())
    b = factory.beta(150, 1.0, 2)
    assert s.level + c.level == pytest.approx(b.level, rel=1e-13)
