"""Cross-combined identities between mean-value chains, and invariance scans.

Each solved chain carries one factorization identity

    f(alpha_0) * prod_r ztilde_sq(alpha_r)  =  mass(f) / |seg_k| ,

and dividing by the plain chain (f = 1, the ``beta`` points) turns the
right-hand side into a closed form free of segment lengths:

    prod_r ztilde_sq(alpha_r) / ztilde_sq(beta_r)  =  mean(f) / f(alpha_0).

Combining these ratios across different weight families eliminates the
window parameters one at a time and leaves identities whose right-hand
sides are explicit constants.  The operations here build each published
arrangement from solved chains and report ``lhs``, ``rhs``,
``rel_residual = |lhs/rhs - 1|`` and a condition estimate:

* ``echf1``        -- trig pair: the two ratio identities weighted by
                      cos^2/sin^2 at the base points sum to exactly 1;
* ``echf2``        -- power pair: U eliminated between two power-weight
                      ratios, both sides share the same closed form;
* ``beta_product_elim`` -- at equal depth the plain-chain product is
                      expressed purely through the two power chains;
* ``mixed_product``   -- at equal depth the plain-chain product equals the
                      cos^2/sin^2 combination of the trig chains;
* ``secondary_v1``    -- the trig sum of ``echf1`` with each ratio's plain
                      product replaced via ``beta_product_elim``; the result
                      is the parameter-free constant
                      [(1+d4)^(1/d4)/(1+d3)^(1/d3)]^(d3 d4/(d3-d4));
* ``secondary_v2``    -- the power identity of ``echf2`` with plain products
                      replaced via ``mixed_product``; constant
                      (1+d4)^(1/d4)/(1+d3)^(1/d3);
* ``ternary``         -- the constant eliminated between the two secondary
                      forms;
* ``asymptotic_secondary`` -- the ``secondary_v1`` arrangement with raw
                      Z^2 = ztilde_sq * omega in place of ztilde_sq; the
                      drift from the constant is reported together with the
                      omega-ratio factor that predicts it.

All products and powers are accumulated in log space.  Exponents stay exact
:class:`fractions.Fraction` arithmetic whenever the deltas are rational, so
e.g. the (1/3, 1/5) constant is sqrt(6561/6250) = 81 sqrt(10) / 250 with no
floating-point exponentiation involved.

``invariance_scan`` draws seeded random (U, L, {k1, k2}) samples, evaluates
the ``secondary_v1`` left side on each, and summarizes the spread around the
constant; samples are drawn up front from one generator so the result is
independent of the worker count.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .config import DEFAULT_CONFIG, RunConfig
from .errors import DeltaDegenerate, DomainTooSmall, ZetaLadderError
from .ladder import LadderModel
from .tower import ChainFactory, ChainPoints, gf_cos2, gf_one, gf_power, gf_sin2

__all__ = [
    "DeltaPair",
    "HybridReport",
    "InvarianceScan",
    "theorem1_constant",
    "theorem2_constant",
    "echf1",
    "echf2",
    "beta_product_elim",
    "secondary_v1",
    "mixed_product",
    "secondary_v2",
    "ternary",
    "asymptotic_secondary",
    "invariance_scan",
]

Rational = Fraction | int | float


@dataclass(frozen=True)
class DeltaPair:
    """Exponent pair (d3, d4), both positive, d3 != d4.

    Rational inputs (Fraction or int) keep exact arithmetic in all derived
    exponents; the degenerate d3 == d4 case collapses every identity here to
    1 = 1 and is rejected outright.
    """

    d3: Rational
    d4: Rational

    def __post_init__(self):
        for name, d in (("d3", self.d3), ("d4", self.d4)):
            if not float(d) > 0.0:
                raise DomainTooSmall(f"{name}={d} must be positive")
        if float(self.d3) == float(self.d4):
            raise DeltaDegenerate(
                f"d3 = d4 = {self.d3} makes every combined identity trivial"
            )

    @property
    def is_rational(self) -> bool:
        return isinstance(self.d3, (Fraction, int)) and isinstance(
            self.d4, (Fraction, int)
        )

    def swapped(self) -> "DeltaPair":
        return DeltaPair(self.d4, self.d3)

    def label(self) -> tuple[str, str]:
        return (_delta_str(self.d3), _delta_str(self.d4))


def _delta_str(d: Rational) -> str:
    if isinstance(d, Fraction):
        return f"{d.numerator}/{d.denominator}"
    return repr(float(d)) if isinstance(d, float) else str(d)


def _exponents(pair: DeltaPair) -> tuple[Rational, Rational, Rational]:
    """(a, b, e) = (d4, -d3, d3*d4) / (d3 - d4), exact for rational pairs."""
    d3, d4 = pair.d3, pair.d4
    if pair.is_rational:
        d3, d4 = Fraction(d3), Fraction(d4)
    den = d3 - d4
    return d4 / den, -d3 / den, d3 * d4 / den


def _log1p_delta_over_delta(d: Rational) -> float:
    """log((1+d)^(1/d)) = log1p(d)/d in double precision."""
    return math.log1p(float(d)) / float(d)


def theorem2_constant(pair: DeltaPair) -> float:
    """(1+d4)^(1/d4) / (1+d3)^(1/d3)."""
    exact = _theorem2_exact(pair)
    if exact is not None:
        return float(exact)
    return math.exp(
        _log1p_delta_over_delta(pair.d4) - _log1p_delta_over_delta(pair.d3)
    )


def _theorem2_exact(pair: DeltaPair) -> Fraction | None:
    """Exact rational value of theorem2_constant when both 1/d are integers."""
    if not pair.is_rational:
        return None
    d3, d4 = Fraction(pair.d3), Fraction(pair.d4)
    if d3.numerator != 1 or d4.numerator != 1:
        return None
    q3, q4 = d3.denominator, d4.denominator
    return (Fraction(q4 + 1, q4) ** q4) / (Fraction(q3 + 1, q3) ** q3)


def theorem1_constant(pair: DeltaPair) -> float:
    """[(1+d4)^(1/d4) / (1+d3)^(1/d3)]^(d3 d4 / (d3 - d4)).

    For rational pairs with unit numerators and a half-integral outer
    exponent the value is computed from exact rationals plus at most one
    square root -- e.g. (1/3, 1/5) gives sqrt(6561/6250) = 81 sqrt(10)/250.
    """
    _, _, e = _exponents(pair)
    base = _theorem2_exact(pair)
    if base is not None and isinstance(e, Fraction):
        if e.denominator == 1:
            return float(base ** e.numerator)
        if e.denominator == 2:
            return math.sqrt(float(base ** e.numerator))
    return math.exp(
        float(e)
        * (_log1p_delta_over_delta(pair.d4) - _log1p_delta_over_delta(pair.d3))
    )


# -- report plumbing ----------------------------------------------------------


@dataclass
class HybridReport:
    formula_id: str
    params: dict[str, Any]
    lhs: float
    rhs: float
    rel_residual: float
    condition: float
    points: dict[str, list[dict[str, float | int | None]]]
    extras: dict[str, float] = field(default_factory=dict)
    error_budget: dict[str, Any] = field(default_factory=dict)
    timings: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "formula_id": self.formula_id,
            "params": self.params,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "rel_residual": self.rel_residual,
            "condition": self.condition,
            "points": self.points,
            "extras": self.extras,
            "error_budget": self.error_budget,
            "timings": self.timings,
        }


def _rel(lhs: float, rhs: float) -> float:
    return abs(lhs / rhs - 1.0)


def _log_prod(chain: ChainPoints) -> float:
    return float(np.sum(np.log(chain.zt2))) if chain.k else 0.0


def _offset0(chain: ChainPoints) -> float:
    return float(chain.alpha[0]) - math.pi * chain.l


def _points_json(alpha: ChainPoints, beta: ChainPoints | None,
                 factory: ChainFactory) -> list[dict]:
    tower = factory.tower(alpha.l, alpha.u, alpha.k)
    rows = []
    for r in range(alpha.k + 1):
        seg = tower.segment(r)
        rows.append({
            "r": r,
            "alpha": float(alpha.alpha[r]),
            "beta": float(beta.alpha[r]) if (beta is not None and r >= 1) else None,
            "segment_lo": seg.lo,
            "segment_hi": seg.hi,
        })
    return rows


def _params(l: int, u: float, *, k1=None, k2=None, k3=None, k4=None,
            pair: DeltaPair | None = None) -> dict[str, Any]:
    d = {"U": u, "L": l, "k1": k1, "k2": k2, "k3": k3, "k4": k4}
    if pair is not None:
        d["delta3"], d["delta4"] = pair.label()
    return d


def _budget(cfg: RunConfig, chains: dict[str, ChainPoints],
            weights: dict[str, float] | None = None) -> dict[str, Any]:
    res = {key: ch.rel_residual for key, ch in chains.items()}
    stacked = sum(
        abs((weights or {}).get(key, 1.0)) * r for key, r in res.items()
    )
    return {
        "root_tol": cfg.root_tol,
        "quad_tol": cfg.quad_tol,
        "chain_residuals": res,
        "stacked_bound": stacked,
    }


def _condition(chains: dict[str, ChainPoints],
               weights: dict[str, float] | None = None) -> float:
    return sum(
        abs((weights or {}).get(key, 1.0)) * ch.condition
        for key, ch in chains.items()
    )


# -- the formulas --------------------------------------------------------------


def echf1(factory: ChainFactory, l: int, u: float, k1: int, k2: int) -> HybridReport:
    """Trig pair: ratio(cos^2; k2) * cos^2(a0) + ratio(sin^2; k1) * sin^2(a0) = 1."""
    t0 = time.perf_counter()
    s1 = factory.solve(l, u, k1, gf_sin2())
    c2 = factory.solve(l, u, k2, gf_cos2())
    b1 = factory.beta(l, u, k1)
    b2 = factory.beta(l, u, k2)
    t1 = time.perf_counter()

    term_cos = math.exp(_log_prod(c2) - _log_prod(b2)) * c2.f0
    term_sin = math.exp(_log_prod(s1) - _log_prod(b1)) * s1.f0
    lhs = term_cos + term_sin
    rhs = 1.0
    chains = {"sin2@k1": s1, "cos2@k2": c2, "one@k1": b1, "one@k2": b2}
    return HybridReport(
        formula_id="ECHF1",
        params=_params(l, u, k1=k1, k2=k2),
        lhs=lhs, rhs=rhs, rel_residual=_rel(lhs, rhs),
        condition=_condition(chains),
        points={
            "sin2@k1": _points_json(s1, b1, factory),
            "cos2@k2": _points_json(c2, b2, factory),
        },
        extras={"term_cos": term_cos, "term_sin": term_sin},
        error_budget=_budget(factory.model.config, chains),
        timings={"chains_s": t1 - t0, "assemble_s": time.perf_counter() - t1},
    )


def _echf2_side(factory: ChainFactory, l: int, u: float, k: int,
                delta: Rational) -> tuple[float, ChainPoints, ChainPoints]:
    """log of (1+d)^(1/d) (a0 - pi L) {prod ratio}^(1/d), plus its chains."""
    ch = factory.solve(l, u, k, gf_power(_as_exact(delta)))
    b = factory.beta(l, u, k)
    log_side = (
        _log1p_delta_over_delta(delta)
        + math.log(_offset0(ch))
        + (_log_prod(ch) - _log_prod(b)) / float(delta)
    )
    return log_side, ch, b


def _as_exact(d: Rational) -> Fraction | float:
    if isinstance(d, int):
        return Fraction(d)
    return d


def echf2(factory: ChainFactory, pair: DeltaPair, l: int, u: float,
          k3: int, k4: int) -> HybridReport:
    """Power pair: both arrangements evaluate the same U-free closed form."""
    t0 = time.perf_counter()
    log_lhs, ch3, b3 = _echf2_side(factory, l, u, k3, pair.d3)
    log_rhs, ch4, b4 = _echf2_side(factory, l, u, k4, pair.d4)
    t1 = time.perf_counter()
    lhs, rhs = math.exp(log_lhs), math.exp(log_rhs)
    w = {
        "pow3@k3": 1.0 / float(pair.d3), "pow4@k4": 1.0 / float(pair.d4),
        "one@k3": 1.0 / float(pair.d3), "one@k4": 1.0 / float(pair.d4),
    }
    chains = {"pow3@k3": ch3, "pow4@k4": ch4, "one@k3": b3, "one@k4": b4}
    return HybridReport(
        formula_id="ECHF2",
        params=_params(l, u, k3=k3, k4=k4, pair=pair),
        lhs=lhs, rhs=rhs, rel_residual=_rel(lhs, rhs),
        condition=_condition(chains, w),
        points={
            "pow3@k3": _points_json(ch3, b3, factory),
            "pow4@k4": _points_json(ch4, b4, factory),
        },
        error_budget=_budget(factory.model.config, chains, w),
        timings={"chains_s": t1 - t0, "assemble_s": time.perf_counter() - t1},
    )


def beta_product_elim(factory: ChainFactory, pair: DeltaPair, l: int, u: float,
                      k: int) -> HybridReport:
    """Equal-depth elimination: the plain product from the two power chains.

        prod ztilde_sq(beta_r) =
            [(1+d3)^(1/d3) / (1+d4)^(1/d4)]^e * (x3 / x4)^e
            * {prod ztilde_sq(alpha^3)}^a * {prod ztilde_sq(alpha^4)}^b

    with (a, b, e) = (d4, -d3, d3 d4)/(d4 - d3) and x_i the base offsets.
    """
    t0 = time.perf_counter()
    ch3 = factory.solve(l, u, k, gf_power(_as_exact(pair.d3)))
    ch4 = factory.solve(l, u, k, gf_power(_as_exact(pair.d4)))
    b = factory.beta(l, u, k)
    t1 = time.perf_counter()

    # _exponents uses denominator (d3 - d4); this arrangement wants (d4 - d3)
    a_, b_, e_ = _exponents(pair)
    a, bb, e = -float(a_), -float(b_), -float(e_)
    log_rhs = (
        e * (_log1p_delta_over_delta(pair.d3) - _log1p_delta_over_delta(pair.d4))
        + e * (math.log(_offset0(ch3)) - math.log(_offset0(ch4)))
        + a * _log_prod(ch3)
        + bb * _log_prod(ch4)
    )
    lhs = math.exp(_log_prod(b))
    rhs = math.exp(log_rhs)
    w = {"pow3@k": abs(a), "pow4@k": abs(bb), "one@k": 1.0}
    chains = {"pow3@k": ch3, "pow4@k": ch4, "one@k": b}
    return HybridReport(
        formula_id="BETA_ELIM_42",
        params=_params(l, u, k3=k, k4=k, pair=pair),
        lhs=lhs, rhs=rhs, rel_residual=_rel(lhs, rhs),
        condition=_condition(chains, w),
        points={
            "pow3@k": _points_json(ch3, b, factory),
            "pow4@k": _points_json(ch4, b, factory),
        },
        extras={"exp_a": a, "exp_b": bb, "exp_e": e},
        error_budget=_budget(factory.model.config, chains, w),
        timings={"chains_s": t1 - t0, "assemble_s": time.perf_counter() - t1},
    )


def _secondary_term(factory: ChainFactory, pair: DeltaPair, l: int, u: float,
                    k: int, trig: str) -> tuple[float, dict[str, ChainPoints]]:
    """log of one secondary term (without the trig factor), plus its chains.

    The term is the depth-k ratio product of the trig chain against the two
    power chains, divided by the offset-ratio prefactor:

        prod ztilde_sq(a^trig) ztilde_sq(a^3)^a ztilde_sq(a^4)^b
            / (x4 / x3)^e

    with (a, b, e) = (d4, -d3, d3 d4)/(d3 - d4).
    """
    gf_trig = gf_sin2() if trig == "sin2" else gf_cos2()
    cht = factory.solve(l, u, k, gf_trig)
    ch3 = factory.solve(l, u, k, gf_power(_as_exact(pair.d3)))
    ch4 = factory.solve(l, u, k, gf_power(_as_exact(pair.d4)))
    a, b, e = (float(x) for x in _exponents(pair))
    log_term = (
        _log_prod(cht)
        + a * _log_prod(ch3)
        + b * _log_prod(ch4)
        - e * (math.log(_offset0(ch4)) - math.log(_offset0(ch3)))
    )
    return log_term, {f"{trig}@k{k}": cht, f"pow3@k{k}": ch3, f"pow4@k{k}": ch4}


def secondary_v1(factory: ChainFactory, pair: DeltaPair, l: int, u: float,
                 k1: int, k2: int) -> HybridReport:
    """The parameter-free trig-power combination.

        term(k2) cos^2(a0^{2,k2}) + term(k1) sin^2(a0^{1,k1})
            = [(1+d4)^(1/d4)/(1+d3)^(1/d3)]^(d3 d4/(d3-d4))

    The right side depends only on the delta pair -- not on U, L, k1, k2 --
    which is what the invariance scan exercises.  At (1/3, 1/5) the constant
    is 81 sqrt(10) / 250 and the report id switches to the specialized form.
    """
    t0 = time.perf_counter()
    log_t2, chains2 = _secondary_term(factory, pair, l, u, k2, "cos2")
    log_t1, chains1 = _secondary_term(factory, pair, l, u, k1, "sin2")
    t1 = time.perf_counter()

    cos0 = chains2[f"cos2@k{k2}"].f0
    sin0 = chains1[f"sin2@k{k1}"].f0
    term2 = math.exp(log_t2) * cos0
    term1 = math.exp(log_t1) * sin0
    lhs = term2 + term1
    rhs = theorem1_constant(pair)

    is_11 = (
        isinstance(pair.d3, Fraction) and isinstance(pair.d4, Fraction)
        and pair.d3 == Fraction(1, 3) and pair.d4 == Fraction(1, 5)
    )
    a, b, _ = (float(x) for x in _exponents(pair))
    w = {}
    for key in {**chains1, **chains2}:
        w[key] = abs(a) if "pow3" in key else abs(b) if "pow4" in key else 1.0
    chains = {**chains1, **chains2}
    extras = {"term_cos": term2, "term_sin": term1}
    if is_11:
        # as-printed variant of the specialized form, which carries cos^2 on
        # the second term where the identity needs sin^2; reported so the
        # failure of that variant is visible next to the corrected value
        alpha0_1 = _offset0(chains1[f"sin2@k{k1}"])
        extras["literal_second_trig_lhs"] = (
            term2 + math.exp(log_t1) * math.cos(alpha0_1) ** 2
        )
    return HybridReport(
        formula_id="SECONDARY1_11" if is_11 else "SECONDARY1_44",
        params=_params(l, u, k1=k1, k2=k2, pair=pair),
        lhs=lhs, rhs=rhs, rel_residual=_rel(lhs, rhs),
        condition=_condition(chains, w),
        points={key: _points_json(ch, factory.beta(l, u, ch.k), factory)
                for key, ch in chains.items()},
        extras=extras,
        error_budget=_budget(factory.model.config, chains, w),
        timings={"chains_s": t1 - t0, "assemble_s": time.perf_counter() - t1},
    )


def mixed_product(factory: ChainFactory, l: int, u: float, k: int) -> HybridReport:
    """Equal-depth trig elimination: the plain product from the trig chains.

        prod ztilde_sq(beta_r) =
            {prod ztilde_sq(a^2)} cos^2(a0^2) + {prod ztilde_sq(a^1)} sin^2(a0^1)
    """
    t0 = time.perf_counter()
    s = factory.solve(l, u, k, gf_sin2())
    c = factory.solve(l, u, k, gf_cos2())
    b = factory.beta(l, u, k)
    t1 = time.perf_counter()
    lhs = math.exp(_log_prod(b))
    rhs = math.exp(_log_prod(c)) * c.f0 + math.exp(_log_prod(s)) * s.f0
    chains = {"sin2@k": s, "cos2@k": c, "one@k": b}
    return HybridReport(
        formula_id="MIXED_52",
        params=_params(l, u, k1=k, k2=k),
        lhs=lhs, rhs=rhs, rel_residual=_rel(lhs, rhs),
        condition=_condition(chains),
        points={
            "sin2@k": _points_json(s, b, factory),
            "cos2@k": _points_json(c, b, factory),
        },
        error_budget=_budget(factory.model.config, chains),
        timings={"chains_s": t1 - t0, "assemble_s": time.perf_counter() - t1},
    )


def _trig_mix_log(factory: ChainFactory, l: int, u: float, k: int) -> float:
    """log of the equal-depth trig combination standing in for the plain product."""
    s = factory.solve(l, u, k, gf_sin2())
    c = factory.solve(l, u, k, gf_cos2())
    return math.log(
        math.exp(_log_prod(c)) * c.f0 + math.exp(_log_prod(s)) * s.f0
    )


def secondary_v2(factory: ChainFactory, pair: DeltaPair, l: int, u: float,
                 k3: int, k4: int) -> HybridReport:
    """The power identity with plain products replaced by trig combinations.

        (x3 / x4) * [P3 / D(k3)]^(1/d3) * [P4 / D(k4)]^(-1/d4)
            = (1+d4)^(1/d4) / (1+d3)^(1/d3)

    where P_i are the power-chain products, D(k) the equal-depth trig
    combination, and x3 = a0^{3,k3} - pi L, x4 = a0^{4,k4} - pi L.  The
    as-printed source form has x3/x3 (identically 1) as the prefactor; its
    value is reported in ``extras`` alongside, never asserted.
    """
    t0 = time.perf_counter()
    ch3 = factory.solve(l, u, k3, gf_power(_as_exact(pair.d3)))
    ch4 = factory.solve(l, u, k4, gf_power(_as_exact(pair.d4)))
    log_d3 = _trig_mix_log(factory, l, u, k3)
    log_d4 = _trig_mix_log(factory, l, u, k4)
    t1 = time.perf_counter()

    x3, x4 = _offset0(ch3), _offset0(ch4)
    log_core = (
        (_log_prod(ch3) - log_d3) / float(pair.d3)
        - (_log_prod(ch4) - log_d4) / float(pair.d4)
    )
    lhs = math.exp(math.log(x3) - math.log(x4) + log_core)
    rhs = theorem2_constant(pair)
    literal_lhs = math.exp(log_core)  # prefactor x3/x3 == 1
    w = {"pow3@k3": 1.0 / float(pair.d3), "pow4@k4": 1.0 / float(pair.d4)}
    chains = {"pow3@k3": ch3, "pow4@k4": ch4}
    return HybridReport(
        formula_id="SECONDARY2_54",
        params=_params(l, u, k3=k3, k4=k4, pair=pair),
        lhs=lhs, rhs=rhs, rel_residual=_rel(lhs, rhs),
        condition=_condition(chains, w),
        points={
            "pow3@k3": _points_json(ch3, factory.beta(l, u, k3), factory),
            "pow4@k4": _points_json(ch4, factory.beta(l, u, k4), factory),
        },
        extras={
            "literal_lhs": literal_lhs,
            "literal_rel_residual": _rel(literal_lhs, rhs),
            "prefactor": x3 / x4,
        },
        error_budget=_budget(factory.model.config, chains, w),
        timings={"chains_s": t1 - t0, "assemble_s": time.perf_counter() - t1},
    )


def ternary(factory: ChainFactory, pair: DeltaPair, l: int, u: float,
            k1: int, k2: int, k3: int, k4: int) -> HybridReport:
    """Constant-free combination of the two secondary identities.

    LHS is the ``secondary_v1`` sum over (k1, k2); RHS raises the
    ``secondary_v2`` combination over (k3, k4) to the power
    d3 d4 / (d3 - d4).  The as-printed RHS prefactor is again the x3/x3
    ratio; the corrected x3/x4 form is asserted, the literal one reported.
    """
    t0 = time.perf_counter()
    log_t2, chains2 = _secondary_term(factory, pair, l, u, k2, "cos2")
    log_t1, chains1 = _secondary_term(factory, pair, l, u, k1, "sin2")
    ch3 = factory.solve(l, u, k3, gf_power(_as_exact(pair.d3)))
    ch4 = factory.solve(l, u, k4, gf_power(_as_exact(pair.d4)))
    log_d3 = _trig_mix_log(factory, l, u, k3)
    log_d4 = _trig_mix_log(factory, l, u, k4)
    t1 = time.perf_counter()

    lhs = (
        math.exp(log_t2) * chains2[f"cos2@k{k2}"].f0
        + math.exp(log_t1) * chains1[f"sin2@k{k1}"].f0
    )
    a, b, e = (float(x) for x in _exponents(pair))
    x3, x4 = _offset0(ch3), _offset0(ch4)
    log_core = a * (_log_prod(ch3) - log_d3) + b * (_log_prod(ch4) - log_d4)
    rhs = math.exp(e * (math.log(x3) - math.log(x4)) + log_core)
    literal_rhs = math.exp(log_core)
    chains = {**chains1, **chains2, "pow3@k3": ch3, "pow4@k4": ch4}
    w = {key: abs(a) if "pow3" in key else abs(b) if "pow4" in key else 1.0
         for key in chains}
    return HybridReport(
        formula_id="TERNARY_61",
        params=_params(l, u, k1=k1, k2=k2, k3=k3, k4=k4, pair=pair),
        lhs=lhs, rhs=rhs, rel_residual=_rel(lhs, rhs),
        condition=_condition(chains, w),
        points={key: _points_json(ch, factory.beta(l, u, ch.k), factory)
                for key, ch in chains.items()},
        extras={
            "literal_rhs": literal_rhs,
            "literal_rel_residual": _rel(lhs, literal_rhs),
        },
        error_budget=_budget(factory.model.config, chains, w),
        timings={"chains_s": t1 - t0, "assemble_s": time.perf_counter() - t1},
    )


def asymptotic_secondary(factory: ChainFactory, pair: DeltaPair, l: int,
                         u: float, k1: int, k2: int) -> HybridReport:
    """The secondary combination with raw Z^2 in place of ztilde_sq.

    Since Z^2(t) = ztilde_sq(t) * omega(t) pointwise, each term of the raw
    sum equals its exact counterpart times the omega mixture

        F(k) = prod_r omega(a_r^trig) omega(a_r^3)^a omega(a_r^4)^b ,

    whose exponents sum to zero -- so F is a ratio of nearly equal slopes
    and drifts from 1 only through the slope spread across the chains at
    each level.  The report carries the raw deviation from the constant and
    the deviation predicted by F; no hard tolerance applies to either.
    The exact-arrangement anchor at the same points is reported as
    ``anchor_residual``.
    """
    t0 = time.perf_counter()
    log_t2, chains2 = _secondary_term(factory, pair, l, u, k2, "cos2")
    log_t1, chains1 = _secondary_term(factory, pair, l, u, k1, "sin2")
    t1 = time.perf_counter()

    a, b, _ = (float(x) for x in _exponents(pair))

    def omega_mix_log(chs: dict[str, ChainPoints], k: int, trig: str) -> float:
        lt = np.log(chs[f"{trig}@k{k}"].omega[1:])
        l3 = np.log(chs[f"pow3@k{k}"].omega[1:])
        l4 = np.log(chs[f"pow4@k{k}"].omega[1:])
        return float(np.sum(lt) + a * np.sum(l3) + b * np.sum(l4))

    mix2 = omega_mix_log(chains2, k2, "cos2")
    mix1 = omega_mix_log(chains1, k1, "sin2")
    cos0 = chains2[f"cos2@k{k2}"].f0
    sin0 = chains1[f"sin2@k{k1}"].f0

    exact_lhs = math.exp(log_t2) * cos0 + math.exp(log_t1) * sin0
    raw_lhs = math.exp(log_t2 + mix2) * cos0 + math.exp(log_t1 + mix1) * sin0
    rhs = theorem1_constant(pair)

    deviation = raw_lhs / rhs - 1.0
    predicted = (
        math.exp(log_t2) * math.expm1(mix2) * cos0
        + math.exp(log_t1) * math.expm1(mix1) * sin0
    ) / rhs
    chains = {**chains1, **chains2}
    w = {key: abs(a) if "pow3" in key else abs(b) if "pow4" in key else 1.0
         for key in chains}
    return HybridReport(
        formula_id="ASYMPTOTIC_17",
        params=_params(l, u, k1=k1, k2=k2, pair=pair),
        lhs=raw_lhs, rhs=rhs, rel_residual=_rel(raw_lhs, rhs),
        condition=_condition(chains, w),
        points={key: _points_json(ch, factory.beta(l, u, ch.k), factory)
                for key, ch in chains.items()},
        extras={
            "anchor_residual": _rel(exact_lhs, rhs),
            "deviation": deviation,
            "predicted_deviation": predicted,
            "omega_mix_factor_k1": math.exp(mix1),
            "omega_mix_factor_k2": math.exp(mix2),
        },
        error_budget=_budget(factory.model.config, chains, w),
        timings={"chains_s": t1 - t0, "assemble_s": time.perf_counter() - t1},
    )


# -- invariance scans -----------------------------------------------------------


@dataclass
class InvarianceScan:
    seed: int
    constant: float
    samples: list[tuple[dict[str, Any], float]]
    failures: list[tuple[dict[str, Any], str]]
    mean: float
    stddev: float
    max_rel_dev: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "seed": self.seed,
            "constant": self.constant,
            "samples": [{"params": p, "lhs": v} for p, v in self.samples],
            "failures": [{"params": p, "error": e} for p, e in self.failures],
            "mean": self.mean,
            "stddev": self.stddev,
            "max_rel_dev": self.max_rel_dev,
        }


_WORKER_STATE: dict[str, Any] = {}


def _scan_init(config: RunConfig, d3: str, d4: str) -> None:
    model = LadderModel(config)
    _WORKER_STATE["factory"] = ChainFactory(model)
    _WORKER_STATE["pair"] = DeltaPair(Fraction(d3), Fraction(d4))


def _scan_eval(sample: tuple[float, int, int, int]) -> tuple[float | None, str | None]:
    u, l, k1, k2 = sample
    try:
        rep = secondary_v1(
            _WORKER_STATE["factory"], _WORKER_STATE["pair"], l, u, k1, k2
        )
        return rep.lhs, None
    except ZetaLadderError as exc:  # aggregate, do not abort the scan
        return None, f"{type(exc).__name__}: {exc}"


def invariance_scan(
    pair: DeltaPair,
    n_samples: int = 20,
    seed: int = 20260819,
    config: RunConfig = DEFAULT_CONFIG,
    u_range: tuple[float, float] = (0.3, 1.45),
    l_range: tuple[int, int] = (100, 260),
    k_range: tuple[int, int] = (1, 3),
    workers: int = 1,
    factory: ChainFactory | None = None,
) -> InvarianceScan:
    """Sample (U, L, {k1, k2}) at a fixed delta pair and summarize the spread.

    All samples are drawn up front from one seeded generator, so the set of
    evaluated parameter tuples -- and therefore the statistics -- do not
    depend on ``workers``.  Per-sample failures are collected, not raised,
    unless every sample fails.
    """
    if n_samples < 2:
        raise DomainTooSmall(f"need at least 2 samples, got {n_samples}")
    if not pair.is_rational:
        raise DomainTooSmall("scan pairs must be rational for worker transport")
    rng = np.random.default_rng(seed)
    ks = np.arange(k_range[0], k_range[1] + 1)
    samples: list[tuple[float, int, int, int]] = []
    for _ in range(n_samples):
        u = float(rng.uniform(*u_range))
        l = int(rng.integers(l_range[0], l_range[1] + 1))
        k1, k2 = (int(x) for x in rng.choice(ks, size=2, replace=False))
        samples.append((u, l, k1, k2))

    d3s, d4s = pair.label()
    if workers > 1:
        with ProcessPoolExecutor(
            max_workers=workers, initializer=_scan_init,
            initargs=(config, d3s, d4s),
        ) as pool:
            outcomes = list(pool.map(_scan_eval, samples))
    else:
        if factory is None:
            factory = ChainFactory(LadderModel(config))
        outcomes = []
        for u, l, k1, k2 in samples:
            try:
                rep = secondary_v1(factory, pair, l, u, k1, k2)
                outcomes.append((rep.lhs, None))
            except ZetaLadderError as exc:
                outcomes.append((None, f"{type(exc).__name__}: {exc}"))

    const = theorem1_constant(pair)
    good: list[tuple[dict[str, Any], float]] = []
    bad: list[tuple[dict[str, Any], str]] = []
    for (u, l, k1, k2), (lhs, err) in zip(samples, outcomes):
        params = _params(l, u, k1=k1, k2=k2, pair=pair)
        if lhs is None:
            bad.append((params, err or "unknown"))
        else:
            good.append((params, lhs))
    if not good:
        from .errors import NonConvergence

        raise NonConvergence(f"all {n_samples} scan samples failed: {bad[0][1]}")
    values = np.array([v for _, v in good])
    return InvarianceScan(
        seed=seed,
        constant=const,
        samples=good,
        failures=bad,
        mean=float(values.mean()),
        stddev=float(values.std()),
        max_rel_dev=float(np.max(np.abs(values - const)) / const),
    )
