"""Iteration towers and mean-value chains over the ladder map.

A **tower** over base window ``[pi L, pi L + U]`` is the sequence of segments

    seg_0 = [pi L, pi L + U],    seg_{r+1} = reverse_step(seg_r)

so the forward map phi1 sends seg_{r+1} onto seg_r and the k-fold iterate
phi1^k sends seg_k onto the base.  Because d(phi1)/dt = ztilde_sq exactly,
change of variables gives, for any continuous weight f on the base (written
in the offset v = t - pi L in [0, U]),

    integral over seg_k of  f(phi1^k(u) - pi L) * prod_{j<k} ztilde_sq(phi1^j(u)) du
        = integral_0^U f(v) dv .

The mean value theorem then produces a point xi = alpha_k in seg_k where the
integrand equals its mean

    f(alpha_0 - pi L) * prod_{r=1}^{k} ztilde_sq(alpha_r)  =  mass(f) / |seg_k| ,

with alpha_{r-1} = phi1(alpha_r).  ``solve_chain`` locates such a point by a
sign-change scan (the integrand oscillates through zero near every zero of Z,
so crossings are plentiful) and returns the full chain with its residual and
a log-space condition number.  Chains are cached per
(L, U, k, weight) so that repeated requests -- in particular the plain
``beta`` chain reused across several formulas -- are bit-identical.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from .config import DEFAULT_CONFIG, RunConfig
from .errors import (
    ConditionTooHigh,
    DomainTooSmall,
    IndexOutOfTower,
    RangeTooLarge,
)
from .ladder import LadderModel
from .numerics import find_level_crossing

__all__ = [
    "Segment",
    "IterationTower",
    "GeneratingFunction",
    "ChainPoints",
    "ChainFactory",
    "gf_one",
    "gf_sin2",
    "gf_cos2",
    "gf_power",
    "make_chain_weight",
    "chain_identity_residual",
    "lemma_residual",
]


@dataclass(frozen=True)
class Segment:
    lo: float
    hi: float

    @property
    def length(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)

    def contains(self, t: float, slack: float = 1e-9) -> bool:
        return self.lo - slack <= t <= self.hi + slack


@dataclass(frozen=True)
class IterationTower:
    """Segments seg_0..seg_k of one tower; phi1 maps seg_{r+1} onto seg_r."""

    l: int
    u: float
    segments: tuple[Segment, ...]

    @property
    def k(self) -> int:
        return len(self.segments) - 1

    def segment(self, r: int) -> Segment:
        if not 0 <= r <= self.k:
            raise IndexOutOfTower(f"segment {r} of a depth-{self.k} tower")
        return self.segments[r]

    @property
    def base(self) -> Segment:
        return self.segments[0]


def _check_window(l: int, u: float, k: int, config: RunConfig) -> int:
    if int(l) != l:
        raise DomainTooSmall(f"tower base index L={l!r} must be an integer")
    l = int(l)
    if l < config.l_floor:
        raise DomainTooSmall(f"tower base index L={l} below floor {config.l_floor}")
    if not u > 0.0:
        raise DomainTooSmall(f"window width U={u} must be positive")
    if u >= 0.5 * math.pi:
        raise RangeTooLarge(f"window width U={u} must stay below pi/2")
    if not 0 <= k <= config.k_max:
        raise IndexOutOfTower(f"tower depth k={k} outside [0, {config.k_max}]")
    return l


# -- generating weights ------------------------------------------------------


@dataclass(frozen=True)
class GeneratingFunction:
    """Weight on the base window, in the offset variable v in [0, U].

    ``primitive`` is the exact antiderivative with primitive(0) = 0, so the
    window mass is primitive(U) -- closed form, no quadrature.
    """

    key: str
    fn: Callable[[float], float]
    primitive: Callable[[float], float]

    def mass(self, u: float) -> float:
        return self.primitive(u)


def gf_one() -> GeneratingFunction:
    return GeneratingFunction("one", lambda v: 1.0, lambda v: v)


def gf_sin2() -> GeneratingFunction:
    return GeneratingFunction(
        "sin2",
        lambda v: math.sin(v) ** 2,
        lambda v: 0.5 * v - 0.25 * math.sin(2.0 * v),
    )


def gf_cos2() -> GeneratingFunction:
    return GeneratingFunction(
        "cos2",
        lambda v: math.cos(v) ** 2,
        lambda v: 0.5 * v + 0.25 * math.sin(2.0 * v),
    )


def gf_power(delta: Fraction | float) -> GeneratingFunction:
    """v -> v^delta for delta > -1; exact mass U^(1+delta)/(1+delta)."""
    d = float(delta)
    if d <= -1.0:
        raise DomainTooSmall(f"power weight needs delta > -1, got {delta}")
    if isinstance(delta, Fraction):
        key = f"pow:{delta.numerator}/{delta.denominator}"
    else:
        key = f"pow:{delta!r}"
    return GeneratingFunction(
        key,
        lambda v: v ** d,
        lambda v: v ** (1.0 + d) / (1.0 + d),
    )


# -- chains -------------------------------------------------------------------


@dataclass(frozen=True)
class ChainPoints:
    """A solved mean-value chain alpha_0..alpha_k with its product identity.

    ``alpha[r]`` lies in segment r; ``zt2[r-1] = ztilde_sq(alpha[r])`` for
    r = 1..k; ``omega[r]`` is the normalizer slope at alpha[r] for every r.
    The defining identity is

        f(alpha[0] - pi L) * prod(zt2) = level = mass(f) / |seg_k| .
    """

    l: int
    u: float
    k: int
    f_key: str
    alpha: np.ndarray
    zt2: np.ndarray
    omega: np.ndarray
    f0: float
    level: float
    rel_residual: float
    condition: float
    flagged: bool

    @property
    def xi(self) -> float:
        return float(self.alpha[-1])

    @property
    def product(self) -> float:
        return self.f0 * float(np.prod(self.zt2))


def make_chain_weight(
    model: LadderModel, tower: IterationTower, gf: GeneratingFunction
) -> Callable[[float], float]:
    """The integrand on seg_k whose mean over seg_k is mass(f)/|seg_k|."""
    k = tower.k
    base_lo = tower.base.lo

    def g(xi: float) -> float:
        t = xi
        acc = 1.0
        for _ in range(k):
            acc *= model.ztilde_sq(t)
            t = model.phi1(t)
        return acc * gf.fn(t - base_lo)

    return g


class ChainFactory:
    """Builds towers and solves chains, caching both for bit-identical reuse."""

    def __init__(self, model: LadderModel):
        self.model = model
        self._towers: dict[tuple[int, float, int], IterationTower] = {}
        self._chains: dict[tuple[int, float, int, str], ChainPoints] = {}

    # towers -----------------------------------------------------------------

    def tower(self, l: int, u: float, k: int) -> IterationTower:
        cfg = self.model.config
        l = _check_window(l, u, k, cfg)
        key = (l, u, k)
        hit = self._towers.get(key)
        if hit is not None:
            return hit
        # reuse the deepest cached tower over the same window
        best: IterationTower | None = None
        for (l2, u2, k2), t2 in self._towers.items():
            if l2 == l and u2 == u and (best is None or k2 > best.k):
                best = t2
        segs = list(best.segments[: k + 1]) if best else []
        if not segs:
            lo = math.pi * l
            segs.append(Segment(lo, lo + u))
        while len(segs) <= k:
            prev = segs[-1]
            segs.append(
                Segment(self.model.reverse_step(prev.lo),
                        self.model.reverse_step(prev.hi))
            )
        tower = IterationTower(l=l, u=u, segments=tuple(segs))
        self._towers[key] = tower
        return tower

    # chains -----------------------------------------------------------------

    def solve(self, l: int, u: float, k: int, gf: GeneratingFunction) -> ChainPoints:
        cfg = self.model.config
        l = _check_window(l, u, k, cfg)
        key = (l, u, k, gf.key)
        hit = self._chains.get(key)
        if hit is not None:
            return hit
        chain = self._solve_fresh(l, u, k, gf)
        self._chains[key] = chain
        return chain

    def beta(self, l: int, u: float, k: int) -> ChainPoints:
        """The plain chain (f = 1): prod ztilde_sq(beta_r) = U / |seg_k|."""
        return self.solve(l, u, k, gf_one())

    def _solve_fresh(self, l: int, u: float, k: int,
                     gf: GeneratingFunction) -> ChainPoints:
        model = self.model
        cfg = model.config
        tower = self.tower(l, u, k)
        seg_k = tower.segment(k)
        level = gf.mass(u) / seg_k.length

        if k == 0 and gf.key == "one":
            # the identity is the empty product; anchor at the window midpoint
            xi = tower.base.mid
        else:
            g = make_chain_weight(model, tower, gf)
            xi = find_level_crossing(
                g, seg_k.lo, seg_k.hi, level,
                scan_points=cfg.scan_points,
                tol=cfg.root_tol,
                refine_max=cfg.scan_refine_max,
            )
        return self._assemble(tower, gf, xi, level)

    def _assemble(self, tower: IterationTower, gf: GeneratingFunction,
                  xi: float, level: float) -> ChainPoints:
        model = self.model
        cfg = model.config
        k = tower.k
        alpha = np.empty(k + 1)
        zt2 = np.empty(k)
        omega = np.empty(k + 1)
        t = xi
        for r in range(k, 0, -1):
            alpha[r] = t
            omega[r] = model.omega(t)
            zt2[r - 1] = model.ztilde_sq(t)
            t = model.phi1(t)
        alpha[0] = t
        omega[0] = _omega_direct(model, t)
        f0 = gf.fn(alpha[0] - tower.base.lo)

        log_level = math.log(level)
        logs = [math.log(v) if v > 0.0 else -math.inf for v in zt2]
        log_f0 = math.log(f0) if f0 > 0.0 else -math.inf
        condition = abs(log_f0) + sum(abs(x) for x in logs) if f0 > 0.0 else math.inf
        if math.isinf(condition) or condition > cfg.kappa_max:
            raise ConditionTooHigh(
                f"chain at L={tower.l}, U={tower.u}, k={k}, f={gf.key} "
                f"landed on a near-zero factor",
                condition=condition,
            )
        rel = abs(math.expm1((log_f0 + sum(logs)) - log_level))
        return ChainPoints(
            l=tower.l, u=tower.u, k=k, f_key=gf.key,
            alpha=alpha, zt2=zt2, omega=omega, f0=f0, level=level,
            rel_residual=rel, condition=condition,
            flagged=condition > cfg.kappa_flag,
        )


def _omega_direct(model: LadderModel, t: float) -> float:
    """omega at a point that may sit below the phi1 domain guard.

    alpha_0 lives on the base window, which can start below t_start for the
    smallest admissible towers; the slope there is still well defined through
    the cumulative mass, so bypass the guard rather than refuse.
    """
    from .ladder import normalizer, normalizer_prime

    if t >= model.config.t_start:
        return model.omega(t)
    # same Newton iteration as phi1, without the t_start guard
    a = model.cumulative_hl(t)
    y = max(t, model.config.t_min)
    for _ in range(64):
        step = (normalizer(y) - a) / normalizer_prime(y)
        y -= step
        if y < model.config.t_min:
            y = model.config.t_min
        if abs(step) <= 0.25 * model.config.root_tol:
            break
    return normalizer_prime(y)


def chain_identity_residual(model: LadderModel, chain: ChainPoints) -> float:
    """Freshly re-evaluate the defining chain identity at the stored points.

    Recomputes every factor from scratch (no reuse of the stored zt2) and
    returns |lhs/rhs - 1| accumulated in log space, so enormous or tiny
    factors do not overflow the comparison.
    """
    gf = _gf_from_key(chain.f_key)
    base_lo = math.pi * chain.l
    log_lhs = 0.0
    f0 = gf.fn(float(chain.alpha[0]) - base_lo)
    if f0 <= 0.0:
        raise ConditionTooHigh(
            f"stored chain has nonpositive weight factor f0={f0}",
            condition=math.inf,
        )
    log_lhs += math.log(f0)
    for r in range(1, chain.k + 1):
        v = model.ztilde_sq(float(chain.alpha[r]))
        if v <= 0.0:
            raise ConditionTooHigh(
                f"stored chain point alpha_{r} sits on a zero of Z",
                condition=math.inf,
            )
        log_lhs += math.log(v)
    return abs(math.expm1(log_lhs - math.log(chain.level)))


def lemma_residual(model: LadderModel, alpha_chain: ChainPoints,
                   beta_chain: ChainPoints) -> float:
    """Residual of the displayed factorization identity, freshly re-evaluated.

    The lemma form pairs an f-chain with the plain chain at the same
    (L, U, k):

        prod_r ztilde_sq(alpha_r) / ztilde_sq(beta_r)  =  mean(f) / f(alpha_0)

    Every ztilde_sq is recomputed from scratch at the stored points and the
    comparison runs in log space; the result is |LHS/RHS - 1|.
    """
    if (alpha_chain.l, alpha_chain.u, alpha_chain.k) != (
        beta_chain.l, beta_chain.u, beta_chain.k
    ):
        raise ValueError("lemma_residual needs chains over the same (L, U, k)")
    if beta_chain.f_key != "one":
        raise ValueError("second argument must be the plain (f = 1) chain")
    gf = _gf_from_key(alpha_chain.f_key)
    base_lo = math.pi * alpha_chain.l
    f0 = gf.fn(float(alpha_chain.alpha[0]) - base_lo)
    mean_f = gf.mass(alpha_chain.u) / alpha_chain.u
    if f0 <= 0.0:
        raise ConditionTooHigh(
            f"stored chain has nonpositive weight factor f0={f0}",
            condition=math.inf,
        )
    log_ratio = math.log(f0) - math.log(mean_f)
    for r in range(1, alpha_chain.k + 1):
        va = model.ztilde_sq(float(alpha_chain.alpha[r]))
        vb = model.ztilde_sq(float(beta_chain.alpha[r]))
        if va <= 0.0 or vb <= 0.0:
            raise ConditionTooHigh(
                f"stored chain point at iterate {r} sits on a zero of Z",
                condition=math.inf,
            )
        log_ratio += math.log(va) - math.log(vb)
    return abs(math.expm1(log_ratio))


def _gf_from_key(key: str) -> GeneratingFunction:
    if key == "one":
        return gf_one()
    if key == "sin2":
        return gf_sin2()
    if key == "cos2":
        return gf_cos2()
    if key.startswith("pow:"):
        delta_part = key[4:]
        if "/" in delta_part:
            return gf_power(Fraction(delta_part))
        return gf_power(float(delta_part))
    raise KeyError(f"unknown generating function key {key!r}")
