"""Adaptive quadrature, monotone inversion, and leftmost level crossings.

These are the only numerical primitives the rest of the package is allowed to
use for integrals and root solves, so their contracts are deliberately narrow:

* :func:`integrate` -- absolute-tolerance adaptive quadrature built on the
  nested Clenshaw-Curtis 17/33 pair with interval halving.  For oscillatory
  integrands the caller passes ``min_wavelength`` and the initial panels are
  capped at half of it, so no panel ever straddles more than half an
  oscillation.
* :func:`invert_increasing` -- bisection for g(x) = target with g strictly
  increasing on the bracket.
* :func:`find_level_crossing` -- leftmost solution of g(x) = level on an open
  interval, located by a uniform interior scan (refined by doubling when no
  sign change is found) and polished by bisection.

Everything is deterministic: fixed node counts, fixed refinement policy, no
randomness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

from ._quadrule import NODES_HI, WEIGHTS_HI, WEIGHTS_LO
from .errors import BracketInvalid, NoCrossing, NonConvergence

__all__ = [
    "QuadratureResult",
    "Bracket",
    "integrate",
    "invert_increasing",
    "find_level_crossing",
]

#: hard cap on panel splitting depth before giving up
_MAX_SPLIT_DEPTH = 48
#: hard cap on total accepted panels (runaway guard)
_MAX_PANELS = 200_000


@dataclass(frozen=True)
class QuadratureResult:
    """Value with its accumulated error estimate and cost."""

    value: float
    error_estimate: float
    evaluations: int

    def __float__(self) -> float:  # convenience for arithmetic in callers
        return self.value


@dataclass(frozen=True)
class Bracket:
    """Closed interval [lo, hi] known to contain the sought point."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not (self.lo <= self.hi) or not math.isfinite(self.lo) or not math.isfinite(self.hi):
            raise BracketInvalid(f"bad bracket [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)


def _panel(f: Callable[[float], float], a: float, b: float) -> tuple[float, float, int]:
    """One 33-point panel: (high estimate, |hi-lo| error estimate, evals)."""
    half = 0.5 * (b - a)
    mid = 0.5 * (a + b)
    hi = 0.0
    lo = 0.0
    for j in range(NODES_HI.shape[0]):
        v = f(mid + half * NODES_HI[j])
        hi += WEIGHTS_HI[j] * v
        if j % 2 == 0:
            lo += WEIGHTS_LO[j // 2] * v
    return hi * half, abs(hi - lo) * half, NODES_HI.shape[0]


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol: float,
    min_wavelength: float | None = None,
) -> QuadratureResult:
    """Integrate f over [a, b] to absolute tolerance ``tol``.

    ``min_wavelength``, when given, caps the initial panel width at half the
    shortest oscillation the integrand contains; adaptivity then only ever
    shrinks panels further.  Raises :class:`NonConvergence` when the tolerance
    cannot be met within the splitting-depth budget.
    """
    if not (tol > 0.0):
        raise ValueError("tol must be positive")
    if a == b:
        return QuadratureResult(0.0, 0.0, 0)
    sign = 1.0
    if b < a:
        a, b = b, a
        sign = -1.0

    width = b - a
    if min_wavelength is not None and min_wavelength > 0.0:
        n0 = max(1, math.ceil(width / (0.5 * min_wavelength)))
    else:
        n0 = 1
    # stack of (lo, hi, tol_share, depth); deterministic LIFO processing
    edges = [a + width * i / n0 for i in range(n0 + 1)]
    stack = [(edges[i], edges[i + 1], tol / n0, 0) for i in range(n0)]
    stack.reverse()

    total = 0.0
    err_total = 0.0
    evals = 0
    panels = 0
    while stack:
        lo, hi, tshare, depth = stack.pop()
        val, err, n = _panel(f, lo, hi)
        evals += n
        # accept on meeting the local share or on hitting resolution limits
        if err <= tshare or (hi - lo) <= 1e-14 * max(1.0, abs(lo)):
            total += val
            err_total += err
            panels += 1
            if panels > _MAX_PANELS:
                raise NonConvergence(
                    f"panel budget exceeded integrating [{a}, {b}]", achieved=err_total
                )
            continue
        if depth >= _MAX_SPLIT_DEPTH:
            raise NonConvergence(
                f"splitting depth exceeded at [{lo}, {hi}] (err {err:.3e} > {tshare:.3e})",
                achieved=err,
            )
        mid = 0.5 * (lo + hi)
        stack.append((mid, hi, 0.5 * tshare, depth + 1))
        stack.append((lo, mid, 0.5 * tshare, depth + 1))
    return QuadratureResult(sign * total, err_total, evals)


def invert_increasing(
    g: Callable[[float], float],
    bracket: Bracket,
    target: float,
    tol: float,
) -> float:
    """Solve g(x) = target for strictly increasing g on the bracket.

    Plain bisection: ~50 iterations regardless of g's shape, returning the
    midpoint of a final bracket of width <= tol.  The endpoint values must
    enclose the target or :class:`BracketInvalid` is raised.
    """
    lo, hi = bracket.lo, bracket.hi
    glo = g(lo) - target
    ghi = g(hi) - target
    if glo > 0.0 or ghi < 0.0:
        raise BracketInvalid(
            f"target {target!r} not enclosed: g({lo!r})-target={glo!r}, g({hi!r})-target={ghi!r}"
        )
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:  # double-precision floor
            break
        gm = g(mid) - target
        if gm == 0.0:
            return mid
        if gm < 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_level_crossing(
    g: Callable[[float], float],
    lo: float,
    hi: float,
    level: float,
    scan_points: int = 64,
    tol: float = 1e-11,
    refine_max: int = 8,
) -> float:
    """Leftmost x in the open interval (lo, hi) with g(x) = level.

    A uniform scan over ``scan_points`` interior samples looks for the first
    sign change of g - level; if none is found the scan density is doubled up
    to ``refine_max`` times before :class:`NoCrossing` is raised.  The first
    sign-changing sub-interval is polished by bisection to width <= tol and
    the midpoint returned.  An exact hit g(x) == level returns that x at once
    (a constant-offset g therefore returns the leftmost scan point, the
    documented tie-break).
    """
    if not (hi > lo):
        raise BracketInvalid(f"empty interval ({lo}, {hi})")
    n = max(2, scan_points)
    for _ in range(refine_max + 1):
        h = (hi - lo) / (n + 1)
        x_prev = lo + h
        f_prev = g(x_prev) - level
        if f_prev == 0.0:
            return x_prev
        found = None
        for i in range(2, n + 1):
            x = lo + i * h
            fx = g(x) - level
            if fx == 0.0:
                return x
            if f_prev * fx < 0.0:
                found = (x_prev, x, f_prev)
                break
            x_prev, f_prev = x, fx
        if found is not None:
            blo, bhi, flo = found
            while bhi - blo > tol:
                mid = 0.5 * (blo + bhi)
                if mid <= blo or mid >= bhi:
                    break
                fm = g(mid) - level
                if fm == 0.0:
                    return mid
                if flo * fm < 0.0:
                    bhi = mid
                else:
                    blo, flo = mid, fm
            return 0.5 * (blo + bhi)
        n *= 2
    raise NoCrossing(
        f"no crossing of level {level!r} on ({lo!r}, {hi!r}) after {refine_max} refinements"
    )
