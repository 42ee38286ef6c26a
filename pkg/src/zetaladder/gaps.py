"""Prime-counting diagnostics for the spacing between tower segments.

Consecutive tower segments are separated by distances that track
``(1 - gamma) * pi(pi L)`` with ``pi(x)`` the prime-counting function --
the same quantity that drives the ladder gap ``t - phi1(t) ~ (1-gamma) t / ln t``
via the prime number theorem.  This module provides an exact sieve-based
``prime_pi`` (the stated law names the counting function, not its smooth
approximations), the logarithmic integral as an auxiliary column, and
``gap_rho`` reports with the measured/predicted ratio.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import expi

from .config import EULER_GAMMA
from .errors import DomainTooSmall, IndexOutOfTower, RangeTooLarge
from .tower import IterationTower

__all__ = ["GapReport", "prime_pi", "li", "gap_rho", "gap_csv_rows"]

_SIEVE_CAP = 100_000_000

# growable shared sieve: _composite[i] says whether i is composite (i >= 2)
_sieve_mask = np.zeros(2, dtype=bool)


def _ensure_sieve(n: int) -> None:
    global _sieve_mask
    if n < len(_sieve_mask):
        return
    size = max(n + 1, 2 * len(_sieve_mask), 1024)
    mask = np.ones(size, dtype=bool)
    mask[:2] = False
    for p in range(2, int(math.isqrt(size - 1)) + 1):
        if mask[p]:
            mask[p * p:: p] = False
    _sieve_mask = mask


def prime_pi(x: float) -> int:
    """Exact count of primes <= x, by sieve; domain [2, 1e8]."""
    if x < 2:
        raise DomainTooSmall(f"prime_pi domain starts at 2, got {x}")
    if x > _SIEVE_CAP:
        raise RangeTooLarge(f"prime_pi sieve bound is {_SIEVE_CAP}, got {x}")
    n = int(math.floor(x))
    _ensure_sieve(n)
    return int(np.count_nonzero(_sieve_mask[: n + 1]))


def li(x: float) -> float:
    """Logarithmic integral Ei(log x) -- auxiliary smooth companion to prime_pi."""
    if x <= 1.0:
        raise DomainTooSmall(f"li requested at x={x} <= 1")
    return float(expi(math.log(x)))


@dataclass(frozen=True)
class GapReport:
    l: int
    u: float
    r: int
    rho: float
    predicted: float
    ratio: float
    li_predicted: float

    def csv_row(self) -> str:
        return (f"{self.l},{self.u!r},{self.r},{self.rho!r},"
                f"{self.predicted!r},{self.ratio!r}")


def gap_rho(tower: IterationTower, r: int) -> GapReport:
    """Distance between segments r and r+1 against (1-gamma) * pi(pi L)."""
    if r + 1 > tower.k:
        raise IndexOutOfTower(
            f"gap between segments {r} and {r + 1} of a depth-{tower.k} tower"
        )
    hi_r = tower.segment(r).hi
    lo_next = tower.segment(r + 1).lo
    rho = lo_next - hi_r
    x = math.pi * tower.l
    predicted = (1.0 - EULER_GAMMA) * prime_pi(x)
    return GapReport(
        l=tower.l, u=tower.u, r=r, rho=rho,
        predicted=predicted, ratio=rho / predicted,
        li_predicted=(1.0 - EULER_GAMMA) * li(x),
    )


def gap_csv_rows(reports: list[GapReport]) -> str:
    lines = ["L,U,r,rho,predicted,ratio"]
    lines.extend(rep.csv_row() for rep in reports)
    return "\n".join(lines) + "\n"
