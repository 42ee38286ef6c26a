"""The second-moment ladder: cumulative Z^2 mass and its normalizer inverse.

The model has three ingredients:

* the **normalizer** V(y) = y log y + (gamma - log 2pi) y, the leading shape
  of the mean-square integral of Z; V'(y) = log y + 1 + gamma - log 2pi is
  positive for y > 2 pi e^{-1-gamma} ~= 1.3, so V is invertible on the working
  domain;
* the **cumulative mass** A(T) = integral of Z(u)^2 over [0, T], maintained as
  a knot table (spacing <= 2, default 0.5) plus a fresh oscillation-capped
  quadrature from the nearest knot at or below the query -- so A is exact up
  to quadrature on every call, deterministic, and extendable in place without
  disturbing existing knots;
* the **forward map** phi1(t) = V^{-1}(A(t)), whose derivative is exactly
  ztilde_sq(t) = Z(t)^2 / V'(phi1(t)); the **reverse step** solves
  A(u) = V(x), so phi1(reverse_step(x)) = x up to the solver tolerances.

At working heights phi1(t) < t and the gap t - phi1(t) tracks
(1 - gamma) t / log t; both show up in the test suite as sampled properties,
not contracts.

Persistence: ``save_table``/``load_table`` write a versioned CSV ``t,a`` with
the configuration checksum in a header comment.  Loading under a different
configuration raises :class:`CacheHashMismatch` rather than silently mixing
incompatible values.
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field

import numpy as np

from . import _kernels, zeta
from .config import DEFAULT_CONFIG, EULER_GAMMA, TABLE_FORMAT, RunConfig
from .errors import (
    CacheHashMismatch,
    DomainTooSmall,
    TableExhausted,
)
from .numerics import Bracket, integrate, invert_increasing

__all__ = [
    "Constants",
    "CumulativeTable",
    "LadderModel",
    "normalizer",
    "normalizer_prime",
]

_LOG_TWO_PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class Constants:
    """Fixed constants of the normalizer family."""

    euler_gamma: float = EULER_GAMMA
    log_two_pi: float = _LOG_TWO_PI
    #: y below which V' <= 0 and the model is meaningless
    monotone_floor: float = 2.0 * math.pi * math.exp(-1.0 - EULER_GAMMA)


CONSTANTS = Constants()


def normalizer(y: float) -> float:
    """V(y) = y log y + (gamma - log 2pi) y, for y > 0."""
    if y <= 0.0:
        raise DomainTooSmall(f"normalizer requested at y={y} <= 0")
    return y * math.log(y) + (EULER_GAMMA - _LOG_TWO_PI) * y


def normalizer_prime(y: float) -> float:
    """V'(y) = log y + 1 + gamma - log 2pi, for y > 0."""
    if y <= 0.0:
        raise DomainTooSmall(f"normalizer_prime requested at y={y} <= 0")
    return math.log(y) + 1.0 + EULER_GAMMA - _LOG_TWO_PI


def _min_wavelength(b: float) -> float:
    """Shortest Z oscillation scale on [0, b]: 2 pi / log(b / 2pi), floored."""
    return 2.0 * math.pi / max(0.5, math.log(max(b, 7.0) / (2.0 * math.pi)))


@dataclass
class CumulativeTable:
    """Knot table for A(T): values[j] = A(j * spacing), append-only."""

    spacing: float
    config_hash: str
    values: list[float] = field(default_factory=lambda: [0.0])

    @property
    def t_covered(self) -> float:
        return (len(self.values) - 1) * self.spacing

    def knot_below(self, t: float) -> int:
        j = int(t / self.spacing)
        return min(j, len(self.values) - 1)


class LadderModel:
    """Cumulative mass, forward map, and reverse step under one configuration.

    Not thread-safe (the table extends lazily); scan-level parallelism forks
    processes instead.
    """

    def __init__(self, config: RunConfig = DEFAULT_CONFIG,
                 table: CumulativeTable | None = None):
        self.config = config
        if table is not None and table.config_hash != config.config_hash():
            raise CacheHashMismatch(
                f"table built under {table.config_hash}, config is {config.config_hash()}"
            )
        self.table = table or CumulativeTable(
            spacing=config.knot_spacing, config_hash=config.config_hash()
        )

    # -- cumulative mass ---------------------------------------------------

    def _zsq_between(self, a: float, b: float, tol: float) -> float:
        """Integral of Z^2 over [a, b], routed across the evaluation switch."""
        if b <= a:
            return 0.0
        switch = self.config.rs_switch
        total = 0.0
        if a < switch:
            top = min(b, switch)
            cfg = self.config
            res = integrate(
                lambda u: zeta.hardy_z(u, cfg).z ** 2,
                a, top, tol=tol * max(top - a, 1e-6) / max(b - a, 1e-6),
                min_wavelength=_min_wavelength(top),
            )
            total += res.value
            a = top
        if b > a:
            val, _err, _n = _kernels.zsq_integral_rs(
                a, b, tol, _min_wavelength(b), self.config.rs_terms
            )
            total += val
        return float(total)

    def extend_to(self, t: float) -> None:
        """Grow the knot table to cover t; existing knots never change."""
        if t > self.config.t_table_max:
            raise TableExhausted(
                f"requested coverage {t}, hard ceiling {self.config.t_table_max}"
            )
        h = self.table.spacing
        need = int(math.ceil(t / h))
        vals = self.table.values
        tol = self.config.quad_tol * h
        while len(vals) - 1 < need:
            j = len(vals) - 1
            inc = self._zsq_between(j * h, (j + 1) * h, tol)
            vals.append(float(vals[-1] + inc))

    def cumulative_hl(self, t: float) -> float:
        """A(t): nearest knot at or below t plus a fresh local quadrature."""
        if t < 0.0:
            raise DomainTooSmall(f"cumulative mass requested at t={t} < 0")
        if t == 0.0:
            return 0.0
        self.extend_to(t)
        j = self.table.knot_below(t)
        t0 = j * self.table.spacing
        if t0 == t:
            return self.table.values[j]
        return self.table.values[j] + self._zsq_between(
            t0, t, self.config.quad_tol * self.table.spacing
        )

    # -- forward map and friends --------------------------------------------

    def phi1(self, t: float) -> float:
        """V^{-1}(A(t)): Newton on the convex normalizer, ~1e-12 residual."""
        cfg = self.config
        if t < cfg.t_start:
            raise DomainTooSmall(f"phi1 requested at t={t} < t_start={cfg.t_start}")
        a = self.cumulative_hl(t)
        v_min = normalizer(cfg.t_min)
        if a < v_min:
            raise DomainTooSmall(
                f"A({t})={a} below normalizer floor V({cfg.t_min})={v_min}"
            )
        # V is convex and increasing here, so Newton from above converges
        # monotonically; t itself lies above the root at working heights.
        y = t
        for _ in range(64):
            step = (normalizer(y) - a) / normalizer_prime(y)
            y -= step
            if y < cfg.t_min:
                y = cfg.t_min
            if abs(step) <= 0.25 * cfg.root_tol:
                break
        return y

    def omega(self, t: float) -> float:
        """Slope of the normalizer at the mapped point: V'(phi1(t)) > 0."""
        return normalizer_prime(self.phi1(t))

    def ztilde_sq(self, t: float) -> float:
        """Z(t)^2 / omega(t) -- the exact derivative of phi1 at t."""
        z = zeta.hardy_z(t, self.config).z
        return z * z / self.omega(t)

    def phi_chain(self, t: float, depth: int) -> np.ndarray:
        """[t, phi1(t), ..., phi1^depth(t)] with each step reusing the last."""
        pts = np.empty(depth + 1)
        pts[0] = t
        for j in range(depth):
            pts[j + 1] = self.phi1(pts[j])
        return pts

    def reverse_step(self, x: float) -> float:
        """The unique u with A(u) = V(x); above working heights u > x."""
        cfg = self.config
        if x < cfg.t_min:
            raise DomainTooSmall(f"reverse_step requested at x={x} < t_min={cfg.t_min}")
        target = normalizer(x)
        # expand a bracket upward from x; the expected gap is
        # (1-gamma) x / log x with O(sqrt x) fluctuation
        hi = x + (1.0 - EULER_GAMMA) * x / max(math.log(x), 1.0) + 5.0
        lo = 0.0
        for _ in range(64):
            self.extend_to(hi)
            if self.cumulative_hl(hi) >= target:
                break
            lo = hi
            hi = x + (hi - x) * 1.6 + 5.0
        else:
            raise TableExhausted(f"could not bracket reverse step from x={x}")
        return invert_increasing(
            self.cumulative_hl, Bracket(lo, hi), target, cfg.root_tol
        )

    # -- persistence ---------------------------------------------------------

    def default_cache_path(self) -> str:
        d = self.config.resolve_cache_dir()
        return os.path.join(d, f"table_{self.table.config_hash}.csv")

    def save_table(self, path: str | None = None) -> str:
        path = path or self.default_cache_path()
        os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
        tmp = path + ".tmp"
        with open(tmp, "w") as fh:
            fh.write(f"# {TABLE_FORMAT}\n")
            fh.write(f"# config_hash={self.table.config_hash}\n")
            fh.write(f"# spacing={self.table.spacing!r}\n")
            fh.write("t,a\n")
            for j, v in enumerate(self.table.values):
                fh.write(f"{j * self.table.spacing!r},{float(v)!r}\n")
        os.replace(tmp, path)
        return path

    @classmethod
    def load_table(cls, path: str, config: RunConfig = DEFAULT_CONFIG) -> "LadderModel":
        header: dict[str, str] = {}
        values: list[float] = []
        with open(path) as fh:
            first = fh.readline().strip()
            if first != f"# {TABLE_FORMAT}":
                raise CacheHashMismatch(f"unrecognized table format line: {first!r}")
            for line in fh:
                line = line.strip()
                if line.startswith("#"):
                    key, _, val = line[1:].strip().partition("=")
                    header[key.strip()] = val.strip()
                    continue
                if line == "t,a" or not line:
                    continue
                _t, _, a = line.partition(",")
                values.append(float(a))
        want = config.config_hash()
        got = header.get("config_hash", "<missing>")
        if got != want:
            raise CacheHashMismatch(
                f"table {path} was built under config {got}, current is {want}"
            )
        spacing = float(header.get("spacing", repr(config.knot_spacing)))
        table = CumulativeTable(spacing=spacing, config_hash=got, values=values)
        return cls(config=config, table=table)

    def load_or_build(self, t_target: float) -> None:
        """Populate from the default cache when present, then extend and save."""
        path = self.default_cache_path()
        if os.path.exists(path):
            other = type(self).load_table(path, self.config)
            if len(other.table.values) > len(self.table.values):
                self.table = other.table
        self.extend_to(t_target)
        self.save_table(path)
