"""Run configuration shared by the library and the CLI."""
from __future__ import annotations

import hashlib
import os
from dataclasses import dataclass, field, replace
from typing import Any


#: Euler's constant, to double precision.
EULER_GAMMA = 0.5772156649015329

#: Table file format tag; bump when the on-disk layout or the meaning of any
#: hashed field changes.
TABLE_FORMAT = "zl-table-v1"


@dataclass(frozen=True)
class RunConfig:
    """Numerical knobs. Everything that changes computed values is hashed.

    The defaults are tuned so that chain residuals land near 1e-9, two orders
    below the 1e-6 acceptance tolerances.
    """

    # quadrature: absolute tolerance per unit length of integration range
    quad_tol: float = 1e-10
    # root solves: final bracket width (absolute, in t units)
    root_tol: float = 1e-11
    # Riemann-Siegel correction depth: number of correction terms (2..4)
    rs_terms: int = 4
    # below this height Z is evaluated through the alternating-series route
    rs_switch: float = 100.0
    # normalizer family (single member; see ladder.normalizer)
    normalizer_id: str = "HL_STANDARD"
    # cumulative-table knot spacing in t
    knot_spacing: float = 0.5
    # domain floor for the normalizer inversion
    t_min: float = 4.0
    # forward-map domain floor (A(t) must clear V(t_min) with margin)
    t_start: float = 200.0
    # hard ceiling for table extension (resource guard)
    t_table_max: float = 2.0e5
    # tower defaults
    l_floor: int = 100
    k_max: int = 4
    # level-crossing scan: initial interior sample count and doubling depth
    scan_points: int = 64
    scan_refine_max: int = 8
    # condition handling: flag above kappa_flag, refuse above kappa_max
    kappa_flag: float = 1e3
    kappa_max: float = 1e5
    # cache file override (None -> env var ZETALADDER_CACHE_DIR -> ./.zl-cache)
    cache_dir: str | None = None

    def config_hash(self) -> str:
        """Short checksum over every field that affects cached table values."""
        payload = "|".join([
            TABLE_FORMAT,
            f"quad_tol={self.quad_tol!r}",
            f"normalizer={self.normalizer_id}",
            f"rs_terms={self.rs_terms}",
            f"rs_switch={self.rs_switch!r}",
            f"knot_spacing={self.knot_spacing!r}",
        ])
        return hashlib.sha256(payload.encode()).hexdigest()[:16]

    def resolve_cache_dir(self) -> str:
        if self.cache_dir is not None:
            return self.cache_dir
        env = os.environ.get("ZETALADDER_CACHE_DIR")
        if env:
            return env
        return os.path.join(os.getcwd(), ".zl-cache")

    def with_overrides(self, **kwargs: Any) -> "RunConfig":
        return replace(self, **kwargs)


DEFAULT_CONFIG = RunConfig()
