"""Nested Clenshaw-Curtis rule pair used by all quadrature in the package.

The high rule has N_HI+1 = 33 nodes x_j = cos(pi j / 32) on [-1, 1]; the low
rule's 17 nodes are exactly the even-indexed high nodes, so one batch of 33
integrand values yields both estimates and |I_hi - I_lo| is a usable error
estimate. Weights come from integrating the Chebyshev interpolant:

    w_j = (c_j / N) * (1 - sum_{k even, 2<=k<=N} b_k cos(k j pi / N) / (k^2 - 1))

with endpoint halving; they are computed once here and verified by the test
suite against polynomial exactness (degree <= N+1 for even N).
"""
from __future__ import annotations

import numpy as np

N_LO = 16
N_HI = 32


def _cc_weights(n: int) -> np.ndarray:
    j = np.arange(n + 1)
    w = np.ones(n + 1)
    for k in range(2, n + 1, 2):
        b = 1.0 if k == n else 2.0
        w -= b * np.cos(k * j * np.pi / n) / (k * k - 1.0)
    w *= 2.0 / n
    w[0] *= 0.5
    w[n] *= 0.5
    return w


#: nodes of the 33-point rule on [-1, 1], descending from +1 to -1
NODES_HI: np.ndarray = np.cos(np.arange(N_HI + 1) * np.pi / N_HI)
WEIGHTS_HI: np.ndarray = _cc_weights(N_HI)
#: low-rule weights aligned to the even-indexed high nodes
WEIGHTS_LO: np.ndarray = _cc_weights(N_LO)

# frozen copies for kernel consumption (contiguous float64)
NODES_HI = np.ascontiguousarray(NODES_HI, dtype=np.float64)
WEIGHTS_HI = np.ascontiguousarray(WEIGHTS_HI, dtype=np.float64)
WEIGHTS_LO = np.ascontiguousarray(WEIGHTS_LO, dtype=np.float64)
