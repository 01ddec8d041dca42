"""Pure-numpy fallback for the multi-target Cauchy-sum kernel.

Same contract as the compiled extension: given quadrature nodes ``z``
and two coefficient vectors (the Kronrod- and Gauss-weighted integrand
samples), accumulate

    hi[m] = sum_j coef_hi[j] / (z[j] - t[m])
    lo[m] = sum_j coef_lo[j] / (z[j] - t[m])

for every target ``t[m]``.  Targets are processed in chunks sized to a
fixed memory budget; the result is deterministic regardless of
chunking.
"""

from __future__ import annotations

import numpy as np

_CHUNK_BUDGET = 4_000_000  # complex entries per temporary


def cauchy_pair_sums(nodes, coef_hi, coef_lo, targets):
    nodes = np.ascontiguousarray(nodes, dtype=np.complex128)
    coef_hi = np.ascontiguousarray(coef_hi, dtype=np.complex128)
    coef_lo = np.ascontiguousarray(coef_lo, dtype=np.complex128)
    targets = np.ascontiguousarray(targets, dtype=np.complex128)
    n = nodes.size
    m = targets.size
    hi = np.empty(m, dtype=np.complex128)
    lo = np.empty(m, dtype=np.complex128)
    chunk = max(1, _CHUNK_BUDGET // max(n, 1))
    for start in range(0, m, chunk):
        stop = min(start + chunk, m)
        inv = 1.0 / (nodes[None, :] - targets[start:stop, None])
        hi[start:stop] = inv @ coef_hi
        lo[start:stop] = inv @ coef_lo
    return hi, lo
