# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernel for the multi-target Cauchy sums.

The portrait and sweep hot loop: for every target t accumulate
sum_j coef_hi[j]/(z[j]-t) and sum_j coef_lo[j]/(z[j]-t) without
materialising the N x M difference matrix.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def cauchy_pair_sums(cnp.ndarray[cnp.complex128_t, ndim=1] nodes,
                     cnp.ndarray[cnp.complex128_t, ndim=1] coef_hi,
                     cnp.ndarray[cnp.complex128_t, ndim=1] coef_lo,
                     cnp.ndarray[cnp.complex128_t, ndim=1] targets):
    cdef Py_ssize_t n = nodes.shape[0]
    cdef Py_ssize_t m = targets.shape[0]
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] hi = np.empty(m, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] lo = np.empty(m, dtype=np.complex128)
    cdef double complex s_hi, s_lo, inv, t
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(m):
            t = targets[i]
            s_hi = 0
            s_lo = 0
            for j in range(n):
                inv = 1.0 / (nodes[j] - t)
                s_hi = s_hi + coef_hi[j] * inv
                s_lo = s_lo + coef_lo[j] * inv
            hi[i] = s_hi
            lo[i] = s_lo
    return hi, lo
