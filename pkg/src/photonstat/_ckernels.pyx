# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled accumulation kernels (hot path of ladder construction).

Must stay operation-for-operation identical to ``_pykernels.py``.
"""

from libc.math cimport fabs

import numpy as np


def ladder_sums(object probs_in, Py_ssize_t order, bint rising):
    """Weighted moment sums of a photon-number pmf, one value per order.

    falling (rising=False): out[k] = sum_n p_n * n*(n-1)*...*(n-k+1)
    rising  (rising=True):  out[k] = sum_n p_n * (n+1)*(n+2)*...*(n+k)

    Neumaier-compensated per bucket; p_n == 0 entries are skipped.
    Weight overflow surfaces as inf; callers must check finiteness.
    """
    probs_arr = np.ascontiguousarray(probs_in, dtype=np.float64)
    cdef const double[::1] probs = probs_arr
    sums_arr = np.zeros(order + 1, dtype=np.float64)
    comp_arr = np.zeros(order + 1, dtype=np.float64)
    cdef double[::1] sums = sums_arr
    cdef double[::1] comp = comp_arr
    cdef Py_ssize_t n, k, kmax, size = probs.shape[0]
    cdef double p, w, t

    for n in range(size):
        p = probs[n]
        if p == 0.0:
            continue
        w = p
        if rising:
            kmax = order
        else:
            kmax = order if order <= n else n
        k = 0
        while True:
            t = sums[k] + w
            if fabs(sums[k]) >= fabs(w):
                comp[k] += (sums[k] - t) + w
            else:
                comp[k] += (w - t) + sums[k]
            sums[k] = t
            if k == kmax:
                break
            k += 1
            if rising:
                w *= n + k
            else:
                w *= n - k + 1

    out = np.empty(order + 1, dtype=np.float64)
    cdef double[::1] res = out
    for k in range(order + 1):
        res[k] = sums[k] + comp[k]
    return out
