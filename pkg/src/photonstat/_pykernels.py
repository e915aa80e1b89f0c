"""Pure-Python twin of the compiled accumulation kernels.

Same operations in the same order as ``_ckernels.pyx`` so both backends
produce identical floating-point results.
"""

import numpy as np


def ladder_sums(probs, order, rising):
    """Weighted moment sums of a photon-number pmf, one value per order.

    falling (rising=False): out[k] = sum_n p_n * n*(n-1)*...*(n-k+1)
    rising  (rising=True):  out[k] = sum_n p_n * (n+1)*(n+2)*...*(n+k)

    Each bucket is accumulated with Neumaier compensation.  Entries with
    p_n == 0 contribute nothing and are skipped, so zero-padded
    distributions never poison the sums with inf*0.  Weight overflow for
    huge n*order surfaces as inf in the output; callers must check
    finiteness.
    """
    probs = np.asarray(probs, dtype=np.float64)
    sums = [0.0] * (order + 1)
    comp = [0.0] * (order + 1)
    for n in range(probs.shape[0]):
        p = float(probs[n])
        if p == 0.0:
            continue
        w = p
        kmax = order if rising else min(order, n)
        k = 0
        while True:
            t = sums[k] + w
            if abs(sums[k]) >= abs(w):
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
    for k in range(order + 1):
        out[k] = sums[k] + comp[k]
    return out
