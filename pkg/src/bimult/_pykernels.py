"""Pure-numpy versions of the compiled kernels in ``_ckernels.pyx``.

Same signatures, same per-slot summation order for the anti-diagonal sums.
"""

import numpy as np


def antidiagonal_sums(x, y, w, out, offset, num_threads):
    m = y.shape[0]
    for i in range(x.shape[0]):
        xi = x[i]
        if xi == 0:
            continue
        out[offset + i:offset + i + m] += (xi * y) * w[i]


def direct_bilinear(x, v, e, out, num_threads):
    # BLAS-backed sum_k e[p,k] x[k] sum_l v[k,l] e[p,l]; still O(N^3)
    out[:] = np.sum(((e * x[np.newaxis, :]) @ v) * e, axis=1)
