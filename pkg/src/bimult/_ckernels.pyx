# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot loops. Complex arrays arrive as interleaved float64 views."""

from cython.parallel cimport prange


def antidiagonal_sums(const double[::1] x, const double[::1] y,
                      const double[:, ::1] w, double[::1] out,
                      Py_ssize_t offset, int num_threads):
    cdef Py_ssize_t n = x.shape[0] // 2
    cdef Py_ssize_t m = y.shape[0] // 2
    cdef Py_ssize_t i, j, s
    cdef double xr, xi, pr, pi, wr, wi
    for i in range(n):
        xr = x[2 * i]
        xi = x[2 * i + 1]
        if xr == 0.0 and xi == 0.0:
            continue
        # each j writes a distinct output slot, so rows stay race-free and the
        # per-slot summation order (ascending i) is independent of threads
        for j in prange(m, nogil=True, num_threads=num_threads, schedule="static"):
            pr = xr * y[2 * j] - xi * y[2 * j + 1]
            pi = xr * y[2 * j + 1] + xi * y[2 * j]
            wr = w[i, 2 * j]
            wi = w[i, 2 * j + 1]
            s = 2 * (i + j + offset)
            out[s] = out[s] + (pr * wr - pi * wi)
            out[s + 1] = out[s + 1] + (pr * wi + pi * wr)


def direct_bilinear(const double[::1] x, const double[:, ::1] v,
                    const double[:, ::1] e, double[::1] out, int num_threads):
    # out[p] = sum_k e[p,k] x[k] sum_l v[k,l] e[p,l], with v = w * y
    cdef Py_ssize_t n = x.shape[0] // 2
    cdef Py_ssize_t m = v.shape[1] // 2
    cdef Py_ssize_t npts = e.shape[0]
    cdef Py_ssize_t p, k, l
    cdef double ar, ai, tr, ti, sr, si
    for p in prange(npts, nogil=True, num_threads=num_threads, schedule="static"):
        sr = 0.0
        si = 0.0
        for k in range(n):
            ar = e[p, 2 * k] * x[2 * k] - e[p, 2 * k + 1] * x[2 * k + 1]
            ai = e[p, 2 * k] * x[2 * k + 1] + e[p, 2 * k + 1] * x[2 * k]
            tr = 0.0
            ti = 0.0
            for l in range(m):
                tr = tr + (v[k, 2 * l] * e[p, 2 * l] - v[k, 2 * l + 1] * e[p, 2 * l + 1])
                ti = ti + (v[k, 2 * l] * e[p, 2 * l + 1] + v[k, 2 * l + 1] * e[p, 2 * l])
            sr = sr + (ar * tr - ai * ti)
            si = si + (ar * ti + ai * tr)
        out[2 * p] = sr
        out[2 * p + 1] = si
