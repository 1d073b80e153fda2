"""Backend selection for the hot loops.

The compiled extension is used when it imports; setting ``BIMULT_PURE=1``
forces the numpy fallback. ``BIMULT_THREADS`` caps the OpenMP thread count
of the compiled kernels.
"""

from __future__ import annotations

import os

import numpy as np

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # pragma: no cover - depends on the build
    _ckernels = None

COMPILED_AVAILABLE = _ckernels is not None


def _select(name: str | None):
    if name is None:
        name = "python" if os.environ.get("BIMULT_PURE") == "1" else "compiled"
    if name == "compiled" and _ckernels is not None:
        return "compiled", _ckernels
    if name in ("compiled", "python"):
        return "python", _pykernels
    raise ValueError(f"unknown kernel backend {name!r}")


BACKEND, _impl = _select(None)


def num_threads() -> int:
    raw = os.environ.get("BIMULT_THREADS", "")
    try:
        value = int(raw)
    except ValueError:
        return 1
    return max(1, value)


def _as_c128(a):
    return np.ascontiguousarray(a, dtype=np.complex128)


def antidiagonal_sums(x, y, w, out=None, offset=0, backend=None):
    """Accumulate ``out[i + j + offset] += x[i] * y[j] * w[i, j]``.

    Parameters
    ----------
    x, y : array_like
        Complex vectors of lengths n and m.
    w : array_like
        Complex (n, m) weight block.
    out : numpy.ndarray, optional
        Complex accumulator; a fresh one of length ``n + m - 1`` is created
        when omitted.
    offset : int
        Index shift for the block, used when ``w`` holds rows ``offset..``
        of a larger matrix.
    backend : {"compiled", "python"}, optional
        Overrides the import-time choice.

    Returns
    -------
    numpy.ndarray
        The accumulator.
    """
    x, y, w = _as_c128(x), _as_c128(y), _as_c128(w)
    if w.shape != (x.shape[0], y.shape[0]):
        raise ValueError(f"weight block shape {w.shape} does not match {x.shape[0]}x{y.shape[0]}")
    if out is None:
        out = np.zeros(x.shape[0] + y.shape[0] - 1 + offset, dtype=np.complex128)
    name, impl = (BACKEND, _impl) if backend is None else _select(backend)
    if name == "compiled":
        impl.antidiagonal_sums(
            x.view(np.float64), y.view(np.float64), w.view(np.float64),
            out.view(np.float64), offset, num_threads(),
        )
    else:
        impl.antidiagonal_sums(x, y, w, out, offset, num_threads())
    return out


def direct_bilinear(x, y, w, e, backend=None):
    """Return ``out[p] = sum_{k,l} e[p,k] x[k] w[k,l] y[l] e[p,l]`` by the O(P N^2) loop."""
    x, y, w, e = _as_c128(x), _as_c128(y), _as_c128(w), _as_c128(e)
    v = _as_c128(w * y[np.newaxis, :])
    out = np.zeros(e.shape[0], dtype=np.complex128)
    name, impl = (BACKEND, _impl) if backend is None else _select(backend)
    if name == "compiled":
        impl.direct_bilinear(
            x.view(np.float64), v.view(np.float64), e.view(np.float64),
            out.view(np.float64), num_threads(),
        )
    else:
        impl.direct_bilinear(x, v, e, out, num_threads())
    return out
