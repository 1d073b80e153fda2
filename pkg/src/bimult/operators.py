"""Bilinear multiplier operators on R, T and Z, and the kernel-series form."""

from __future__ import annotations

import warnings
from functools import lru_cache

import numpy as np

from . import kernels
from .core import (
    FiniteSequence,
    FiniteSequence2D,
    Grid1D,
    PeriodicFunction,
    SampledFunction,
    dft_forward,
    shift_zero_fill,
)
from .errors import ConfigurationError, DomainError, GridMismatchError, TruncationWarning
from .symbols import Symbol2D

# symbol matrices up to this many entries are cached per (symbol, grid)
_CACHE_ENTRIES = 2048 * 2048
_BLOCK_ROWS = 256
NYQUIST_GUARD = 4


def _checked(values, psi):
    if not np.all(np.isfinite(values)):
        raise DomainError(f"symbol {psi.name} produced non-finite values")
    return values


@lru_cache(maxsize=4)
def _symbol_matrix(psi: Symbol2D, grid: Grid1D) -> np.ndarray:
    xi = grid.freqs
    w = _checked(psi(xi[:, None], xi[None, :]), psi)
    w.setflags(write=False)
    return w


def symbol_matrix(psi: Symbol2D, grid: Grid1D) -> np.ndarray:
    """``psi(xi_k, xi_l)`` on the dual lattice; cached for moderate grids."""
    if grid.N * grid.N <= _CACHE_ENTRIES:
        return _symbol_matrix(psi, grid)
    xi = grid.freqs
    return _checked(psi(xi[:, None], xi[None, :]), psi)


def _symbol_blocks(psi, grid):
    if grid.N * grid.N <= _CACHE_ENTRIES:
        yield 0, _symbol_matrix(psi, grid)
        return
    xi = grid.freqs
    for start in range(0, grid.N, _BLOCK_ROWS):
        stop = min(start + _BLOCK_ROWS, grid.N)
        yield start, _checked(psi(xi[start:stop, None], xi[None, :]), psi)


def apply_C(psi: Symbol2D, f: SampledFunction, g: SampledFunction,
            method: str = "fast", backend: str | None = None) -> SampledFunction:
    """Evaluate ``C_psi(f, g)`` on the grid of ``f`` and ``g``.

    The double integral over frequency space becomes the rectangle rule
    ``dxi^2 sum_{k,l} fhat_k ghat_l psi(xi_k, xi_l) exp(2 pi i x (xi_k + xi_l))``.

    Parameters
    ----------
    psi : Symbol2D
    f, g : SampledFunction
        Inputs on one common grid.
    method : {"fast", "slow"}
        ``"fast"`` forms the anti-diagonal sums
        ``u(s) = sum_k fhat_k ghat_{s-k} psi(xi_k, xi_{s-k})`` and finishes
        with one inverse FFT, O(N^2). ``"slow"`` is the O(N^3) triple sum.
    backend : {"compiled", "python"}, optional
        Kernel backend override.

    Returns
    -------
    SampledFunction
    """
    if f.grid != g.grid:
        raise GridMismatchError(f"inputs live on different grids: {f.grid} vs {g.grid}")
    grid = f.grid
    fh = dft_forward(f).values
    gh = dft_forward(g).values
    N = grid.N
    if method == "slow":
        w = symbol_matrix(psi, grid)
        e = np.exp(2j * np.pi * np.outer(grid.points, grid.freqs))
        out = grid.dxi ** 2 * kernels.direct_bilinear(fh, gh, w, e, backend=backend)
        return SampledFunction(grid, out)
    if method != "fast":
        raise ValueError(f"unknown method {method!r}")
    u = np.zeros(2 * N - 1, dtype=np.complex128)
    for start, block in _symbol_blocks(psi, grid):
        kernels.antidiagonal_sums(fh[start:start + block.shape[0]], gh, block, u,
                                  offset=start, backend=backend)
    # slot s' = k' + l' carries frequency (s' - N)/(2L); at x_j its phase is
    # (-1)^{s'} exp(2 pi i j s'/N), so fold s' mod N and finish with one FFT
    signed = u * np.where(np.arange(2 * N - 1) % 2 == 0, 1.0, -1.0)
    folded = signed[:N].copy()
    folded[: N - 1] += signed[N:]
    out = grid.dxi ** 2 * N * np.fft.ifft(folded)
    return SampledFunction(grid, out)


def apply_P(phi: FiniteSequence2D, F: PeriodicFunction, G: PeriodicFunction,
            backend: str | None = None) -> PeriodicFunction:
    """Torus operator: output coefficient ``s`` is ``sum_{n+m=s} Fhat(n) Ghat(m) phi(n, m)``."""
    n = F.indices
    m = G.indices
    w = phi.block(n, m)
    coeffs = kernels.antidiagonal_sums(F.coeffs, G.coeffs, w, backend=backend)
    return PeriodicFunction(coeffs)


def apply_D(psi: Symbol2D, a: FiniteSequence, b: FiniteSequence, quad_points: int,
            window: int | None = None, guard: int = NYQUIST_GUARD,
            backend: str | None = None) -> FiniteSequence:
    """Integer-lattice operator by tensor rectangle rule on ``quad_points^2`` nodes of T^2.

    ``D(a, b)(l) = int_T int_T ahat(theta) bhat(rho) psi(theta, rho) exp(2 pi i l (theta + rho))``
    with ``ahat(theta) = sum_k a_k exp(-2 pi i k theta)``. Nodes are
    ``theta_r = r / Q`` for ``r = 0..Q-1``. The result is reported for
    ``|l| <= window`` (default ``radius(a) + radius(b)``).

    Raises
    ------
    DomainError
        If ``psi`` is not 1-periodic in both variables.
    ConfigurationError
        If ``Q < guard * (radius(a) + radius(b) + window)``.
    """
    if not psi.periodic:
        raise DomainError(f"symbol {psi.name} is not flagged 1-periodic in both variables")
    Q = int(quad_points)
    window = a.radius + b.radius if window is None else int(window)
    need = guard * (a.radius + b.radius + window)
    if Q < need:
        raise ConfigurationError(f"quad_points={Q} is below the Nyquist guard {need}")
    theta = np.arange(Q) / Q
    ah = a.transform(theta)
    bh = b.transform(theta)
    w = _checked(psi(theta[:, None], theta[None, :]), psi)
    u = kernels.antidiagonal_sums(ah, bh, w, backend=backend)
    folded = u[:Q].copy()
    folded[: Q - 1] += u[Q:]
    # (1/Q^2) sum_r U_r exp(2 pi i l r / Q) == ifft(U)[l mod Q] / Q
    full = np.fft.ifft(folded) / Q
    l = np.arange(-window, window + 1)
    return FiniteSequence(full[l % Q])


def compute_K(psi: Symbol2D, radius: int, nodes: int | None = None) -> FiniteSequence2D:
    """Kernel coefficients ``K_{n,m} = int_0^1 int_0^1 psi exp(2 pi i (xi n + eta m))``.

    Computed by the ``nodes``-point tensor rectangle rule (one 2-d FFT).
    The rule sees ``psi`` only at ``r / nodes``, so the result is the
    ``nodes``-periodic aliasing of the exact coefficients; with ``nodes``
    equal to ``2L`` it is exactly the kernel that :func:`apply_C` realises
    on a grid of half width ``L``. Use :func:`~bimult.core.boundary_max`
    on the result as a truncation proxy.
    """
    if not psi.periodic:
        raise DomainError(f"symbol {psi.name} is not flagged 1-periodic in both variables")
    if nodes is None:
        nodes = 1 << max(6, (16 * (2 * radius + 1) - 1).bit_length())
    theta = np.arange(nodes) / nodes
    vals = _checked(psi(theta[:, None], theta[None, :]), psi)
    full = np.fft.ifft2(vals)
    idx = np.arange(-radius, radius + 1) % nodes
    return FiniteSequence2D(full[np.ix_(idx, idx)])


def apply_kernel_series(K: FiniteSequence2D, f: SampledFunction, g: SampledFunction) -> SampledFunction:
    """``sum_{|n|,|m| <= R} K_{n,m} f(x - n) g(x - m)`` with zero-filled integer shifts.

    A :class:`~bimult.errors.TruncationWarning` is issued, and noted on the
    result, when a nonzero coefficient shifts nonzero samples past the grid.
    """
    if f.grid != g.grid:
        raise GridMismatchError(f"inputs live on different grids: {f.grid} vs {g.grid}")
    grid = f.grid
    spu = grid.require_integers()
    R = K.radius
    shifts = np.arange(-R, R + 1)
    fs = np.stack([shift_zero_fill(f.values, int(n) * spu) for n in shifts])
    gs = np.stack([shift_zero_fill(g.values, int(m) * spu) for m in shifts])
    inner = K.values @ gs
    out = np.sum(fs * inner, axis=0)

    lost = []
    mass_f = np.abs(f.values).sum()
    mass_g = np.abs(g.values).sum()
    rows = np.any(K.values != 0, axis=1)
    cols = np.any(K.values != 0, axis=0)
    for n, active, kept in zip(shifts, rows, np.abs(fs).sum(axis=1)):
        if active and kept < mass_f * (1 - 1e-12):
            lost.append(("f", int(n)))
    for m, active, kept in zip(shifts, cols, np.abs(gs).sum(axis=1)):
        if active and kept < mass_g * (1 - 1e-12):
            lost.append(("g", int(m)))
    notes = ()
    if lost:
        msg = f"{len(lost)} integer shifts moved samples past the grid edge"
        warnings.warn(msg, TruncationWarning, stacklevel=2)
        notes = (f"truncated: {msg}",)
    return SampledFunction(grid, out, notes=notes)


def bht_timedomain(f: SampledFunction, g: SampledFunction, cutoff: float | None = None,
                   rule: str = "odd") -> SampledFunction:
    """Principal value ``p.v. int f(x - t) g(x + t) dt / t`` by symmetric quadrature.

    Nodes ``+-t`` are paired so the odd kernel cancels exactly; the node
    ``t = 0`` is never used and nodes with ``|t| < cutoff`` (default ``h``)
    are dropped, as are pairs that leave the grid.

    ``rule="rect"`` uses every ``t = m h`` with weight ``h``; it loses about
    ``h * d/dt[f(x-t)g(x+t)]`` at the origin. ``rule="odd"`` uses odd ``m``
    with weight ``2h``, the midpoint rule for the even integrand
    ``(F(t) - F(-t))/t``, which is spectrally accurate for smooth inputs.

    Note ``p.v. int f(x-t) g(x+t) dt/t = pi * C_psi(f, g)`` for
    ``psi = -i sgn(xi - eta)``.
    """
    if f.grid != g.grid:
        raise GridMismatchError(f"inputs live on different grids: {f.grid} vs {g.grid}")
    grid = f.grid
    h = grid.h
    cutoff = h if cutoff is None else float(cutoff)
    if cutoff < h * (1 - 1e-12):
        raise ConfigurationError(f"cutoff {cutoff} is below the grid spacing {h}")
    if rule == "odd":
        ms, weight = np.arange(1, grid.N, 2), 2 * h
    elif rule == "rect":
        ms, weight = np.arange(1, grid.N), h
    else:
        raise ValueError(f"unknown rule {rule!r}")
    fv, gv = f.values, g.values
    N = grid.N
    out = np.zeros(N, dtype=np.complex128)
    for m in ms:
        t = m * h
        if t < cutoff * (1 - 1e-12):
            continue
        if 2 * m >= N:
            break
        # x_i - t and x_i + t both on grid for m <= i < N - m
        lo, hi = m, N - m
        plus = fv[lo - m:hi - m] * gv[lo + m:hi + m]
        minus = fv[lo + m:hi + m] * gv[lo - m:hi - m]
        out[lo:hi] += weight * (plus - minus) / t
    return SampledFunction(grid, out)
