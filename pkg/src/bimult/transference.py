"""Maps between multipliers on R, T and Z.

Bump lifts and restriction to the integers, periodization of compactly
supported symbols, dilation and folding, convolution of torus symbols, and
the Jodeit-type extensions (general profile, tent, piecewise constant)
together with the intermediate objects of the piecewise-constant assembly.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import (
    FiniteSequence,
    FiniteSequence2D,
    Grid1D,
    PeriodicFunction,
    SampledFunction,
    Spectrum,
    dft_inverse,
)
from .errors import ConfigurationError, DomainError, HypothesisWarning
from .operators import NYQUIST_GUARD, apply_C, apply_D
from .symbols import Symbol2D, frequency_bump_hat, support_bump

# ---------------------------------------------------------------------------
# bump lifts and restriction to Z


@dataclass(frozen=True, eq=False)
class LiftedPair:
    """``f_a = sum_k a_k Phi(x - k)`` and ``g_b`` likewise.

    ``constant`` is ``sup_x sum_l |Phi(x - l)|`` measured on the grid, so that
    ``||f_a||_p <= constant * ||a||_p``.
    """

    f_a: SampledFunction
    g_b: SampledFunction
    a: FiniteSequence
    b: FiniteSequence
    bump: str
    constant: float


def _lift_one(seq: FiniteSequence, grid: Grid1D, bump: str) -> SampledFunction:
    x = grid.points
    if bump == "support_side":
        vals = np.zeros(grid.N, dtype=np.complex128)
        for k, ak in zip(seq.indices, seq.values):
            if ak != 0:
                vals += ak * support_bump(x - k)
        return SampledFunction(grid, vals)
    # transform of the lift is Phi_hat(xi) * ahat(xi)
    spec = frequency_bump_hat(grid.freqs) * seq.transform(grid.freqs)
    return dft_inverse(Spectrum(grid, spec))


def _bump_constant(grid: Grid1D, bump: str) -> float:
    if bump == "support_side":
        return 1.0
    spu = grid.require_integers()
    phi = np.abs(dft_inverse(Spectrum.from_callable(grid, frequency_bump_hat)).values)
    return float(phi.reshape(grid.periods, spu).sum(axis=0).max())


def lift_sequences(a: FiniteSequence, b: FiniteSequence, grid: Grid1D,
                   bump: str = "support_side") -> LiftedPair:
    """Lift two finite sequences to functions on ``grid`` by integer translates of a bump.

    With the support-side bump the translates ``Phi(x - k)`` have disjoint
    supports ``[k, k+1]`` and the norm constant is exactly 1.

    Raises
    ------
    ConfigurationError
        If the translates do not fit inside ``[-L, L)`` or integers are not
        grid points.
    """
    if bump not in ("support_side", "frequency_side"):
        raise ValueError(f"unknown bump flavor {bump!r}")
    grid.require_integers()
    R = max(a.radius, b.radius)
    if bump == "support_side" and R + 1 > grid.L:
        raise ConfigurationError(f"grid half width {grid.L} cannot hold translates up to {R}+1")
    return LiftedPair(
        _lift_one(a, grid, bump),
        _lift_one(b, grid, bump),
        a,
        b,
        bump,
        _bump_constant(grid, bump),
    )


@dataclass(frozen=True, eq=False)
class RestrictionResult:
    """Outcome of :func:`restrict_periodic_to_Z`.

    ``D`` is the integer-lattice operator on the window, ``C`` the line
    operator applied to the lifts, and ``deviation`` the largest
    ``|C(x) - D(j)|`` over the sampled middles of ``I_j = [j+1/4, j+3/4]``.
    """

    D: FiniteSequence
    C: SampledFunction
    lift: LiftedPair
    deviation: float
    per_index: np.ndarray
    quad_points: int


def plateau_indices(grid: Grid1D, j: int) -> np.ndarray:
    """Grid indices in ``[j + 1/4 + h, j + 3/4 - h]``."""
    x = grid.points
    h = grid.h
    eps = 1e-9 * h
    return np.nonzero((x >= j + 0.25 + h - eps) & (x <= j + 0.75 - h + eps))[0]


def restrict_periodic_to_Z(psi: Symbol2D, a: FiniteSequence, b: FiniteSequence,
                           grid: Grid1D, window: int | None = None,
                           backend: str | None = None) -> RestrictionResult:
    """Restrict a 1-periodic symbol to Z and compare with the line operator on lifts.

    ``D_psi(a, b)`` is computed by :func:`~bimult.operators.apply_D` with
    ``2L`` quadrature nodes, the lattice the grid's transform sees. On each
    plateau ``I_j`` of the support-side lifts, ``C_psi(f_a, g_b)`` should be
    constant and equal to ``D_psi(a, b)(j)``; the worst deviation is
    reported, not asserted.
    """
    if not psi.periodic:
        raise DomainError(f"symbol {psi.name} is not flagged 1-periodic in both variables")
    Q = grid.periods
    if Q is None:
        raise ConfigurationError(f"2L must be an integer to restrict to Z, got L={grid.L}")
    window = a.radius + b.radius if window is None else int(window)
    if window + 1 > grid.L:
        raise ConfigurationError(f"window {window} does not fit inside the grid half width {grid.L}")
    lift = lift_sequences(a, b, grid, "support_side")
    C = apply_C(psi, lift.f_a, lift.g_b, backend=backend)
    D = apply_D(psi, a, b, Q, window=window, backend=backend)
    per = np.zeros(2 * window + 1)
    for i, j in enumerate(D.indices):
        idx = plateau_indices(grid, int(j))
        per[i] = np.abs(C.values[idx] - D.values[i]).max()
    return RestrictionResult(D, C, lift, float(per.max()), per, Q)


# ---------------------------------------------------------------------------
# periodization, dilation, folding, convolution


def periodize_symbol(psi: Symbol2D) -> Symbol2D:
    """``psi#(xi, eta) = sum_{n,m} psi(xi - n, eta - m)`` for ``psi`` supported in ``[-1/2, 1/2]^2``.

    Points are wrapped into the cell ``[-1/2, 1/2)^2``; on the cell edge only
    the translate landing at ``-1/2`` is counted.
    """
    box = psi.support_box
    if box is None:
        raise DomainError(f"symbol {psi.name} has no declared support box")
    (x0, x1), (y0, y1) = box
    if x0 < -0.5 or x1 > 0.5 or y0 < -0.5 or y1 > 0.5:
        raise DomainError(f"support of {psi.name} exceeds the unit cell: {box}")
    f = psi.func

    def wrapped(xi, eta):
        return f(xi - np.floor(xi + 0.5), eta - np.floor(eta + 0.5))

    return Symbol2D(
        wrapped,
        name=f"{psi.name}#",
        periodic_x=True,
        periodic_y=True,
        singular_lines=psi.singular_lines,
        sup_bound=psi.sup_bound,
    )


def dilate_phi(phi: FiniteSequence2D, k: int) -> FiniteSequence2D:
    """``phi_k(n, m) = phi(n/k, m/k)`` when ``k`` divides both, else 0."""
    k = int(k)
    if k < 1:
        raise DomainError(f"dilation factor must be a positive integer, got {k}")
    M = phi.radius
    out = np.zeros((2 * k * M + 1, 2 * k * M + 1), dtype=np.complex128)
    out[::k, ::k] = phi.values
    return FiniteSequence2D(out)


def fold_function(F: PeriodicFunction, k: int) -> PeriodicFunction:
    """``(1/k) sum_{j<k} f((x + j)/k)``, whose coefficients are ``fhat(k n)``."""
    k = int(k)
    if k < 1:
        raise DomainError(f"folding factor must be a positive integer, got {k}")
    M = F.degree // k
    return PeriodicFunction(F.coefficient(k * np.arange(-M, M + 1)))


def convolve_symbol(a: FiniteSequence2D, phi: FiniteSequence2D) -> FiniteSequence2D:
    """``(a * phi)(n, m) = sum_{l,k} a(l, k) phi(n - l, m - k)``."""
    Ra, Rp = a.radius, phi.radius
    R = Ra + Rp
    size = 2 * Rp + 1
    out = np.zeros((2 * R + 1, 2 * R + 1), dtype=np.complex128)
    for l, k, alk in a.nonzero():
        i, j = l + Ra, k + Ra
        out[i:i + size, j:j + size] += alk * phi.values
    return FiniteSequence2D(out)


# ---------------------------------------------------------------------------
# Jodeit-type extensions


@dataclass(frozen=True)
class JodeitDiagnostic:
    """Truncated check of ``sum_{n,m} |S#hat(n, m)|^p < inf``.

    Both ``power_sum`` and its ``1/p`` root are kept, with the two readings
    ``2^(1/p) * power_sum`` and ``2^(1/p) * root_sum`` of the norm constant.
    """

    p: float
    window: int
    power_sum: float
    root_sum: float
    tail_estimate: float
    converged: bool
    constant_sum: float
    constant_root: float


def jodeit_hypothesis(S_hat, p: float, window: int = 64, rtol: float = 1e-3) -> JodeitDiagnostic:
    """Evaluate the decay hypothesis on ``|n|, |m| <= window``.

    For ``S`` supported inside ``J x J`` the coefficients of its periodic
    extension are ``S_hat`` at integer points. The tail is estimated by the
    growth of the partial sum between ``window/2`` and ``window``.
    """
    p = float(p)
    if not p > 0:
        raise DomainError(f"exponent must be positive, got {p}")
    idx = np.arange(-window, window + 1)
    n, m = np.meshgrid(idx, idx, indexing="ij")
    vals = np.abs(np.asarray(S_hat(n.astype(float), m.astype(float)))) ** p
    total = float(vals.sum())
    half = window // 2
    inner = (np.abs(n) <= half) & (np.abs(m) <= half)
    tail = total - float(vals[inner].sum())
    converged = tail <= rtol * max(total, 1e-300)
    root = total ** (1.0 / p)
    c = 2.0 ** (1.0 / p)
    return JodeitDiagnostic(p, window, total, root, tail, converged, c * total, c * root)


def jodeit_extend(phi: FiniteSequence2D, S_hat, p: float | None = None,
                  window: int = 64) -> Symbol2D:
    """``psi(xi, eta) = sum_{n,m} phi(n, m) S_hat(xi - n, eta - m)``.

    ``phi`` is finitely supported, so the sum is finite. When ``p`` is given
    the decay hypothesis is evaluated and a
    :class:`~bimult.errors.HypothesisWarning` is issued if the partial sums
    have not settled inside the window.
    """
    if p is not None:
        diag = jodeit_hypothesis(S_hat, p, window)
        if not diag.converged:
            warnings.warn(
                f"sum |S#hat|^{p:g} not settled within |n|,|m| <= {window} "
                f"(tail estimate {diag.tail_estimate:.3e})",
                HypothesisWarning,
                stacklevel=2,
            )
    terms = list(phi.nonzero())

    def evaluate(xi, eta):
        out = np.zeros(np.shape(xi), dtype=np.complex128)
        for n, m, v in terms:
            out += v * S_hat(xi - n, eta - m)
        return out

    return Symbol2D(evaluate, name="jodeit", sup_bound=math.inf)


def _bilinear(phi: FiniteSequence2D, xi, eta):
    n0 = np.floor(xi)
    m0 = np.floor(eta)
    t = xi - n0
    u = eta - m0
    n0 = n0.astype(np.int64)
    m0 = m0.astype(np.int64)
    c00 = phi.get(n0, m0)
    c10 = phi.get(n0 + 1, m0)
    c01 = phi.get(n0, m0 + 1)
    c11 = phi.get(n0 + 1, m0 + 1)
    # lerp form: exact at integer points and wherever the corners agree
    r0 = c00 + t * (c10 - c00)
    r1 = c01 + t * (c11 - c01)
    return r0 + u * (r1 - r0)


def tent_extend(phi: FiniteSequence2D) -> Symbol2D:
    """Piecewise-bilinear extension ``sum phi(n, m) tent(xi - n) tent(eta - m)``."""
    M = phi.radius
    return Symbol2D(
        lambda xi, eta: _bilinear(phi, xi, eta),
        name="tent-extension",
        support_box=((-M - 1.0, M + 1.0), (-M - 1.0, M + 1.0)),
        sup_bound=float(np.abs(phi.values).max()),
    )


def piecewise_constant_extend(phi: FiniteSequence2D) -> Symbol2D:
    """``sum phi(n, m) chi_{J x J}(xi - n, eta - m)`` with ``J = [-1/2, 1/2)``.

    Equals ``phi(n, m)`` on the cell ``[n - 1/2, n + 1/2) x [m - 1/2, m + 1/2)``.
    """
    M = phi.radius

    def evaluate(xi, eta):
        n = np.floor(xi + 0.5).astype(np.int64)
        m = np.floor(eta + 0.5).astype(np.int64)
        return phi.get(n, m)

    return Symbol2D(
        evaluate,
        name="box-extension",
        support_box=((-M - 0.5, M + 0.5), (-M - 0.5, M + 0.5)),
        singular_lines=("half-integer lines",),
        sup_bound=float(np.abs(phi.values).max()),
    )


def theta2(phi: FiniteSequence2D) -> FiniteSequence2D:
    """``phi_2(n,m) + phi_2(n-1,m) + phi_2(n,m-1) + phi_2(n-1,m-1)`` with ``phi_2 = dilate(phi, 2)``."""
    p2 = dilate_phi(phi, 2)
    R = p2.radius + 1
    idx = np.arange(-R, R + 1)
    n, m = np.meshgrid(idx, idx, indexing="ij")
    vals = p2.get(n, m) + p2.get(n - 1, m) + p2.get(n, m - 1) + p2.get(n - 1, m - 1)
    return FiniteSequence2D(vals)


def Theta2(phi: FiniteSequence2D) -> Symbol2D:
    """Tent extension of :func:`theta2`; equals ``phi(n, m)`` on ``[2n, 2n+1] x [2m, 2m+1]``."""
    return tent_extend(theta2(phi))


def chi_tilde(x):
    """2-periodic half indicator: 1 on ``[0, 1)``, 0 on ``[1, 2)`` modulo 2."""
    return (np.mod(np.asarray(x, dtype=float), 2.0) < 1.0).astype(float)


def Psi2(phi: FiniteSequence2D) -> Symbol2D:
    """``chi_tilde(xi) chi_tilde(eta) Theta2(xi, eta)``."""
    big = Theta2(phi)
    return Symbol2D(
        lambda xi, eta: chi_tilde(xi) * chi_tilde(eta) * big(xi, eta),
        name="Psi2",
        sup_bound=big.sup_bound,
    )


def assemble(psi2: Symbol2D) -> Symbol2D:
    """``Psi2(2xi, 2eta) + Psi2(2xi+1, 2eta) + Psi2(2xi, 2eta+1) + Psi2(2xi+1, 2eta+1)``."""

    def evaluate(xi, eta):
        u, v = 2.0 * xi, 2.0 * eta
        return psi2(u, v) + psi2(u + 1, v) + psi2(u, v + 1) + psi2(u + 1, v + 1)

    return Symbol2D(evaluate, name="assembled", sup_bound=psi2.sup_bound)


# ---------------------------------------------------------------------------
# windowed pieces of the Fejer square


def fejer_profile(x):
    """``sin^2(4 pi x) / (4 pi x)^2``."""
    return np.sinc(4 * np.asarray(x, dtype=float)) ** 2


def window_coefficients(k_values, n_values, nodes: int = 256) -> np.ndarray:
    """``int_{k/2 - 1/4}^{k/2 + 1/4} fejer_profile(x) exp(-2 pi i n x) dx`` as a (k, n) table.

    These are the Fourier coefficients of the 1-periodic extension, from
    ``k/2 + J``, of the profile cut to ``k/2 + J/2``. Gauss-Legendre
    quadrature on the window; the integrand is smooth there.
    """
    t, w = np.polynomial.legendre.leggauss(nodes)
    k = np.asarray(k_values, dtype=float)
    n = np.asarray(n_values, dtype=float)
    x = k[:, None] / 2 + 0.25 * t[None, :]
    vals = fejer_profile(x) * (0.25 * w)[None, :]
    phase = np.exp(-2j * np.pi * x[:, :, None] * n[None, None, :])
    return np.einsum("kq,kqn->kn", vals, phase)


@dataclass(frozen=True, eq=False)
class SklTable:
    """Coefficients ``|S_{k,l}hat(n, m)|`` on a box and the smallest decay constant.

    ``table[a, b, c, d]`` belongs to ``(k, n, l, m) = (k[a], n[b], l[c], m[d])``;
    ``weighted`` multiplies by ``(1+k^2)(1+n^2)(1+l^2)(1+m^2)`` and
    ``constant`` is its maximum.
    """

    k: np.ndarray
    n: np.ndarray
    l: np.ndarray
    m: np.ndarray
    table: np.ndarray
    weighted: np.ndarray
    constant: float


def s_kl_coefficient_table(k_values, n_values, l_values=None, m_values=None,
                           nodes: int = 256) -> SklTable:
    """Fourier coefficients of the windowed pieces ``S_{k,l}`` of the Fejer square.

    The piece is the 1-periodic extension from ``(k/2 + J) x (l/2 + J)`` of
    ``chi_{k/2 + J/2}(x) chi_{l/2 + J/2}(y) S(x, y)``. Both the cut and
    ``S`` factor over ``x`` and ``y``, so the table is an outer product of
    1-d window coefficients.
    """
    k = np.asarray(k_values)
    n = np.asarray(n_values)
    l = k if l_values is None else np.asarray(l_values)
    m = n if m_values is None else np.asarray(m_values)
    tx = window_coefficients(k, n, nodes)
    ty = window_coefficients(l, m, nodes)
    table = tx[:, :, None, None] * ty[None, None, :, :]
    wx = np.abs(tx) * (1 + k[:, None] ** 2) * (1 + n[None, :] ** 2)
    wy = np.abs(ty) * (1 + l[:, None] ** 2) * (1 + m[None, :] ** 2)
    weighted = wx[:, :, None, None] * wy[None, None, :, :]
    return SklTable(k, n, l, m, table, weighted, float(weighted.max()))
