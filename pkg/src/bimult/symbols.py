"""Bounded symbols on R^2 and the catalogue of named symbols and bumps."""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

import numpy as np

from .core import Grid1D, SampledFunction, Spectrum, dft_forward, dft_inverse

# half width of the smooth transitions in the support-side bump
MOLLIFIER_WIDTH = 1.0 / 8.0


@dataclass(frozen=True, eq=False)
class Symbol2D:
    """A bounded symbol ``psi(xi, eta)`` with a vectorized evaluation rule.

    Parameters
    ----------
    func : callable
        ``func(xi, eta)`` on broadcastable float arrays, returning complex values.
    name : str
        Identifier used in reports.
    periodic_x, periodic_y : bool
        Period 1 in the respective variable.
    support_box : tuple, optional
        ``((xi_lo, xi_hi), (eta_lo, eta_hi))``; the symbol vanishes outside.
    singular_lines : tuple of str
        Human-readable description of discontinuity sets.
    sup_bound : float
        Upper bound for ``|psi|``.
    """

    func: Callable
    name: str = "symbol"
    periodic_x: bool = False
    periodic_y: bool = False
    support_box: tuple | None = None
    singular_lines: tuple = ()
    sup_bound: float = math.inf

    def __call__(self, xi, eta):
        xi, eta = np.broadcast_arrays(np.asarray(xi, dtype=float), np.asarray(eta, dtype=float))
        return np.asarray(self.func(xi, eta), dtype=np.complex128) * np.ones(xi.shape)

    @property
    def periodic(self) -> bool:
        return self.periodic_x and self.periodic_y

    def scaled(self, c) -> "Symbol2D":
        f = self.func
        return replace(self, func=lambda xi, eta: c * f(xi, eta), name=f"{c}*{self.name}",
                       sup_bound=abs(c) * self.sup_bound)

    def __mul__(self, other):
        if isinstance(other, Symbol2D):
            f, g = self.func, other.func
            return Symbol2D(
                lambda xi, eta: f(xi, eta) * g(xi, eta),
                name=f"{self.name}*{other.name}",
                periodic_x=self.periodic_x and other.periodic_x,
                periodic_y=self.periodic_y and other.periodic_y,
                support_box=_intersect(self.support_box, other.support_box),
                singular_lines=self.singular_lines + other.singular_lines,
                sup_bound=self.sup_bound * other.sup_bound,
            )
        if np.isscalar(other):
            return self.scaled(other)
        return NotImplemented

    __rmul__ = __mul__


def _intersect(a, b):
    if a is None:
        return b
    if b is None:
        return a
    (ax0, ax1), (ay0, ay1) = a
    (bx0, bx1), (by0, by1) = b
    return ((max(ax0, bx0), min(ax1, bx1)), (max(ay0, by0), min(ay1, by1)))


# ---------------------------------------------------------------------------
# 1-d profiles


def smooth_step(t):
    """C-infinity step: 0 for ``t <= 0``, 1 for ``t >= 1``."""
    t = np.asarray(t, dtype=float)
    inner = (t > 0) & (t < 1)
    tc = np.where(inner, t, 0.5)
    a = np.exp(-1.0 / tc)
    b = np.exp(-1.0 / (1.0 - tc))
    return np.where(t >= 1, 1.0, np.where(inner, a / (a + b), 0.0))


def tent_profile(x):
    """``1 - |x|`` on ``[-1, 1)``, zero elsewhere."""
    x = np.asarray(x, dtype=float)
    return np.where((x >= -1) & (x < 1), 1.0 - np.abs(x), 0.0)


def plateau(x, inner, outer):
    """Even smooth bump: 1 on ``|x| <= inner``, 0 on ``|x| >= outer``."""
    x = np.abs(np.asarray(x, dtype=float))
    return smooth_step((outer - x) / (outer - inner))


def half_open_indicator(x, lo=-0.5, hi=0.5):
    x = np.asarray(x, dtype=float)
    return ((x >= lo) & (x < hi)).astype(float)


def support_bump(x):
    """Smooth plateau bump: support ``[0, 1]``, equal to 1 on ``[1/4, 3/4]``.

    Equals the indicator of ``[1/8, 7/8]`` mollified at width 1/8.
    """
    x = np.asarray(x, dtype=float)
    w = 2 * MOLLIFIER_WIDTH
    return smooth_step(x / w) * smooth_step((1.0 - x) / w)


def frequency_bump_hat(xi):
    """Transform of the frequency-side bump: 1 on ``[-1/2, 1/2]``, 0 off ``(-1, 1)``."""
    return plateau(xi, 0.5, 1.0)


# ---------------------------------------------------------------------------
# named symbols


def bht_symbol() -> Symbol2D:
    """``-i sgn(xi - eta)`` with ``sgn(0) = 0``."""
    return Symbol2D(
        lambda xi, eta: -1j * np.sign(xi - eta),
        name="bht",
        singular_lines=("xi = eta",),
        sup_bound=1.0,
    )


def tent_lambda(width: float = 1.0) -> Symbol2D:
    """Product tent ``(1 - |xi|/w)(1 - |eta|/w)`` on ``[-w, w)^2``."""
    w = float(width)
    return Symbol2D(
        lambda xi, eta: tent_profile(xi / w) * tent_profile(eta / w),
        name="tent" if w == 1 else f"tent[{w:g}]",
        support_box=((-w, w), (-w, w)),
        sup_bound=1.0,
    )


def fejer_square_symbol() -> Symbol2D:
    """``sin^2(4 pi x)/(4 pi x)^2 * sin^2(4 pi y)/(4 pi y)^2``, equal to 1 at the origin."""
    return Symbol2D(
        lambda x, y: np.sinc(4 * x) ** 2 * np.sinc(4 * y) ** 2,
        name="fejer2",
        sup_bound=1.0,
    )


def fejer_square_transform() -> Symbol2D:
    """Transform of :func:`fejer_square_symbol`: ``tent(xi/4) tent(eta/4) / 16``."""
    return Symbol2D(
        lambda xi, eta: tent_profile(xi / 4) * tent_profile(eta / 4) / 16.0,
        name="fejer2-hat",
        support_box=((-4.0, 4.0), (-4.0, 4.0)),
        sup_bound=1.0 / 16,
    )


def indicator_box(half: float = 0.5) -> Symbol2D:
    """Indicator of the half-open square ``[-half, half)^2``."""
    return Symbol2D(
        lambda xi, eta: half_open_indicator(xi, -half, half) * half_open_indicator(eta, -half, half),
        name="box",
        support_box=((-half, half), (-half, half)),
        singular_lines=("boundary of the box",),
        sup_bound=1.0,
    )


def mollified_box(inner: float = 0.25, outer: float = 0.5) -> Symbol2D:
    """Smooth tensor plateau: 1 on ``[-inner, inner]^2``, support ``[-outer, outer]^2``."""
    return Symbol2D(
        lambda xi, eta: plateau(xi, inner, outer) * plateau(eta, inner, outer),
        name="box-mollified",
        support_box=((-outer, outer), (-outer, outer)),
        sup_bound=1.0,
    )


def constant_symbol(c=1.0) -> Symbol2D:
    return Symbol2D(
        lambda xi, eta: np.full(np.shape(xi), c, dtype=np.complex128),
        name="one" if c == 1 else f"const[{c}]",
        periodic_x=True,
        periodic_y=True,
        sup_bound=abs(c),
    )


def exponential_symbol(a: float, b: float) -> Symbol2D:
    """``exp(2 pi i (a xi + b eta))``; periodic when ``a`` and ``b`` are integers."""
    return Symbol2D(
        lambda xi, eta: np.exp(2j * np.pi * (a * xi + b * eta)),
        name=f"exp[{a:g},{b:g}]",
        periodic_x=float(a).is_integer(),
        periodic_y=float(b).is_integer(),
        sup_bound=1.0,
    )


# ---------------------------------------------------------------------------
# bumps on a grid


def bump_phi(flavor: str, grid: Grid1D) -> tuple[SampledFunction, Spectrum]:
    """Sampled bump and its transform on ``grid``.

    ``"support_side"`` gives :func:`support_bump`; its transform is the DFT
    of the samples. ``"frequency_side"`` gives the function whose transform
    is :func:`frequency_bump_hat`, synthesised from the transform samples.
    """
    if flavor == "support_side":
        phi = SampledFunction.from_callable(grid, support_bump)
        return phi, dft_forward(phi)
    if flavor == "frequency_side":
        spec = Spectrum.from_callable(grid, frequency_bump_hat)
        return dft_inverse(spec), spec
    raise ValueError(f"unknown bump flavor {flavor!r}; use 'support_side' or 'frequency_side'")
