"""Grids, discrete function types, DFT bridges, (quasi-)norms and periodization.

Transform convention: ``fhat(xi) = int f(x) exp(-2 pi i x xi) dx`` with the
inverse carrying ``exp(+2 pi i x xi)`` and no 2 pi in the measure. On a grid
of ``N`` points over ``[-L, L)`` both integrals become rectangle rules, and the
pair is an exact inverse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property

import numpy as np

from .errors import AccuracyError, ConfigurationError, DomainError, GridMismatchError

HOLDER_RTOL = 1e-12
PERIODIZE_TAIL_TOL = 1e-8


def _frozen_array(values, dtype=np.complex128):
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


def _near_int(x, tol=1e-9):
    r = round(x)
    return abs(x - r) <= tol * max(1.0, abs(x)), int(r)


# ---------------------------------------------------------------------------
# grids and sampled functions


@dataclass(frozen=True)
class Grid1D:
    """Uniform grid ``x_j = -L + j h`` for ``j = 0..N-1`` with ``h = 2L/N``.

    The dual frequencies are ``xi_k = k / (2L)`` for ``k = -N/2..N/2-1``.
    """

    L: float
    N: int

    def __post_init__(self):
        if not (self.L > 0 and math.isfinite(self.L)):
            raise ConfigurationError(f"grid half width must be positive, got L={self.L}")
        if int(self.N) != self.N or self.N <= 0 or self.N % 2:
            raise ConfigurationError(f"grid point count must be a positive even integer, got N={self.N}")
        object.__setattr__(self, "L", float(self.L))
        object.__setattr__(self, "N", int(self.N))

    @property
    def h(self) -> float:
        return 2.0 * self.L / self.N

    @property
    def dxi(self) -> float:
        return 1.0 / (2.0 * self.L)

    @cached_property
    def points(self) -> np.ndarray:
        x = -self.L + np.arange(self.N) * self.h
        x.setflags(write=False)
        return x

    @cached_property
    def freq_indices(self) -> np.ndarray:
        k = np.arange(-self.N // 2, self.N // 2)
        k.setflags(write=False)
        return k

    @cached_property
    def freqs(self) -> np.ndarray:
        xi = self.freq_indices * self.dxi
        xi.setflags(write=False)
        return xi

    @property
    def samples_per_unit(self) -> int | None:
        """``1/h`` when it is an integer, else None."""
        ok, r = _near_int(1.0 / self.h)
        return r if ok and r > 0 else None

    @property
    def periods(self) -> int | None:
        """``2L`` when it is an integer, else None."""
        ok, r = _near_int(2.0 * self.L)
        return r if ok and r > 0 else None

    @property
    def contains_integers(self) -> bool:
        if self.samples_per_unit is None:
            return False
        ok, _ = _near_int(self.L)
        return ok

    def require_integers(self) -> int:
        """Return samples per unit, raising when integers are not grid points."""
        if not self.contains_integers:
            raise ConfigurationError(
                f"integers are not grid points (L={self.L}, h={self.h}); need 1/h and L integral"
            )
        return self.samples_per_unit

    def index_of(self, x) -> np.ndarray:
        """Grid index of the points ``x`` (rounded); no range check."""
        return np.rint((np.asarray(x, dtype=float) + self.L) / self.h).astype(np.int64)

    def integer_index(self, n) -> np.ndarray:
        """Grid index of integer ``n``; raises when off grid or out of range."""
        spu = self.require_integers()
        idx = (np.asarray(n, dtype=np.int64) + int(round(self.L))) * spu
        if np.any(idx < 0) or np.any(idx >= self.N):
            raise ConfigurationError(f"integer points {n} fall outside [-{self.L}, {self.L})")
        return idx


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Complex samples of a function on a :class:`Grid1D`.

    ``notes`` carries free-form metadata such as truncation warnings.
    """

    grid: Grid1D
    values: np.ndarray
    notes: tuple = field(default=())

    def __post_init__(self):
        vals = _frozen_array(self.values)
        if vals.shape != (self.grid.N,):
            raise ConfigurationError(f"expected {self.grid.N} samples, got shape {vals.shape}")
        if not np.all(np.isfinite(vals)):
            raise DomainError("sampled function has non-finite values")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_callable(cls, grid: Grid1D, func) -> "SampledFunction":
        return cls(grid, np.asarray(func(grid.points), dtype=np.complex128) * np.ones(grid.N))

    @classmethod
    def zeros(cls, grid: Grid1D) -> "SampledFunction":
        return cls(grid, np.zeros(grid.N))

    def _check(self, other):
        if other.grid != self.grid:
            raise GridMismatchError(f"grids differ: {self.grid} vs {other.grid}")

    def __add__(self, other):
        if isinstance(other, SampledFunction):
            self._check(other)
            return SampledFunction(self.grid, self.values + other.values)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, SampledFunction):
            self._check(other)
            return SampledFunction(self.grid, self.values - other.values)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, SampledFunction):
            self._check(other)
            return SampledFunction(self.grid, self.values * other.values)
        if np.isscalar(other):
            return SampledFunction(self.grid, self.values * other)
        return NotImplemented

    __rmul__ = __mul__

    def shifted(self, samples: int, wrap: bool = False) -> "SampledFunction":
        """Return ``f(x - samples*h)``; zero filled unless ``wrap``."""
        if wrap:
            return SampledFunction(self.grid, np.roll(self.values, samples))
        return SampledFunction(self.grid, shift_zero_fill(self.values, samples))


def shift_zero_fill(values: np.ndarray, samples: int) -> np.ndarray:
    """``out[i] = values[i - samples]`` with zeros where the index leaves the array."""
    out = np.zeros_like(values)
    n = values.shape[-1]
    if samples >= n or samples <= -n:
        return out
    if samples >= 0:
        out[..., samples:] = values[..., : n - samples]
    else:
        out[..., : n + samples] = values[..., -samples:]
    return out


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Transform samples ``fhat(xi_k)`` on the dual lattice of ``grid``."""

    grid: Grid1D
    values: np.ndarray

    def __post_init__(self):
        vals = _frozen_array(self.values)
        if vals.shape != (self.grid.N,):
            raise ConfigurationError(f"expected {self.grid.N} spectral samples, got {vals.shape}")
        object.__setattr__(self, "values", vals)

    @property
    def freqs(self) -> np.ndarray:
        return self.grid.freqs

    @classmethod
    def from_callable(cls, grid: Grid1D, func) -> "Spectrum":
        return cls(grid, np.asarray(func(grid.freqs), dtype=np.complex128) * np.ones(grid.N))


def _alternating(n: int, start: int = 0) -> np.ndarray:
    return np.where((np.arange(start, start + n) % 2) == 0, 1.0, -1.0)


def dft_forward(f: SampledFunction) -> Spectrum:
    """Rectangle-rule transform ``h * sum_j f(x_j) exp(-2 pi i x_j xi_k)``.

    Evaluated with one FFT; matches the direct sum to rounding.
    """
    g = f.grid
    sign_x = _alternating(g.N)
    sign_k = _alternating(g.N, -g.N // 2)
    return Spectrum(g, g.h * sign_k * np.fft.fft(f.values * sign_x))


def dft_inverse(fhat: Spectrum) -> SampledFunction:
    """Inverse of :func:`dft_forward`: ``dxi * sum_k fhat_k exp(2 pi i x_j xi_k)``."""
    g = fhat.grid
    sign_x = _alternating(g.N)
    sign_k = _alternating(g.N, -g.N // 2)
    return SampledFunction(g, g.dxi * g.N * sign_x * np.fft.ifft(fhat.values * sign_k))


def dft_direct(f: SampledFunction) -> Spectrum:
    """O(N^2) reference for :func:`dft_forward`."""
    g = f.grid
    phase = np.exp(-2j * np.pi * np.outer(g.freqs, g.points))
    return Spectrum(g, g.h * (phase @ f.values))


# ---------------------------------------------------------------------------
# (quasi-)norms


def _check_exponent(p) -> float:
    p = float(p)
    if math.isnan(p) or p <= 0:
        raise DomainError(f"exponent must be positive or infinite, got p={p}")
    return p


def _power_norm(abs_vals: np.ndarray, p: float, weight: float = 1.0) -> float:
    if abs_vals.size == 0:
        return 0.0
    if math.isinf(p):
        return float(abs_vals.max())
    scale = abs_vals.max()
    if scale == 0:
        return 0.0
    # scaled to keep |a|^p in range for tiny p and large entries
    total = weight * np.sum((abs_vals / scale) ** p)
    return float(scale * total ** (1.0 / p))


def power_sum(values, p) -> float:
    """``sum |a_k|^p`` (no root); used for p-th power comparisons when p < 1."""
    p = _check_exponent(p)
    a = np.abs(np.asarray(getattr(values, "values", values), dtype=np.complex128)).ravel()
    if math.isinf(p):
        raise DomainError("power sums need a finite exponent")
    return float(np.sum(a ** p))


def lp_quasinorm(seq, p) -> float:
    """``(sum |a_k|^p)^(1/p)``, or ``max |a_k|`` for ``p = inf``.

    Accepts :class:`FiniteSequence`, :class:`FiniteSequence2D` or an array.
    For ``p < 1`` this is only a quasi-norm.
    """
    p = _check_exponent(p)
    a = np.abs(np.asarray(getattr(seq, "values", seq), dtype=np.complex128)).ravel()
    return _power_norm(a, p)


def Lp_quasinorm(f: SampledFunction, p) -> float:
    """Rectangle-rule ``(h * sum_j |f(x_j)|^p)^(1/p)``; ``p = inf`` gives the max sample."""
    p = _check_exponent(p)
    a = np.abs(f.values)
    if math.isinf(p):
        return _power_norm(a, p)
    return _power_norm(a, p, weight=f.grid.h)


# ---------------------------------------------------------------------------
# sequences and periodic functions


def _centered(values, ndim):
    arr = _frozen_array(values)
    if arr.ndim != ndim:
        raise ConfigurationError(f"expected a {ndim}-d array, got shape {arr.shape}")
    for n in arr.shape:
        if n % 2 == 0:
            raise ConfigurationError(f"centered arrays need odd lengths, got shape {arr.shape}")
    return arr


@dataclass(frozen=True, eq=False)
class FiniteSequence:
    """Finitely supported sequence on Z stored on ``k = -M..M``."""

    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "values", _centered(self.values, 1))

    @property
    def radius(self) -> int:
        return (self.values.shape[0] - 1) // 2

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.radius, self.radius + 1)

    @classmethod
    def zeros(cls, radius: int) -> "FiniteSequence":
        return cls(np.zeros(2 * radius + 1))

    @classmethod
    def delta(cls, k: int = 0, radius: int | None = None) -> "FiniteSequence":
        radius = abs(k) if radius is None else radius
        v = np.zeros(2 * radius + 1, dtype=np.complex128)
        v[k + radius] = 1.0
        return cls(v)

    @classmethod
    def from_mapping(cls, entries: dict, radius: int | None = None) -> "FiniteSequence":
        radius = max((abs(k) for k in entries), default=0) if radius is None else radius
        v = np.zeros(2 * radius + 1, dtype=np.complex128)
        for k, val in entries.items():
            v[k + radius] = val
        return cls(v)

    def __getitem__(self, k):
        return self.get(k)

    def get(self, k):
        """Value at index ``k`` (vectorized), zero off the stored support."""
        k = np.asarray(k)
        inside = np.abs(k) <= self.radius
        out = np.zeros(k.shape, dtype=np.complex128)
        out[inside] = self.values[k[inside] + self.radius]
        return out if out.ndim else complex(out)

    def padded(self, radius: int) -> np.ndarray:
        """Values on ``-radius..radius``, zero padded or truncated."""
        return np.asarray(self.get(np.arange(-radius, radius + 1)))

    def transform(self, theta) -> np.ndarray:
        """``sum_k a_k exp(-2 pi i k theta)``."""
        theta = np.asarray(theta, dtype=float)
        return np.exp(-2j * np.pi * np.multiply.outer(theta, self.indices)) @ self.values


@dataclass(frozen=True, eq=False)
class FiniteSequence2D:
    """Finitely supported array on Z^2 stored on ``{-M..M}^2``; ``values[n+M, m+M]``."""

    values: np.ndarray

    def __post_init__(self):
        arr = _centered(self.values, 2)
        if arr.shape[0] != arr.shape[1]:
            raise ConfigurationError(f"2-d sequences are stored square, got {arr.shape}")
        object.__setattr__(self, "values", arr)

    @property
    def radius(self) -> int:
        return (self.values.shape[0] - 1) // 2

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.radius, self.radius + 1)

    @classmethod
    def zeros(cls, radius: int) -> "FiniteSequence2D":
        return cls(np.zeros((2 * radius + 1, 2 * radius + 1)))

    @classmethod
    def delta(cls, n: int = 0, m: int = 0, radius: int | None = None) -> "FiniteSequence2D":
        radius = max(abs(n), abs(m)) if radius is None else radius
        v = np.zeros((2 * radius + 1, 2 * radius + 1), dtype=np.complex128)
        v[n + radius, m + radius] = 1.0
        return cls(v)

    @classmethod
    def from_function(cls, func, radius: int) -> "FiniteSequence2D":
        idx = np.arange(-radius, radius + 1)
        n, m = np.meshgrid(idx, idx, indexing="ij")
        return cls(np.asarray(func(n, m), dtype=np.complex128) * np.ones(n.shape))

    def __getitem__(self, nm):
        n, m = nm
        return self.get(n, m)

    def get(self, n, m):
        """Value at ``(n, m)`` (vectorized, broadcasting), zero off the stored support."""
        n, m = np.broadcast_arrays(np.asarray(n), np.asarray(m))
        M = self.radius
        inside = (np.abs(n) <= M) & (np.abs(m) <= M)
        out = np.zeros(n.shape, dtype=np.complex128)
        out[inside] = self.values[n[inside] + M, m[inside] + M]
        return out if out.ndim else complex(out)

    def block(self, rows: np.ndarray, cols: np.ndarray) -> np.ndarray:
        """Dense block ``[phi(n, m) for n in rows for m in cols]``."""
        return np.asarray(self.get(rows[:, None], cols[None, :]))

    def nonzero(self):
        """Iterate ``(n, m, value)`` over nonzero entries in row-major order."""
        M = self.radius
        for i, j in zip(*np.nonzero(self.values)):
            yield int(i) - M, int(j) - M, self.values[i, j]


def boundary_max(K: FiniteSequence2D) -> float:
    """``max |K_{n,m}|`` over the outer ring ``max(|n|,|m|) = R``; a truncation proxy."""
    v = np.abs(K.values)
    return float(max(v[0].max(), v[-1].max(), v[:, 0].max(), v[:, -1].max()))


def default_nodes(degree: int) -> int:
    """Power-of-two node count that integrates ``|F|^2`` exactly for degree ``degree``."""
    need = 8 * (2 * degree + 1)
    return 1 << max(3, (need - 1).bit_length())


@dataclass(frozen=True, eq=False)
class PeriodicFunction:
    """1-periodic trigonometric polynomial ``sum_{|n|<=M} c_n exp(2 pi i n x)``.

    The period cell is ``J = [-1/2, 1/2)``; quadrature nodes are
    ``x_i = -1/2 + i/K``.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _centered(self.coeffs, 1))

    @property
    def degree(self) -> int:
        return (self.coeffs.shape[0] - 1) // 2

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.degree, self.degree + 1)

    @classmethod
    def zeros(cls, degree: int = 0) -> "PeriodicFunction":
        return cls(np.zeros(2 * degree + 1))

    @classmethod
    def from_function(cls, func, degree: int, nodes: int | None = None) -> "PeriodicFunction":
        """Coefficients of ``func`` up to ``degree`` by the ``nodes``-point rectangle rule."""
        nodes = default_nodes(degree) if nodes is None else nodes
        if nodes < 2 * degree + 1:
            raise ConfigurationError(f"{nodes} nodes cannot resolve degree {degree}")
        x = cls.nodes(nodes)
        vals = np.asarray(func(x), dtype=np.complex128) * np.ones(nodes)
        n = np.arange(-degree, degree + 1)
        c = np.exp(-2j * np.pi * np.outer(n, x)) @ vals / nodes
        return cls(c)

    @staticmethod
    def nodes(count: int) -> np.ndarray:
        return -0.5 + np.arange(count) / count

    def coefficient(self, n):
        n = np.asarray(n)
        inside = np.abs(n) <= self.degree
        out = np.zeros(n.shape, dtype=np.complex128)
        out[inside] = self.coeffs[n[inside] + self.degree]
        return out if out.ndim else complex(out)

    def padded(self, degree: int) -> np.ndarray:
        return np.asarray(self.coefficient(np.arange(-degree, degree + 1)))

    def evaluate(self, x) -> np.ndarray:
        """Direct evaluation at arbitrary points."""
        x = np.asarray(x, dtype=float)
        return np.exp(2j * np.pi * np.multiply.outer(x, self.indices)) @ self.coeffs

    def samples(self, count: int | None = None) -> np.ndarray:
        """Values at the ``count`` quadrature nodes via one folded FFT."""
        count = default_nodes(self.degree) if count is None else int(count)
        signed = self.coeffs * _alternating(self.coeffs.shape[0], -self.degree)
        folded = np.zeros(count, dtype=np.complex128)
        np.add.at(folded, self.indices % count, signed)
        return count * np.fft.ifft(folded)

    def lp_norm(self, p, nodes: int | None = None) -> float:
        """Rectangle-rule ``L^p(T)`` (quasi-)norm over ``nodes`` points."""
        p = _check_exponent(p)
        nodes = default_nodes(self.degree) if nodes is None else int(nodes)
        a = np.abs(self.samples(nodes))
        return _power_norm(a, p, weight=1.0 if math.isinf(p) else 1.0 / nodes)

    def modulated(self, shift: int) -> "PeriodicFunction":
        """``exp(-2 pi i shift x) F(x)``: coefficient ``n`` becomes ``c_{n+shift}``."""
        M = self.degree + abs(shift)
        n = np.arange(-M, M + 1)
        return PeriodicFunction(self.coefficient(n + shift))

    def __add__(self, other):
        if isinstance(other, PeriodicFunction):
            M = max(self.degree, other.degree)
            return PeriodicFunction(self.padded(M) + other.padded(M))
        return NotImplemented

    def __mul__(self, other):
        if np.isscalar(other):
            return PeriodicFunction(self.coeffs * other)
        return NotImplemented

    __rmul__ = __mul__


# ---------------------------------------------------------------------------
# exponent triples


def _parse_exponent(text) -> float:
    if isinstance(text, (int, float, Fraction)):
        return float(text)
    s = str(text).strip().lower()
    if s in ("inf", "infinity", "oo", "∞"):
        return math.inf
    return float(Fraction(s))


@dataclass(frozen=True)
class ExponentTriple:
    """Hölder-related ``(p1, p2, p3)``: ``1/p1 + 1/p2 = 1/p3``, ``p1, p2 >= 1``, ``p3 >= 1/2``."""

    p1: float
    p2: float
    p3: float

    def __post_init__(self):
        p1, p2, p3 = (_parse_exponent(v) for v in (self.p1, self.p2, self.p3))
        for name, v in (("p1", p1), ("p2", p2), ("p3", p3)):
            if math.isnan(v):
                raise DomainError(f"{name} is not a number")
        if p1 < 1 or p2 < 1:
            raise DomainError(f"p1 and p2 must be >= 1, got ({p1}, {p2})")
        if p3 < 0.5:
            raise DomainError(f"p3 must be >= 1/2, got {p3}")
        lhs = 1.0 / p1 + 1.0 / p2
        rhs = 1.0 / p3
        if abs(lhs - rhs) > HOLDER_RTOL * max(rhs, 1e-300):
            raise DomainError(
                f"exponents ({p1}, {p2}, {p3}) are not Hölder related: 1/p1 + 1/p2 = {lhs!r} != 1/p3 = {rhs!r}"
            )
        object.__setattr__(self, "p1", p1)
        object.__setattr__(self, "p2", p2)
        object.__setattr__(self, "p3", p3)

    @classmethod
    def parse(cls, text: str) -> "ExponentTriple":
        parts = [s for s in str(text).replace("(", "").replace(")", "").split(",") if s.strip()]
        if len(parts) != 3:
            raise DomainError(f"expected three comma-separated exponents, got {text!r}")
        return cls(*parts)

    @classmethod
    def from_pair(cls, p1, p2) -> "ExponentTriple":
        p1, p2 = _parse_exponent(p1), _parse_exponent(p2)
        inv = (0.0 if math.isinf(p1) else 1.0 / p1) + (0.0 if math.isinf(p2) else 1.0 / p2)
        return cls(p1, p2, math.inf if inv == 0 else 1.0 / inv)

    def __iter__(self):
        return iter((self.p1, self.p2, self.p3))

    def __str__(self):
        return f"({self.p1:g}, {self.p2:g}, {self.p3:g})"


# ---------------------------------------------------------------------------
# Poisson periodization and integer sampling


def periodize(f: SampledFunction, tol: float = PERIODIZE_TAIL_TOL) -> PeriodicFunction:
    """Fourier coefficients of ``sum_n f(x + n)``, read off the transform at integers.

    By Poisson summation the ``k``-th coefficient of the periodization is
    ``fhat(k)``. The Nyquist coefficient is split evenly between ``+-M`` so
    that sampling the result on the grid reproduces the discrete
    periodization exactly.

    Raises
    ------
    AccuracyError
        When the mass in the outermost unit interval at either end of the
        window exceeds ``tol`` times the total mass.
    """
    g = f.grid
    spu = g.require_integers()
    P = g.periods
    a = np.abs(f.values)
    total = a.sum()
    if total == 0:
        return PeriodicFunction.zeros(0)
    edge = a[:spu].sum() + a[-spu:].sum()
    tail = edge / total
    if tail > tol:
        raise AccuracyError(f"tail mass {tail:.3e} exceeds tolerance {tol:.1e}; widen the grid", tail)
    fhat = dft_forward(f).values
    # integer frequency n sits at k = P n, i.e. array index P n + N/2
    M = spu // 2
    n = np.arange(-M, M + 1)
    idx = P * n + g.N // 2
    coeffs = np.zeros(2 * M + 1, dtype=np.complex128)
    valid = idx < g.N
    coeffs[valid] = fhat[idx[valid]]
    if spu % 2 == 0:
        nyq = fhat[g.N // 2 - P * M]
        coeffs[0] = nyq / 2
        coeffs[-1] = nyq / 2
    return PeriodicFunction(coeffs)


def sample_at_integers(f: SampledFunction, radius: int) -> FiniteSequence:
    """``f(n)`` for ``|n| <= radius``; the grid must contain those integers."""
    n = np.arange(-radius, radius + 1)
    return FiniteSequence(f.values[f.grid.integer_index(n)])


def energy_fraction_outside(spec: Spectrum, band: float) -> float:
    """Share of ``sum |fhat_k|^2`` carried by ``|xi_k| > band``."""
    e = np.abs(spec.values) ** 2
    total = e.sum()
    if total == 0:
        return 0.0
    return float(e[np.abs(spec.freqs) > band].sum() / total)
