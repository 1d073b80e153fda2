"""Bilinear Fourier multipliers on R, T and Z: operators, transference maps and checks."""

from .core import (
    ExponentTriple,
    FiniteSequence,
    FiniteSequence2D,
    Grid1D,
    Lp_quasinorm,
    PeriodicFunction,
    SampledFunction,
    Spectrum,
    dft_forward,
    dft_inverse,
    lp_quasinorm,
    periodize,
)
from .errors import (
    AccuracyError,
    BimultError,
    ConfigurationError,
    DomainError,
    GridMismatchError,
    HypothesisWarning,
    TrialError,
    TruncationWarning,
)
from .kernels import BACKEND, COMPILED_AVAILABLE
from .operators import apply_C, apply_D, apply_kernel_series, apply_P, bht_timedomain, compute_K
from .symbols import Symbol2D

__version__ = "0.1.0"
