"""Exit criteria of the build, one test per criterion, each printing a PASS/FAIL line."""

import time
import warnings

import numpy as np
import pytest

from conftest import ACCEPTANCE_LINES

from bimult.catalog import make_symbol
from bimult.core import ExponentTriple, FiniteSequence, FiniteSequence2D, Grid1D, SampledFunction
from bimult.symbols import indicator_box, mollified_box, support_bump, tent_lambda
from bimult.verification import (
    check_bht_crossval,
    check_bht_stability,
    check_convolution_bound,
    check_dilation,
    check_kernel_series,
    check_performance,
    check_piecewise_assembly,
    check_quasi_norm_chain,
    check_remark_p1_failure,
    check_restriction_identity,
    check_sampling_lemma,
    check_skl_decay,
    check_support_lemma,
    check_tent_interpolation,
    covering_radius,
    dirichlet_kernel,
    gaussian_pair,
    report_passed,
)

pytestmark = pytest.mark.acceptance

PERIODIC = ("tent-periodized", "box-periodized", "trig")
TRIPLES = ("2,2,1", "4,4,2", "3,3,3/2")


def record(number, name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} criterion {number:2d} {name}: {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def _random_phi(seed, radius):
    r = np.random.default_rng(seed)
    n = 2 * radius + 1
    return FiniteSequence2D(r.standard_normal((n, n)) + 1j * r.standard_normal((n, n)))


def _compact_bump(grid, lo, hi):
    # smooth, supported in [lo, hi]
    return SampledFunction.from_callable(grid, lambda x: support_bump((x - lo) / (hi - lo)))


def test_01_restriction_identity():
    t0 = time.perf_counter()
    devs = {}
    for name in PERIODIC:
        rep = check_restriction_identity(make_symbol(name), trials=5, seed=1, radius=4)
        devs[name] = rep.lhs
    elapsed = time.perf_counter() - t0
    ok = all(d < 1e-6 for d in devs.values()) and elapsed < 30
    detail = ", ".join(f"{k} {v:.2e}" for k, v in devs.items())
    record(1, "restriction identity", ok, f"max deviation {detail} (< 1e-6); {elapsed:.1f} s (< 30 s)")


def test_02_quasi_norm_chain():
    worst, ok = [], True
    for text in TRIPLES:
        triple = ExponentTriple.parse(text)
        for name in PERIODIC:
            rep = check_quasi_norm_chain(make_symbol(name), triple, trials=100, seed=2, atol=1e-6)
            ok &= report_passed(rep)
            worst.append(rep.lhs - 2 * rep.rhs)
    record(2, "quasi-norm chain", ok,
           f"3 triples x 3 symbols x 100 trials; worst sum|D|^p3 - 2 int|C|^p3 = {max(worst):.3e} (<= 1e-6)")


def test_03_kernel_series():
    grid = Grid1D(8, 512)
    f = _compact_bump(grid, -2, 2)
    g = _compact_bump(grid, -1.5, 2)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        rep = check_kernel_series(make_symbol("tent-periodized"), f, g, radius=16)
    record(3, "kernel series", rep.passed,
           f"sup |C - sum K f g| = {rep.lhs:.2e} at R = 16 (< 1e-6); "
           f"{rep.details['truncation_warnings']} truncation warning(s) from shifts past the grid")


def test_04_dilation():
    ok, worst, exact = True, 0.0, True
    phi = _random_phi(4, 2)
    for triple in (ExponentTriple(2, 2, 1), ExponentTriple(4 / 3, 4 / 3, 2 / 3)):
        for k in (1, 2, 3):
            rep = check_dilation(phi, k, triple, trials=50, seed=4, tol=1e-10)
            ok &= report_passed(rep)
            exact &= rep.details["coefficients_exact"]
            worst = max(worst, max(t.lhs / max(1.0, t.details["right"]) for t in rep.trial_reports))
    record(4, "dilation equality", ok and exact,
           f"k = 1,2,3, 50 trials, worst relative gap {worst:.2e} (< 1e-10); fold coefficients exact: {exact}")


def test_05_convolution():
    a = _random_phi(50, 1)
    phi = _random_phi(51, 2)
    parts, ok = [], True
    for triple in (ExponentTriple(2, 2, 1), ExponentTriple(4 / 3, 4 / 3, 2 / 3)):
        rep = check_convolution_bound(a, phi, triple, trials=100, seed=5, slack=1e-8)
        ok &= report_passed(rep)
        parts.append(f"q = {rep.details['q']:.3g}: worst lhs/rhs {rep.lhs / rep.rhs:.3f}")
    record(5, "convolution bound", ok, "; ".join(parts) + " (slack 1e-8, 100 trials)")


def test_06_tent_and_assembly():
    phi = _random_phi(6, 3)
    tent = check_tent_interpolation(phi)
    pw = check_piecewise_assembly(phi, points=1000, seed=6)
    ok = tent.lhs == 0 and pw.lhs == 0 and pw.details["mismatches"] == 0
    record(6, "tent interpolation + assembly", ok,
           f"tent error {tent.lhs}, assembly mismatches {pw.details['mismatches']} of 1000")


def test_07_skl_decay():
    t0 = time.perf_counter()
    rep = check_skl_decay(radius=8, inner=4)
    elapsed = time.perf_counter() - t0
    ratios = np.array(rep.details["doubling_ratios"])
    ok = rep.passed and np.isfinite(rep.details["constant"]) and elapsed < 60
    record(7, "S_kl decay", ok,
           f"weighted max on [-8,8]^4 = {rep.details['constant']:.3f}, shell max {rep.lhs:.3f} <= inner "
           f"{rep.rhs:.3f}; doubling ratios in n {ratios.min():.1f}..{ratios.max():.1f}; {elapsed:.1f} s (< 60 s)")


def test_08_band_limitation():
    grid = Grid1D(8, 512)
    f, g = gaussian_pair(grid)
    fracs = {}
    for psi in (indicator_box(), tent_lambda(0.5), mollified_box()):
        fracs[psi.name] = check_support_lemma(psi, f, g, threshold=1e-8).lhs
    ok = all(v < 1e-8 for v in fracs.values())
    record(8, "band limitation", ok, ", ".join(f"{k} {v:.1e}" for k, v in fracs.items()) + " (< 1e-8)")


def test_09_sampling():
    grid = Grid1D(32, 1024)
    nyquist = {}
    for width in (0.25, 0.5, 1.0):
        # spectrum is the indicator of [-width/2, width/2): total band width <= 1
        g = dirichlet_kernel(grid, width / 2)
        nyquist[width] = check_sampling_lemma(g, width / 2, 2).details["C_p"]
    half_width_one = check_sampling_lemma(dirichlet_kernel(grid, 1.0), 1.0, 2, ceiling=2.0).details["C_p"]
    stable = {}
    for p in (0.5, 1.0):
        vals = []
        for N in (1024, 2048):
            gr = Grid1D(32, N)
            g = SampledFunction.from_callable(gr, lambda x: np.sinc(0.8 * x) ** 4)
            vals.append(check_sampling_lemma(g, 1.6, p, ceiling=np.inf).details["C_p"])
        stable[p] = abs(vals[1] / vals[0] - 1)
    ok = (all(abs(c - 1) <= 1e-8 for c in nyquist.values())
          and abs(half_width_one - 2) <= 1e-8
          and all(v < 0.01 for v in stable.values()))
    record(9, "sampling lemma", ok,
           "C^2 = " + ", ".join(f"{c:.12f} (width {w:g})" for w, c in nyquist.items())
           + f"; spectrum [-1,1) gives C^2 = {half_width_one:.12f} by aliasing"
           + "; N->2N drift " + ", ".join(f"p={p:g} {v:.1e}" for p, v in stable.items()) + " (< 1%)")


def test_10_bht():
    grid = Grid1D(8, 1024)
    cross = check_bht_crossval(*gaussian_pair(grid), tol=1e-2)
    stab = check_bht_stability(ExponentTriple(2, 2, 1), sizes=(256, 512, 1024), tol=0.05)
    ok = cross.passed and stab.passed
    record(10, "bilinear Hilbert transform", ok,
           f"relative gap {cross.lhs:.2e} (< 1e-2); ratio variation over N = 256,512,1024 "
           f"{stab.lhs:.1e} (< 5%)")


def test_11_remark():
    alt = FiniteSequence(np.array([(-1.0) ** n for n in range(-8, 9)]))
    widths = (2, 1, 0.5, 0.25, 0.125, 0.0625)
    grow = check_remark_p1_failure(alt, widths, expect="growth", growth=2.0)
    M = covering_radius(Grid1D(8, 2048))
    flat = check_remark_p1_failure(FiniteSequence(np.ones(2 * M + 1)), widths, expect="flat", flat_tol=0.01)
    ok = report_passed(grow) and flat.passed
    curve = ", ".join(f"{r:.2f}" for r in grow.details["ratios"])
    record(11, "p1 = 1 failure", ok,
           f"alternating ratios {curve} (growth {grow.rhs:.2f}x >= 2x); constant spread {flat.lhs:.1e} (<= 1%)")


def test_12_performance():
    rep = check_performance(N=1024, min_speedup=4.0, tol=1e-10)
    ok = report_passed(rep)
    d = rep.details
    record(12, "performance", ok,
           f"fast {d['fast_s'] * 1e3:.1f} ms, slow {d['slow_s'] * 1e3:.0f} ms, speedup {rep.rhs:.0f}x (>= 4x), "
           f"relative error {d['relative_error']:.1e} (<= 1e-10)")
