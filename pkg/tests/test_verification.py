import math

import numpy as np
import pytest

from bimult.catalog import make_symbol
from bimult.core import ExponentTriple, FiniteSequence, FiniteSequence2D, Grid1D, SampledFunction
from bimult.errors import AccuracyError, ConfigurationError, DomainError, TrialError
from bimult.symbols import bht_symbol, constant_symbol, indicator_box, tent_lambda
from bimult.verification import (
    InequalityReport,
    LineMultiplier,
    SequenceMultiplier,
    TorusMultiplier,
    check_bht_crossval,
    check_bht_stability,
    check_convolution_bound,
    check_dilation,
    check_folding_contraction,
    check_kernel_series,
    check_piecewise_assembly,
    check_quasi_norm_chain,
    check_remark_p1_failure,
    check_restriction_bound,
    check_restriction_identity,
    check_sampling_lemma,
    check_support_lemma,
    check_tent_interpolation,
    covering_radius,
    digest,
    dirichlet_kernel,
    estimate_norm,
    gaussian,
    gaussian_pair,
    report_passed,
    trial_rng,
)

T221 = ExponentTriple(2, 2, 1)
ZERO = constant_symbol(0.0)


def test_report_semantics():
    r = InequalityReport("c", "ref", 2.0, 1.0, constant=2.0)
    assert r.passed
    assert not InequalityReport("c", "ref", 2.0 + 1e-9, 1.0, constant=2.0).passed
    assert InequalityReport("c", "ref", 1.1, 1.0, slack=0.2).passed
    assert InequalityReport("c", "ref", 1e-7, 0.0, atol=1e-6).passed
    rec = r.to_record()
    assert set(rec) == {"check", "theorem_ref", "lhs", "rhs", "constant", "slack", "pass", "seed",
                        "trials", "witness_digest"}
    assert rec["pass"] is True


def test_trial_streams_and_digest():
    a = trial_rng(3, 1).standard_normal(4)
    assert np.array_equal(a, trial_rng(3, 1).standard_normal(4))
    assert not np.array_equal(a, trial_rng(3, 2).standard_normal(4))
    assert digest({"x": [1.0, 2.0]}) == digest({"x": [1.0, 2.0]})
    assert digest({"x": [1.0, 2.0]}) != digest({"x": [1.0, 2.5]})


# norm estimation


def test_estimate_identity_symbol():
    est = estimate_norm(TorusMultiplier(FiniteSequence2D(np.ones((9, 9)))), T221, trials=4)
    assert est.value >= 1 - 1e-6


def test_estimate_zero_symbol():
    est = estimate_norm(TorusMultiplier(FiniteSequence2D(np.zeros((3, 3)))), T221, trials=4)
    assert est.value == 0


def test_estimate_delta_symbol():
    est = estimate_norm(TorusMultiplier(FiniteSequence2D.delta(0, 0)), T221, trials=6)
    assert max(est.history) <= 1 + 1e-6
    assert est.value == pytest.approx(1, rel=1e-12)


def test_estimate_monotone_in_trials():
    op = LineMultiplier(bht_symbol(), Grid1D(8, 256), radius=2)
    few = estimate_norm(op, T221, trials=3, seed=5)
    many = estimate_norm(op, T221, trials=6, seed=5)
    assert few.value <= many.value
    assert few.history == many.history[:3]


def test_estimate_deterministic():
    op = SequenceMultiplier(make_symbol("tent-periodized"), radius=2)
    a = estimate_norm(op, ExponentTriple(4, 4, 2), trials=5, seed=9, ascent_steps=4)
    b = estimate_norm(op, ExponentTriple(4, 4, 2), trials=5, seed=9, ascent_steps=4)
    assert a.value == b.value and a.witness_digest == b.witness_digest


@pytest.mark.parametrize("make", [
    lambda: TorusMultiplier(FiniteSequence2D(np.arange(9.0).reshape(3, 3))),
    lambda: LineMultiplier(tent_lambda(), Grid1D(8, 256), radius=2),
    lambda: SequenceMultiplier(make_symbol("bht-periodized"), radius=2),
])
def test_estimate_scaling(make):
    op = make()
    c = -2j
    base = estimate_norm(op, T221, trials=4, seed=1)
    scaled = estimate_norm(op.scaled(c), T221, trials=4, seed=1)
    assert scaled.value == pytest.approx(abs(c) * base.value, rel=1e-10)


def test_estimate_ascent_never_decreases():
    op = LineMultiplier(bht_symbol(), Grid1D(8, 256), radius=2)
    plain = estimate_norm(op, T221, trials=3, seed=2)
    climbed = estimate_norm(op, T221, trials=3, seed=2, ascent_steps=6)
    assert climbed.value >= plain.value


def test_estimate_errors():
    op = TorusMultiplier(FiniteSequence2D.delta(0, 0))
    with pytest.raises(ConfigurationError):
        estimate_norm(op, T221, trials=0)

    class Broken(TorusMultiplier):
        def norms(self, cf, cg, triple):
            if cf[0] != 0:
                raise ValueError("boom")
            return super().norms(cf, cg, triple)

    with pytest.raises(TrialError) as info:
        estimate_norm(Broken(FiniteSequence2D.delta(0, 0)), T221, trials=3)
    assert info.value.trial == 1


# restriction checks


def test_restriction_bound_one_and_zero():
    one = check_restriction_bound(constant_symbol(1.0), T221, trials=10, radius=2)
    assert report_passed(one)
    zero = check_restriction_bound(ZERO, T221, trials=5, radius=2)
    assert report_passed(zero) and zero.lhs == 0


def test_restriction_bound_bht_periodized():
    r = check_restriction_bound(make_symbol("bht-periodized"), T221, trials=200, seed=42)
    assert report_passed(r) and r.trials == 200
    assert all(t.passed for t in r.trial_reports)


def test_restriction_identity_and_chain():
    psi = make_symbol("box-periodized")
    assert report_passed(check_restriction_identity(psi, trials=3))
    assert report_passed(check_quasi_norm_chain(psi, ExponentTriple(4, 4, 2), trials=10))
    with pytest.raises(DomainError):
        check_quasi_norm_chain(psi, ExponentTriple("inf", "inf", "inf"), trials=1)


# sampling and support


def test_sampling_nyquist_dirichlet():
    grid = Grid1D(32, 1024)
    r = check_sampling_lemma(dirichlet_kernel(grid, 0.5), 0.5, 2)
    assert r.details["C_p"] == pytest.approx(1, abs=1e-8)


def test_sampling_zero_function():
    r = check_sampling_lemma(SampledFunction.zeros(Grid1D(8, 256)), 0.5, 1)
    assert r.passed and r.lhs == 0


def test_sampling_sinc_power_stable():
    # sinc^4(0.8 x) has transform supported in [-1.6, 1.6] and decays fast enough to truncate
    vals = []
    for N in (1024, 2048):
        grid = Grid1D(32, N)
        g = SampledFunction.from_callable(grid, lambda x: np.sinc(0.8 * x) ** 4)
        vals.append(check_sampling_lemma(g, 1.6, 1).details["C_p"])
    assert abs(vals[1] / vals[0] - 1) < 0.01


def test_sampling_rejects_wide_band():
    grid = Grid1D(8, 256)
    with pytest.raises(AccuracyError):
        check_sampling_lemma(gaussian(grid), 0.1, 2)


@pytest.mark.parametrize("psi", [indicator_box(), indicator_box() * 0.0, tent_lambda(0.5) * 3])
def test_support_lemma_passes(psi):
    grid = Grid1D(8, 512)
    f, g = gaussian_pair(grid)
    assert check_support_lemma(psi, f, g).passed


def test_support_lemma_rejects_unsupported():
    grid = Grid1D(8, 256)
    f, g = gaussian_pair(grid)
    with pytest.raises(DomainError):
        check_support_lemma(bht_symbol(), f, g)
    with pytest.raises(DomainError):
        check_support_lemma(tent_lambda(1.0), f, g)


# zero inputs pass every checker with lhs = 0


def test_zero_symbol_checks():
    psi0 = ZERO
    assert check_restriction_identity(psi0).lhs == 0
    chain = check_quasi_norm_chain(psi0, T221, trials=3)
    assert chain.passed and chain.lhs == 0
    grid = Grid1D(8, 512)
    f, g = gaussian(grid, 0, 0.5), gaussian(grid, 0, 0.5)
    ks = check_kernel_series(psi0, f, g, radius=2)
    assert ks.passed and ks.lhs == 0
    phi0 = FiniteSequence2D(np.zeros((3, 3)))
    for report in (check_dilation(phi0, 2, T221, trials=3),
                   check_convolution_bound(FiniteSequence2D.delta(1, 0), phi0, T221, trials=3),
                   check_tent_interpolation(phi0),
                   check_piecewise_assembly(phi0, points=100)):
        assert report_passed(report) and report.lhs == 0


def test_kernel_series_warns_but_agrees():
    grid = Grid1D(8, 512)
    f = SampledFunction.from_callable(grid, lambda x: np.exp(-1 / np.maximum(4 - x ** 2, 1e-300)) * (np.abs(x) < 2))
    r = check_kernel_series(make_symbol("tent-periodized"), f, f, radius=16)
    assert r.passed and r.lhs < 1e-12
    assert r.details["truncation_warnings"] >= 1


def test_dilation_and_folding():
    rng = np.random.default_rng(0)
    phi = FiniteSequence2D(rng.standard_normal((5, 5)) + 0j)
    for k in (1, 2, 3):
        r = check_dilation(phi, k, T221, trials=5)
        assert report_passed(r) and r.details["coefficients_exact"]
    for p in (1, 2, math.inf):
        assert report_passed(check_folding_contraction(3, p, trials=5))


def test_convolution_bound_quasi():
    rng = np.random.default_rng(1)
    a = FiniteSequence2D(rng.standard_normal((3, 3)) + 0j)
    phi = FiniteSequence2D(rng.standard_normal((3, 3)) + 0j)
    r = check_convolution_bound(a, phi, ExponentTriple(4 / 3, 4 / 3, 2 / 3), trials=10)
    assert report_passed(r) and r.details["q"] == pytest.approx(2 / 3)


# bilinear Hilbert transform and the p1 = 1 remark


def test_bht_checks():
    grid = Grid1D(8, 1024)
    assert check_bht_crossval(*gaussian_pair(grid)).passed
    assert check_bht_stability(T221).passed


def test_bht_crossval_ghost_on_offcenter_pair():
    # off-center inputs put the periodic image of the output near x = -L
    grid = Grid1D(8, 1024)
    r = check_bht_crossval(gaussian(grid, -0.5, 1.0), gaussian(grid, 0.75, 1.5))
    wide = Grid1D(32, 4096)
    r_wide = check_bht_crossval(gaussian(wide, -0.5, 1.0), gaussian(wide, 0.75, 1.5))
    assert r_wide.lhs < r.lhs / 4


def test_remark_curves():
    alt = FiniteSequence(np.array([(-1.0) ** n for n in range(-8, 9)]))
    grow = check_remark_p1_failure(alt, expect="growth")
    assert report_passed(grow)
    ratios = grow.details["ratios"]
    assert all(np.isfinite(ratios))
    M = covering_radius(Grid1D(8, 2048))
    flat = check_remark_p1_failure(FiniteSequence(np.ones(2 * M + 1)), expect="flat")
    assert flat.passed
    with pytest.raises(ValueError):
        check_remark_p1_failure(alt, widths=(1, 0.5), expect="other")
