import numpy as np
import pytest

from bimult.catalog import SYMBOLS, make_symbol, symbol_names
from bimult.core import Grid1D
from bimult.symbols import (
    bht_symbol,
    bump_phi,
    constant_symbol,
    fejer_square_symbol,
    frequency_bump_hat,
    indicator_box,
    smooth_step,
    support_bump,
    tent_lambda,
)


def test_bht_values():
    psi = bht_symbol()
    assert psi(1, 0) == -1j
    assert psi(0, 1) == 1j
    t = np.linspace(-3, 3, 7)
    assert np.all(psi(t, t) == 0)
    assert psi.sup_bound == 1 and psi.singular_lines == ("xi = eta",)


def test_tent_values():
    psi = tent_lambda()
    assert psi(0, 0) == 1
    assert psi(0.5, 0.5) == 0.25
    assert psi(1.5, 0) == 0
    assert psi(1.0, 0) == 0 and psi(-1.0, 0) == 0


def test_tent_integrates_to_one():
    n = 2000
    x = -1 + (np.arange(n) + 0.5) * (2 / n)
    total = tent_lambda()(x[:, None], x[None, :]).real.sum() * (2 / n) ** 2
    assert total == pytest.approx(1, abs=1e-6)


def test_fejer_values():
    psi = fejer_square_symbol()
    assert psi(0, 0) == 1
    assert abs(psi(0.25, 0)) < 1e-30
    assert psi(0.125, 0.125).real == pytest.approx((4 / np.pi ** 2) ** 2, rel=1e-14)


def test_indicator_box_half_open():
    psi = indicator_box()
    assert psi(0, 0) == 1
    assert psi(0.5, 0) == 0
    assert psi(-0.5, -0.5) == 1


def test_support_bump():
    assert support_bump(0.5) == 1
    assert support_bump(-0.1) == 0
    x = np.linspace(0.25, 0.75, 101)
    assert np.all(support_bump(x) == 1)
    y = np.linspace(-1, 2, 3001)
    v = support_bump(y)
    assert np.all((v >= 0) & (v <= 1))
    assert np.all(v[(y <= 0) | (y >= 1)] == 0)
    # mollified indicator of [1/8, 7/8]: the transition is symmetric about its midpoint
    assert support_bump(0.125) == pytest.approx(0.5, abs=1e-15)


def test_frequency_bump():
    assert frequency_bump_hat(0.4) == 1
    xi = np.linspace(-2, 2, 4001)
    v = frequency_bump_hat(xi)
    assert np.all(v[np.abs(xi) >= 1] == 0)
    assert np.all(v[np.abs(xi) <= 0.5] == 1)


def test_bump_phi_flavors():
    g = Grid1D(8, 512)
    phi, phi_hat = bump_phi("support_side", g)
    assert phi.values[g.index_of(0.5)] == 1
    assert phi.values[g.index_of(-0.125)] == 0
    phi, phi_hat = bump_phi("frequency_side", g)
    assert phi_hat.values[np.argmin(np.abs(g.freqs - 0.375))] == 1
    assert np.all(phi_hat.values[np.abs(g.freqs) >= 1] == 0)
    with pytest.raises(ValueError):
        bump_phi("other", g)


def test_smooth_step_limits():
    assert smooth_step(0) == 0 and smooth_step(1) == 1
    assert smooth_step(0.5) == pytest.approx(0.5)


@pytest.mark.parametrize("name", sorted(SYMBOLS))
def test_catalog_invariants(name, rng):
    psi = make_symbol(name)
    xi = rng.uniform(-3, 3, 10_000)
    eta = rng.uniform(-3, 3, 10_000)
    v = psi(xi, eta)
    assert np.all(np.isfinite(v))
    assert np.all(np.abs(v) <= psi.sup_bound * (1 + 1e-12))
    if psi.periodic_x:
        assert np.abs(psi(xi + 1, eta) - v).max() <= 1e-12
    if psi.periodic_y:
        assert np.abs(psi(xi, eta + 1) - v).max() <= 1e-12
    if psi.support_box is not None:
        (x0, x1), (y0, y1) = psi.support_box
        outside = (xi < x0) | (xi >= x1) | (eta < y0) | (eta >= y1)
        assert np.all(v[outside] == 0)


def test_symbol_algebra():
    psi = tent_lambda() * indicator_box()
    assert psi.support_box == ((-0.5, 0.5), (-0.5, 0.5))
    assert psi(0.25, 0) == 0.75
    assert (2 * constant_symbol(1.0))(0.3, 0.1) == 2
    assert (constant_symbol(1.0) * constant_symbol(3.0)).periodic


def test_catalog_unknown():
    with pytest.raises(KeyError):
        make_symbol("nope")
    assert "bht" in symbol_names() and "fejer2" in symbol_names()
