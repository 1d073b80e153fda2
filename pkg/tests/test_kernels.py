import os

import numpy as np
import pytest

from bimult import kernels


def _data(rng, n, m):
    x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    y = rng.standard_normal(m) + 1j * rng.standard_normal(m)
    w = rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))
    return x, y, w


def _oracle(x, y, w, offset=0):
    out = np.zeros(len(x) + len(y) - 1 + offset, dtype=complex)
    for i in range(len(x)):
        for j in range(len(y)):
            out[i + j + offset] += x[i] * y[j] * w[i, j]
    return out


backends = ["python"] + (["compiled"] if kernels.COMPILED_AVAILABLE else [])


@pytest.mark.parametrize("backend", backends)
def test_antidiagonal_matches_loops(backend, rng):
    x, y, w = _data(rng, 7, 5)
    got = kernels.antidiagonal_sums(x, y, w, backend=backend)
    assert np.abs(got - _oracle(x, y, w)).max() < 1e-12


@pytest.mark.parametrize("backend", backends)
def test_antidiagonal_offset_accumulates(backend, rng):
    x, y, w = _data(rng, 4, 6)
    out = np.ones(4 + 6 - 1 + 3, dtype=complex)
    kernels.antidiagonal_sums(x, y, w, out=out, offset=3, backend=backend)
    assert np.abs(out - 1 - _oracle(x, y, w, 3)).max() < 1e-12


@pytest.mark.parametrize("backend", backends)
def test_direct_bilinear_matches_loops(backend, rng):
    x, y, w = _data(rng, 6, 6)
    e = np.exp(2j * np.pi * rng.uniform(size=(5, 6)))
    got = kernels.direct_bilinear(x, y, w, e, backend=backend)
    want = np.array([sum(e[p, k] * x[k] * y[l] * w[k, l] * e[p, l] for k in range(6) for l in range(6))
                     for p in range(5)])
    assert np.abs(got - want).max() < 1e-12


def test_shape_mismatch():
    with pytest.raises(ValueError):
        kernels.antidiagonal_sums(np.ones(3), np.ones(4), np.ones((4, 3)))


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.antidiagonal_sums(np.ones(2), np.ones(2), np.ones((2, 2)), backend="gpu")


@pytest.mark.skipif(not kernels.COMPILED_AVAILABLE, reason="compiled extension not built")
def test_backends_agree_large(rng):
    x, y, w = _data(rng, 300, 300)
    a = kernels.antidiagonal_sums(x, y, w, backend="python")
    b = kernels.antidiagonal_sums(x, y, w, backend="compiled")
    assert np.abs(a - b).max() <= 1e-13 * np.abs(a).max()


@pytest.mark.skipif(not kernels.COMPILED_AVAILABLE, reason="compiled extension not built")
def test_thread_count_does_not_change_bits(rng, monkeypatch):
    x, y, w = _data(rng, 200, 200)
    monkeypatch.setenv("BIMULT_THREADS", "1")
    one = kernels.antidiagonal_sums(x, y, w, backend="compiled")
    monkeypatch.setenv("BIMULT_THREADS", "4")
    four = kernels.antidiagonal_sums(x, y, w, backend="compiled")
    assert np.array_equal(one, four)


def test_num_threads_parsing(monkeypatch):
    monkeypatch.setenv("BIMULT_THREADS", "junk")
    assert kernels.num_threads() == 1
    monkeypatch.setenv("BIMULT_THREADS", "0")
    assert kernels.num_threads() == 1
    monkeypatch.setenv("BIMULT_THREADS", "3")
    assert kernels.num_threads() == 3


def test_pure_flag_selects_fallback():
    import subprocess
    import sys

    env = dict(os.environ, BIMULT_PURE="1")
    out = subprocess.run([sys.executable, "-c", "import bimult; print(bimult.BACKEND)"],
                         capture_output=True, text=True, env=env, check=True)
    assert out.stdout.strip() == "python"
