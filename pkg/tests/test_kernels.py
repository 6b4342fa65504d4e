import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from dirops import kernels

BACKENDS = kernels.backends()
names = pytest.mark.parametrize("name", sorted(BACKENDS))


def complex_matrix(rng, m, n):
    return rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))


def test_selected_backend_is_listed():
    assert kernels.BACKEND in BACKENDS


def test_env_forces_python_backend():
    env = dict(os.environ, DIROPS_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", "import dirops; print(dirops.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


@names
def test_fsum_is_exact(name):
    x = np.array([1e16, 1.0, -1e16, 1e-3] * 50)
    assert BACKENDS[name].fsum(x) == math.fsum(x)


@names
def test_fsum_nonfinite(name):
    with pytest.raises(ValueError):
        BACKENDS[name].fsum(np.array([1.0, np.inf, -np.inf]))
    assert BACKENDS[name].fsum(np.array([1.0, np.inf])) == np.inf
    assert BACKENDS[name].fsum(np.array([], dtype=float)) == 0.0


@names
def test_csum_and_cdot(name):
    rng = np.random.default_rng(0)
    a = rng.standard_normal(100) + 1j * rng.standard_normal(100)
    b = rng.standard_normal(100) + 1j * rng.standard_normal(100)
    k = BACKENDS[name]
    assert k.csum(a) == pytest.approx(np.sum(a), rel=1e-14)
    assert k.cdot(a, b) == pytest.approx(np.vdot(b, a), rel=1e-13)
    assert k.cdot(a, b, False) == pytest.approx(np.dot(a, b), rel=1e-13)


@names
def test_cmatvec(name):
    rng = np.random.default_rng(1)
    A = complex_matrix(rng, 7, 13)
    x = rng.standard_normal(13) + 1j * rng.standard_normal(13)
    np.testing.assert_allclose(BACKENDS[name].cmatvec(A, x), A @ x, rtol=1e-13)


@names
@pytest.mark.parametrize("shape", [(1, 1), (1, 5), (5, 1), (6, 6), (9, 4), (4, 9), (17, 17)])
def test_jacobi_matches_lapack(name, shape):
    A = complex_matrix(np.random.default_rng(sum(shape)), *shape)
    sig = BACKENDS[name].jacobi_singular_values(A)[0]
    ref = np.linalg.svd(A, compute_uv=False)
    np.testing.assert_allclose(sig[: ref.size], ref, rtol=1e-12, atol=1e-14 * ref[0])
    assert np.all(sig[ref.size:] <= 1e-13 * ref[0])


@names
def test_jacobi_rank_deficient_and_zero(name):
    rng = np.random.default_rng(2)
    u = rng.standard_normal(8) + 1j * rng.standard_normal(8)
    v = rng.standard_normal(6) + 1j * rng.standard_normal(6)
    A = np.outer(u, v)
    sig, sweeps, _ = BACKENDS[name].jacobi_singular_values(A)
    assert sig[0] == pytest.approx(np.linalg.norm(u) * np.linalg.norm(v), rel=1e-13)
    assert np.all(sig[1:] <= 1e-14 * sig[0])
    assert sweeps < 80
    assert not np.any(BACKENDS[name].jacobi_singular_values(np.zeros((4, 3)))[0])


@names
def test_jacobi_tiny_entries(name):
    A = complex_matrix(np.random.default_rng(3), 6, 6) * 1e-200
    ref = np.linalg.svd(A * 1e200, compute_uv=False) * 1e-200
    np.testing.assert_allclose(BACKENDS[name].jacobi_singular_values(A)[0], ref, rtol=1e-12)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend not built")
def test_backends_agree_on_graded_matrix():
    from dirops.matrix import build_affine_matrix
    from dirops.symbols import AffineSymbol

    A = build_affine_matrix(AffineSymbol(1, 0.25), 64, 64).entries
    a = BACKENDS["cython"].jacobi_singular_values(A)[0]
    b = BACKENDS["python"].jacobi_singular_values(A)[0]
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-15 * a[0])


finite = st.one_of(st.floats(-1e3, 1e3), st.floats(-1e200, 1e200), st.floats(-1e-200, 1e-200))


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend not built")
@settings(max_examples=50, deadline=None)
@given(arrays(np.float64, st.integers(0, 200), elements=finite))
def test_backends_agree_on_fsum(x):
    assert BACKENDS["cython"].fsum(x) == BACKENDS["python"].fsum(x) == math.fsum(x)


@pytest.mark.skipif(len(BACKENDS) < 2, reason="compiled backend not built")
@settings(max_examples=30, deadline=None)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2**31))
def test_backends_agree_on_jacobi(m, n, seed):
    A = complex_matrix(np.random.default_rng(seed), m, n)
    a = BACKENDS["cython"].jacobi_singular_values(A)[0]
    b = BACKENDS["python"].jacobi_singular_values(A)[0]
    np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-14 * a[0])
