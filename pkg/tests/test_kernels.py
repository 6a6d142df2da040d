import numpy as np
import pytest

from perispec import _backend
from perispec.errors import NoConvergence

from conftest import cgauss


def _sorted(z):
    z = np.asarray(z)
    return z[np.lexsort((z.imag, z.real))]


def _match(got, want, atol):
    # greedy nearest matching; both arrays hold the same multiset
    want = list(want)
    for z in got:
        j = int(np.argmin([abs(z - w) for w in want]))
        assert abs(z - want[j]) <= atol, (z, want[j])
        want.pop(j)


def test_backend_listing():
    assert "python" in _backend.available()
    assert _backend.BACKEND in _backend.available()
    with pytest.raises(ValueError):
        _backend.kernel("fortran")


@pytest.mark.parametrize("n", [1, 2, 3, 5, 8])
def test_agrees_with_lapack(backend, rng, n):
    kern = _backend.kernel(backend)
    for _ in range(20):
        a = cgauss(rng, n, n)
        got = kern(a)
        want = np.linalg.eigvals(a)
        assert got.shape == (n,)
        _match(got, want, 1e-9 * max(1.0, np.abs(want).max()))


def test_triangular_diagonal_is_spectrum(backend, rng):
    # eigenvalues of a triangular matrix are its diagonal
    kern = _backend.kernel(backend)
    for n in (2, 4, 7):
        t = np.triu(cgauss(rng, n, n))
        _match(kern(t), np.diag(t), 1e-9 * np.abs(t).max())


def test_companion_golden_ratio(backend):
    kern = _backend.kernel(backend)
    got = _sorted(kern(np.array([[1, 1], [1, 0]], dtype=complex)))
    phi = (1 + np.sqrt(5)) / 2
    np.testing.assert_allclose(got, [1 - phi, phi], atol=1e-13)


def test_rotation_has_unimodular_pair(backend):
    th = 0.7
    a = np.array([[np.cos(th), -np.sin(th)], [np.sin(th), np.cos(th)]], dtype=complex)
    got = _backend.kernel(backend)(a)
    _match(got, [np.exp(1j * th), np.exp(-1j * th)], 1e-13)


def test_backends_agree(rng):
    if "compiled" not in _backend.available():
        pytest.skip("compiled kernel not built")
    py, c = _backend.kernel("python"), _backend.kernel("compiled")
    for n in (3, 6):
        a = cgauss(rng, n, n)
        _match(py(a), c(a), 1e-10 * max(1.0, np.abs(np.linalg.eigvals(a)).max()))


def test_sweep_cap_raises(backend):
    # a one-sweep budget cannot converge on a dense 6x6
    a = np.random.default_rng(1).standard_normal((6, 6)) + 0j
    with pytest.raises(NoConvergence):
        _backend.kernel(backend)(a, max_sweeps=1)


def test_env_forces_python_backend():
    import os
    import subprocess
    import sys

    env = dict(os.environ, PERISPEC_BACKEND="python")
    out = subprocess.run(
        [sys.executable, "-c", "from perispec import _backend; print(_backend.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
