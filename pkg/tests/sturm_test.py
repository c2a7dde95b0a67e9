import numpy as np
import pytest

from heunflow.lib.errors import HeunFlowParamsException
from heunflow.lib.sturm import sturm_count, gershgorin_bounds, bisect_lowest


def laplacian(n):
    return np.full(n, 2.0), np.full(n - 1, -1.0)


def test_sturm_count_laplacian():
    diag, off = laplacian(50)
    exact = 2 - 2 * np.cos(np.pi * np.arange(1, 51) / 51)
    shifts = [exact[0] - 1e-9, exact[4] + 1e-9, 5.0]
    assert list(sturm_count(diag, off, shifts)) == [0, 5, 50]


def test_bisect_lowest_laplacian():
    diag, off = laplacian(40)
    exact = 2 - 2 * np.cos(np.pi * np.arange(1, 41) / 41)
    values = bisect_lowest(diag, off, 6, tol=1e-13)
    assert np.allclose(values, exact[:6], atol=1e-12)


def test_bisect_pencil_matches_dense():
    rng = np.random.default_rng(7)
    n = 30
    diag = 2 + rng.random(n)
    off = -rng.random(n - 1)
    weight = 0.5 + rng.random(n)
    a = np.diag(diag) + np.diag(off, 1) + np.diag(off, -1)
    s = np.diag(1 / np.sqrt(weight))
    exact = np.linalg.eigvalsh(s @ a @ s)
    values = bisect_lowest(diag, off, 4, tol=1e-12, weight=weight)
    assert np.allclose(values, exact[:4], atol=1e-10)


def test_gershgorin_encloses_spectrum():
    diag, off = laplacian(10)
    lo, hi = gershgorin_bounds(diag, off)
    assert lo <= 0 and hi >= 4


def test_bisect_rejects_bad_requests():
    diag, off = laplacian(5)
    with pytest.raises(HeunFlowParamsException):
        bisect_lowest(diag, off, 6, tol=1e-10)
    with pytest.raises(HeunFlowParamsException):
        bisect_lowest(diag, off, 2, tol=0)
