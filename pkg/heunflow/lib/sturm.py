import logging

import numpy as np

from .errors import HeunFlowParamsException

log = logging.getLogger(__name__)


def sturm_count(diag, offdiag, shifts, weight=None):
    """
    Number of eigenvalues below each shift x of the symmetric tridiagonal pencil T - x*diag(weight).

    The count is the number of negative pivots of the LDL^T factorization (Sylvester inertia), so it is
    exact for any positive diagonal weight. Vectorized over shifts.
    """
    diag = np.asarray(diag, dtype=float)
    off2 = np.asarray(offdiag, dtype=float) ** 2
    shifts = np.atleast_1d(np.asarray(shifts, dtype=float))
    weight = np.ones_like(diag) if weight is None else np.asarray(weight, dtype=float)
    pivmin = np.finfo(float).tiny * max(1.0, float(off2.max()) if off2.size else 1.0)

    d = diag[0] - shifts * weight[0]
    d = np.where(np.abs(d) < pivmin, -pivmin, d)
    count = (d < 0).astype(np.int64)
    for i in range(1, diag.size):
        d = (diag[i] - shifts * weight[i]) - off2[i - 1] / d
        d = np.where(np.abs(d) < pivmin, -pivmin, d)
        count += d < 0
    return count


def gershgorin_bounds(diag, offdiag):
    diag = np.asarray(diag, dtype=float)
    off = np.abs(np.asarray(offdiag, dtype=float))
    radius = np.zeros_like(diag)
    radius[:-1] += off
    radius[1:] += off
    return float((diag - radius).min()), float((diag + radius).max())


def _expand_bracket(diag, offdiag, weight, count):
    lo, hi = -1.0, 1.0
    while sturm_count(diag, offdiag, lo, weight)[0] > 0:
        lo *= 2.0
    while sturm_count(diag, offdiag, hi, weight)[0] < count:
        hi *= 2.0
        if not np.isfinite(hi):
            raise HeunFlowParamsException("could not bracket the requested pencil eigenvalues")
    return lo, hi


def bisect_lowest(diag, offdiag, count, tol, weight=None, bounds=None, max_sweeps=200):
    """Lowest `count` eigenvalues by simultaneous bisection; brackets narrowed to width <= tol."""
    diag = np.asarray(diag, dtype=float)
    if count < 1 or count > diag.size:
        raise HeunFlowParamsException(f"cannot extract {count} eigenvalues from a matrix of size {diag.size}")
    if tol <= 0:
        raise HeunFlowParamsException("bisection tolerance must be positive")
    if bounds is None:
        if weight is None:
            bounds = gershgorin_bounds(diag, offdiag)
        else:
            bounds = _expand_bracket(diag, offdiag, weight, count)

    index = np.arange(count)
    lo = np.full(count, bounds[0], dtype=float)
    hi = np.full(count, bounds[1], dtype=float)
    for sweep in range(max_sweeps):
        mid = 0.5 * (lo + hi)
        active = (hi - lo) > tol
        # stop once floating resolution is exhausted
        active &= (mid > lo) & (mid < hi)
        if not active.any():
            break
        below = sturm_count(diag, offdiag, mid, weight)
        move_up = below <= index
        lo = np.where(active & move_up, mid, lo)
        hi = np.where(active & ~move_up, mid, hi)
    log.debug(f"bisection finished after {sweep} sweeps for {count} levels")
    return 0.5 * (lo + hi)
