"""
Closed-form limits of the spectrum: IR levels, UV quantization, bound states and the
perturbed-CFT quantities (dimensions, b-coefficients, exact UV levels) of the D_N description.
"""

import math
import logging
from fractions import Fraction
from dataclasses import dataclass

from .errors import HeunFlowParamsException
from .specfun import digamma, gfunc

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class PcftLevel:
    m: int
    two_j: int
    N: int
    Delta: float
    D: float

    @property
    def j(self):
        return Fraction(self.two_j, 2)


def _check_count(count):
    if count < 1:
        raise HeunFlowParamsException(f"count must be at least 1, got [{count}]")


def _check_m(m):
    if m < 0:
        raise HeunFlowParamsException(f"m must be non-negative, got [{m}]")


def _two_j(j):
    """2j as an exact integer; j may be int, float or Fraction."""
    doubled = Fraction(j) * 2
    if doubled.denominator != 1:
        raise HeunFlowParamsException(f"j must be a half-integer, got [{j}]")
    return int(doubled)


def r_m(m):
    _check_m(m)
    return digamma(1.0) - digamma((m + 1) / 2.0)


def bound_state_levels(m):
    """kappa/6 of the normalizable UV states, n < (m-1)/2, ascending."""
    _check_m(m)
    levels = [m**2 - (2 * n + 1 - m) ** 2 for n in range(m) if 2 * n < m - 1]
    return sorted(levels)


def _uv_shift(u, m):
    shifted = u + r_m(m)
    if shifted <= 0:
        raise HeunFlowParamsException(f"UV formula needs u + r_m > 0, got u={u}, m={m}")
    return shifted


def uv_level_flow(u, m, n):
    if 2 * n < m - 1:
        raise HeunFlowParamsException(f"UV quantization covers 2n >= m-1, got m={m}, n={n}")
    shifted = _uv_shift(u, m)
    return 6.0 * (m**2 + math.pi**2 * (2 * n - m + 2) ** 2 / (16.0 * shifted**2))


def uv_level_sausage(u, m, n):
    if n < 0:
        raise HeunFlowParamsException(f"n must be non-negative, got [{n}]")
    shifted = _uv_shift(u, m)
    return 6.0 * (m**2 + math.pi**2 * (n + 1) ** 2 / (4.0 * shifted**2))


def ir_spectrum(m, count):
    _check_m(m)
    _check_count(count)
    return [6 * ((2 * n + m + 1) ** 2 - m**2) for n in range(count)]


def ir_spectrum_sausage(m, count):
    """u -> 0+ limits of kappa_ssg * (1 - e^{-4u}), i.e. 6((2n+2m+1)^2 + 1)."""
    _check_m(m)
    _check_count(count)
    return [6 * ((2 * n + 2 * m + 1) ** 2 + 1) for n in range(count)]


def pcft_dimension(m, j, N):
    two_j = _two_j(j)
    if N < 3:
        raise HeunFlowParamsException(f"N must be at least 3, got [{N}]")
    if not abs(m) <= two_j <= N:
        raise HeunFlowParamsException(f"need |m|/2 <= j <= N/2, got m={m}, j={Fraction(two_j, 2)}, N={N}")
    if (two_j - m) % 2:
        raise HeunFlowParamsException(f"2j - m must be even, got m={m}, j={Fraction(two_j, 2)}")
    jj = two_j / 2.0
    delta = jj * (jj + 1) / (N + 2) - m**2 / (4.0 * N)
    return PcftLevel(m=m, two_j=two_j, N=N, Delta=delta, D=(N + 2) * delta)


def _g_args_ok(*args):
    for x in args:
        if not -1 < x < 1:
            raise HeunFlowParamsException(f"g({x:.6g}) lies outside (-1, 1)")


def b1(j, N):
    jj = _two_j(j) / 2.0
    if jj < 0 or 2 * jj > N:
        raise HeunFlowParamsException(f"need 0 <= j <= N/2, got j={jj}, N={N}")
    k = N + 2.0
    _g_args_ok(1 / k, 2 / k, 2 * jj / k)
    ratio = gfunc(1 / k) ** 2 * gfunc((2 * jj + 2) / k) / (gfunc(2 / k) * gfunc(2 * jj / k))
    return 2.0 * N**2 / k**2 * ratio * (8 * math.pi) ** (4 / k)


def b2(N):
    if N < 3:
        raise HeunFlowParamsException(f"N must be at least 3, got [{N}]")
    k = N + 2.0
    _g_args_ok(1 / k, 3 / k, 4 / k, -2 / k)
    numerator = N**2 * (N - 2) ** 2 * gfunc(1 / k) * gfunc(3 / k) * (8 * math.pi) ** (8 / k)
    denominator = (N + 4) ** 2 * (N + 6) ** 2 * gfunc(4 / k) * gfunc(-2 / k) ** 2
    return numerator / denominator / k


def b3(N):
    # g(6/(N+2)) = g(1) = 0 at N = 4
    if N < 5:
        raise HeunFlowParamsException(f"b3 needs N >= 5, got [{N}]")
    k = N + 2.0
    _g_args_ok(2 / k, 4 / k, 6 / k, -3 / k)
    numerator = -3.0 * N**4 * (N - 4) ** 2 * gfunc(2 / k) * gfunc(4 / k) * (8 * math.pi) ** (12 / k)
    denominator = 2.0 * (N + 4) ** 4 * (N + 8) ** 2 * gfunc(6 / k) * gfunc(-3 / k) ** 2
    return numerator / denominator / k


def level_ir_correction(m, j, N, MR):
    """Two-term IR value of (N+2)(e_mj - e_0)/6."""
    if MR <= 0:
        raise HeunFlowParamsException(f"MR must be positive, got [{MR}]")
    level = pcft_dimension(m, j, N)
    if level.two_j == 0:
        raise HeunFlowParamsException("the IR level correction is defined for j > 0")
    jj = level.two_j / 2.0
    scale = ((N + 2) / MR) ** (4.0 / (N + 2))
    return 4 * level.D - level.D**2 * b1(j, N) / (jj * (jj + 1)) * scale


def z_m(m, N, MR):
    if MR <= 0:
        raise HeunFlowParamsException(f"MR must be positive, got [{MR}]")
    if N < 3:
        raise HeunFlowParamsException(f"N must be at least 3, got [{N}]")
    return math.log(8 * math.pi * (N - 2) / MR) + (N - 2) * r_m(m) + digamma(1.0)


def uv_exact_level(m, j, N, MR):
    """Two-term UV value of N e_mj(R)."""
    jj = _two_j(j) / 2.0
    if jj < m - 0.5:
        raise HeunFlowParamsException(f"UV level needs j >= m - 1/2, got m={m}, j={jj}")
    z = z_m(m, N, MR)
    if z <= 0:
        raise HeunFlowParamsException(f"Z_m(R) = {z:.6g} is not positive; MR={MR} is outside the UV regime")
    return 6.0 * m**2 + 3.0 * (jj - m + 1) ** 2 * math.pi**2 * N * (N - 2) / (2.0 * z**2)
