"""
Truncated power-series algebra on plain coefficient lists (index = power).

Works for Fraction coefficients (exact) and for floats, where sums are compensated with math.fsum.
"""

import math
from fractions import Fraction

from .errors import HeunFlowSeriesException


def _total(terms):
    terms = list(terms)
    if terms and all(isinstance(t, float) for t in terms):
        return math.fsum(terms)
    return sum(terms, Fraction(0))


def truncate(a, order):
    a = list(a[: order + 1])
    zero = a[0] * 0 if a else Fraction(0)
    return a + [zero] * (order + 1 - len(a))


def scale(a, factor):
    return [factor * x for x in a]


def mul(a, b, order):
    a, b = truncate(a, order), truncate(b, order)
    return [_total(a[i] * b[k - i] for i in range(k + 1)) for k in range(order + 1)]


def reciprocal(a, order):
    a = truncate(a, order)
    if a[0] == 0:
        raise HeunFlowSeriesException("series with zero constant term has no reciprocal")
    r = [1 / a[0]]
    for k in range(1, order + 1):
        r.append(-_total(a[i] * r[k - i] for i in range(1, k + 1)) / a[0])
    return r


def compose(outer, inner, order):
    """outer(inner(x)) for an inner series without constant term."""
    inner = truncate(inner, order)
    if inner[0] != 0:
        raise HeunFlowSeriesException("inner series of a composition must vanish at the origin")
    outer = truncate(outer, order)
    result = [outer[order]] + [outer[order] * 0] * order
    for k in range(order - 1, -1, -1):
        result = mul(result, inner, order)
        result[0] += outer[k]
    return result


def sqrt_unit(a, order):
    """Square root of a series with constant term exactly 1; exact when the coefficients are."""
    a = truncate(a, order)
    if a[0] != 1:
        raise HeunFlowSeriesException("sqrt_unit needs a unit constant term")
    s = [a[0]]
    for k in range(1, order + 1):
        cross = _total(s[i] * s[k - i] for i in range(1, k))
        s.append((a[k] - cross) / 2)
    return s


def geometric_half(order):
    """epsilon(lambda) = lambda/(2 - lambda) = sum_{k>=1} lambda^k / 2^k."""
    return [Fraction(0)] + [Fraction(1, 2**k) for k in range(1, order + 1)]
