import math
import logging
from fractions import Fraction
from dataclasses import dataclass

from . import series as ps
from .errors import HeunFlowParamsException, HeunFlowSeriesException
from .jacobi import rational_entries, orthonormal_offdiag, unperturbed_level

log = logging.getLogger(__name__)

VARIABLES = ["epsilon", "lambda"]
TARGETS = ["two_q_minus", "kappa"]


@dataclass(frozen=True)
class RationalSeries:
    """
    Truncated series sum_p coeffs[p - valuation] * x^p in x = epsilon or lambda.

    2q-m-1 starts at power -1 (valuation -1); kappa series start at power 0.
    """

    variable: str
    target: str
    m: int
    n: int
    coeffs: tuple
    valuation: int = 0

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise HeunFlowSeriesException(f"unknown series variable [{self.variable}]")
        if self.target not in TARGETS:
            raise HeunFlowSeriesException(f"unknown series target [{self.target}]")

    @property
    def order(self):
        return self.valuation + len(self.coeffs) - 1

    @property
    def exact(self):
        return all(isinstance(c, (int, Fraction)) for c in self.coeffs)

    def coefficient(self, power):
        index = power - self.valuation
        if 0 <= index < len(self.coeffs):
            return self.coeffs[index]
        return Fraction(0)

    def items(self):
        for index, c in enumerate(self.coeffs):
            yield self.valuation + index, c


def _check_level(m, n, order):
    for name, value in (("m", m), ("n", n)):
        if isinstance(value, bool) or int(value) != value or value < 0:
            raise HeunFlowParamsException(f"{name} must be a non-negative integer, got [{value}]")
    if order < 1:
        raise HeunFlowParamsException(f"perturbation order must be at least 1, got [{order}]")


def _apply(vector, entries, zero):
    """V acting on a sparse vector; column j of V spans rows j-1, j, j+1."""
    out = {}
    for j, x in vector.items():
        up, diag, down = entries(j)
        if j > 0:
            out[j - 1] = out.get(j - 1, zero) + up * x
        out[j] = out.get(j, zero) + diag * x
        out[j + 1] = out.get(j + 1, zero) + down * x
    return out


def _rs_deltas(m, n, order, entries, one, total):
    """delta_0 .. delta_order of the Rayleigh-Schroedinger expansion of H0 + eps*V about level n."""
    zero = one * 0
    e0 = unperturbed_level(n, m)
    etas = [{n: one}]
    deltas = [zero + e0]
    for k in range(1, order + 1):
        v_prev = _apply(etas[k - 1], entries, zero)
        deltas.append(v_prev.get(n, zero))
        support = set(v_prev)
        for i in range(1, k + 1):
            support.update(etas[k - i])
        eta = {}
        for idx in sorted(support):
            if idx == n:
                continue
            terms = [-v_prev.get(idx, zero)]
            terms += [deltas[i] * etas[k - i][idx] for i in range(1, k + 1) if idx in etas[k - i]]
            eta[idx] = total(terms) / (unperturbed_level(idx, m) - e0)
        etas.append(eta)
        log.debug(f"RS order {k} for (m={m}, n={n}): support {len(eta)}")
    return deltas


def rs_expand(m, n, order):
    """Exact epsilon-series of 2q-m-1 = sum_k delta_k eps^(k-1), k = 0 .. order."""
    _check_level(m, n, order)
    cache = {}

    def entries(j):
        if j not in cache:
            cache[j] = rational_entries(j, m)
        return cache[j]

    deltas = _rs_deltas(m, n, order, entries, Fraction(1), lambda terms: sum(terms, Fraction(0)))
    return RationalSeries("epsilon", "two_q_minus", m, n, tuple(deltas), valuation=-1)


def rs_expand_float(m, n, order):
    """Same recursion with the symmetric orthonormal V in float64 and compensated sums."""
    _check_level(m, n, order)
    offdiag = orthonormal_offdiag(n + order + 3, m)
    diag = [float(rational_entries(j, m)[1]) for j in range(n + order + 3)]

    def entries(j):
        up = float(offdiag[j - 1]) if j > 0 else 0.0
        return up, diag[j], float(offdiag[j])

    deltas = _rs_deltas(m, n, order, entries, 1.0, math.fsum)
    return RationalSeries("epsilon", "two_q_minus", m, n, tuple(deltas), valuation=-1)


def kappa_series(series):
    """Convert a 2q-m-1 series to kappa through the accessory relation, exactly."""
    if series.target != "two_q_minus":
        raise HeunFlowSeriesException("kappa_series expects a 2q-m-1 series")
    if series.valuation != -1:
        raise HeunFlowSeriesException("2q-m-1 series must start at power -1")
    m = series.m
    # x * (2q-m-1) as an ordinary series
    x_mu = list(series.coeffs)
    order = len(x_mu) - 1
    base = 6 * (1 + 2 * m)
    if series.variable == "lambda":
        # kappa = 6(1+2m) - 12 m lambda + 12 lambda (2q-m-1)
        kappa = [12 * c for c in x_mu]
        kappa[0] += base
        if order >= 1:
            kappa[1] -= 12 * m
    else:
        # kappa = [24 nu + (6-12m) eps + 6(1+2m)] / (1+eps), nu = eps (2q-m-1)
        numerator = [24 * c for c in x_mu]
        numerator[0] += base
        if order >= 1:
            numerator[1] += 6 - 12 * m
        one_plus_eps = [Fraction(1), Fraction(1)]
        kappa = ps.mul(numerator, ps.reciprocal(one_plus_eps, order), order)
    return RationalSeries(series.variable, "kappa", m, series.n, tuple(kappa), valuation=0)


def reexpand_lambda(series):
    """Compose an epsilon series with eps = lambda/(2-lambda), keeping the same top power."""
    if series.variable != "epsilon":
        raise HeunFlowSeriesException("reexpand_lambda expects an epsilon series")
    if series.valuation not in (-1, 0):
        raise HeunFlowSeriesException(f"unsupported series valuation [{series.valuation}]")
    shifted = list(series.coeffs)
    order = len(shifted) - 1
    composed = ps.compose(shifted, ps.geometric_half(order), order)
    if series.valuation == -1:
        # eps^-1 = (2 - lambda)/lambda
        composed = ps.mul(composed, [Fraction(2), Fraction(-1)], order)
    return RationalSeries("lambda", series.target, series.m, series.n, tuple(composed), series.valuation)


def kappa_lambda_series(m, n, order):
    return kappa_series(reexpand_lambda(rs_expand(m, n, order)))


def closed_form_ground(m):
    """kappa_{m,0}/6 through lambda^3 in closed form for general m."""
    m = Fraction(m)
    return [
        1 + 2 * m,
        -2 * m / (m + 2),
        -4 * (m + 1) ** 3 / ((m + 2) ** 3 * (m + 3)),
        -8 * (m + 1) ** 3 * (2 * m**2 + 5 * m + 4) / ((m + 2) ** 5 * (m + 3) * (m + 4)),
    ]


def closed_form_excited(m, n):
    """kappa_{m,n}/6 through lambda^2 for n >= 1, with j = m/2 + n."""
    if n < 1:
        raise HeunFlowParamsException("the excited-state formula needs n >= 1")
    j = Fraction(m, 2) + n
    m = Fraction(m)
    c0 = (2 * j + 1) ** 2 - m**2
    c1 = -((4 * j * (j + 1) - m**2) ** 2) / (8 * j * (j + 1))
    c2 = -(
        (4 * (j + 1) ** 2 - m**2) ** 4 / ((j + 1) ** 3 * (2 * j + 3)) - (4 * j**2 - m**2) ** 4 / (j**3 * (2 * j - 1))
    ) / (2**9 * (2 * j + 1))
    return [c0, c1, c2]


def sum_series(series, lambda_value):
    x = float(lambda_value)
    if not 0 <= x < 1:
        raise HeunFlowParamsException(f"series variable must lie in [0, 1), got [{lambda_value}]")
    if x == 0 and series.valuation < 0:
        raise HeunFlowParamsException("a series with negative powers cannot be evaluated at 0")
    value = 0.0
    for c in reversed(series.coeffs):
        value = value * x + float(c)
    value *= x**series.valuation
    last = abs(float(series.coeffs[-1])) * x**series.order
    tail_est = last * x / (1 - x)
    return value, tail_est


def coefficient_ratios(series):
    rows = []
    for (p, a), (_, b) in zip(series.items(), list(series.items())[1:]):
        if a != 0:
            rows.append((p, abs(float(b) / float(a))))
    return rows


def upsilon_series(m0_series, max_order):
    """
    Exact coefficients r_k and scale s with sqrt(eps/(4q-2+eps)) = s * sum_k r_k eps^k.

    Only the ground state at m=0 qualifies: there 2q-1 starts at eps^1, so (2q-1)/eps is regular.
    """
    if m0_series.variable != "epsilon" or m0_series.target != "two_q_minus":
        raise HeunFlowSeriesException("upsilon analysis needs the epsilon series of 2q-1")
    if m0_series.m != 0 or m0_series.n != 0:
        raise HeunFlowSeriesException("upsilon analysis is defined for the m=0 ground state")
    if m0_series.order < max_order + 1:
        raise HeunFlowSeriesException(
            f"series of order {m0_series.order} is too short for upsilon order {max_order} "
            f"(needs {max_order + 1})"
        )
    # (2q-1)/eps = sum_k delta_{k+2} eps^k
    ratio = [m0_series.coefficient(k + 1) for k in range(max_order + 1)]
    denominator = [2 * c for c in ratio]
    denominator[0] += 1
    squared = ps.reciprocal(denominator, max_order)
    lead = squared[0]
    unit = ps.sqrt_unit([c / lead for c in squared], max_order)
    return unit, math.sqrt(lead)


def upsilon_analysis(m0_series, max_order):
    if max_order < 10:
        raise HeunFlowParamsException("upsilon analysis needs max_order >= 10")
    unit, scale = upsilon_series(m0_series, max_order)
    rows = []
    for k in range(0, max_order + 1, 2):
        coeff = scale * float(unit[k])
        asymptote = 1.0 / (math.pi * (k + 1))
        rows.append({"order": k, "coeff": coeff, "asymptote": asymptote, "rel_dev": coeff / asymptote - 1})
    return rows
