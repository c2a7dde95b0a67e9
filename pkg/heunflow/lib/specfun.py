import math

from scipy import special

from .errors import HeunFlowParamsException


def digamma(x):
    return float(special.digamma(x))


def loggamma(x):
    return float(special.gammaln(x))


def gfunc(x):
    """g(x) = Gamma(1+x)/Gamma(1-x), defined for x > -1 (zero where 1-x hits a pole)."""
    if x <= -1:
        raise HeunFlowParamsException(f"g(x) needs x > -1, got [{x}]")
    if -1 < x < 1:
        return math.exp(special.gammaln(1 + x) - special.gammaln(1 - x))
    return float(special.gamma(1 + x) * special.rgamma(1 - x))
