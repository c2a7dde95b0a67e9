import math
import logging
from dataclasses import dataclass

from scipy.special import expit

from .errors import HeunFlowParamsException

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModelParams:
    """RG parameter u and angular momentum m. Every other parametrization is derived on access."""

    u: float
    m: int

    @property
    def lam(self):
        return float(expit(4.0 * self.u))

    @property
    def epsilon(self):
        # 1/(1 + 2 e^{-4u}) without forming e^{-4u}
        return float(expit(4.0 * self.u - math.log(2.0)))

    @property
    def w(self):
        if -4.0 * self.u > 709.0:
            return -math.inf
        return -math.exp(-4.0 * self.u)

    @property
    def one_minus_two_w(self):
        return 1.0 / self.epsilon


@dataclass(frozen=True)
class AccessoryPair:
    q: float
    w: float


def _check_m(m):
    if isinstance(m, bool) or int(m) != m or m < 0:
        raise HeunFlowParamsException(f"m must be a non-negative integer, got [{m}]")
    return int(m)


def derive_params(u, m):
    try:
        u = float(u)
    except (TypeError, ValueError):
        raise HeunFlowParamsException(f"u must be a real number, got [{u}]")
    if not math.isfinite(u):
        raise HeunFlowParamsException(f"u must be finite, got [{u}]")
    return ModelParams(u=u, m=_check_m(m))


def kappa_from_q(q, w, m):
    if w == 1:
        raise HeunFlowParamsException("w = 1 is a removable singularity of the accessory relation")
    return (24 * q - 6 * (1 + w) * (1 + 2 * m)) / (1 - w)


def q_from_kappa(kappa, w, m):
    return (kappa * (1 - w) + 6 * (1 + w) * (1 + 2 * m)) / 24


def sausage_map(q, w, m=0):
    """
    Projective map between the flow and sausage Heun problems.

    The (m+1)^2 shift is the accessory term of z -> z/(z-1) with alpha = m+1; at m=0 this is
    q_bar = (w - q)/(w - 1). The map is an involution for every m.
    """
    if w == 1:
        raise HeunFlowParamsException("sausage map is undefined at w = 1")
    m = _check_m(m)
    shift = (m + 1) ** 2
    return AccessoryPair(q=(w * shift - q) / (w - 1), w=w / (w - 1))


def sausage_kappa_from_q(q, W, m):
    if W == 1:
        raise HeunFlowParamsException("sausage bridge is undefined at u = 0")
    return (24 * q - 6 * (1 + 2 * m) * (1 + W)) / (1 - W)


def sausage_q_from_kappa(kappa, W, m):
    return (6 * (1 + 2 * m) * (1 + W) + kappa * (1 - W)) / 24
