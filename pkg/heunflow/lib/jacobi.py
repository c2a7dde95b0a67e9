import math
import logging
from fractions import Fraction
from dataclasses import dataclass

import numpy as np

from .errors import HeunFlowParamsException, HeunFlowConvergenceException
from .params import derive_params, ModelParams, sausage_map
from .results import SpectralResult
from .sturm import bisect_lowest

log = logging.getLogger(__name__)

BASES = ["rational", "orthonormal"]
FAMILIES = ["flow", "sausage"]

DIM_START = 32
DIM_CAP = 4096


@dataclass(frozen=True)
class TridiagonalOperator:
    """H in a Jacobi basis: lower[i] = H[i+1, i], upper[i] = H[i, i+1]."""

    dim: int
    diag: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    basis: str
    m: int
    w: float
    family: str = "flow"
    normalized: bool = False

    @property
    def symmetric(self):
        return self.basis == "orthonormal"

    def dense(self):
        return np.diag(self.diag) + np.diag(self.lower, -1) + np.diag(self.upper, 1)


def unperturbed_level(n, m, family="flow"):
    """Eigenvalue of H0 on the n-th Jacobi polynomial."""
    if family == "sausage":
        return n * (n + 2 * m + 1)
    return n * (n + m + 1)


def rational_entries(n, m, family="flow"):
    """Exact (V[n-1,n], V[n,n], V[n+1,n]) of the perturbation V in the rational Jacobi basis."""
    if family == "sausage":
        up = Fraction(-((n + m) ** 3), 2 * n + 2 * m + 1) if n > 0 else Fraction(0)
        down = Fraction(-(n + 1) * (n + 2 * m + 1) * (n + m + 1), 2 * n + 2 * m + 1)
        return up, Fraction(0), down

    if m == 0:
        diag = Fraction(0)
    else:
        diag = Fraction(
            m * ((2 + m) * n**2 + (m + 1) * (m + 2) * n + m * (m + 1)),
            (m + 2 * n) * (m + 2 * n + 2),
        )
    up = Fraction(-2 * n**2 * (n + m) ** 2, (2 * n + m) * (2 * n + m + 1)) if n > 0 else Fraction(0)
    down = Fraction(-2 * (n + 1) ** 2 * (n + m + 1) ** 2, (2 * n + m + 1) * (2 * n + m + 2))
    return up, diag, down


def orthonormal_offdiag(dim, m, family="flow"):
    """Symmetric off-diagonal V[n+1,n] = V[n,n+1] for n = 0 .. dim-2."""
    n = np.arange(dim - 1, dtype=float)
    if family == "sausage":
        return (n + m + 1) ** 2 * np.sqrt((n + 1) * (n + 2 * m + 1) / ((2 * n + 2 * m + 1) * (2 * n + 2 * m + 3)))
    s = 2 * n + m + 2
    return 2 * (n + 1) ** 2 * (n + m + 1) ** 2 / (s * np.sqrt(s**2 - 1))


def family_coupling(params, family="flow"):
    """(w, epsilon) of the Heun problem; epsilon = 1/(1 - 2w) is the weight of V in H0 + epsilon*V."""
    if family == "sausage":
        if params.u <= 0:
            raise HeunFlowParamsException(f"the sausage model needs u > 0, got [{params.u}]")
        # w_bar = W/(W-1) with W = e^{-4u}
        return -1.0 / math.expm1(4.0 * params.u), math.tanh(2.0 * params.u)
    return params.w, params.epsilon


def build_operator(params, dim, basis="orthonormal", normalized=False, family="flow"):
    if not isinstance(params, ModelParams):
        raise HeunFlowParamsException("build_operator expects ModelParams (see derive_params)")
    if dim < 2:
        raise HeunFlowParamsException(f"operator dimension must be at least 2, got [{dim}]")
    if basis not in BASES:
        raise HeunFlowParamsException(f"basis must be one of: {', '.join(BASES)}")
    if family not in FAMILIES:
        raise HeunFlowParamsException(f"family must be one of: {', '.join(FAMILIES)}")

    m = params.m
    w, epsilon = family_coupling(params, family)
    e0 = np.array([unperturbed_level(n, m, family) for n in range(dim)], dtype=float)

    if basis == "rational":
        entries = [rational_entries(n, m, family) for n in range(dim)]
        v_diag = np.array([float(e[1]) for e in entries])
        lower = np.array([float(entries[n][2]) for n in range(dim - 1)])
        upper = np.array([float(entries[n + 1][0]) for n in range(dim - 1)])
    else:
        v_diag = np.array([float(rational_entries(n, m, family)[1]) for n in range(dim)])
        lower = orthonormal_offdiag(dim, m, family)
        upper = lower.copy()

    if normalized:
        diag = e0 + epsilon * v_diag
        lower, upper = epsilon * lower, epsilon * upper
    else:
        diag = (1 - 2 * w) * e0 + v_diag

    return TridiagonalOperator(
        dim=dim,
        diag=diag,
        lower=lower,
        upper=upper,
        basis=basis,
        m=m,
        w=w,
        family=family,
        normalized=normalized,
    )


def eigenvalues_bisection(op, count, tol):
    if not op.symmetric:
        raise HeunFlowParamsException("Sturm bisection needs the symmetric (orthonormal) operator")
    if count > op.dim:
        raise HeunFlowParamsException(f"requested {count} eigenvalues of a {op.dim}-dimensional truncation")
    return bisect_lowest(op.diag, op.lower, count, tol)


def kappa_flow(nu, epsilon, m):
    """kappa from nu = epsilon*(2q - m - 1); same as kappa_from_q without forming w."""
    return (24 * nu + (6 - 12 * m) * epsilon + 6 * (1 + 2 * m)) / (1 + epsilon)


def kappa_sausage(nu, u, m):
    return 6.0 * (2 * nu + 2 * m * (m + 1) + 1) / math.tanh(2.0 * u)


def implied_q(nu, epsilon, m):
    return 0.5 * (nu / epsilon + m + 1)


def sausage_accessory(nu, u, m):
    """(q, W) of the sausage equation in X = -e^{-2(y+u)}, mapped back from the Jacobi eigenvalue nu."""
    w_bar = -1.0 / math.expm1(4.0 * u)
    # nu = tanh(2u) * (2 q_bar - (m+1)^2)
    q_bar = 0.5 * (nu / math.tanh(2.0 * u) + (m + 1) ** 2)
    return sausage_map(q_bar, w_bar, m)


def _matrix_spectrum(u, m, nlevels, tol, family, dim_cap):
    if nlevels < 1:
        raise HeunFlowParamsException("at least one level must be requested")
    if tol <= 0:
        raise HeunFlowParamsException("tolerance must be positive")
    params = derive_params(u, m)
    _, epsilon = family_coupling(params, family)

    dim = DIM_START
    while dim < 2 * nlevels:
        dim *= 2
    previous = None
    while True:
        op = build_operator(params, dim, "orthonormal", normalized=True, family=family)
        nu = eigenvalues_bisection(op, nlevels, tol=1e-13)
        if family == "sausage":
            kappa = np.array([kappa_sausage(v, params.u, params.m) for v in nu])
        else:
            kappa = kappa_flow(nu, epsilon, params.m)
        if previous is not None:
            change = np.abs(kappa - previous)
            if np.all(change < tol * np.maximum(1.0, np.abs(kappa))):
                break
        if dim >= dim_cap:
            raise HeunFlowConvergenceException(
                f"matrix truncation did not stabilize below dim cap [{dim_cap}] at u={params.u}, m={params.m}"
            )
        log.debug(f"{family} matrix at u={params.u}, m={params.m}: dim {dim} -> {2 * dim}")
        previous = kappa
        dim *= 2

    accessory = [sausage_accessory(v, params.u, params.m) for v in nu] if family == "sausage" else None
    return SpectralResult(
        {
            "u": params.u,
            "m": params.m,
            "levels": list(kappa),
            "method": "matrix",
            "err_est": list(change),
            "model": family,
            "continuum": [False] * len(kappa),
            "dim_or_grid": f"dim={dim}",
            "accessory": accessory,
        }
    )


def spectrum_matrix(u, m, nlevels=1, tol=1e-9, dim_cap=DIM_CAP):
    return _matrix_spectrum(u, m, nlevels, tol, "flow", dim_cap)


def spectrum_sausage_matrix(u, m, nlevels=1, tol=1e-9, dim_cap=DIM_CAP):
    return _matrix_spectrum(u, m, nlevels, tol, "sausage", dim_cap)
