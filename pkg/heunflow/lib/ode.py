import math
import logging
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from scipy.linalg import solve_banded
from scipy.integrate import trapezoid
from scipy.special import expit
from scipy.sparse.linalg import eigsh, ArpackError, ArpackNoConvergence

from .errors import HeunFlowParamsException, HeunFlowConvergenceException
from .params import AccessoryPair, derive_params, sausage_q_from_kappa
from .jacobi import spectrum_matrix, spectrum_sausage_matrix
from .results import SpectralResult
from .sturm import sturm_count, bisect_lowest

log = logging.getLogger(__name__)

MODELS = ["flow", "sausage"]

DEFAULT_H = 0.02
WEIGHT_CUTOFF = 1e-14
WINDOW_STEP = 2.0
SAUSAGE_U_MAX = 150.0
AUTO_SWITCH_U = 2.0


@dataclass(frozen=True)
class Discretization:
    u: float
    m: int
    L: float
    h: float
    xi: np.ndarray
    pot: np.ndarray
    weight: np.ndarray
    model: str = "flow"

    @property
    def size(self):
        return self.xi.size

    def operator(self):
        """Diagonal and off-diagonal of -D2 (Neumann closure) + diag(pot)."""
        inv_h2 = 1.0 / self.h**2
        diag = np.full(self.size, 2.0 * inv_h2)
        diag[0] = diag[-1] = inv_h2
        return diag + self.pot, np.full(self.size - 1, -inv_h2)


@dataclass(frozen=True)
class DensityProfile:
    xi: np.ndarray
    values: np.ndarray

    def rows(self):
        for x, v in zip(self.xi, self.values):
            yield {"xi": float(x), "density": float(v)}


def continuum_threshold(m):
    if m < 0:
        raise HeunFlowParamsException(f"m must be non-negative, got [{m}]")
    return 6.0 * m**2


def generalized_potentials(xi, u, m):
    """(sigma^2 V, W) of the regularized flow equation on the whole xi axis."""
    xi = np.asarray(xi, dtype=float)
    s = expit(2.0 * xi)
    t = expit(np.logaddexp(0.0, 4.0 * u) - 2.0 * xi)
    inv_p = expit(-4.0 * u)
    a_over_p = expit(4.0 * u)
    weight = s * t
    rational = (
        s * t**2 * (1.0 - s)
        + (1.0 - t) * t * inv_p
        - s * (1.0 - s) * t**2 * inv_p**2
        + a_over_p * s**2 * ((1.0 - t) * t + 3.0 * t**2 * inv_p)
    )
    return rational + m**2 * s**2, weight


def sausage_potentials(y, u, m):
    """(potential, weight) of -psi'' + [m^2 + (1 + ch2u ch2y)/rho^2] psi = (kappa/6) (sh2u/rho) psi."""
    if not 0 < u <= SAUSAGE_U_MAX:
        raise HeunFlowParamsException(f"the sausage equation is solved for 0 < u <= {SAUSAGE_U_MAX:g}, got [{u}]")
    y = np.asarray(y, dtype=float)
    a = math.cosh(2.0 * u)
    b = np.cosh(2.0 * y)
    rho = a + b
    frac_a, frac_b = a / rho, b / rho
    pot = m**2 + 1.0 / rho**2 + frac_a * frac_b
    weight = math.tanh(2.0 * u) * frac_a
    return pot, weight


def window_half_width(u, model="flow"):
    if model == "sausage":
        return max(12.0, 2.0 * abs(u) + 12.0)
    return max(12.0, 4.0 * abs(u) + 12.0)


def discretize(u, m, L, h, model="flow"):
    if model not in MODELS:
        raise HeunFlowParamsException(f"model must be one of: {', '.join(MODELS)}")
    if not (L > 0 and h > 0):
        raise HeunFlowParamsException(f"window half-width and grid step must be positive, got L={L}, h={h}")
    points = int(round(2.0 * L / h))
    if points < 3:
        raise HeunFlowParamsException(f"grid with L={L}, h={h} has fewer than 3 points")
    xi = -L + (np.arange(points) + 0.5) * h
    if model == "sausage":
        pot, weight = sausage_potentials(xi, u, m)
    else:
        pot, weight = generalized_potentials(xi, u, m)

    peak = weight.max()
    if not peak > 0:
        raise HeunFlowParamsException(f"weight vanishes on the whole window at u={u}")
    support = np.flatnonzero(weight >= WEIGHT_CUTOFF * peak)
    first, last = support[0], support[-1] + 1
    if last - first < 3:
        raise HeunFlowParamsException(f"weight is degenerate at u={u}: fewer than 3 supported grid points")
    return Discretization(
        u=u, m=m, L=L, h=h, xi=xi[first:last], pot=pot[first:last], weight=weight[first:last], model=model
    )


def _pencil_ok(diag, off, weight, values):
    spread = 1e-8 * max(1.0, float(np.abs(values).max()))
    below = sturm_count(diag, off, [values[0] - spread, values[-1] + spread], weight)
    return below[0] == 0 and below[1] == values.size


def lowest_pencil(disc, nlevels):
    """Lowest eigenvalues kappa/6 of A psi = (kappa/6) B psi on one grid."""
    if nlevels >= disc.size:
        raise HeunFlowParamsException(f"requested {nlevels} levels on a grid of {disc.size} points")
    diag, off = disc.operator()
    a = sparse.diags([off, diag, off], [-1, 0, 1], format="csc")
    b = sparse.diags(disc.weight, 0, format="csc")
    # A - sigma*B stays positive definite for sigma < 0
    sigma = -((math.pi / (2.0 * (abs(disc.u) + 2.0))) ** 2)
    try:
        values = eigsh(a, k=nlevels, M=b, sigma=sigma, which="LM", v0=np.ones(disc.size), return_eigenvectors=False)
        values = np.sort(values)
        if _pencil_ok(diag, off, disc.weight, values):
            return values
        log.debug(f"shift-invert levels failed the Sturm check at u={disc.u}, h={disc.h}; bisecting")
    except (ArpackError, ArpackNoConvergence) as e:
        log.debug(f"ARPACK failed at u={disc.u}, h={disc.h} [{e}]; bisecting")
    return bisect_lowest(diag, off, nlevels, tol=1e-12, weight=disc.weight)


def _inverse_iteration(disc, value, sweeps=4):
    diag, off = disc.operator()
    shift = value - 1e-10 * max(1.0, abs(value))
    banded = np.zeros((3, disc.size))
    banded[0, 1:] = off
    banded[1] = diag - shift * disc.weight
    banded[2, :-1] = off
    psi = np.ones(disc.size)
    for _ in range(sweeps):
        psi = solve_banded((1, 1), banded, disc.weight * psi)
        psi /= np.sqrt(np.dot(psi * disc.weight, psi))
    return psi


def density_profile(disc, value):
    psi = _inverse_iteration(disc, value)
    values = psi**2 * disc.weight
    return DensityProfile(xi=disc.xi, values=values / trapezoid(values, disc.xi))


def solve_ode_spectrum(u, m, nlevels=1, L=None, h=DEFAULT_H, model="flow", density=False, tol=1e-6):
    if nlevels < 1:
        raise HeunFlowParamsException("at least one level must be requested")
    params = derive_params(u, m)
    if L is None:
        L = window_half_width(params.u, model)

    coarse = lowest_pencil(discretize(params.u, params.m, L, h, model), nlevels)
    fine_disc = discretize(params.u, params.m, L, h / 2, model)
    fine = lowest_pencil(fine_disc, nlevels)
    kappa = 6.0 * (4.0 * fine - coarse) / 3.0
    err_est = 6.0 * np.abs(fine - coarse) / 3.0
    log.debug(f"{model} ODE at u={params.u}, m={params.m}: h-levels {coarse}, h/2-levels {fine}")

    scale = np.maximum(1.0, np.abs(kappa))
    wider = lowest_pencil(discretize(params.u, params.m, L + WINDOW_STEP, h / 2, model), nlevels)
    moved = 6.0 * np.abs(wider - fine)
    sensitive = moved > tol * scale
    # only above-threshold flow levels in a full-width window may be L-dependent artifacts
    above = (model == "flow") & (params.u > 0) & (kappa >= continuum_threshold(params.m))
    continuum = above & sensitive & (L >= window_half_width(params.u, model))

    if np.any(err_est[~continuum] > 1e-3 * scale[~continuum]):
        raise HeunFlowConvergenceException(f"grid step h={h} under-resolves the levels at u={params.u}")
    if np.any(sensitive & ~continuum):
        raise HeunFlowConvergenceException(
            f"window L={L} too small at u={params.u}: levels move by {moved.max():.3g} at L+{WINDOW_STEP:g}"
        )
    if continuum.any():
        log.debug(f"levels {list(np.flatnonzero(continuum))} at u={params.u} depend on L; flagged as continuum")

    densities = [density_profile(fine_disc, value) for value in fine] if density else None
    accessory = None
    if model == "sausage":
        W = math.exp(-4.0 * params.u)
        accessory = [AccessoryPair(q=sausage_q_from_kappa(float(k), W, params.m), w=W) for k in kappa]
    return SpectralResult(
        {
            "u": params.u,
            "m": params.m,
            "levels": list(kappa),
            "method": "ode",
            "err_est": list(err_est),
            "model": model,
            "continuum": [bool(c) for c in continuum],
            "dim_or_grid": f"L={L:g},h={h:g}",
            "densities": densities,
            "accessory": accessory,
        }
    )


def spectrum_auto(u, m, nlevels=1, tol=1e-9, model="flow"):
    if u <= AUTO_SWITCH_U:
        matrix = spectrum_sausage_matrix if model == "sausage" else spectrum_matrix
        return matrix(u, m, nlevels=nlevels, tol=tol)
    return solve_ode_spectrum(u, m, nlevels=nlevels, model=model)
