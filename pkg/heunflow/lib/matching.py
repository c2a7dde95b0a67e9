import math
import logging
from dataclasses import dataclass, asdict

from .errors import HeunFlowParamsException, HeunFlowConvergenceException
from .asymptotics import b2, b3
from .jacobi import spectrum_matrix
from .ode import solve_ode_spectrum, spectrum_auto
from .perturbation import kappa_lambda_series
from .tba import central_charge_curve

log = logging.getLogger(__name__)

OVERLAP_U = (1.0, 1.5, 2.0)
OVERLAP_TOL = 1e-4


@dataclass(frozen=True)
class MatchRow:
    N: int
    MR: float
    u: float
    c: float
    scaled: float
    kappa0: float
    deviation: float

    def to_dict(self):
        return asdict(self)


def u_from_mr(N, MR):
    """u = log(N/MR)/N_eff with N_eff = sqrt((N+2)(N - 2 tanh(4 log(N/MR))))."""
    if N < 4:
        raise HeunFlowParamsException(f"N must be at least 4, got [{N}]")
    if not MR > 0:
        raise HeunFlowParamsException(f"MR must be positive, got [{MR}]")
    t = math.log(N / MR)
    radicand = (N + 2) * (N - 2 * math.tanh(4 * t))
    if radicand <= 0:
        raise HeunFlowParamsException(f"N_eff radicand {radicand:.6g} is not positive at N={N}, MR={MR:g}")
    return t / math.sqrt(radicand)


def match_curve(N, MR_list, B=None, M=None, tol=None, curve=None):
    if curve is None:
        curve = central_charge_curve(N, MR_list, "flow", B=B, M=M, tol=tol)
    rows = []
    for MR, c in curve.points:
        u = u_from_mr(N, MR)
        kappa0 = spectrum_auto(u, 0).levels[0]
        scaled = (N + 2) * (2 - c)
        rows.append(MatchRow(N=N, MR=MR, u=u, c=c, scaled=scaled, kappa0=kappa0, deviation=scaled - kappa0))
        log.debug(f"match N={N} MR={MR:g}: u={u:.6f} scaled={scaled:.8f} kappa0={kappa0:.8f}")
    return rows


def ir_series_compare(N):
    """
    lambda^2 and lambda^3 coefficients of 6 - (N+2)(2-c) implied by the b2, b3 terms of the IR expansion,
    using ((N+2)/MR)^{4/(N+2)} = lambda/(1-lambda), next to the exact values from the kappa_0 series.
    """
    k = N + 2
    scaled_b2 = k * b2(N)
    scaled_b3 = k * b3(N)
    ground = kappa_lambda_series(0, 0, 3)
    return {
        "N": N,
        "lambda2": scaled_b2,
        "lambda3": 2 * scaled_b2 + scaled_b3,
        "lambda2_exact": float(-ground.coefficient(2)),
        "lambda3_exact": float(-ground.coefficient(3)),
    }


def overlap_check(u_values=OVERLAP_U, m=0, rel_tol=OVERLAP_TOL):
    """Ground level from the matrix and the ODE where both are trusted; raises if they disagree."""
    rows = []
    for u in u_values:
        matrix = spectrum_matrix(u, m).levels[0]
        ode = solve_ode_spectrum(u, m).levels[0]
        rel = abs(matrix - ode) / max(1.0, abs(matrix))
        rows.append({"u": u, "matrix": matrix, "ode": ode, "rel_diff": rel})
        if rel > rel_tol:
            raise HeunFlowConvergenceException(
                f"matrix and ODE ground levels disagree at u={u}: {matrix:.10g} vs {ode:.10g} (rel {rel:.3g})"
            )
    return rows
