import math
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import toeplitz
from scipy.signal import fftconvolve
from scipy.integrate import trapezoid

from .errors import HeunFlowParamsException, HeunFlowConvergenceException, HeunFlowFitException

log = logging.getLogger(__name__)

SOURCES = ["flow", "sausage"]

DEFAULT_M = 2048
DEFAULT_TOL = 1e-11
MAX_ITERATIONS = 100000
DIRECT_CONVOLUTION_MAX = 1024
SOURCE_FLOOR = 30.0
GRID_CHECK_TOL = 1e-8
FIT_MR_MIN = 100.0
FIT_COND_MAX = 1e12


@dataclass(frozen=True)
class DynkinIncidence:
    N: int
    adjacency: np.ndarray

    @property
    def degrees(self):
        return self.adjacency.sum(axis=1)


@dataclass
class TbaSolution:
    N: int
    MR: float
    source: str
    beta: np.ndarray
    eps: np.ndarray
    c: float = float("nan")
    iterations: int = 0
    residual: float = float("inf")

    def to_dict(self):
        return {"N": self.N, "MR": self.MR, "c": self.c, "iterations": self.iterations, "residual": self.residual}


@dataclass
class FlowCurve:
    kind: str
    N: int
    points: list = field(default_factory=list)
    solutions: list = field(default_factory=list)

    def __post_init__(self):
        xs = [p[0] for p in self.points]
        if any(b <= a for a, b in zip(xs, xs[1:])):
            raise HeunFlowParamsException(f"{self.kind} curve abscissae must be strictly increasing")

    @property
    def values(self):
        return [p[1] for p in self.points]


def build_incidence(N):
    """Incidence matrix of the extended D_N diagram: forks {0,1} at node 2 and {N-1,N} at node N-2."""
    if N < 4:
        raise HeunFlowParamsException(f"the extended D_N diagram needs N >= 4, got [{N}]")
    edges = [(0, 2), (1, 2)] + [(a, a + 1) for a in range(2, N - 2)] + [(N - 2, N - 1), (N - 2, N)]
    adjacency = np.zeros((N + 1, N + 1), dtype=int)
    for a, b in edges:
        adjacency[a, b] = adjacency[b, a] = 1
    return DynkinIncidence(N=N, adjacency=adjacency)


def default_half_width(MR):
    return max(25.0, abs(math.log(MR)) + 25.0)


def source_terms(N, MR, source, beta):
    if source not in SOURCES:
        raise HeunFlowParamsException(f"source must be one of: {', '.join(SOURCES)}")
    rho = np.zeros((N + 1, beta.size))
    if source == "flow":
        rho[0] = 0.5 * MR * np.exp(beta)
        rho[N] = 0.5 * MR * np.exp(-beta)
    else:
        rho[0] = MR * np.cosh(beta)
    return rho


def _check_frozen_ends(rho, source):
    # sourced ends must be deep in the L = 0 region
    ends = [rho[0, -1], rho[-1, 0]] if source == "flow" else [rho[0, 0], rho[0, -1]]
    if min(ends) < SOURCE_FLOOR:
        raise HeunFlowParamsException(
            f"rapidity window too narrow: source reaches only {min(ends):.3g} < {SOURCE_FLOOR:g} at the ends"
        )


class _Convolver:
    """Trapezoid quadrature of (K * L)(beta_i) with K = 1/(2 pi cosh) plus plateau tails beyond +-B."""

    def __init__(self, beta):
        self.size = beta.size
        step = beta[1] - beta[0]
        self.weights = np.full(self.size, step)
        self.weights[0] = self.weights[-1] = 0.5 * step
        offsets = (np.arange(2 * self.size - 1) - (self.size - 1)) * step
        self.kernel = 1.0 / (2.0 * math.pi * np.cosh(offsets))
        self.matrix = None
        if self.size <= DIRECT_CONVOLUTION_MAX:
            self.matrix = toeplitz(self.kernel[self.size - 1 :])
        B = beta[-1]
        self.right_tail = 0.5 - np.arctan(np.exp(B - beta)) / math.pi
        self.left_tail = 0.5 - np.arctan(np.exp(B + beta)) / math.pi

    def __call__(self, L):
        weighted = L * self.weights
        if self.matrix is not None:
            conv = weighted @ self.matrix
        else:
            full = fftconvolve(self.kernel[None, :], weighted, mode="full", axes=1)
            conv = full[:, self.size - 1 : 2 * self.size - 1]
        return conv + L[:, -1:] * self.right_tail + L[:, :1] * self.left_tail


def _pseudo_l(eps):
    return np.logaddexp(0.0, -eps)


def central_charge(sol):
    rho = source_terms(sol.N, sol.MR, sol.source, sol.beta)
    integrand = (rho * _pseudo_l(sol.eps)).sum(axis=0)
    return float(3.0 / math.pi**2 * trapezoid(integrand, sol.beta))


def solve_tba(
    N,
    MR,
    source="flow",
    B=None,
    M=None,
    tol=None,
    initial=None,
    decoupled=False,
    check_grid=False,
    max_iterations=MAX_ITERATIONS,
):
    if not MR > 0:
        raise HeunFlowParamsException(f"MR must be positive, got [{MR}]")
    B = default_half_width(MR) if B is None else float(B)
    M = DEFAULT_M if M is None else int(M)
    tol = DEFAULT_TOL if tol is None else float(tol)
    if M < 512:
        raise HeunFlowParamsException(f"the rapidity grid needs M >= 512 points, got [{M}]")

    incidence = build_incidence(N)
    coupling = np.zeros_like(incidence.adjacency) if decoupled else incidence.adjacency
    beta = np.linspace(-B, B, M)
    rho = source_terms(N, MR, source, beta)
    _check_frozen_ends(rho, source)
    convolve = _Convolver(beta)

    eps = rho.copy() if initial is None else np.array(initial, dtype=float)
    if eps.shape != rho.shape:
        raise HeunFlowParamsException(f"initial pseudo-energies have shape {eps.shape}, expected {rho.shape}")

    damping, previous = 1.0, math.inf
    current = _pseudo_l(eps)
    for iteration in range(1, max_iterations + 1):
        update = rho - coupling @ convolve(current)
        # measured on L: eps at the sourced ends is ~MR e^B and only resolved to its float spacing
        proposed = _pseudo_l(update)
        residual = float(np.abs(proposed - current).max())
        if residual > previous and damping == 1.0:
            log.debug(f"TBA residual grew at iteration {iteration} (N={N}, MR={MR:g}); damping by 0.5")
            damping = 0.5
        eps = eps + damping * (update - eps)
        current = proposed if damping == 1.0 else _pseudo_l(eps)
        previous = residual
        if residual < tol:
            break
    else:
        raise HeunFlowConvergenceException(
            f"TBA did not converge in {max_iterations} iterations (N={N}, MR={MR:g}, residual {residual:.3g})"
        )

    sol = TbaSolution(N=N, MR=MR, source=source, beta=beta, eps=eps, iterations=iteration, residual=residual)
    sol.c = central_charge(sol)
    log.debug(f"TBA N={N} MR={MR:g}: c={sol.c:.12f} after {iteration} iterations")

    if check_grid:
        wide = solve_tba(N, MR, source, B=2 * B, M=2 * M, tol=tol, decoupled=decoupled)
        if abs(wide.c - sol.c) > GRID_CHECK_TOL:
            raise HeunFlowConvergenceException(
                f"c moves by {abs(wide.c - sol.c):.3g} when the grid (B={B:g}, M={M}) is doubled"
            )
    return sol


def central_charge_curve(
    N,
    MR_list,
    source="flow",
    B=None,
    M=None,
    tol=None,
    keep_solutions=False,
    check_grid=False,
    max_iterations=MAX_ITERATIONS,
):
    """c(MR) on ascending MR with warm starts on a shared rapidity grid."""
    MR_list = sorted(float(x) for x in MR_list)
    if not MR_list:
        raise HeunFlowParamsException("MR list is empty")
    if B is None:
        B = max(default_half_width(x) for x in MR_list)
    M = DEFAULT_M if M is None else int(M)

    points, solutions = [], []
    previous = None
    for MR in MR_list:
        initial = None
        if previous is not None:
            beta = previous.beta
            initial = previous.eps - source_terms(N, previous.MR, source, beta) + source_terms(N, MR, source, beta)
        sol = solve_tba(
            N, MR, source, B=B, M=M, tol=tol, initial=initial, check_grid=check_grid, max_iterations=max_iterations
        )
        points.append((MR, sol.c))
        if keep_solutions:
            solutions.append(sol)
        previous = sol
    return FlowCurve(kind="tba", N=N, points=points, solutions=solutions)


def fit_ir_coeffs(curve, N):
    """Least-squares (b2, b3) of c - c_IR = b2 X^{8/(N+2)} + b3 X^{12/(N+2)}, X = (N+2)/MR."""
    deep = [(MR, c) for MR, c in curve.points if MR >= FIT_MR_MIN]
    if len(deep) < 6:
        raise HeunFlowFitException(f"IR fit needs at least 6 points with MR >= {FIT_MR_MIN:g}, got {len(deep)}")
    k = N + 2.0
    x = k / np.array([p[0] for p in deep])
    design = np.column_stack([x ** (8.0 / k), x ** (12.0 / k)])
    target = np.array([p[1] for p in deep]) - (2.0 - 6.0 / k)
    cond = np.linalg.cond(design)
    if not cond < FIT_COND_MAX:
        raise HeunFlowFitException(f"IR fit design matrix is ill-conditioned (cond={cond:.3g})")
    (b2_fit, b3_fit), *_ = np.linalg.lstsq(design, target, rcond=None)
    return float(b2_fit), float(b3_fit)


def eps_table(sol):
    for i, b in enumerate(sol.beta):
        row = {"beta": float(b)}
        for a in range(sol.N + 1):
            row[f"eps_{a}"] = float(sol.eps[a, i])
        yield row
