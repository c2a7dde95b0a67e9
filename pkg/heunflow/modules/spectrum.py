import os
import asyncio
import logging

from heunflow.base import HeunFlow_base
from heunflow.lib.jacobi import spectrum_matrix, spectrum_sausage_matrix
from heunflow.lib.ode import solve_ode_spectrum, AUTO_SWITCH_U
from heunflow.lib.validators import (
    validate_finite_float,
    validate_nonneg_int,
    validate_positive_int,
    validate_positive_float,
)
from heunflow.lib.writers import SPECTRUM_FIELDS, DENSITY_FIELDS, write_csv

log = logging.getLogger(__name__)


class HeunFlow_spectrum(HeunFlow_base):
    name = "spectrum"
    description = "Lowest kappa levels at one or more u by the Jacobi matrix, the regularized ODE, or both"
    fields = SPECTRUM_FIELDS

    @classmethod
    def add_arguments(cls, parser, defaults):
        parser.add_argument("--u", nargs="+", type=validate_finite_float, required=True, help="RG parameter(s) u")
        parser.add_argument("--m", type=validate_nonneg_int, default=0, help="Angular momentum m")
        parser.add_argument("--levels", type=validate_positive_int, default=1, help="Number of levels")
        parser.add_argument("--method", choices=["matrix", "ode", "auto"], default="auto", help="Solver")
        parser.add_argument(
            "--tol",
            type=validate_positive_float,
            default=defaults["matrix"]["tol"],
            help="Matrix truncation tolerance (relative change per doubling)",
        )
        parser.add_argument("--model", choices=["flow", "sausage"], default="flow", help="Sigma model")
        parser.add_argument("--density-dir", help="Write one xi,density CSV per level into this directory (ODE)")
        parser.add_argument("--L", type=validate_positive_float, help="ODE window half-width (default from u)")
        parser.add_argument("--h", type=validate_positive_float, default=defaults["ode"]["h"], help="ODE grid step")

    def _solve(self, u):
        s = self.settings
        method = s["method"]
        if method == "auto":
            method = "matrix" if u <= AUTO_SWITCH_U else "ode"
        if s.get("density_dir") and method != "ode":
            log.warning(f"densities come from the ODE solver; none written for u={u} ({method} method)")
        if method == "matrix":
            matrix = spectrum_sausage_matrix if s["model"] == "sausage" else spectrum_matrix
            return matrix(u, s["m"], nlevels=s["levels"], tol=s["tol"], dim_cap=self.defaults["matrix"]["dim_cap"])
        return solve_ode_spectrum(
            u,
            s["m"],
            nlevels=s["levels"],
            L=s.get("L"),
            h=s["h"],
            model=s["model"],
            density=bool(s.get("density_dir")),
            tol=self.defaults["ode"]["window_tol"],
        )

    async def dispatch(self):
        us = self.settings["u"]
        self.infomsg(f"Solving {self.settings['model']} spectrum at {len(us)} value(s) of u, m={self.settings['m']}")
        self.results = await asyncio.gather(*[self.run_in_thread(self._solve, u) for u in us])
        return bool(self.results)

    def analyze(self):
        rows = []
        for result in self.results or []:
            rows.extend(result.rows())
        return rows

    def write_densities(self):
        directory = self.settings.get("density_dir")
        if not directory:
            return []
        os.makedirs(directory, exist_ok=True)
        written = []
        for result in self.results or []:
            if not result.densities:
                continue
            d = result.to_dict()
            for index, profile in enumerate(result.densities):
                path = os.path.join(directory, f"density_{d['model']}_u{d['u']:g}_m{d['m']}_n{index}.csv")
                with open(path, "w", newline="") as stream:
                    write_csv(profile.rows(), DENSITY_FIELDS, stream)
                written.append(path)
        self.infomsg(f"Wrote {len(written)} density file(s) to [{directory}]")
        return written

    def emit(self, stream, fmt="csv"):
        super().emit(stream, fmt)
        self.write_densities()
