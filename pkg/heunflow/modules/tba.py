import os
import logging

import numpy as np

from heunflow.base import HeunFlow_base
from heunflow.lib.asymptotics import b2, b3
from heunflow.lib.errors import HeunFlowParamsException
from heunflow.lib.tba import central_charge_curve, fit_ir_coeffs, eps_table
from heunflow.lib.validators import validate_dynkin_rank, validate_positive_float, validate_positive_int
from heunflow.lib.writers import TBA_FIELDS, write_rows, write_csv, format_value

log = logging.getLogger(__name__)


class HeunFlow_tba(HeunFlow_base):
    name = "tba"
    description = "Effective central charge c(MR) of the extended D_N TBA system"
    fields = TBA_FIELDS

    @classmethod
    def add_arguments(cls, parser, defaults):
        d = defaults["tba"]
        parser.add_argument("--N", type=validate_dynkin_rank, required=True, help="Rank N >= 4 of the D_N diagram")
        parser.add_argument("--mr-min", type=validate_positive_float, default=d["mr_min"], help="Smallest MR")
        parser.add_argument("--mr-max", type=validate_positive_float, default=d["mr_max"], help="Largest MR")
        parser.add_argument("--points", type=validate_positive_int, default=d["points"], help="Log-spaced MR points")
        parser.add_argument("--source", choices=["flow", "sausage"], default="flow", help="Source terms")
        parser.add_argument("--B", type=validate_positive_float, help="Rapidity half-width (default from MR)")
        parser.add_argument("--M", type=validate_positive_int, default=d["M"], help="Rapidity grid points")
        parser.add_argument("--tol", type=validate_positive_float, default=d["tol"], help="Fixed-point tolerance")
        parser.add_argument("--dump-eps", metavar="DIR", help="Write beta,eps_0..eps_N per MR into this directory")
        parser.add_argument("--fit-ir", action="store_true", help="Fit b2, b3 to the IR end of the curve")
        parser.add_argument("--check-grid", action="store_true", help="Re-solve at doubled B and M per point")

    def mr_list(self):
        s = self.settings
        if s["mr_max"] < s["mr_min"]:
            raise HeunFlowParamsException(f"--mr-max {s['mr_max']:g} is below --mr-min {s['mr_min']:g}")
        if s["points"] == 1:
            return [s["mr_min"]]
        return list(np.geomspace(s["mr_min"], s["mr_max"], s["points"]))

    def _solve(self):
        s = self.settings
        return central_charge_curve(
            s["N"],
            self.mr_list(),
            s["source"],
            B=s.get("B"),
            M=s["M"],
            tol=s["tol"],
            keep_solutions=True,
            check_grid=bool(s.get("check_grid")),
            max_iterations=self.defaults["tba"]["max_iterations"],
        )

    async def dispatch(self):
        s = self.settings
        self.infomsg(f"Solving the D_{s['N']} TBA ({s['source']} source) at {s['points']} value(s) of MR")
        self.curve = await self.run_in_thread(self._solve)
        self.results = [sol.to_dict() for sol in self.curve.solutions]
        return True

    def fit(self):
        N = self.settings["N"]
        b2_fit, b3_fit = fit_ir_coeffs(self.curve, N)
        fit = {"b2_fit": b2_fit, "b3_fit": b3_fit, "b2": b2(N)}
        fit["b3"] = b3(N) if N >= 5 else float("nan")
        self.infomsg(f"IR fit: b2={b2_fit:.8g} (closed form {fit['b2']:.8g}), b3={b3_fit:.8g}")
        return fit

    def dump_eps(self):
        directory = self.settings.get("dump_eps")
        if not directory:
            return
        os.makedirs(directory, exist_ok=True)
        fields = ["beta"] + [f"eps_{a}" for a in range(self.settings["N"] + 1)]
        for sol in self.curve.solutions:
            path = os.path.join(directory, f"eps_N{sol.N}_MR{sol.MR:.6g}.csv")
            with open(path, "w", newline="") as stream:
                write_csv(eps_table(sol), fields, stream)
        self.infomsg(f"Wrote {len(self.curve.solutions)} pseudo-energy table(s) to [{directory}]")

    def emit(self, stream, fmt="csv"):
        rows = self.analyze()
        fit = self.fit() if self.settings.get("fit_ir") else None
        if fmt == "json" and fit:
            write_rows([{**fit, "curve": rows}], list(fit) + ["curve"], "json", stream)
        else:
            write_rows(rows, self.fields, fmt, stream)
            if fit:
                stream.write("# " + " ".join(f"{k}={format_value(v)}" for k, v in fit.items()) + "\n")
        self.dump_eps()
