import logging

import numpy as np

from heunflow.base import HeunFlow_base
from heunflow.lib.errors import HeunFlowParamsException
from heunflow.lib.matching import ir_series_compare, overlap_check, match_curve
from heunflow.lib.validators import validate_dynkin_rank, validate_positive_float, validate_positive_int
from heunflow.lib.writers import MATCH_FIELDS

log = logging.getLogger(__name__)

IR_COMPARE_FIELDS = ["N", "lambda2", "lambda3", "lambda2_exact", "lambda3_exact"]
OVERLAP_FIELDS = ["u", "matrix", "ode", "rel_diff"]


class HeunFlow_match(HeunFlow_base):
    name = "match"
    description = "Compare (N+2)(2-c) from the TBA with the ground level kappa_0(u)"
    fields = MATCH_FIELDS

    @classmethod
    def add_arguments(cls, parser, defaults):
        d = defaults["match"]
        parser.add_argument("--N", type=validate_dynkin_rank, default=d["N"], help="Rank N >= 4 of the D_N diagram")
        parser.add_argument("--points", type=validate_positive_int, default=d["points"], help="Log-spaced MR points")
        parser.add_argument("--mr-min", type=validate_positive_float, default=d["mr_min"], help="Smallest MR")
        parser.add_argument("--mr-max", type=validate_positive_float, default=d["mr_max"], help="Largest MR")
        parser.add_argument("--B", type=validate_positive_float, help="TBA rapidity half-width")
        parser.add_argument("--M", type=validate_positive_int, default=defaults["tba"]["M"], help="TBA grid points")
        parser.add_argument("--ir-compare", action="store_true", help="Only compare the IR lambda coefficients")
        parser.add_argument("--overlap", action="store_true", help="Only run the matrix/ODE overlap check")

    async def dispatch(self):
        s = self.settings
        if s.get("ir_compare"):
            self.fields = IR_COMPARE_FIELDS
            self.results = [ir_series_compare(s["N"])]
            return True
        if s.get("overlap"):
            self.fields = OVERLAP_FIELDS
            self.results = await self.run_in_thread(overlap_check)
            return True

        if s["mr_max"] < s["mr_min"]:
            raise HeunFlowParamsException(f"--mr-max {s['mr_max']:g} is below --mr-min {s['mr_min']:g}")
        mr_list = list(np.geomspace(s["mr_min"], s["mr_max"], s["points"])) if s["points"] > 1 else [s["mr_min"]]
        self.infomsg(f"Matching D_{s['N']} TBA against kappa_0 at {len(mr_list)} value(s) of MR")
        rows = await self.run_in_thread(
            match_curve, s["N"], mr_list, B=s.get("B"), M=s["M"], tol=self.defaults["tba"]["tol"]
        )
        self.results = [row.to_dict() for row in rows]
        return True
