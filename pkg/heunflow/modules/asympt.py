import logging

from heunflow.base import HeunFlow_base
from heunflow.lib import asymptotics as asy
from heunflow.lib.errors import HeunFlowParamsException
from heunflow.lib.validators import (
    validate_finite_float,
    validate_nonneg_int,
    validate_positive_int,
    validate_positive_float,
    validate_dynkin_rank,
    validate_half_integer,
)

log = logging.getLogger(__name__)

MODE_FIELDS = {
    "uv": ["u", "m", "n", "kappa_flow", "kappa_sausage"],
    "bound_states": ["m", "n", "kappa_over_6", "kappa"],
    "ir": ["m", "n", "kappa", "kappa_sausage_ir"],
    "coeffs": ["N", "b2", "b3", "scaled_b2", "scaled_b3", "b2_limit", "b3_limit"],
    "pcft": ["m", "j", "N", "Delta", "D", "MR", "ir_correction", "uv_exact"],
}


class HeunFlow_asympt(HeunFlow_base):
    name = "asympt"
    description = "Closed-form UV, IR, bound-state and perturbed-CFT values"
    default_format = "json"

    @classmethod
    def add_arguments(cls, parser, defaults):
        mode = parser.add_mutually_exclusive_group()
        mode.add_argument("--bound-states", action="store_true", help="UV bound states kappa for --m")
        mode.add_argument("--ir", action="store_true", help="IR levels for --m (both models), --count of them")
        mode.add_argument("--coeffs", action="store_true", help="b2, b3 of the IR central-charge expansion for --N")
        mode.add_argument("--pcft", action="store_true", help="Dimension and level corrections for --m --j --N")
        parser.add_argument("--u", type=validate_finite_float, help="RG parameter u (UV levels)")
        parser.add_argument("--m", type=validate_nonneg_int, help="Angular momentum m")
        parser.add_argument("--n", type=validate_nonneg_int, help="Level index n (UV levels)")
        parser.add_argument("--count", type=validate_positive_int, default=5, help="Number of IR levels")
        parser.add_argument("--N", type=validate_dynkin_rank, help="Rank N of the D_N diagram")
        parser.add_argument("--j", type=validate_half_integer, help="Spin j (half-integer, e.g. 3/2)")
        parser.add_argument("--mr", type=validate_positive_float, help="Scale MR for the level corrections")

    @property
    def mode(self):
        s = self.settings
        for mode in ("bound_states", "ir", "coeffs", "pcft"):
            if s.get(mode):
                return mode
        return "uv"

    @property
    def fields(self):
        return MODE_FIELDS[self.mode]

    def _require(self, *keys):
        missing = [k for k in keys if self.settings.get(k) is None]
        if missing:
            flags = ", ".join(f"--{k}" for k in missing)
            raise HeunFlowParamsException(f"asympt {self.mode.replace('_', '-')} mode needs {flags}")

    def _pcft_row(self):
        s = self.settings
        m, j, N, MR = s["m"], s["j"], s["N"], s.get("mr")
        level = asy.pcft_dimension(m, j, N)
        row = {"m": m, "j": str(j), "N": N, "Delta": level.Delta, "D": level.D, "MR": "", "ir_correction": ""}
        row["uv_exact"] = ""
        if MR is None:
            return row
        row["MR"] = MR
        if j > 0:
            row["ir_correction"] = asy.level_ir_correction(m, j, N, MR)
        try:
            row["uv_exact"] = asy.uv_exact_level(m, j, N, MR)
        except HeunFlowParamsException as e:
            log.warning(f"no UV value at MR={MR:g}: {e}")
        return row

    async def dispatch(self):
        s = self.settings
        mode = self.mode
        if mode == "bound_states":
            self._require("m")
            levels = asy.bound_state_levels(s["m"])
            self.results = [
                {"m": s["m"], "n": n, "kappa_over_6": k, "kappa": 6 * k} for n, k in enumerate(levels)
            ]
        elif mode == "ir":
            self._require("m")
            flow = asy.ir_spectrum(s["m"], s["count"])
            sausage = asy.ir_spectrum_sausage(s["m"], s["count"])
            self.results = [
                {"m": s["m"], "n": n, "kappa": k, "kappa_sausage_ir": ks}
                for n, (k, ks) in enumerate(zip(flow, sausage))
            ]
        elif mode == "coeffs":
            self._require("N")
            N = s["N"]
            b2 = asy.b2(N)
            b3 = asy.b3(N) if N >= 5 else float("nan")
            row = {"N": N, "b2": b2, "b3": b3, "scaled_b2": (N + 2) * b2, "scaled_b3": (N + 2) * b3}
            # large-N forms the exact coefficients approach
            row.update(b2_limit=1 / (N + 2), b3_limit=-3 / (2 * (N + 2)))
            self.results = [row]
        elif mode == "pcft":
            self._require("m", "j", "N")
            self.results = [self._pcft_row()]
        else:
            self._require("u", "m", "n")
            u, m, n = s["u"], s["m"], s["n"]
            self.results = [
                {
                    "u": u,
                    "m": m,
                    "n": n,
                    "kappa_flow": asy.uv_level_flow(u, m, n),
                    "kappa_sausage": asy.uv_level_sausage(u, m, n),
                }
            ]
        self.infomsg(f"Evaluated {len(self.results)} closed-form row(s) in {mode.replace('_', '-')} mode")
        return True
