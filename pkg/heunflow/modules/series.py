import json
import logging
from fractions import Fraction

from heunflow.base import HeunFlow_base
from heunflow.lib.errors import HeunFlowParamsException
from heunflow.lib.perturbation import (
    rs_expand,
    rs_expand_float,
    kappa_series,
    reexpand_lambda,
    sum_series,
    coefficient_ratios,
    upsilon_analysis,
)
from heunflow.lib.validators import validate_nonneg_int, validate_positive_int, validate_finite_float
from heunflow.lib.writers import write_series, write_rows

log = logging.getLogger(__name__)

UPSILON_FIELDS = ["order", "coeff", "asymptote", "rel_dev"]
RATIO_FIELDS = ["order", "ratio"]
SUM_FIELDS = ["lambda", "value", "tail_est"]
DEFAULT_TARGET = {"lambda": "kappa", "epsilon": "two_q_minus"}


class HeunFlow_series(HeunFlow_base):
    name = "series"
    description = "Exact Rayleigh-Schroedinger series of 2q-m-1 or kappa in epsilon or lambda"

    @classmethod
    def add_arguments(cls, parser, defaults):
        parser.add_argument("--m", type=validate_nonneg_int, default=0, help="Angular momentum m")
        parser.add_argument("--n", type=validate_nonneg_int, default=0, help="Level index n")
        parser.add_argument(
            "--order", type=validate_positive_int, default=defaults["series"]["order"], help="Highest power kept"
        )
        parser.add_argument("--var", choices=["lambda", "epsilon"], default="lambda", help="Expansion variable")
        parser.add_argument(
            "--target",
            choices=["two_q_minus", "kappa"],
            help="Expanded quantity (default: kappa in lambda, two_q_minus in epsilon)",
        )
        parser.add_argument(
            "--upsilon",
            type=validate_positive_int,
            nargs="?",
            const=defaults["series"]["upsilon_order"],
            help="Tabulate the UV coefficient analysis up to this order (m=0, n=0)",
        )
        parser.add_argument("--ratios", action="store_true", help="Tabulate |c_{k+1}/c_k| instead of coefficients")
        parser.add_argument("--at", type=validate_finite_float, help="Sum the series at this value of the variable")
        parser.add_argument("--float", action="store_true", help="Float64 recursion (fast, for high orders)")

    def _expand(self):
        s = self.settings
        target = s.get("target") or DEFAULT_TARGET[s["var"]]
        expand = rs_expand_float if s.get("float") else rs_expand
        if s.get("upsilon"):
            if s["m"] != 0 or s["n"] != 0:
                raise HeunFlowParamsException("the UV coefficient analysis is defined for m=0, n=0")
            return upsilon_analysis(expand(0, 0, s["upsilon"] + 2), s["upsilon"])

        series = expand(s["m"], s["n"], s["order"])
        if s["var"] == "lambda":
            series = reexpand_lambda(series)
        if target == "kappa":
            series = kappa_series(series)
        return series

    async def dispatch(self):
        s = self.settings
        self.infomsg(f"Expanding level (m={s['m']}, n={s['n']}) to order {s.get('upsilon') or s['order']}")
        self.results = await self.run_in_thread(self._expand)
        return True

    def analyze(self):
        s = self.settings
        if s.get("upsilon"):
            return self.results
        if s.get("ratios"):
            return [{"order": p, "ratio": r} for p, r in coefficient_ratios(self.results)]
        if s.get("at") is not None:
            value, tail_est = sum_series(self.results, s["at"])
            return [{"lambda": s["at"], "value": value, "tail_est": tail_est}]
        return [{"order": p, "coefficient": c} for p, c in self.results.items()]

    def emit(self, stream, fmt="csv"):
        s = self.settings
        if s.get("upsilon"):
            return write_rows(self.analyze(), UPSILON_FIELDS, fmt, stream)
        if s.get("ratios"):
            return write_rows(self.analyze(), RATIO_FIELDS, fmt, stream)
        if s.get("at") is not None:
            return write_rows(self.analyze(), SUM_FIELDS, fmt, stream)
        if fmt == "json":
            series = self.results
            payload = {
                "variable": series.variable,
                "target": series.target,
                "m": series.m,
                "n": series.n,
                "valuation": series.valuation,
                "coefficients": [
                    [p, Fraction(c).numerator, Fraction(c).denominator] for p, c in series.items()
                ],
            }
            json.dump(payload, stream, indent=2)
            stream.write("\n")
            return
        write_series(self.results, stream)
