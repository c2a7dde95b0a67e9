import math
import logging

from .errors import HeunFlowResultException
from .params import AccessoryPair

log = logging.getLogger(__name__)

METHODS = ["matrix", "ode", "series"]
MODELS = ["flow", "sausage"]


class SpectralResult:
    def __init__(self, result_dict):
        self.result_dict = {}

        u = result_dict.get("u", None)
        if u is None or not math.isfinite(u):
            raise HeunFlowResultException("u is required in a SpectralResult and must be finite")
        self.result_dict["u"] = float(u)

        m = result_dict.get("m", None)
        if not isinstance(m, int) or m < 0:
            raise HeunFlowResultException("m must be a non-negative int")
        self.result_dict["m"] = m

        levels = [float(k) for k in result_dict.get("levels", [])]
        if not levels:
            raise HeunFlowResultException("a SpectralResult needs at least one level")
        if any(b <= a for a, b in zip(levels, levels[1:])):
            raise HeunFlowResultException(f"levels must be strictly increasing, got {levels}")
        self.result_dict["levels"] = levels

        method = result_dict.get("method", None)
        if method not in METHODS:
            raise HeunFlowResultException(f"method must be one of: {', '.join(METHODS)}")
        self.result_dict["method"] = method

        err_est = [float(e) for e in result_dict.get("err_est", [0.0] * len(levels))]
        if len(err_est) != len(levels) or any(not (e >= 0) for e in err_est):
            raise HeunFlowResultException("err_est must hold one non-negative value per level")
        self.result_dict["err_est"] = err_est

        model = result_dict.get("model", "flow")
        if model not in MODELS:
            raise HeunFlowResultException(f"model must be one of: {', '.join(MODELS)}")
        self.result_dict["model"] = model

        continuum = result_dict.get("continuum", [False] * len(levels))
        if len(continuum) != len(levels):
            raise HeunFlowResultException("continuum must hold one flag per level")
        self.result_dict["continuum"] = [bool(c) for c in continuum]

        self.result_dict["dim_or_grid"] = str(result_dict.get("dim_or_grid", "N/A"))
        self.densities = result_dict.get("densities", None)

        accessory = result_dict.get("accessory", None)
        if accessory is not None:
            if len(accessory) != len(levels) or not all(isinstance(p, AccessoryPair) for p in accessory):
                raise HeunFlowResultException("accessory must hold one AccessoryPair per level")
            accessory = list(accessory)
        self.result_dict["accessory"] = accessory

    @property
    def levels(self):
        return self.result_dict["levels"]

    @property
    def err_est(self):
        return self.result_dict["err_est"]

    @property
    def continuum(self):
        return self.result_dict["continuum"]

    @property
    def accessory(self):
        return self.result_dict["accessory"]

    def rows(self):
        d = self.result_dict
        for index, (kappa, err, cont) in enumerate(zip(d["levels"], d["err_est"], d["continuum"])):
            yield {
                "u": d["u"],
                "m": d["m"],
                "index": index,
                "kappa": kappa,
                "err_est": err,
                "method": d["method"],
                "continuum": str(cont).lower(),
            }

    def to_dict(self):
        return self.result_dict

    def __str__(self):
        return str(self.result_dict)
