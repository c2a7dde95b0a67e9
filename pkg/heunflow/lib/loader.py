import os
import yaml
import logging
from importlib import resources

log = logging.getLogger(__name__)

from .errors import HeunFlowConfigException

# section -> {key: type}; top-level scalars use the section name itself
DEFAULTS_SCHEMA = {
    "matrix": {"dim_cap": int, "tol": float},
    "ode": {"h": float, "window_tol": float},
    "series": {"order": int, "upsilon_order": int},
    "tba": {"M": int, "tol": float, "max_iterations": int, "mr_min": float, "mr_max": float, "points": int},
    "match": {"N": int, "points": int, "mr_min": float, "mr_max": float},
    "threads": int,
}

# top-level keys that may be left unset, with the value used then
FALLBACKS = {"threads": lambda: os.cpu_count() or 1}


def _coerce(name, value, kind):
    if isinstance(value, bool):
        raise HeunFlowConfigException(f"default [{name}] must be {kind.__name__}, got a boolean")
    try:
        coerced = kind(value)
    except (TypeError, ValueError):
        raise HeunFlowConfigException(f"default [{name}] must be {kind.__name__}, got [{value}]")
    if kind is int and coerced != float(value):
        raise HeunFlowConfigException(f"default [{name}] must be an integer, got [{value}]")
    return coerced


def load_defaults(defaults_file=None):
    if defaults_file:
        if not os.path.exists(defaults_file):
            raise HeunFlowConfigException(f"Defaults file [{defaults_file}] does not exist")
    else:
        defaults_file = resources.files("heunflow") / "defaults" / "numerics.yml"

    log.debug(f"loading numeric defaults from: {defaults_file}")
    try:
        with open(defaults_file, "r") as file:
            raw = yaml.safe_load(file)
    except yaml.YAMLError as e:
        raise HeunFlowConfigException(f"Defaults file [{defaults_file}] is not valid YAML: {e}")
    if not isinstance(raw, dict):
        raise HeunFlowConfigException(f"Defaults file [{defaults_file}] must hold a mapping")

    defaults = {}
    for section, schema in DEFAULTS_SCHEMA.items():
        if raw.get(section) is None and section in FALLBACKS:
            defaults[section] = FALLBACKS[section]()
            log.debug(f"[{section}] unset, using {defaults[section]}")
            continue
        if section not in raw:
            raise HeunFlowConfigException(f"Defaults file [{defaults_file}] is missing [{section}]")
        if not isinstance(schema, dict):
            defaults[section] = _coerce(section, raw[section], schema)
            continue
        values = raw[section] or {}
        defaults[section] = {}
        for key, kind in schema.items():
            if key not in values:
                raise HeunFlowConfigException(f"Defaults file [{defaults_file}] is missing [{section}.{key}]")
            defaults[section][key] = _coerce(f"{section}.{key}", values[key], kind)
    return defaults


def load_config(config_file):
    """key=value run-config; keys are long option names, dashes and underscores both accepted."""
    if not os.path.exists(config_file):
        raise HeunFlowConfigException(f"Config file [{config_file}] does not exist")

    entries = {}
    with open(config_file, "r") as file:
        for lineno, line in enumerate(file, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise HeunFlowConfigException(f"{config_file}:{lineno}: expected key=value, got [{line}]")
            key, value = (part.strip() for part in line.split("=", 1))
            if not key:
                raise HeunFlowConfigException(f"{config_file}:{lineno}: empty key")
            entries[key.lstrip("-").replace("-", "_")] = value
    log.debug(f"Loaded [{len(entries)}] config entries from [{config_file}]")
    return entries
