import sys
import csv
import json
import math
import logging
from fractions import Fraction
from contextlib import contextmanager

log = logging.getLogger(__name__)

FORMATS = ["csv", "json"]

SPECTRUM_FIELDS = ["u", "m", "index", "kappa", "err_est", "method", "continuum"]
DENSITY_FIELDS = ["xi", "density"]
TBA_FIELDS = ["N", "MR", "c", "iterations", "residual"]
MATCH_FIELDS = ["N", "MR", "u", "c", "scaled", "kappa0", "deviation"]


def format_value(value):
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


@contextmanager
def open_output(path=None):
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", newline="") as stream:
        yield stream


def write_csv(rows, fields, stream):
    writer = csv.writer(stream, lineterminator="\n")
    writer.writerow(fields)
    for row in rows:
        writer.writerow([format_value(row[f]) for f in fields])


def _json_value(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def write_json(rows, stream):
    rows = [{k: _json_value(v) for k, v in row.items()} for row in rows]
    json.dump(rows, stream, indent=2, allow_nan=False)
    stream.write("\n")


def write_rows(rows, fields, fmt="csv", stream=None):
    stream = sys.stdout if stream is None else stream
    if fmt == "json":
        write_json(({f: row[f] for f in fields} for row in rows), stream)
    else:
        write_csv(rows, fields, stream)


def write_series(series, stream):
    """Exact coefficient table; float coefficients are written as their exact binary ratio."""
    stream.write(f"# variable={series.variable} m={series.m} n={series.n}\n")
    stream.write("order,numerator,denominator\n")
    for power, c in series.items():
        c = Fraction(c)
        stream.write(f"{power},{c.numerator},{c.denominator}\n")
