import io
import json
from fractions import Fraction

import pytest

from heunflow.lib.errors import HeunFlowResultException
from heunflow.lib.params import AccessoryPair
from heunflow.lib.perturbation import kappa_lambda_series, rs_expand_float
from heunflow.lib.results import SpectralResult
from heunflow.lib.writers import SPECTRUM_FIELDS, format_value, write_rows, write_series


def make_result(**overrides):
    data = {"u": 0.5, "m": 1, "levels": [10.0, 40.0], "method": "matrix", "err_est": [1e-12, 2e-12]}
    data.update(overrides)
    return SpectralResult(data)


def test_result_defaults():
    result = make_result()
    assert result.continuum == [False, False]
    assert result.to_dict()["model"] == "flow"
    assert result.to_dict()["dim_or_grid"] == "N/A"
    assert result.accessory is None


def test_result_rows():
    rows = list(make_result(continuum=[False, True]).rows())
    assert [r["index"] for r in rows] == [0, 1]
    assert rows[1]["continuum"] == "true"
    assert set(rows[0]) == set(SPECTRUM_FIELDS)


@pytest.mark.parametrize(
    "overrides",
    [
        {"u": float("nan")},
        {"u": None},
        {"m": -1},
        {"m": 1.0},
        {"levels": []},
        {"levels": [40.0, 10.0]},
        {"levels": [10.0, 10.0]},
        {"method": "qr"},
        {"err_est": [1e-12]},
        {"err_est": [-1.0, 0.0]},
        {"model": "dumbbell"},
        {"continuum": [True]},
        {"accessory": [AccessoryPair(q=1.0, w=0.5)]},
        {"accessory": [(1.0, 0.5), (2.0, 0.5)]},
    ],
)
def test_result_rejects(overrides):
    with pytest.raises(HeunFlowResultException):
        make_result(**overrides)


def test_format_value():
    assert format_value(0.1) == "0.10000000000000001"
    assert format_value(6.0) == "6"
    assert format_value(3) == "3"
    assert format_value("matrix") == "matrix"


def test_write_rows_csv_and_json():
    rows = list(make_result().rows())
    stream = io.StringIO()
    write_rows(rows, SPECTRUM_FIELDS, "csv", stream)
    lines = stream.getvalue().splitlines()
    assert lines[0] == ",".join(SPECTRUM_FIELDS)
    assert lines[1] == "0.5,1,0,10,9.9999999999999998e-13,matrix,false"

    stream = io.StringIO()
    write_rows(rows, ["u", "kappa"], "json", stream)
    assert json.loads(stream.getvalue()) == [{"u": 0.5, "kappa": 10.0}, {"u": 0.5, "kappa": 40.0}]


def test_write_series_exact():
    stream = io.StringIO()
    write_series(kappa_lambda_series(1, 0, 3), stream)
    assert stream.getvalue().splitlines() == [
        "# variable=lambda m=1 n=0",
        "order,numerator,denominator",
        "0,18,1",
        "1,-4,1",
        "2,-16,9",
        "3,-352,405",
    ]


def test_write_series_float_coefficients_are_binary_ratios():
    series = rs_expand_float(0, 0, 3)
    stream = io.StringIO()
    write_series(series, stream)
    lines = stream.getvalue().splitlines()[2:]
    assert lines[0] == "-1,0,1"
    power, numerator, denominator = lines[2].split(",")
    assert power == "1"
    assert Fraction(int(numerator), int(denominator)) == Fraction(series.coefficient(1))
