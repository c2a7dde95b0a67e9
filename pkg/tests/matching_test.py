import math

import numpy as np
import pytest

from heunflow.lib.errors import HeunFlowParamsException, HeunFlowConvergenceException
from heunflow.lib.matching import ir_series_compare, match_curve, overlap_check, u_from_mr
from heunflow.lib.tba import FlowCurve


def test_u_from_mr_examples():
    assert u_from_mr(5, 5.0) == 0.0
    t = math.log(23 / 1e3)
    assert u_from_mr(23, 1e3) == pytest.approx(t / math.sqrt(25 * (23 - 2 * math.tanh(4 * t))), rel=1e-14)


def test_u_from_mr_is_decreasing():
    values = [u_from_mr(11, mr) for mr in (1e-6, 1e-3, 1.0, 1e2, 1e4)]
    assert all(b < a for a, b in zip(values, values[1:]))


@pytest.mark.parametrize("N, MR", [(3, 1.0), (5, 0.0), (5, -2.0)])
def test_u_from_mr_rejects(N, MR):
    with pytest.raises(HeunFlowParamsException):
        u_from_mr(N, MR)


def test_ir_series_compare_large_n():
    row = ir_series_compare(4000)
    assert row["lambda2_exact"] == 1.0
    assert row["lambda3_exact"] == 0.5
    assert row["lambda2"] == pytest.approx(1.0, abs=2e-2)
    assert row["lambda3"] == pytest.approx(0.5, abs=6e-2)


def test_ir_series_compare_needs_b3():
    with pytest.raises(HeunFlowParamsException):
        ir_series_compare(4)


def test_match_curve_on_given_curve():
    N = 23
    points = [(1e2, 2 - 6 / 25 + 1e-3), (1e3, 2 - 6 / 25)]
    rows = match_curve(N, [p[0] for p in points], curve=FlowCurve(kind="tba", N=N, points=points))
    assert [row.MR for row in rows] == [1e2, 1e3]
    for row in rows:
        assert row.u < 0
        assert row.deviation == pytest.approx(row.scaled - row.kappa0, abs=1e-15)
        assert 5.5 < row.kappa0 < 6.0
    assert rows[1].scaled == pytest.approx(6.0)
    assert set(rows[0].to_dict()) == {"N", "MR", "u", "c", "scaled", "kappa0", "deviation"}


def test_overlap_check_passes():
    rows = overlap_check((1.0, 1.5))
    assert [row["u"] for row in rows] == [1.0, 1.5]
    assert all(row["rel_diff"] < 1e-4 for row in rows)


def test_overlap_check_raises_on_disagreement():
    with pytest.raises(HeunFlowConvergenceException, match="disagree"):
        overlap_check((1.0,), rel_tol=1e-30)


@pytest.mark.slow
def test_match_n23_ir_end():
    rows = match_curve(23, [1e2, 3e2, 1e3], M=1024, tol=1e-11)
    deviations = [abs(row.deviation) for row in rows]
    assert deviations[-1] < 0.05
    assert deviations[-1] <= deviations[0]


@pytest.mark.slow
def test_matching_improves_with_rank():
    mr_list = np.geomspace(1e-4, 1e3, 30)
    worst = [max(abs(row.deviation) for row in match_curve(N, mr_list, M=1024, tol=1e-10)) for N in (5, 11, 23)]
    assert worst[0] > worst[1] > worst[2]
