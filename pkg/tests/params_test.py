import math

import pytest

from heunflow.lib.errors import HeunFlowParamsException
from heunflow.lib.params import (
    derive_params,
    kappa_from_q,
    q_from_kappa,
    sausage_map,
    sausage_kappa_from_q,
    sausage_q_from_kappa,
)


def test_derive_params_origin():
    p = derive_params(0, 0)
    assert p.lam == pytest.approx(0.5, abs=1e-15)
    assert p.epsilon == pytest.approx(1 / 3, abs=1e-15)
    assert p.w == -1.0


def test_derive_params_quarter_log3():
    p = derive_params(0.25 * math.log(3), 0)
    assert p.lam == pytest.approx(0.75, rel=1e-14)
    assert p.epsilon == pytest.approx(0.6, rel=1e-14)
    assert p.w == pytest.approx(-1 / 3, rel=1e-14)


@pytest.mark.parametrize("u", [-7.5, -1.0, 0.3, 1.2, 2.0])
def test_parametrizations_consistent(u):
    p = derive_params(u, 1)
    assert p.lam == pytest.approx(2 * p.epsilon / (1 + p.epsilon), rel=1e-14)
    assert p.epsilon == pytest.approx(p.lam / (2 - p.lam), rel=1e-14)
    assert p.w == pytest.approx(-(1 - p.lam) / p.lam, rel=1e-10)
    assert p.one_minus_two_w == pytest.approx(1 - 2 * p.w, rel=1e-12)


def test_derive_params_extremes_do_not_overflow():
    far_ir = derive_params(-300, 0)
    assert far_ir.lam == 0.0 and far_ir.epsilon == 0.0
    assert far_ir.w == -math.inf
    far_uv = derive_params(300, 0)
    assert far_uv.lam == 1.0
    assert far_uv.epsilon == 1.0


@pytest.mark.parametrize("u, m", [(math.inf, 0), (math.nan, 0), ("x", 0), (0.0, -1), (0.0, 1.5)])
def test_derive_params_rejects(u, m):
    with pytest.raises(HeunFlowParamsException):
        derive_params(u, m)


def test_kappa_from_q_examples():
    assert kappa_from_q(0.5, -1, 0) == pytest.approx(6.0)
    assert kappa_from_q(0.25, -1e-300, 0) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(HeunFlowParamsException):
        kappa_from_q(0.3, 1, 0)


def test_q_kappa_round_trip():
    w = -math.exp(-40)
    q = q_from_kappa(114, w, 10)
    assert kappa_from_q(q, w, 10) == pytest.approx(114, rel=1e-14)


def test_sausage_map_examples():
    fixed = sausage_map(1, 2)
    assert (fixed.q, fixed.w) == pytest.approx((1, 2))
    pair = sausage_map(0.5, -1)
    assert (pair.q, pair.w) == pytest.approx((0.75, 0.5))


@pytest.mark.parametrize("m", [0, 1, 4])
def test_sausage_map_involution(m):
    once = sausage_map(0.3, -5, m)
    twice = sausage_map(once.q, once.w, m)
    assert twice.q == pytest.approx(0.3, rel=1e-13)
    assert twice.w == pytest.approx(-5, rel=1e-13)


def test_sausage_map_rejects_w_one():
    with pytest.raises(HeunFlowParamsException):
        sausage_map(0.2, 1)


def test_sausage_bridge_round_trip():
    W = math.exp(-4 * 0.7)
    q = sausage_q_from_kappa(12.5, W, 2)
    assert sausage_kappa_from_q(q, W, 2) == pytest.approx(12.5, rel=1e-14)
    with pytest.raises(HeunFlowParamsException):
        sausage_kappa_from_q(q, 1.0, 2)
