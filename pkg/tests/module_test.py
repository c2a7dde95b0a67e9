import os
import argparse
import logging

import pytest

from heunflow import modules_loaded
from heunflow.base import HeunFlow_base, get_all_modules
from heunflow.lib.errors import HeunFlowParamsException, HeunFlowConvergenceException
from heunflow.modules.asympt import HeunFlow_asympt
from heunflow.modules.match import HeunFlow_match
from heunflow.modules.series import HeunFlow_series
from heunflow.modules.spectrum import HeunFlow_spectrum
from heunflow.modules.tba import HeunFlow_tba


def spectrum_settings(**overrides):
    settings = {"u": [-20.0], "m": 0, "levels": 1, "method": "matrix", "tol": 1e-9, "model": "flow", "h": 0.02}
    settings.update(overrides)
    return settings


def test_modules_discovered(defaults):
    modules = get_all_modules()
    assert {m.name for m in modules} == {"spectrum", "series", "tba", "match", "asympt"}
    assert set(modules_loaded) == {"spectrum", "series", "tba", "match", "asympt"}
    for m in modules:
        assert m.description, f"module [{m.__name__}] has no description"
        m.add_arguments(argparse.ArgumentParser(), defaults)


@pytest.mark.asyncio
async def test_base_dispatch_is_abstract(defaults):
    with pytest.raises(NotImplementedError):
        await HeunFlow_base({}, defaults=defaults).dispatch()


@pytest.mark.asyncio
async def test_spectrum_dispatch_per_u(defaults):
    module = HeunFlow_spectrum(spectrum_settings(u=[-20.0, -10.0], levels=2), defaults=defaults)
    assert await module.dispatch()
    rows = module.analyze()
    assert [(r["u"], r["index"]) for r in rows] == [(-20.0, 0), (-20.0, 1), (-10.0, 0), (-10.0, 1)]
    assert rows[1]["kappa"] == pytest.approx(54, rel=1e-9)


@pytest.mark.asyncio
async def test_spectrum_auto_picks_method(defaults):
    module = HeunFlow_spectrum(spectrum_settings(u=[0.0, 3.0], method="auto"), defaults=defaults)
    await module.dispatch()
    assert [r["method"] for r in module.analyze()] == ["matrix", "ode"]


@pytest.mark.asyncio
async def test_spectrum_writes_densities(defaults, tmp_path):
    settings = spectrum_settings(u=[-5.0], levels=2, method="ode", density_dir=str(tmp_path / "dens"))
    module = HeunFlow_spectrum(settings, defaults=defaults)
    await module.dispatch()
    written = module.write_densities()
    assert [os.path.basename(p) for p in written] == ["density_flow_u-5_m0_n0.csv", "density_flow_u-5_m0_n1.csv"]
    with open(written[0]) as f:
        assert f.readline().strip() == "xi,density"


@pytest.mark.asyncio
async def test_spectrum_propagates_solver_failure(defaults, mocker):
    mocker.patch(
        "heunflow.modules.spectrum.spectrum_matrix", side_effect=HeunFlowConvergenceException("dim cap reached")
    )
    module = HeunFlow_spectrum(spectrum_settings(), defaults=defaults)
    with pytest.raises(HeunFlowConvergenceException):
        await module.dispatch()


@pytest.mark.asyncio
async def test_series_upsilon_needs_ground_state(defaults):
    settings = {"m": 1, "n": 0, "order": 10, "var": "lambda", "target": "kappa", "upsilon": 12}
    with pytest.raises(HeunFlowParamsException):
        await HeunFlow_series(settings, defaults=defaults).dispatch()


@pytest.mark.asyncio
async def test_series_sum_rows(defaults):
    settings = {"m": 0, "n": 0, "order": 10, "var": "lambda", "target": "kappa", "at": 0.5}
    module = HeunFlow_series(settings, defaults=defaults)
    await module.dispatch()
    (row,) = module.analyze()
    assert row["value"] == pytest.approx(5.6559, abs=3e-4)


@pytest.mark.asyncio
async def test_series_upsilon_rows(defaults):
    settings = {"m": 0, "n": 0, "order": 10, "var": "lambda", "target": "kappa", "upsilon": 12}
    module = HeunFlow_series(settings, defaults=defaults)
    await module.dispatch()
    assert [row["order"] for row in module.analyze()] == [0, 2, 4, 6, 8, 10, 12]


@pytest.mark.asyncio
async def test_tba_module_rows_and_dump(defaults, tmp_path):
    settings = {
        "N": 5,
        "mr_min": 1.0,
        "mr_max": 10.0,
        "points": 2,
        "source": "flow",
        "M": 512,
        "tol": 1e-8,
        "dump_eps": str(tmp_path),
    }
    module = HeunFlow_tba(settings, defaults=defaults)
    await module.dispatch()
    rows = module.analyze()
    assert [r["MR"] for r in rows] == pytest.approx([1.0, 10.0])
    assert rows[0]["c"] > rows[1]["c"]
    module.dump_eps()
    assert sorted(p.name for p in tmp_path.iterdir()) == ["eps_N5_MR1.csv", "eps_N5_MR10.csv"]


def test_tba_module_rejects_inverted_range(defaults):
    settings = {"N": 5, "mr_min": 10.0, "mr_max": 1.0, "points": 3}
    with pytest.raises(HeunFlowParamsException):
        HeunFlow_tba(settings, defaults=defaults).mr_list()


@pytest.mark.asyncio
async def test_match_ir_compare(defaults):
    module = HeunFlow_match({"N": 23, "ir_compare": True}, defaults=defaults)
    await module.dispatch()
    (row,) = module.analyze()
    assert module.fields == ["N", "lambda2", "lambda3", "lambda2_exact", "lambda3_exact"]
    assert row["lambda2_exact"] == 1.0


@pytest.mark.asyncio
async def test_asympt_modes(defaults):
    module = HeunFlow_asympt({"coeffs": True, "N": 4}, defaults=defaults)
    await module.dispatch()
    (row,) = module.analyze()
    assert module.mode == "coeffs"
    assert row["b3"] != row["b3"]
    assert row["b2_limit"] == pytest.approx(1 / 6) and row["b3_limit"] == pytest.approx(-0.25)

    module = HeunFlow_asympt({"bound_states": True, "m": 7}, defaults=defaults)
    await module.dispatch()
    assert module.default_format == "json"
    assert [row["kappa_over_6"] for row in module.analyze()] == [13, 33, 45]

    module = HeunFlow_asympt({"pcft": True, "m": 0, "j": 1, "N": 20, "mr": 1e-3}, defaults=defaults)
    await module.dispatch()
    (row,) = module.analyze()
    assert row["uv_exact"] > 0 and row["ir_correction"] != ""


@pytest.mark.asyncio
async def test_asympt_pcft_warns_outside_uv(defaults, caplog):
    caplog.set_level(logging.WARNING, logger="heunflow")
    module = HeunFlow_asympt({"pcft": True, "m": 0, "j": 1, "N": 20, "mr": 1e20}, defaults=defaults)
    await module.dispatch()
    (row,) = module.analyze()
    assert row["uv_exact"] == ""
    assert "no UV value" in caplog.text
