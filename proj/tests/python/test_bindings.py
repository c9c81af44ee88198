import math

import pytest

import hyasync

TX = [0, 1, 2, 3, 4, 5, 6, 8, 9, 11, 13]
TY = [0, 2.5, 2.7, 3, 5.5, 7, 8.5, 8.7, 10, 12, 13]
IDX = list(range(11))


def test_version():
    assert hyasync.__version__


def test_worked_example():
    grid = hyasync.sync_grid(TX, TY)
    assert len(grid["sets"]) == 9
    assert hyasync.hy_estimate(TX, IDX, TY, IDX) == 18.0
    assert hyasync.hy_bruteforce(TX, IDX, TY, IDX) == 18.0
    assert hyasync.refresh_previous_tick(TX, IDX, TY, IDX) == 12.0


def test_invalid_times_raise_value_error():
    with pytest.raises(ValueError, match="strictly increasing"):
        hyasync.hy_estimate([0, 0], [1, 1], [0, 1], [1, 1])


def test_poisson_limits():
    g, f, h = hyasync.poisson_qcv_limits(1.0, 1.0)
    assert g == pytest.approx(14 / 9)
    assert f == pytest.approx(10 / 9)
    assert h == pytest.approx(2 / 9)


def test_simulate_and_estimate():
    cfg = {"seed": 4, "scheme": {"kind": "poisson", "n": 3000}, "coefficients": {"pieces": [{"rho": 0.5}]}}
    d = hyasync.simulate(cfg)
    assert d == hyasync.simulate(cfg)
    assert d["truth"] == pytest.approx(0.5)
    report = hyasync.estimate(d["times_x"], d["x"], d["times_y"], d["y"], {"inference": {"level": 0.99}})
    assert report["level"] == 0.99
    assert report["ci_low"] < report["hy"] < report["ci_high"]
    assert math.isfinite(report["avar_hat"])


def test_fixed_grid():
    assert hyasync.fixed_grid_previous_tick(TX, IDX, TY, IDX, 13.0) == 100.0


def test_run_mc():
    cfg = {"seed": 2, "scheme": {"kind": "poisson", "n": 500}, "mc": {"replications": 4}}
    s = hyasync.run_mc(cfg)
    assert s["replications"] == 4
    assert s["estimators"][0]["name"] == "hy"
    with pytest.raises(ValueError):
        hyasync.run_mc({"mc": {"replications": 0}})
