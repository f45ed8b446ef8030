import dataclasses
import math

import numpy as np
import pytest

from conftest import EX1, EX3
from lrpulse.designer import Branch, Pulse, design, synthesize_pulse
from lrpulse.errors import EmptySweepError
from lrpulse.sweep import (SweepPoint, SweepResult, e_max, evaluate_point, golden_section, refine_min, sweep_k,
                           sweep_theta0)

PI = math.pi
RANGE = (0.1 * PI, 0.9 * PI)


@pytest.fixture(scope="module")
def sweep33(params):
    return sweep_theta0(EX1, params, RANGE, 33)


class TestEmax:
    def test_zero_pulse(self):
        assert e_max(Pulse.zero(0.4, 1000)) == 0.0

    def test_example1_grid_doubling(self, ex1):
        a, b = e_max(synthesize_pulse(ex1, 4000)), e_max(synthesize_pulse(ex1, 8000))
        assert 0 < a < math.inf
        assert abs(a - b) / b < 1e-3

    def test_example1_regression(self, ex1):
        assert e_max(synthesize_pulse(ex1)) == pytest.approx(2453.6749599864966, rel=1e-9)

    def test_at_least_grid_maximum(self, ex1):
        pulse = synthesize_pulse(ex1, 1000)
        grid_peak = max(np.max(np.abs(pulse.e_L)), np.max(np.abs(pulse.e_R)))
        assert e_max(pulse) >= grid_peak

    def test_hbar_beta_scaling(self, params):
        p2 = dataclasses.replace(params, hbar_beta=2 * params.hbar_beta)
        e1 = e_max(synthesize_pulse(design(EX1, params)))
        e2 = e_max(synthesize_pulse(design(EX1, p2)))
        assert e2 == pytest.approx(e1 / 2, rel=1e-12)


class TestSweepTheta0:
    def test_interior_minimum(self, sweep33):
        grid = sweep33.grid
        assert len(grid) == 33
        assert all(p.feasible and p.fidelity >= 0.999 and math.isfinite(p.e_max) for p in grid)
        assert sweep33.best.theta_a0 not in (grid[0].theta_a0, grid[-1].theta_a0)
        assert sweep33.best.e_max == min(p.e_max for p in grid if p.feasible)

    def test_grid_spans_range(self, sweep33):
        thetas = [p.theta_a0 for p in sweep33.grid]
        assert thetas == list(np.linspace(*RANGE, 33))

    def test_deterministic(self, params, sweep33):
        assert sweep_theta0(EX1, params, RANGE, 33) == sweep33

    def test_concurrent_matches_serial(self, params, sweep33):
        assert sweep_theta0(EX1, params, RANGE, 33, workers=4) == sweep33

    def test_grid_independence(self, params, sweep33):
        fine = sweep_theta0(EX1, params, RANGE, 65)
        spacing = (RANGE[1] - RANGE[0]) / 32
        assert abs(fine.best.theta_a0 - sweep33.best.theta_a0) <= spacing

    @pytest.mark.parametrize("n", [0, 1, 2])
    def test_too_few_points(self, params, n):
        with pytest.raises(ValueError):
            sweep_theta0(EX1, params, RANGE, n)

    @pytest.mark.parametrize("rng", [(0.0, 1.0), (0.5, 3.5), (2.0, 1.0)])
    def test_bad_range(self, params, rng):
        with pytest.raises(ValueError):
            sweep_theta0(EX1, params, rng, 5)

    def test_infeasible_points_flagged(self, params):
        # theta_a0 = pi/2 makes theta_a(t_f) = pi for this from_initial target
        spec = EX3
        res = sweep_theta0(spec, params, (PI / 2 - 0.25, PI / 2 + 0.25), 3)
        assert [p.feasible for p in res.grid] == [True, False, True]
        assert res.grid[1].reason and math.isnan(res.grid[1].e_max)

    def test_empty_feasible_set(self, params):
        with pytest.raises(EmptySweepError):
            sweep_theta0(EX3.replace(branch=Branch.MINUS), params, (0.3, 1.0), 3)

    def test_fidelity_gate(self, params):
        res = sweep_theta0(EX1, params, (1.0, 2.0), 3, fidelity_min=0.999)
        assert all(p.feasible for p in res.grid)
        with pytest.raises(EmptySweepError):
            sweep_theta0(EX1, params, (1.0, 2.0), 3, steps=1000, fidelity_min=1.5)


def test_k_sensitivity(params):
    out = sweep_k(EX1, params, [-2, -1, 1, 2])
    assert [k for k, _ in out] == [-2, -1, 1, 2]
    values = [p.e_max for _, p in out]
    assert all(p.feasible for _, p in out)
    assert len(set(values)) == 4


class TestRefine:
    def test_example1_improves(self, sweep33):
        r = refine_min(sweep33, 1e-3)
        assert r.refined
        assert r.e_max <= sweep33.best.e_max
        i = sweep33.grid.index(sweep33.best)
        assert sweep33.grid[i - 1].theta_a0 <= r.theta_a0 <= sweep33.grid[i + 1].theta_a0

    def test_flat_returns_midpoint(self, sweep33):
        i = sweep33.grid.index(sweep33.best)
        lo, hi = sweep33.grid[i - 1].theta_a0, sweep33.grid[i + 1].theta_a0
        r = refine_min(sweep33, 1e-6, objective=lambda th: sweep33.best.e_max)
        assert r.theta_a0 == pytest.approx(0.5 * (lo + hi), abs=1e-12)
        assert r.e_max == sweep33.best.e_max

    def test_wide_tolerance_unchanged(self, sweep33):
        r = refine_min(sweep33, 10.0)
        assert (r.theta_a0, r.e_max, r.refined) == (sweep33.best.theta_a0, sweep33.best.e_max, False)

    def test_non_unimodal_warns(self, sweep33):
        with pytest.warns(RuntimeWarning, match="unimodal"):
            r = refine_min(sweep33, 1e-4, objective=lambda th: 1e9)
        assert r.e_max == sweep33.best.e_max and not r.refined

    def test_edge_minimum_warns(self, params):
        pts = tuple(SweepPoint(t, e, True) for t, e in [(0.5, 1.0), (1.0, 2.0), (1.5, 3.0)])
        res = SweepResult(pts, pts[0], EX1, params)
        with pytest.warns(RuntimeWarning):
            r = refine_min(res, 1e-3)
        assert r.theta_a0 == 0.5


def test_golden_section_quadratic():
    x, fx = golden_section(lambda x: (x - 0.3) ** 2, -1.0, 2.0, 1e-9)
    assert x == pytest.approx(0.3, abs=1e-8)
    assert fx <= 1e-16


def test_evaluate_point_reports_failure(params):
    p = evaluate_point(EX3.replace(branch=Branch.MINUS), params)
    assert not p.feasible and "unsupported branch" in p.reason
