"""Acceptance criteria 1-10, one test each; every test prints a PASS/FAIL line."""
import io
import math
import pathlib
import time

import numpy as np

from conftest import EX1, EX2, EXAMPLES, record_acceptance
from lrpulse import kernels
from lrpulse.cli import run_command
from lrpulse.config import format_config, parse_config
from lrpulse.designer import Branch, DesignSpec, Mode, design, lr_phases
from lrpulse.dynamics import (gate_check_hadamard, mode_coefficients, mode_weights, phase_aligned_distance,
                              reconstruct_lr, simulate)
from lrpulse.model import BlochAngles, InvariantSample, hamiltonian_at, invariance_defect
from lrpulse.sweep import sweep_theta0

from test_config import random_config

PI = math.pi
CONFIGS = pathlib.Path(__file__).resolve().parents[1] / "configs"


def report(n, ok, detail):
    record_acceptance(f"[{'PASS' if ok else 'FAIL'}] AC{n:<2} {detail}")
    assert ok, detail


def test_ac01_example1_transfer(params):
    simulate(EX1, params)  # warm-up
    t0 = time.perf_counter()
    sim = simulate(EX1, params, 4000)
    elapsed = time.perf_counter() - t0
    err = 1.0 - sim.trajectory.populations[-1, 1]
    report(1, err <= 1e-3 and elapsed < 1.0,
           f"example 1: 1-P2(t_f) = {err:.3e} (<= 1e-3), runtime {elapsed * 1e3:.1f} ms (< 1 s, {kernels.BACKEND})")


def test_ac02_example2_transfer(params):
    t0 = time.perf_counter()
    sim = simulate(EX2, params, 4000)
    elapsed = time.perf_counter() - t0
    report(2, sim.fidelity >= 0.999 and elapsed < 1.0,
           f"example 2: fidelity to |2> = {sim.fidelity:.12f} (>= 0.999), runtime {elapsed * 1e3:.1f} ms")


def test_ac03_hadamard(sims, params):
    f1, f2 = gate_check_hadamard(params, sims["ex3"].pulse)
    report(3, f1 >= 0.999 and f2 >= 0.999,
           f"example 3 Hadamard: fidelity_1 = {f1:.12f}, fidelity_2 = {f2:.12f} (each >= 0.999)")


def test_ac04_parameter_consistency(params):
    ratio = abs(params.J + params.delta) / params.J
    report(4, 0.055 <= ratio <= 0.070, f"|J+Delta|/J = {ratio:.6f} in [0.055, 0.070]")


def test_ac05_u_targets(sims):
    expected = {"ex1": 2 * PI, "ex2": PI, "ex3": -2 * PI}
    errs = {n: abs(float(sims[n].ansatz.u(sims[n].ansatz.t_f)) - u) for n, u in expected.items()}
    report(5, max(errs.values()) <= 1e-10,
           "u(t_f) errors " + ", ".join(f"{n} {e:.1e}" for n, e in errs.items()) + " (<= 1e-10 rad)")


def test_ac06_invariant_suite(sims, params):
    drift = dist = gamma = defect = 0.0
    for sim in sims.values():
        a, traj = sim.ansatz, sim.trajectory
        w = mode_weights(a, traj)
        drift = max(drift, float(np.max(np.abs(w - w[0]))))
        oracle = reconstruct_lr(a, mode_coefficients(a, a.spec.initial_state()), traj.times)
        dist = max(dist, float(np.max(phase_aligned_distance(traj.states, oracle))))
        gp, gm = lr_phases(a, traj.times)
        _, ph, _, _ = a.angles(traj.times)
        gamma = max(gamma, float(np.max(np.abs(gm - gp - (ph - ph[0]) - a.u(traj.times)))))
        for t in np.linspace(0.0, a.t_f, 100):
            th, phi, dth, dph = a.angles(t)
            aL, aR = a.gauge(t)
            H = hamiltonian_at(params, float(aL), float(aR))
            inv = InvariantSample(float(th), float(phi), 1.0, params.g)
            defect = max(defect, invariance_defect(H, inv, float(dth), float(dph)))
    ok = drift <= 1e-6 and defect <= 1e-10 and gamma <= 5e-8 and dist <= 1e-6
    report(6, ok, f"mode-weight drift {drift:.1e} (<=1e-6), invariance defect {defect:.1e} meV/ns (<=1e-10), "
                  f"gamma identity {gamma:.1e} rad (<=5e-8), oracle distance {dist:.1e} (<=1e-6)")


def test_ac07_constraint_suite(params):
    rng = np.random.default_rng(7)
    specs = list(EXAMPLES.values())
    for _ in range(200):
        specs.append(DesignSpec(Mode(rng.choice(["to_target", "from_initial"])),
                                BlochAngles(float(rng.uniform(0, PI)), float(rng.uniform(-1.5, 1.5))),
                                float(rng.uniform(0.05, PI - 0.05)), Branch(rng.choice(["plus", "minus"])),
                                int(rng.choice([-2, -1, 1, 2]))))
    accepted = 0
    worst_gauge = worst_rate = 0.0
    exact_zero = True
    for spec in specs:
        try:
            a = design(spec, params)
        except ValueError:
            continue
        accepted += 1
        _, _, dth, dph = a.angles(0.0)
        aL, aR = a.gauge(0.0)
        exact_zero &= dth == 0.0
        worst_gauge = max(worst_gauge, abs(float(aL)), abs(float(aR)))
        worst_rate = max(worst_rate, abs(float(dph) - params.detuning_rate))
    ok = accepted >= 3 and exact_zero and worst_gauge <= 1e-10 and worst_rate <= 1e-10
    report(7, ok, f"{accepted} accepted designs: max |a(0)| = {worst_gauge:.1e} meV (<=1e-10), "
                  f"dtheta_a(0) exactly 0: {exact_zero}, max |dphi_a(0) - (J+Delta)/hbar| = {worst_rate:.1e} (<=1e-10)")


def test_ac08_convergence(params):
    errs = [1.0 - simulate(EX1, params, n).trajectory.populations[-1, 1] for n in (2000, 4000, 8000)]
    orders = [math.log2(errs[i] / errs[i + 1]) for i in range(2)]
    report(8, min(orders) >= 4.0, "1-P2 at 2000/4000/8000 steps: " + ", ".join(f"{e:.2e}" for e in errs)
           + f"; observed orders {orders[0]:.2f}, {orders[1]:.2f} (>= 4)")


def test_ac09_sweep(params):
    t0 = time.perf_counter()
    res = sweep_theta0(EX1, params, (0.1 * PI, 0.9 * PI), 33)
    elapsed = time.perf_counter() - t0
    feasible = [p for p in res.grid if p.feasible]
    all_pass = all(p.fidelity >= 0.999 for p in feasible)
    finite = all(math.isfinite(p.e_max) for p in res.grid)
    interior = res.best.theta_a0 not in (res.grid[0].theta_a0, res.grid[-1].theta_a0)
    ok = len(feasible) == 33 and all_pass and finite and interior and elapsed < 60
    report(9, ok, f"sweep: {len(feasible)}/33 feasible, finite {finite}, min e_max {res.best.e_max:.1f} mV/cm "
                  f"at theta_a0 = {res.best.theta_a0 / PI:.4f} pi (interior {interior}), {elapsed:.2f} s (< 60 s)")


def test_ac10_cli_determinism(tmp_path):
    outs = []
    for name in ("a", "b"):
        code = run_command(["simulate", "--config", str(CONFIGS / "example1.cfg"), "--out", str(tmp_path / name)],
                           io.StringIO())
        assert code == 0
        outs.append((tmp_path / name / "trajectory.csv").read_bytes())
    identical = outs[0] == outs[1]
    rng = np.random.default_rng(10)
    trips = sum(parse_config(format_config(c)) == c for c in (random_config(rng) for _ in range(100)))
    report(10, identical and trips == 100,
           f"simulate CSVs byte-identical: {identical}; config round-trip {trips}/100")
