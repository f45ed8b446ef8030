"""CSV writers.  Floats are written with ``repr`` so files round-trip exactly."""
from __future__ import annotations

import os

import numpy as np

TRAJECTORY_HEADER = ("t_ns,theta_a_rad,phi_a_rad,theta_p_rad,phi_p_rad,a_L_meV,a_R_meV,"
                     "E_L_mV_per_cm,E_R_mV_per_cm,re_psi1,im_psi1,re_psi2,im_psi2,P1,P2")
PULSE_HEADER = "t_ns,theta_a_rad,phi_a_rad,a_L_meV,a_R_meV,E_L_mV_per_cm,E_R_mV_per_cm"
SWEEP_HEADER = "theta_a0_rad,e_max_mV_per_cm,feasible"


def _write(path, header: str, columns) -> None:
    rows = np.column_stack(columns).tolist() if len(columns[0]) else []
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(map(repr, row)) + "\n")


def emit_csv(trajectory, pulse, ansatz, path) -> None:
    """Per-time-step record of design angles, drive, state and populations."""
    times = np.asarray(trajectory.times, dtype=float)
    if times.size == 0:
        _write(path, TRAJECTORY_HEADER, [times])
        return
    if pulse.times.shape != times.shape or not np.array_equal(pulse.times, times):
        raise ValueError("pulse and trajectory grids differ")
    th_a, ph_a, _, _ = ansatz.angles(times)
    th_p, ph_p = trajectory.bloch_angles()
    psi = trajectory.states
    pops = trajectory.populations
    _write(path, TRAJECTORY_HEADER,
           [times, th_a, ph_a, th_p, ph_p, pulse.a_L, pulse.a_R, pulse.e_L, pulse.e_R,
            psi[:, 0].real, psi[:, 0].imag, psi[:, 1].real, psi[:, 1].imag, pops[:, 0], pops[:, 1]])


def emit_pulse_csv(pulse, ansatz, path) -> None:
    th_a, ph_a, _, _ = ansatz.angles(pulse.times)
    _write(path, PULSE_HEADER, [pulse.times, th_a, ph_a, pulse.a_L, pulse.a_R, pulse.e_L, pulse.e_R])


def emit_sweep_csv(result, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(SWEEP_HEADER + "\n")
        for p in result.grid:
            fh.write(f"{float(p.theta_a0)!r},{float(p.e_max)!r},{'true' if p.feasible else 'false'}\n")


def ensure_dir(path) -> None:
    os.makedirs(path, exist_ok=True)
