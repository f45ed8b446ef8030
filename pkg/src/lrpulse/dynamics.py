"""Schroedinger-equation verification of designed pulses.

``evolve`` integrates the two-level equation with fixed-step RK4; the
Lewis-Riesenfeld mode superposition in ``reconstruct_lr`` is an
independent route to the same state and serves as its oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .designer import DEFAULT_STEPS, AnsatzSolution, DesignSpec, Pulse, design, lr_phases, synthesize_pulse
from .errors import NormDriftError
from .model import DeviceParams, SpinState, hamiltonian_rates, invariant_eigenvectors

NORM_DRIFT_LIMIT = 1e-6
HADAMARD_PLUS = np.array([1.0, 1.0], dtype=complex) / math.sqrt(2.0)
HADAMARD_MINUS = np.array([1.0, -1.0], dtype=complex) / math.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # (n, 2) complex amplitudes on |1>, |2>

    @property
    def populations(self) -> np.ndarray:
        return np.abs(self.states) ** 2

    @property
    def final(self) -> SpinState:
        return self.state(-1)

    def state(self, i: int) -> SpinState:
        return SpinState.from_vector(self.states[i], normalize=True)

    def norm_drift(self) -> float:
        return float(np.max(np.abs(np.linalg.norm(self.states, axis=1) - 1.0)))

    def bloch_angles(self) -> tuple[np.ndarray, np.ndarray]:
        """Physical Bloch angles per grid point, azimuth unwrapped in time."""
        c1, c2 = self.states[:, 0], self.states[:, 1]
        theta = 2.0 * np.arctan2(np.abs(c2), np.abs(c1))
        phi = np.unwrap(np.angle(c1) - np.angle(c2))
        return theta, phi


@dataclass(frozen=True)
class ModeCoefficients:
    c_plus: complex
    c_minus: complex

    def __post_init__(self):
        w = abs(self.c_plus) ** 2 + abs(self.c_minus) ** 2
        if abs(w - 1.0) > 1e-12:
            raise ValueError(f"mode weights do not sum to one ({w!r})")


def evolve(params: DeviceParams, pulse: Pulse, psi0: SpinState) -> Trajectory:
    """RK4 on the pulse grid; the Hamiltonian is sampled analytically at every stage time."""
    n = pulse.steps
    half = np.linspace(0.0, pulse.t_f, 2 * n + 1)
    a_L, a_R = pulse.drive.gauge(half)
    Y, Z1, Z2 = hamiltonian_rates(params, a_L, a_R)
    k11 = np.ascontiguousarray(0.5 * Z1)
    k22 = np.ascontiguousarray(0.5 * Z2)
    k12 = np.ascontiguousarray(0.5j * Y)
    states = kernels.propagate(k11, k22, k12, pulse.dt, complex(psi0.c1), complex(psi0.c2))
    traj = Trajectory(np.asarray(pulse.times), states)
    with np.errstate(over="ignore", invalid="ignore"):  # a blown-up state is reported below
        drift = traj.norm_drift()
    if not drift <= NORM_DRIFT_LIMIT:
        raise NormDriftError(f"state norm drifted by {drift:.3g}; refine the time grid")
    return traj


def fidelity(state, target) -> float:
    """Phase-insensitive overlap ``|<target|state>|^2``."""
    s = state.vector() if isinstance(state, SpinState) else np.asarray(state, dtype=complex)
    t = target.vector() if isinstance(target, SpinState) else np.asarray(target, dtype=complex)
    f = abs(np.vdot(t, s)) ** 2 / (np.vdot(s, s).real * np.vdot(t, t).real)
    return float(min(f, 1.0))  # roundoff can push a perfect overlap past 1


def coefficients_from_initial(theta_a0: float, phi_a0: float, theta_p0: float, phi_p0: float) -> ModeCoefficients:
    ca, sa = math.cos(theta_a0 / 2), math.sin(theta_a0 / 2)
    cp, sp = math.cos(theta_p0 / 2), math.sin(theta_p0 / 2)
    c_plus = ca * cp * np.exp(1j * (phi_p0 - phi_a0)) + sa * sp
    c_minus = sa * cp * np.exp(1j * phi_p0) - ca * sp * np.exp(1j * phi_a0)
    return ModeCoefficients(complex(c_plus), complex(c_minus))


def mode_coefficients(ansatz: AnsatzSolution, psi0: SpinState) -> ModeCoefficients:
    """``c_pm = <chi_pm(0)|psi0>`` for an arbitrary initial state."""
    th, phi, _, _ = ansatz.angles(0.0)
    plus, minus = invariant_eigenvectors(th, phi)
    v = psi0.vector()
    cp, cm = np.vdot(plus, v), np.vdot(minus, v)
    norm = math.sqrt(abs(cp) ** 2 + abs(cm) ** 2)
    return ModeCoefficients(complex(cp / norm), complex(cm / norm))


def reconstruct_lr(ansatz: AnsatzSolution, coeffs: ModeCoefficients, t):
    """Mode superposition ``c+ e^{i g+} chi+ + c- e^{i g-} chi-``.

    Returns a :class:`SpinState` for scalar ``t`` and an ``(n, 2)`` array
    for an ascending time grid.
    """
    gp, gm = lr_phases(ansatz, t)
    th, phi, _, _ = ansatz.angles(t)
    plus, minus = invariant_eigenvectors(th, phi)
    wp = coeffs.c_plus * np.exp(1j * np.asarray(gp))
    wm = coeffs.c_minus * np.exp(1j * np.asarray(gm))
    psi = wp[..., None] * plus + wm[..., None] * minus
    if np.ndim(t) == 0:
        return SpinState.from_vector(psi, normalize=True)
    return psi / np.linalg.norm(psi, axis=-1, keepdims=True)


def mode_weights(ansatz: AnsatzSolution, traj: Trajectory) -> np.ndarray:
    """``|<chi_pm(t)|psi(t)>|`` along a trajectory, shape ``(n, 2)``."""
    th, phi, _, _ = ansatz.angles(traj.times)
    plus, minus = invariant_eigenvectors(th, phi)
    wp = np.abs(np.sum(np.conj(plus) * traj.states, axis=-1))
    wm = np.abs(np.sum(np.conj(minus) * traj.states, axis=-1))
    return np.stack([wp, wm], axis=-1)


def phase_aligned_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Row-wise ``min_phi |a - e^{i phi} b|`` for ``(n, 2)`` state arrays."""
    ov = np.sum(np.conj(b) * a, axis=-1)
    phase = np.where(np.abs(ov) > 0, ov / np.where(np.abs(ov) > 0, np.abs(ov), 1.0), 1.0)
    return np.linalg.norm(a - phase[..., None] * b, axis=-1)


def transfer_condition_residual(theta_a_tf: float, eta: float, u_tf: float) -> float:
    """Vanishes when an arbitrary state is transferred exactly onto |2>."""
    return 1.0 + math.cos(theta_a_tf) * math.cos(eta) + math.sin(theta_a_tf) * math.sin(eta) * math.cos(u_tf)


def initial_condition_residual(zeta: float, theta_a0: float, u_tf: float) -> float:
    """Vanishes when |1> is transferred exactly onto the requested final state.

    ``zeta = theta_a(t_f) - theta_p(t_f)``.
    """
    return 1.0 - math.cos(zeta) * math.cos(theta_a0) - math.sin(zeta) * math.sin(theta_a0) * math.cos(u_tf)


def gate_check_hadamard(params: DeviceParams, pulse: Pulse) -> tuple[float, float]:
    """Overlaps of ``U|1>`` with ``(|1>+|2>)/sqrt2`` and ``U|2>`` with ``(|1>-|2>)/sqrt2``."""
    up = evolve(params, pulse, SpinState(1.0 + 0j, 0j))
    down = evolve(params, pulse, SpinState(0j, 1.0 + 0j))
    return fidelity(up.states[-1], HADAMARD_PLUS), fidelity(down.states[-1], HADAMARD_MINUS)


@dataclass(frozen=True, eq=False)
class Simulation:
    ansatz: AnsatzSolution
    pulse: Pulse
    trajectory: Trajectory
    fidelity: float


def simulate(spec: DesignSpec, params: DeviceParams, steps: int = DEFAULT_STEPS) -> Simulation:
    """Design, synthesize and integrate one protocol; fidelity is against ``spec.target_state()``."""
    ansatz = design(spec, params)
    pulse = synthesize_pulse(ansatz, steps)
    traj = evolve(params, pulse, spec.initial_state())
    return Simulation(ansatz, pulse, traj, fidelity(traj.states[-1], spec.target_state()))


def lr_final_state(ansatz: AnsatzSolution, psi0: SpinState) -> np.ndarray:
    """Oracle final state from the mode superposition alone."""
    coeffs = mode_coefficients(ansatz, psi0)
    return reconstruct_lr(ansatz, coeffs, ansatz.t_f).vector()
