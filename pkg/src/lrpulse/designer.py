"""Inverse engineering of the gate-electrode drive from invariant angles.

The auxiliary polar angle follows ``theta_a(t) = a0 + a1 t + a2 t^2`` and
the azimuth ``tan phi_a(t) = g(t) sin theta_a(t)`` with a quadratic
``g(t) = b0 + b1 t + b2 t^2``.  With that shape every potentially singular
factor (``cot theta_a tan phi_a``, ``tan(theta_a/2) tan phi_a`` ...)
collapses to a polynomial times a bounded trigonometric factor, so all
quantities below are evaluated in those regularized forms.
"""
from __future__ import annotations

import dataclasses
import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import AnsatzError, ConstraintError, DesignError, SingularityError, UnsupportedBranchError
from .model import HBAR, BlochAngles, DeviceParams, SpinState

DEFAULT_STEPS = 4000
MIN_STEPS = 1000
GAUGE_START_TOL = 1e-8  # meV
STATIC_SWING_TOL = 1e-12  # rad


class Mode(enum.Enum):
    TO_TARGET = "to_target"  # arbitrary state -> |2>
    FROM_INITIAL = "from_initial"  # |1> -> arbitrary state


class Branch(enum.Enum):
    PLUS = "plus"  # cos u(t_f) = +1
    MINUS = "minus"  # cos u(t_f) = -1


@dataclass(frozen=True)
class DesignSpec:
    """A transfer task.

    ``boundary`` is the initial Bloch point for ``TO_TARGET`` and the final
    one for ``FROM_INITIAL``.
    """

    mode: Mode = Mode.TO_TARGET
    boundary: BlochAngles = field(default_factory=lambda: BlochAngles(0.0, 0.0))
    theta_a0: float = math.pi / 3
    branch: Branch = Branch.PLUS
    k: int = 1

    def __post_init__(self):
        if abs(math.sin(self.theta_a0)) < 1e-12:
            raise DesignError(f"theta_a0 = {self.theta_a0!r} is a multiple of pi (sin theta_a0 must be nonzero)")

    def initial_state(self) -> SpinState:
        if self.mode is Mode.TO_TARGET:
            return self.boundary.state()
        return SpinState(1.0 + 0j, 0j)

    def target_state(self) -> SpinState:
        if self.mode is Mode.TO_TARGET:
            return SpinState(0j, 1.0 + 0j)
        return self.boundary.state()

    def replace(self, **changes) -> "DesignSpec":
        return dataclasses.replace(self, **changes)


def principal_anchor(angles: BlochAngles) -> tuple[float, float]:
    """Rewrite a Bloch point so its azimuth lies in ``(-pi/2, pi/2)``.

    Shifting the azimuth by pi is the same physical ray as flipping the sign
    of the polar angle, which keeps the anchor reachable by the principal
    branch of ``phi_a = atan(g sin theta_a)``.
    """
    n = math.floor(angles.phi / math.pi + 0.5)
    phi = angles.phi - n * math.pi
    theta = -angles.theta if n % 2 else angles.theta
    if abs(math.cos(phi)) < 1e-12:
        raise AnsatzError("boundary azimuth is an odd multiple of pi/2; the azimuth ansatz cannot reach it")
    return theta, phi


def transfer_mixing_angle(spec: DesignSpec) -> float:
    """``eta = theta_a(0) - theta_p(0)`` for TO_TARGET specs."""
    theta_p, _ = principal_anchor(spec.boundary)
    return spec.theta_a0 - theta_p


def is_single_mode(spec: DesignSpec) -> bool:
    return spec.mode is Mode.TO_TARGET and abs(math.sin(transfer_mixing_angle(spec))) < 1e-12


def target_theta_af(spec: DesignSpec) -> float:
    theta_p, _ = principal_anchor(spec.boundary)
    if spec.mode is Mode.TO_TARGET:
        if spec.branch is Branch.PLUS:
            return spec.theta_a0 - theta_p + math.pi
        return -spec.theta_a0 + theta_p + math.pi
    if spec.branch is Branch.MINUS:
        raise UnsupportedBranchError("unsupported branch: cos u(t_f) = -1 is not available for from_initial")
    return theta_p + spec.theta_a0


def u_target(spec: DesignSpec) -> float:
    if spec.branch is Branch.PLUS:
        return 2.0 * spec.k * math.pi
    return (2.0 * spec.k - 1.0) * math.pi


def solve_theta_coeffs(theta_a0: float, theta_a_tf: float, t_f: float) -> tuple[float, float, float]:
    if not t_f > 0:
        raise ValueError("t_f must be positive")
    swing = theta_a_tf - theta_a0
    if abs(swing) <= STATIC_SWING_TOL * max(1.0, abs(theta_a0)):
        swing = 0.0  # roundoff from the pi shifts; a static path, not a tiny one
    return theta_a0, 0.0, swing / t_f ** 2


def _u_moments(t_f: float) -> np.ndarray:
    # u(t_f) = -2 a2 * (b . moments)
    return np.array([t_f ** 2 / 2, t_f ** 3 / 3, t_f ** 4 / 4])


def solve_phi_coeffs(a, spec: DesignSpec, params: DeviceParams, *, u_goal: float | None = None,
                     initial_phi_rate: float | None = None) -> tuple[float, float, float]:
    """Coefficients of ``g(t)`` fixing the azimuth anchor, its initial rate and ``u(t_f)``.

    ``u_goal`` and ``initial_phi_rate`` default to the branch/winding value and
    ``(J + Delta) / hbar``; overriding them is meant for diagnostics.
    """
    a0, a1, a2 = a
    if a1 != 0.0:
        raise AnsatzError("theta_a must start at rest (a1 = 0)")
    t_f = params.t_f
    s0 = math.sin(a0)
    if abs(s0) < 1e-12:
        raise AnsatzError("sin theta_a0 = 0; choose a different theta_a0")
    w = params.detuning_rate if initial_phi_rate is None else initial_phi_rate
    single = is_single_mode(spec)
    if u_goal is None:
        u_goal = u_target(spec)
    mom = _u_moments(t_f)

    if a2 == 0.0 and not single and u_goal != 0.0:
        raise AnsatzError(f"unsolvable ansatz: theta_a is static so u(t_f) = 0 cannot reach {u_goal:.6g}; "
                          "choose a different theta_a0 or k")
    # the u condition is dropped when theta_a is static or only one mode is populated
    free_u = a2 == 0.0 or single

    if spec.mode is Mode.TO_TARGET:
        _, phi_p = principal_anchor(spec.boundary)
        b0 = math.tan(phi_p) / s0
        b1 = w * (1.0 + (b0 * s0) ** 2) / s0
        if free_u:
            b2 = 0.0
        else:
            rhs = -u_goal / (2.0 * a2)
            b2 = float((rhs - mom[0] * b0 - mom[1] * b1) / mom[2])
        return b0, b1, b2

    # FROM_INITIAL: anchor g(t_f) sin theta_a(t_f) = tan phi_p(t_f), the u condition,
    # and b1 s0 = w (1 + b0^2 s0^2).  The first two are linear; eliminate b1, b2.
    theta_f = a0 + a2 * t_f ** 2
    sf = math.sin(theta_f)
    if abs(sf) < 1e-12:
        raise AnsatzError("unsolvable ansatz: sin theta_a(t_f) = 0 leaves the final azimuth unanchored; "
                          "choose a different theta_a0")
    _, phi_pf = principal_anchor(spec.boundary)
    anchor = math.tan(phi_pf) / sf
    rows = [[t_f, t_f ** 2]]
    rhs_const = [anchor]
    rhs_b0 = [-1.0]
    if free_u:
        rows.append([0.0, 1.0])
        rhs_const.append(0.0)
        rhs_b0.append(0.0)
    else:
        rows.append([mom[1], mom[2]])
        rhs_const.append(-u_goal / (2.0 * a2))
        rhs_b0.append(-mom[0])
    M = np.array(rows)
    try:
        p = np.linalg.solve(M, rhs_const)
        q = np.linalg.solve(M, rhs_b0)
    except np.linalg.LinAlgError as exc:
        raise AnsatzError("unsolvable ansatz: degenerate boundary system; try another theta_a0 or k") from exc
    # s0 (p1 + q1 b0) = w (1 + s0^2 b0^2)
    A, B, C = w * s0 ** 2, -s0 * q[0], w - s0 * p[0]
    if A == 0.0:
        if B == 0.0:
            raise AnsatzError("unsolvable ansatz: initial-rate condition is degenerate")
        b0 = -C / B
    else:
        disc = B * B - 4.0 * A * C
        if disc < 0:
            raise AnsatzError("unsolvable ansatz: no real azimuth coefficients satisfy the initial-rate "
                              "constraint; choose a different theta_a0 or k")
        sq = math.sqrt(disc)
        # numerically stable roots; keep the one closest to zero
        qq = -0.5 * (B + math.copysign(sq, B))
        roots = [qq / A] + ([C / qq] if qq != 0.0 else [])
        b0 = min(roots, key=abs)
    b1, b2 = p + q * b0
    return float(b0), float(b1), float(b2)


@dataclass(frozen=True)
class AnsatzSolution:
    a: tuple[float, float, float]
    b: tuple[float, float, float]
    u_target: float
    spec: DesignSpec
    params: DeviceParams

    @property
    def t_f(self) -> float:
        return self.params.t_f

    def theta(self, t):
        a0, a1, a2 = self.a
        return a0 + t * (a1 + a2 * t)

    def dtheta(self, t):
        return self.a[1] + 2.0 * self.a[2] * t

    def gfun(self, t):
        b0, b1, b2 = self.b
        return b0 + t * (b1 + b2 * t)

    def dgfun(self, t):
        return self.b[1] + 2.0 * self.b[2] * t

    def angles(self, t):
        """``(theta_a, phi_a, dtheta_a, dphi_a)`` at ``t``."""
        t = np.asarray(t, dtype=float)
        th, dth = self.theta(t), self.dtheta(t)
        G, dG = self.gfun(t), self.dgfun(t)
        s, c = np.sin(th), np.cos(th)
        q = G * s
        dq = dG * s + G * c * dth
        return th, np.arctan(q), dth, dq / (1.0 + q * q)

    def u(self, t):
        b0, b1, b2 = self.b
        a1, a2 = self.a[1], self.a[2]
        t = np.asarray(t, dtype=float)
        # -int (a1 + 2 a2 tau) (b0 + b1 tau + b2 tau^2) dtau
        return -(a1 * (b0 * t + b1 * t ** 2 / 2 + b2 * t ** 3 / 3)
                 + 2.0 * a2 * (b0 * t ** 2 / 2 + b1 * t ** 3 / 3 + b2 * t ** 4 / 4))

    def _gauge_parts(self, t):
        t = np.asarray(t, dtype=float)
        a2 = self.a[2]
        th, dth, ddth = self.theta(t), self.dtheta(t), 2.0 * a2
        G, dG, ddG = self.gfun(t), self.dgfun(t), 2.0 * self.b[2]
        s, c = np.sin(th), np.cos(th)
        q = G * s
        dq = dG * s + G * c * dth
        ddq = ddG * s + 2.0 * dG * c * dth - G * s * dth ** 2 + G * c * ddth
        r = 1.0 + q * q
        dphi = dq / r
        ddphi = ddq / r - 2.0 * q * dq * dq / (r * r)
        m = dth * G * c  # dtheta * cot(theta) * tan(phi), regularized
        dm = ddth * G * c + dth * dG * c - dth ** 2 * G * s
        sec = np.sqrt(r)
        dsec = q * dq / sec
        sym = self.params.detuning_rate - dphi - m
        dsym = -ddphi - dm
        kap = self.params.sec_coupling
        anti = kap * dth * sec
        danti = kap * (ddth * sec + dth * dsec)
        return sym, anti, dsym, danti

    def gauge(self, t):
        """Scaled gauge functions ``(a_L, a_R)`` in meV."""
        sym, anti, _, _ = self._gauge_parts(t)
        return HBAR * (sym + anti), HBAR * (sym - anti)

    def gauge_rate(self, t):
        """Analytic ``(d a_L/dt, d a_R/dt)`` in meV/ns."""
        _, _, dsym, danti = self._gauge_parts(t)
        return HBAR * (dsym + danti), HBAR * (dsym - danti)

    def field(self, t):
        """Electric fields ``(E_L, E_R)`` in mV/cm."""
        dL, dR = self.gauge_rate(t)
        scale = -HBAR / (2.0 * self.params.hbar_beta)
        return scale * dL, scale * dR


def design(spec: DesignSpec, params: DeviceParams, *, u_goal: float | None = None) -> AnsatzSolution:
    """Solve both polynomial ansatze for ``spec``."""
    theta_f = target_theta_af(spec)
    a = solve_theta_coeffs(spec.theta_a0, theta_f, params.t_f)
    single = is_single_mode(spec)
    goal = u_target(spec) if u_goal is None else u_goal
    b = solve_phi_coeffs(a, spec, params, u_goal=goal)
    sol = AnsatzSolution(a, b, goal, spec, params)
    if single or a[2] == 0.0:
        sol = AnsatzSolution(a, b, float(sol.u(params.t_f)), spec, params)
    if not np.all(np.isfinite(b)):
        raise AnsatzError("unsolvable ansatz: non-finite azimuth coefficients")
    if abs(sol.u(params.t_f) - sol.u_target) > 1e-12 * max(1.0, abs(sol.u_target)):
        raise AnsatzError("u(t_f) misses its target; the boundary system is ill-conditioned")
    _, _, _, dphi0 = sol.angles(0.0)
    if abs(dphi0 - params.detuning_rate) > 1e-10 * max(1.0, abs(params.detuning_rate)):
        raise AnsatzError("initial azimuth rate constraint not met")
    return sol


def eval_angles(ansatz: AnsatzSolution, t):
    return ansatz.angles(t)


def u_of_t(ansatz: AnsatzSolution, t):
    return ansatz.u(t)


def lr_phase_rates(ansatz: AnsatzSolution, t):
    """``(dgamma_+, dgamma_-)`` in rad/ns, using the regularized half-angle forms."""
    th, _, dth, dphi = ansatz.angles(t)
    G = ansatz.gfun(np.asarray(t, dtype=float))
    base = 0.75 * ansatz.params.J / HBAR
    # tan(th/2) sin(th) = 2 sin^2(th/2), cot(th/2) sin(th) = 2 cos^2(th/2)
    plus = base + dth * G * np.sin(th / 2) ** 2 - dphi
    minus = base - dth * G * np.cos(th / 2) ** 2
    return plus, minus


def lr_phases(ansatz: AnsatzSolution, t, steps: int | None = None):
    """Lewis-Riesenfeld phases ``(gamma_+, gamma_-)`` with ``gamma(0) = 0``.

    For an array ``t`` (ascending, non-negative) the phases are accumulated
    interval by interval with Simpson's rule on that grid.  A scalar ``t``
    is integrated on a uniform grid of ``steps`` intervals (default scales
    with ``DEFAULT_STEPS`` over ``t_f``).  The constant and ``-dphi_a``
    contributions are integrated exactly.
    """
    scalar = np.ndim(t) == 0
    if scalar:
        tt = float(t)
        if steps is None:
            steps = max(2, math.ceil(DEFAULT_STEPS * tt / ansatz.t_f))
        grid = np.linspace(0.0, tt, steps + 1)
    else:
        grid = np.asarray(t, dtype=float)
        if grid.size == 0:
            return np.empty(0), np.empty(0)
        if np.any(np.diff(grid) < 0) or grid[0] < 0:
            raise ValueError("times must be ascending and non-negative")
    full = np.concatenate(([0.0], grid)) if grid[0] > 0 else grid

    def integrand(x):
        th = ansatz.theta(x)
        return ansatz.dtheta(x) * ansatz.gfun(x), np.sin(th / 2) ** 2

    f_end, s_end = integrand(full)
    f_mid, s_mid = integrand(0.5 * (full[1:] + full[:-1]))
    if not (np.all(np.isfinite(f_end)) and np.all(np.isfinite(f_mid))):
        raise SingularityError("LR phase integrand is not finite on the integration path")
    h = np.diff(full) / 6.0
    # dgamma_+ piece: f sin^2, dgamma_- piece: -f cos^2 = -f + f sin^2
    fs_end, fs_mid = f_end * s_end, f_mid * s_mid
    int_fs = np.concatenate(([0.0], np.cumsum(h * (fs_end[:-1] + 4 * fs_mid + fs_end[1:]))))
    int_f = np.concatenate(([0.0], np.cumsum(h * (f_end[:-1] + 4 * f_mid + f_end[1:]))))
    _, phi, _, _ = ansatz.angles(full)
    base = 0.75 * ansatz.params.J / HBAR * full
    gp = base + int_fs - (phi - phi[0])
    gm = base - (int_f - int_fs)
    if full.size != grid.size:
        gp, gm = gp[1:], gm[1:]
    if scalar:
        return float(gp[-1]), float(gm[-1])
    return gp, gm


class ZeroDrive:
    """Drive with identically vanishing gauge functions."""

    def gauge(self, t):
        z = np.zeros_like(np.asarray(t, dtype=float))
        return z, z.copy()

    def field(self, t):
        return self.gauge(t)


@dataclass(frozen=True, eq=False)
class Pulse:
    """Gridded drive: gauge functions (meV) and fields (mV/cm) on ``times`` (ns).

    ``drive`` evaluates the same functions analytically off the grid.
    """

    times: np.ndarray
    a_L: np.ndarray
    a_R: np.ndarray
    e_L: np.ndarray
    e_R: np.ndarray
    drive: object

    @property
    def steps(self) -> int:
        return len(self.times) - 1

    @property
    def t_f(self) -> float:
        return float(self.times[-1])

    @property
    def dt(self) -> float:
        return self.t_f / self.steps

    @classmethod
    def zero(cls, t_f: float, steps: int = DEFAULT_STEPS) -> "Pulse":
        times = np.linspace(0.0, t_f, steps + 1)
        z = np.zeros_like(times)
        return cls(times, z, z.copy(), z.copy(), z.copy(), ZeroDrive())


def synthesize_pulse(ansatz: AnsatzSolution, steps: int = DEFAULT_STEPS) -> Pulse:
    if steps < MIN_STEPS:
        raise ValueError(f"pulse grid needs at least {MIN_STEPS} intervals, got {steps}")
    times = np.linspace(0.0, ansatz.t_f, steps + 1)
    a_L, a_R = ansatz.gauge(times)
    start = max(abs(a_L[0]), abs(a_R[0]))
    if start > GAUGE_START_TOL:
        raise ConstraintError(f"gauge does not vanish at t = 0 (|a| = {start:.3g} meV); "
                              "boundary data and ansatz are inconsistent")
    e_L, e_R = ansatz.field(times)
    return Pulse(times, a_L, a_R, e_L, e_R, ansatz)
