"""Two-level singlet/triplet model, unit system and invariant algebra.

Units: energies in meV, times in ns, lengths in cm, rates in rad/ns and
electric fields in mV/cm.  Basis ordering is ``|1> = |0,0>`` (singlet)
and ``|2> = |1,1>`` (lowest triplet).

The drive enters through the scaled gauge functions
``a_L, a_R = 2 beta (e/c) A^x_{L,R}`` expressed in meV, so that no
electromagnetic constants appear in the Hamiltonian.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

HBAR = 6.582119569e-4  # meV ns
MU_B = 5.7883818060e-2  # meV / T

SQRT2 = math.sqrt(2.0)


def delta_from_zeeman(g: float, B: float) -> float:
    """Zeeman energy ``g * mu_B * B`` in meV."""
    return g * MU_B * B


@dataclass(frozen=True)
class DeviceParams:
    """Physical constants of the double dot.

    Defaults reproduce the first worked example: ``J = 0.1`` meV,
    ``g = -0.44``, ``B = 3.67`` T, ``hbar*beta = 0.25e-6`` meV cm,
    ``alpha = beta / 2`` and ``t_f = 0.4`` ns.
    """

    J: float = 0.1
    g: float = -0.44
    B: float = 3.67
    hbar_beta: float = 0.25e-6
    alpha_over_beta: float = 0.5
    t_f: float = 0.4

    def __post_init__(self):
        if not self.J > 0:
            raise ParameterError(f"J must be positive, got {self.J!r}")
        if not self.t_f > 0:
            raise ParameterError(f"t_f must be positive, got {self.t_f!r}")
        if self.hbar_beta == 0:
            raise ParameterError("hbar_beta must be nonzero")
        if self.alpha_over_beta == 0:
            raise ParameterError("alpha_over_beta must be nonzero")
        if not abs(self.J + self.delta) < self.J:
            raise ParameterError(
                f"|J + Delta| = {abs(self.J + self.delta):.6g} meV is not below "
                f"J = {self.J:.6g} meV; the singlet/lowest-triplet pair is not "
                "isolated for these g, B")

    @property
    def delta(self) -> float:
        return delta_from_zeeman(self.g, self.B)

    @property
    def detuning(self) -> float:
        """``J + Delta`` in meV."""
        return self.J + self.delta

    @property
    def detuning_rate(self) -> float:
        """``(J + Delta) / hbar`` in rad/ns; the forced value of the initial azimuth rate."""
        return (self.J + self.delta) / HBAR

    @property
    def sec_coupling(self) -> float:
        """``beta / (sqrt(2) alpha)``, weight of the L/R antisymmetric gauge term."""
        return 1.0 / (SQRT2 * self.alpha_over_beta)


@dataclass(frozen=True)
class BlochAngles:
    theta: float
    phi: float = 0.0

    def __post_init__(self):
        if not -1e-12 <= self.theta <= math.pi + 1e-12:
            raise ValueError(f"polar angle {self.theta!r} outside [0, pi]")

    def state(self) -> "SpinState":
        return SpinState(math.cos(self.theta / 2) * complex(math.cos(self.phi), math.sin(self.phi)),
                         complex(math.sin(self.theta / 2)))


@dataclass(frozen=True)
class SpinState:
    c1: complex
    c2: complex

    def __post_init__(self):
        norm = abs(self.c1) ** 2 + abs(self.c2) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise ValueError(f"state is not normalized (|c1|^2 + |c2|^2 = {norm!r})")

    @classmethod
    def from_vector(cls, vec, normalize: bool = False) -> "SpinState":
        v = np.asarray(vec, dtype=complex)
        if normalize:
            v = v / np.linalg.norm(v)
        return cls(complex(v[0]), complex(v[1]))

    def vector(self) -> np.ndarray:
        return np.array([self.c1, self.c2], dtype=complex)

    @property
    def populations(self) -> tuple[float, float]:
        return abs(self.c1) ** 2, abs(self.c2) ** 2

    def bloch(self) -> BlochAngles:
        """Bloch angles with ``cos(theta) = P1 - P2`` and ``phi = arg c1 - arg c2``."""
        theta = 2.0 * math.atan2(abs(self.c2), abs(self.c1))
        phi = np.angle(self.c1) - np.angle(self.c2)
        return BlochAngles(theta, float(phi))


@dataclass(frozen=True)
class HamiltonianSample:
    """Rates of ``H = (hbar/2) [[Z1, X + iY], [X - iY, Z2]]``, all in rad/ns."""

    X: float
    Y: float
    Z1: float
    Z2: float

    def matrix(self) -> np.ndarray:
        """Hamiltonian in meV."""
        off = complex(self.X, self.Y)
        return 0.5 * HBAR * np.array([[self.Z1, off], [off.conjugate(), self.Z2]])


@dataclass(frozen=True)
class InvariantSample:
    """Invariant ``I(t)`` at one instant; ``g`` and ``B_c`` only set its eigenvalue scale."""

    theta_a: float
    phi_a: float
    B_c: float = 1.0
    g: float = -0.44

    @property
    def eigenvalue(self) -> float:
        return 0.5 * self.g * MU_B * self.B_c

    def matrix(self) -> np.ndarray:
        """Invariant in meV, eigenvalues ``+-g mu_B B_c / 2``."""
        scale = self.eigenvalue
        ct, st = math.cos(self.theta_a), math.sin(self.theta_a)
        e = complex(math.cos(self.phi_a), math.sin(self.phi_a))
        return scale * np.array([[ct, st * e], [st * e.conjugate(), -ct]])


def hamiltonian_at(params: DeviceParams, a_L: float, a_R: float) -> HamiltonianSample:
    """Effective Hamiltonian for gauge values ``a_L, a_R`` (meV), with ``A^y = 0``."""
    Y = -params.alpha_over_beta * (a_L - a_R) / (SQRT2 * HBAR)
    Z1 = -1.5 * params.J / HBAR
    Z2 = (0.5 * params.J + 2.0 * params.delta - (a_L + a_R)) / HBAR
    return HamiltonianSample(0.0, Y, Z1, Z2)


def hamiltonian_rates(params: DeviceParams, a_L, a_R):
    """Array form of :func:`hamiltonian_at`; returns ``(Y, Z1, Z2)`` arrays (``X = 0``)."""
    a_L = np.asarray(a_L, dtype=float)
    a_R = np.asarray(a_R, dtype=float)
    Y = -params.alpha_over_beta * (a_L - a_R) / (SQRT2 * HBAR)
    Z1 = np.full_like(Y, -1.5 * params.J / HBAR)
    Z2 = (0.5 * params.J + 2.0 * params.delta - (a_L + a_R)) / HBAR
    return Y, Z1, Z2


def hamiltonian_from_vector_potential(params: DeviceParams, k_L: float, k_R: float) -> HamiltonianSample:
    """Same Hamiltonian written with ``k = (e/c) A^x / hbar`` in 1/cm.

    Uses ``alpha = (alpha/beta) (hbar beta) / hbar`` directly instead of the
    scaled gauge, so it is an independent path to :func:`hamiltonian_at`
    via ``a = 2 (hbar beta) k``.
    """
    alpha = params.alpha_over_beta * params.hbar_beta / HBAR  # cm/ns
    beta = params.hbar_beta / HBAR
    Y = -SQRT2 * alpha * (k_L - k_R)
    Z1 = -1.5 * params.J / HBAR
    Z2 = (0.5 * params.J + 2.0 * params.delta) / HBAR - 2.0 * beta * (k_L + k_R)
    return HamiltonianSample(0.0, Y, Z1, Z2)


def invariant_eigenstates(theta_a: float, phi_a: float) -> tuple[SpinState, SpinState]:
    c, s = math.cos(theta_a / 2), math.sin(theta_a / 2)
    e = complex(math.cos(phi_a), math.sin(phi_a))
    return SpinState(c * e, complex(s)), SpinState(complex(s), -c * e.conjugate())


def invariant_eigenvectors(theta_a, phi_a) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized eigenstates; returns two ``(..., 2)`` complex arrays."""
    theta_a = np.asarray(theta_a, dtype=float)
    phi_a = np.asarray(phi_a, dtype=float)
    c, s = np.cos(theta_a / 2), np.sin(theta_a / 2)
    e = np.exp(1j * phi_a)
    plus = np.stack([c * e, s + 0j], axis=-1)
    minus = np.stack([s + 0j, -c * np.conj(e)], axis=-1)
    return plus, minus


def invariance_defect(H: HamiltonianSample, inv: InvariantSample, dtheta_a: float, dphi_a: float) -> float:
    """Largest element magnitude of ``dI/dt + (i/hbar)[H, I]`` in meV/ns."""
    I = inv.matrix()
    scale = inv.eigenvalue
    ct, st = math.cos(inv.theta_a), math.sin(inv.theta_a)
    e = complex(math.cos(inv.phi_a), math.sin(inv.phi_a))
    d_off = scale * (ct * dtheta_a + 1j * st * dphi_a) * e
    dI = np.array([[-scale * st * dtheta_a, d_off],
                   [d_off.conjugate(), scale * st * dtheta_a]])
    Hm = H.matrix()
    total = dI + (1j / HBAR) * (Hm @ I - I @ Hm)
    return float(np.max(np.abs(total)))


def angle_form_hamiltonian(theta_a, phi_a, dtheta_a, dphi_a, dgamma_plus, dgamma_minus):
    """Hamiltonian rates reconstructed from auxiliary angles and phase rates.

    Works elementwise on arrays; returns ``(X, Y, Z1, Z2)`` in rad/ns.
    """
    D = dgamma_minus - dgamma_plus - dphi_a
    S = dgamma_minus + dgamma_plus
    X = D * np.sin(theta_a) * np.cos(phi_a) + dtheta_a * np.sin(phi_a)
    Y = D * np.sin(theta_a) * np.sin(phi_a) - dtheta_a * np.cos(phi_a)
    Z1 = -S - dphi_a + D * np.cos(theta_a)
    Z2 = -S + dphi_a - D * np.cos(theta_a)
    return X, Y, Z1, Z2
