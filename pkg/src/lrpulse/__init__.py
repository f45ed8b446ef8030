"""Invariant-based pulse design for singlet/triplet transitions in a double quantum dot."""
from .designer import (Branch, DesignSpec, Mode, Pulse, AnsatzSolution, design, synthesize_pulse,
                       lr_phases, target_theta_af, u_of_t, eval_angles)
from .dynamics import Trajectory, evolve, simulate, gate_check_hadamard, fidelity
from .errors import (AnsatzError, ConstraintError, DesignError, LRPulseError, NormDriftError,
                     NumericalError, ParameterError, UnsupportedBranchError)
from .kernels import BACKEND
from .model import HBAR, MU_B, BlochAngles, DeviceParams, SpinState, hamiltonian_at

__all__ = [
    "AnsatzError", "AnsatzSolution", "BACKEND", "BlochAngles", "Branch", "ConstraintError", "DesignError",
    "DesignSpec", "DeviceParams", "HBAR", "LRPulseError", "MU_B", "Mode", "NormDriftError",
    "NumericalError", "ParameterError", "Pulse", "SpinState", "Trajectory", "UnsupportedBranchError",
    "design", "eval_angles", "evolve", "fidelity", "gate_check_hadamard", "hamiltonian_at",
    "lr_phases", "simulate", "synthesize_pulse", "target_theta_af", "u_of_t",
]
