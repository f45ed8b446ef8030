"""Peak-field minimization over the free initial auxiliary angle."""
from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .designer import DEFAULT_STEPS, DesignSpec, Pulse, ZeroDrive, design, synthesize_pulse
from .dynamics import evolve, fidelity
from .errors import DesignError, EmptySweepError, NumericalError
from .model import DeviceParams

FIDELITY_MIN = 0.999
REFINE_FACTOR = 10
INV_PHI = (math.sqrt(5.0) - 1.0) / 2.0


def e_max(pulse: Pulse) -> float:
    """Peak ``max(|E_L|, |E_R|)`` in mV/cm.

    The discrete maximum is polished by resampling the analytic field at
    ten times the grid density over the two intervals around it.
    """
    if isinstance(pulse.drive, ZeroDrive):
        return 0.0
    mags = np.maximum(np.abs(pulse.e_L), np.abs(pulse.e_R))
    i = int(np.argmax(mags))
    lo = pulse.times[max(i - 1, 0)]
    hi = pulse.times[min(i + 1, len(pulse.times) - 1)]
    n_fine = REFINE_FACTOR * (2 if 0 < i < len(pulse.times) - 1 else 1) + 1
    fine = np.linspace(lo, hi, n_fine)
    eL, eR = pulse.drive.field(fine)
    return float(max(mags[i], np.max(np.abs(eL)), np.max(np.abs(eR))))


@dataclass(frozen=True)
class SweepPoint:
    theta_a0: float
    e_max: float
    feasible: bool
    fidelity: float = math.nan
    reason: str = ""


@dataclass(frozen=True)
class SweepResult:
    grid: tuple[SweepPoint, ...]
    best: SweepPoint
    spec_template: DesignSpec
    params: DeviceParams
    steps: int = DEFAULT_STEPS
    fidelity_min: float = FIDELITY_MIN


def evaluate_point(spec: DesignSpec, params: DeviceParams, steps: int = DEFAULT_STEPS,
                   fidelity_min: float = FIDELITY_MIN) -> SweepPoint:
    """Design, synthesize and simulate one design; failures come back as infeasible points."""
    try:
        ansatz = design(spec, params)
        pulse = synthesize_pulse(ansatz, steps)
        traj = evolve(params, pulse, spec.initial_state())
    except (DesignError, NumericalError) as exc:
        return SweepPoint(spec.theta_a0, math.nan, False, reason=str(exc))
    fid = fidelity(traj.states[-1], spec.target_state())
    peak = e_max(pulse)
    if not math.isfinite(peak):
        return SweepPoint(spec.theta_a0, peak, False, fid, "non-finite field")
    if fid < fidelity_min:
        return SweepPoint(spec.theta_a0, peak, False, fid, f"fidelity {fid:.6f} below {fidelity_min}")
    return SweepPoint(spec.theta_a0, peak, True, fid)


def _map(fn, items, workers: int):
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))  # map keeps input order


def sweep_theta0(spec_template: DesignSpec, params: DeviceParams, theta_range: tuple[float, float], n: int,
                 steps: int = DEFAULT_STEPS, fidelity_min: float = FIDELITY_MIN, workers: int = 1) -> SweepResult:
    if n < 3:
        raise ValueError(f"sweep needs at least 3 grid points, got {n}")
    lo, hi = theta_range
    if not lo < hi:
        raise ValueError("theta range must be increasing")
    if math.floor(hi / math.pi) != math.floor(lo / math.pi) or abs(math.sin(lo)) < 1e-12:
        raise ValueError("theta range must not contain a multiple of pi")
    thetas = np.linspace(lo, hi, n)
    points = _map(lambda th: evaluate_point(spec_template.replace(theta_a0=float(th)), params, steps, fidelity_min),
                  thetas, workers)
    feasible = [p for p in points if p.feasible]
    if not feasible:
        raise EmptySweepError("no feasible design in the swept range")
    best = min(feasible, key=lambda p: p.e_max)
    return SweepResult(tuple(points), best, spec_template, params, steps, fidelity_min)


def sweep_k(spec: DesignSpec, params: DeviceParams, ks: Sequence[int], steps: int = DEFAULT_STEPS,
            fidelity_min: float = FIDELITY_MIN) -> list[tuple[int, SweepPoint]]:
    """Peak field for each winding number at fixed ``theta_a0``."""
    return [(k, evaluate_point(spec.replace(k=k), params, steps, fidelity_min)) for k in ks]


@dataclass(frozen=True)
class RefinedMinimum:
    theta_a0: float
    e_max: float
    refined: bool


def golden_section(f: Callable[[float], float], lo: float, hi: float, tol: float,
                   max_iter: int = 200) -> tuple[float, float]:
    """Minimize a unimodal ``f`` on ``[lo, hi]``; returns ``(x, f(x))`` at the final bracket midpoint.

    Ties shrink the bracket to the inner pair, so a flat function converges
    to the midpoint of the starting bracket.
    """
    x1 = hi - INV_PHI * (hi - lo)
    x2 = lo + INV_PHI * (hi - lo)
    f1, f2 = f(x1), f(x2)
    it = 0
    while hi - lo > tol and it < max_iter:
        it += 1
        if f1 < f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - INV_PHI * (hi - lo)
            f1 = f(x1)
        elif f2 < f1:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + INV_PHI * (hi - lo)
            f2 = f(x2)
        else:
            lo, hi = x1, x2
            x1 = hi - INV_PHI * (hi - lo)
            x2 = lo + INV_PHI * (hi - lo)
            f1, f2 = f(x1), f(x2)
    x = 0.5 * (lo + hi)
    return x, f(x)


def refine_min(result: SweepResult, tol: float,
               objective: Callable[[float], float] | None = None) -> RefinedMinimum:
    """Golden-section polish of the discrete argmin between its grid neighbours.

    ``objective`` maps ``theta_a0`` to the peak field; by default it redesigns
    the protocol and scores infeasible designs as ``inf``.  Never returns a
    value worse than the discrete best.
    """
    grid = result.grid
    best = result.best
    i = next(j for j, p in enumerate(grid) if p is best or p == best)
    if i == 0 or i == len(grid) - 1 or not (grid[i - 1].feasible and grid[i + 1].feasible):
        warnings.warn("discrete minimum lacks feasible neighbours on both sides; keeping the grid value",
                      RuntimeWarning, stacklevel=2)
        return RefinedMinimum(best.theta_a0, best.e_max, False)
    lo, hi = grid[i - 1].theta_a0, grid[i + 1].theta_a0
    if tol >= hi - lo:
        return RefinedMinimum(best.theta_a0, best.e_max, False)

    if objective is None:
        def objective(theta):
            p = evaluate_point(result.spec_template.replace(theta_a0=theta), result.params,
                               result.steps, result.fidelity_min)
            return p.e_max if p.feasible else math.inf

    x, fx = golden_section(objective, lo, hi, tol)
    if fx > best.e_max:
        warnings.warn("refinement bracket is not unimodal; keeping the grid value", RuntimeWarning, stacklevel=2)
        return RefinedMinimum(best.theta_a0, best.e_max, False)
    return RefinedMinimum(x, fx, True)
