"""Flat ``key = value`` run configuration.

Keys carry their units in the suffix (``J_meV``, ``B_T``, ``t_f_ns`` ...).
Blank lines and ``#`` comments are ignored; unknown or duplicated keys are
errors.  Every key is optional and defaults to the first worked example
(singlet -> triplet in 0.4 ns at 3.67 T).  Angle values may be written as
plain numbers or as multiples of ``pi`` (``pi/3``, ``-0.5*pi``, ``2pi/3``).
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

from .designer import DEFAULT_STEPS, MIN_STEPS, Branch, DesignSpec, Mode
from .errors import LRPulseError
from .model import BlochAngles, DeviceParams
from .sweep import FIDELITY_MIN


class ConfigError(LRPulseError, ValueError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


@dataclass(frozen=True)
class Numerics:
    steps: int = DEFAULT_STEPS
    fidelity_min: float = FIDELITY_MIN
    sweep_theta0_min: float = 0.1 * math.pi
    sweep_theta0_max: float = 0.9 * math.pi
    sweep_grid: int = 33


@dataclass(frozen=True)
class Output:
    out_dir: str = "out"
    emit_csv: bool = True


@dataclass(frozen=True)
class RunConfig:
    device: DeviceParams = field(default_factory=DeviceParams)
    task: DesignSpec = field(default_factory=DesignSpec)
    numerics: Numerics = field(default_factory=Numerics)
    output: Output = field(default_factory=Output)


_FLOAT, _INT, _ANGLE, _MODE, _BRANCH, _STR, _BOOL = "float", "int", "angle", "mode", "branch", "str", "bool"

KEYS: dict[str, str] = {
    "J_meV": _FLOAT,
    "g": _FLOAT,
    "B_T": _FLOAT,
    "hbar_beta_meV_cm": _FLOAT,
    "alpha_over_beta": _FLOAT,
    "t_f_ns": _FLOAT,
    "mode": _MODE,
    "theta_p_rad": _ANGLE,
    "phi_p_rad": _ANGLE,
    "theta_a0_rad": _ANGLE,
    "branch": _BRANCH,
    "k": _INT,
    "steps": _INT,
    "fidelity_min": _FLOAT,
    "sweep_theta0_min_rad": _ANGLE,
    "sweep_theta0_max_rad": _ANGLE,
    "sweep_grid": _INT,
    "out_dir": _STR,
    "emit_csv": _BOOL,
}

_NUM = r"(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?"
_PI_RE = re.compile(rf"^(?P<sign>[+-])?\s*(?:(?P<coef>{_NUM})\s*\*?\s*)?pi(?:\s*/\s*(?P<den>{_NUM}))?$")


_UNIT_SUFFIXES = ("_meV_cm", "_eV_cm", "_ueV", "_meV", "_eV", "_ns", "_ps", "_us", "_ms", "_s",
                  "_rad", "_deg", "_mT", "_T", "_G")


def _base(key: str) -> str:
    for suffix in _UNIT_SUFFIXES:
        if key.endswith(suffix):
            return key[: -len(suffix)]
    return key


_UNIT_BASES = {_base(k): k for k in KEYS if _base(k) != k}


def parse_number(text: str, allow_pi: bool = False) -> float:
    try:
        value = float(text)
    except ValueError:
        m = _PI_RE.match(text) if allow_pi else None
        if m is None:
            raise ValueError(f"not a number: {text!r}") from None
        value = math.pi * float(m["coef"] or 1.0) / float(m["den"] or 1.0)
        if m["sign"] == "-":
            value = -value
    if not math.isfinite(value):
        raise ValueError(f"not a finite number: {text!r}")
    return value


def _convert(key: str, kind: str, text: str):
    if kind in (_FLOAT, _ANGLE):
        return parse_number(text, allow_pi=kind == _ANGLE)
    if kind == _INT:
        if not re.fullmatch(r"[+-]?\d+", text):
            raise ValueError(f"not an integer: {text!r}")
        return int(text)
    if kind == _MODE:
        try:
            return Mode(text.lower())
        except ValueError:
            raise ValueError(f"mode must be to_target or from_initial, got {text!r}") from None
    if kind == _BRANCH:
        try:
            return Branch(text.lower())
        except ValueError:
            raise ValueError(f"branch must be plus or minus, got {text!r}") from None
    if kind == _BOOL:
        low = text.lower()
        if low in ("true", "yes", "1"):
            return True
        if low in ("false", "no", "0"):
            return False
        raise ValueError(f"not a boolean: {text!r}")
    return text


def parse_config(text: str) -> RunConfig:
    values: dict[str, object] = {}
    lines: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"expected 'key = value', got {raw.strip()!r}", lineno)
        key, _, value = (part.strip() for part in line.partition("="))
        if not key:
            raise ConfigError("missing key before '='", lineno)
        if key not in KEYS:
            base = _base(key)
            if base in _UNIT_BASES:
                raise ConfigError(f"unit suffix mismatch: {key!r} should be {_UNIT_BASES[base]!r}", lineno)
            raise ConfigError(f"unknown key {key!r}", lineno)
        if key in values:
            raise ConfigError(f"duplicate key {key!r} (first set on line {lines[key]})", lineno)
        if not value:
            raise ConfigError(f"missing value for {key!r}", lineno)
        try:
            values[key] = _convert(key, KEYS[key], value)
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}", lineno) from None
        lines[key] = lineno
    return _build(values, lines)


def _build(values: dict, lines: dict) -> RunConfig:
    d = RunConfig()

    def get(key, default):
        return values.get(key, default)

    def fail(msg, *keys):
        line = min((lines[k] for k in keys if k in lines), default=None)
        raise ConfigError(msg, line)

    J = get("J_meV", d.device.J)
    if not J > 0:
        fail(f"J_meV must be positive, got {J!r}", "J_meV")
    t_f = get("t_f_ns", d.device.t_f)
    if not t_f > 0:
        fail(f"t_f_ns must be positive, got {t_f!r}", "t_f_ns")
    if get("hbar_beta_meV_cm", d.device.hbar_beta) == 0:
        fail("hbar_beta_meV_cm must be nonzero", "hbar_beta_meV_cm")
    if get("alpha_over_beta", d.device.alpha_over_beta) == 0:
        fail("alpha_over_beta must be nonzero", "alpha_over_beta")
    try:
        device = DeviceParams(J=J, g=get("g", d.device.g), B=get("B_T", d.device.B),
                              hbar_beta=get("hbar_beta_meV_cm", d.device.hbar_beta),
                              alpha_over_beta=get("alpha_over_beta", d.device.alpha_over_beta), t_f=t_f)
    except ValueError as exc:
        fail(str(exc), "J_meV", "g", "B_T")

    theta_p = get("theta_p_rad", d.task.boundary.theta)
    if not 0.0 <= theta_p <= math.pi:
        fail(f"theta_p_rad must lie in [0, pi], got {theta_p!r}", "theta_p_rad")
    theta_a0 = get("theta_a0_rad", d.task.theta_a0)
    if abs(math.sin(theta_a0)) < 1e-12:
        fail(f"theta_a0_rad = {theta_a0!r} is a multiple of pi (sin theta_a0 must be nonzero)", "theta_a0_rad")
    task = DesignSpec(mode=get("mode", d.task.mode),
                      boundary=BlochAngles(theta_p, get("phi_p_rad", d.task.boundary.phi)),
                      theta_a0=theta_a0, branch=get("branch", d.task.branch), k=get("k", d.task.k))

    steps = get("steps", d.numerics.steps)
    if steps < MIN_STEPS:
        fail(f"steps must be at least {MIN_STEPS}, got {steps}", "steps")
    fmin = get("fidelity_min", d.numerics.fidelity_min)
    if not 0.0 <= fmin <= 1.0:
        fail(f"fidelity_min must lie in [0, 1], got {fmin!r}", "fidelity_min")
    grid = get("sweep_grid", d.numerics.sweep_grid)
    if grid < 3:
        fail(f"sweep_grid must be at least 3, got {grid}", "sweep_grid")
    numerics = Numerics(steps, fmin, get("sweep_theta0_min_rad", d.numerics.sweep_theta0_min),
                        get("sweep_theta0_max_rad", d.numerics.sweep_theta0_max), grid)
    output = Output(get("out_dir", d.output.out_dir), get("emit_csv", d.output.emit_csv))
    return RunConfig(device, task, numerics, output)


def format_config(cfg: RunConfig) -> str:
    """Inverse of :func:`parse_config`; floats are written in round-trip precision."""
    dev, task, num, out = cfg.device, cfg.task, cfg.numerics, cfg.output
    items = [
        ("J_meV", dev.J), ("g", dev.g), ("B_T", dev.B), ("hbar_beta_meV_cm", dev.hbar_beta),
        ("alpha_over_beta", dev.alpha_over_beta), ("t_f_ns", dev.t_f),
        ("mode", task.mode.value), ("theta_p_rad", task.boundary.theta), ("phi_p_rad", task.boundary.phi),
        ("theta_a0_rad", task.theta_a0), ("branch", task.branch.value), ("k", task.k),
        ("steps", num.steps), ("fidelity_min", num.fidelity_min),
        ("sweep_theta0_min_rad", num.sweep_theta0_min), ("sweep_theta0_max_rad", num.sweep_theta0_max),
        ("sweep_grid", num.sweep_grid), ("out_dir", out.out_dir), ("emit_csv", "true" if out.emit_csv else "false"),
    ]
    return "".join(f"{k} = {float(v)!r}\n" if isinstance(v, float) else f"{k} = {v}\n" for k, v in items)


def load_config(path) -> RunConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
