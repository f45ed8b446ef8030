"""Command-line entry points: ``design``, ``simulate``, ``sweep`` and ``gate-check``.

Exit status: 0 success, 2 configuration or usage error, 3 infeasible
design, 4 numerical-tolerance failure (including a fidelity below
``fidelity_min``), 1 I/O failure.
"""
from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from .config import ConfigError, RunConfig, load_config
from .designer import Branch, design, synthesize_pulse
from .dynamics import evolve, fidelity, gate_check_hadamard
from .errors import DesignError, EmptySweepError, NumericalError
from .output import emit_csv, emit_pulse_csv, emit_sweep_csv, ensure_dir
from .sweep import sweep_theta0

EXIT_OK, EXIT_IO, EXIT_CONFIG, EXIT_INFEASIBLE, EXIT_NUMERICAL = 0, 1, 2, 3, 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_CONFIG)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lrpulse", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in ("design", "simulate", "sweep", "gate-check"):
        p = sub.add_parser(name)
        p.add_argument("--config", metavar="PATH", help="key = value run configuration")
        p.add_argument("--out", metavar="DIR", help="output directory (overrides out_dir)")
        p.add_argument("--steps", type=int, help="RK4 / pulse grid intervals")
        p.add_argument("--k", type=int, help="winding number of u(t_f)")
        p.add_argument("--branch", choices=[b.value for b in Branch])
        if name == "sweep":
            p.add_argument("--theta0-min", type=float)
            p.add_argument("--theta0-max", type=float)
            p.add_argument("--grid", type=int)
            p.add_argument("--workers", type=int, default=1)
    return parser


def _resolve(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    task = cfg.task
    if args.k is not None:
        task = task.replace(k=args.k)
    if args.branch is not None:
        task = task.replace(branch=Branch(args.branch))
    num = cfg.numerics
    if args.steps is not None:
        if args.steps < 1000:
            raise ConfigError(f"--steps must be at least 1000, got {args.steps}")
        num = dataclasses.replace(num, steps=args.steps)
    if getattr(args, "grid", None) is not None:
        if args.grid < 3:
            raise ConfigError(f"--grid must be at least 3, got {args.grid}")
        num = dataclasses.replace(num, sweep_grid=args.grid)
    if getattr(args, "theta0_min", None) is not None:
        num = dataclasses.replace(num, sweep_theta0_min=args.theta0_min)
    if getattr(args, "theta0_max", None) is not None:
        num = dataclasses.replace(num, sweep_theta0_max=args.theta0_max)
    out = cfg.output
    if args.out is not None:
        out = dataclasses.replace(out, out_dir=args.out)
    return RunConfig(cfg.device, task, num, out)


def _design(cfg: RunConfig, out):
    ansatz = design(cfg.task, cfg.device)
    pulse = synthesize_pulse(ansatz, cfg.numerics.steps)
    print(f"a = {ansatz.a[0]!r}, {ansatz.a[1]!r}, {ansatz.a[2]!r}", file=out)
    print(f"b = {ansatz.b[0]!r}, {ansatz.b[1]!r}, {ansatz.b[2]!r}", file=out)
    print(f"u_tf = {float(ansatz.u(ansatz.t_f))!r}", file=out)
    return ansatz, pulse


def cmd_design(cfg: RunConfig, out) -> int:
    ansatz, pulse = _design(cfg, out)
    if cfg.output.emit_csv:
        ensure_dir(cfg.output.out_dir)
        emit_pulse_csv(pulse, ansatz, os.path.join(cfg.output.out_dir, "pulse.csv"))
    return EXIT_OK


def cmd_simulate(cfg: RunConfig, out) -> int:
    ansatz, pulse = _design(cfg, out)
    traj = evolve(cfg.device, pulse, cfg.task.initial_state())
    fid = fidelity(traj.states[-1], cfg.task.target_state())
    if cfg.output.emit_csv:
        ensure_dir(cfg.output.out_dir)
        emit_csv(traj, pulse, ansatz, os.path.join(cfg.output.out_dir, "trajectory.csv"))
    print(f"fidelity={fid!r}", file=out)
    return EXIT_OK if fid >= cfg.numerics.fidelity_min else EXIT_NUMERICAL


def cmd_sweep(cfg: RunConfig, out, workers: int = 1) -> int:
    num = cfg.numerics
    result = sweep_theta0(cfg.task, cfg.device, (num.sweep_theta0_min, num.sweep_theta0_max), num.sweep_grid,
                          steps=num.steps, fidelity_min=num.fidelity_min, workers=workers)
    if cfg.output.emit_csv:
        ensure_dir(cfg.output.out_dir)
        emit_sweep_csv(result, os.path.join(cfg.output.out_dir, "sweep.csv"))
    n_ok = sum(p.feasible for p in result.grid)
    print(f"feasible={n_ok}/{len(result.grid)}", file=out)
    print(f"best theta_a0_rad={result.best.theta_a0!r} e_max_mV_per_cm={result.best.e_max!r}", file=out)
    return EXIT_OK


def cmd_gate_check(cfg: RunConfig, out) -> int:
    _, pulse = _design(cfg, out)
    f1, f2 = gate_check_hadamard(cfg.device, pulse)
    print(f"fidelity_1={f1!r}", file=out)
    print(f"fidelity_2={f2!r}", file=out)
    ok = min(f1, f2) >= cfg.numerics.fidelity_min
    return EXIT_OK if ok else EXIT_NUMERICAL


def run_command(argv=None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = _resolve(args)
        if args.command == "design":
            return cmd_design(cfg, out)
        if args.command == "simulate":
            return cmd_simulate(cfg, out)
        if args.command == "sweep":
            return cmd_sweep(cfg, out, args.workers)
        return cmd_gate_check(cfg, out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DesignError, EmptySweepError) as exc:
        print(f"infeasible design: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
