"""Compiled vs pure-Python RK4 stepper on the example-1 pulse.

    python3 benchmarks/bench_rk4.py [--steps 4000] [--repeat 20]
"""
import argparse
import timeit

import numpy as np

from lrpulse import _rk4_py
from lrpulse.designer import Branch, DesignSpec, Mode, design
from lrpulse.model import BlochAngles, DeviceParams, hamiltonian_rates

try:
    from lrpulse import _rk4
except ImportError:
    _rk4 = None


def rates(steps):
    params = DeviceParams()
    ansatz = design(DesignSpec(Mode.TO_TARGET, BlochAngles(0.0, 0.0), np.pi / 3, Branch.PLUS, 1), params)
    a_L, a_R = ansatz.gauge(np.linspace(0.0, params.t_f, 2 * steps + 1))
    Y, Z1, Z2 = hamiltonian_rates(params, a_L, a_R)
    return 0.5 * Z1, 0.5 * Z2, 0.5j * Y, params.t_f / steps


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--steps", type=int, default=4000)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args()
    k11, k22, k12, dt = rates(args.steps)
    backends = {"python": _rk4_py.propagate}
    if _rk4 is not None:
        backends["cython"] = _rk4.propagate
    else:
        print("compiled extension not built; timing the fallback only")
    results = {}
    for name, fn in backends.items():
        best = min(timeit.repeat(lambda: fn(k11, k22, k12, dt, 1.0 + 0j, 0j), number=1, repeat=args.repeat))
        results[name] = (best, fn(k11, k22, k12, dt, 1.0 + 0j, 0j))
        print(f"{name:>7}: {best * 1e3:8.3f} ms per propagation ({args.steps} steps)")
    if len(results) == 2:
        diff = np.max(np.abs(results["cython"][1] - results["python"][1]))
        print(f"speedup: {results['python'][0] / results['cython'][0]:.1f}x, max state difference {diff:.1e}")


if __name__ == "__main__":
    main()
