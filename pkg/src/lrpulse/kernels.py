"""Kernel selection: the compiled stepper when built, else the Python one.

Set ``LRPULSE_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _rk4_py

BACKEND = "python"
propagate = _rk4_py.propagate

if not os.environ.get("LRPULSE_PURE_PYTHON"):
    try:
        from . import _rk4
    except ImportError:  # extension not built
        pass
    else:
        propagate = _rk4.propagate
        BACKEND = "cython"
