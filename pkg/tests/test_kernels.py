import numpy as np
import pytest
from scipy.linalg import expm

from lrpulse import _rk4_py, kernels
from lrpulse.dynamics import evolve


def random_rates(n, seed=0):
    rng = np.random.default_rng(seed)
    m = 2 * n + 1
    return (rng.normal(0, 5, m), rng.normal(0, 5, m), rng.normal(0, 3, m) + 1j * rng.normal(0, 3, m))


def test_backend_reported():
    assert kernels.BACKEND in ("cython", "python")


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled extension not built")
def test_backends_agree():
    from lrpulse import _rk4
    k11, k22, k12 = random_rates(500)
    a = _rk4.propagate(k11, k22, k12, 1e-3, 0.6 + 0j, 0.8j)
    b = _rk4_py.propagate(k11, k22, k12, 1e-3, 0.6 + 0j, 0.8j)
    assert a.shape == b.shape == (501, 2)
    assert np.max(np.abs(a - b)) <= 1e-13


def test_constant_hamiltonian_matches_exponential():
    n, dt = 400, 2.5e-3
    k11, k22, k12 = np.full(2 * n + 1, 3.0), np.full(2 * n + 1, -1.0), np.full(2 * n + 1, 2.0 - 1.5j)
    K = np.array([[3.0, 2.0 - 1.5j], [2.0 + 1.5j, -1.0]])
    psi0 = np.array([1.0, 0.0], complex)
    exact = expm(-1j * K * n * dt) @ psi0
    for prop in (kernels.propagate, _rk4_py.propagate):
        out = prop(k11, k22, k12, dt, 1.0 + 0j, 0j)
        assert np.max(np.abs(out[-1] - exact)) <= 1e-8


def test_diagonal_phases_only():
    dt = 0.01
    out = kernels.propagate(np.full(201, 2.0), np.full(201, -3.0), np.zeros(201, complex), dt, 1.0 + 0j, 0j)
    assert np.allclose(np.abs(out[:, 0]), 1.0, atol=1e-12)
    assert np.all(out[:, 1] == 0)


@pytest.mark.parametrize("prop", [kernels.propagate, _rk4_py.propagate])
def test_even_length_rejected(prop):
    z = np.zeros(4)
    with pytest.raises(ValueError):
        prop(z, z, z.astype(complex), 0.1, 1.0 + 0j, 0j)


def test_designed_pulse_backends_agree(sims, params, monkeypatch):
    sim = sims["ex2"]
    psi0 = sim.ansatz.spec.initial_state()
    fast = evolve(params, sim.pulse, psi0)
    monkeypatch.setattr(kernels, "propagate", _rk4_py.propagate)
    slow = evolve(params, sim.pulse, psi0)
    assert np.max(np.abs(fast.states - slow.states)) <= 1e-12
