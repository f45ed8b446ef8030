"""Pure-Python RK4 stepper; same contract as the compiled ``_rk4.propagate``."""
import numpy as np


def propagate(k11, k22, k12, dt, psi1, psi2):
    n_half = len(k11)
    if len(k22) != n_half or len(k12) != n_half or n_half % 2 != 1:
        raise ValueError("rate arrays must share an odd length 2N+1")
    n_steps = (n_half - 1) // 2
    # plain Python scalars beat numpy for 2-vectors
    k11 = np.asarray(k11, dtype=float).tolist()
    k22 = np.asarray(k22, dtype=float).tolist()
    k12 = np.asarray(k12, dtype=complex).tolist()
    a, b = complex(psi1), complex(psi2)
    h2, h6 = 0.5 * dt, dt / 6.0
    out = [(a, b)]
    for i in range(n_steps):
        j = 2 * i
        p, q, r = k11[j], k22[j], k12[j]
        a1 = -1j * (p * a + r * b)
        b1 = -1j * (r.conjugate() * a + q * b)
        p, q, r = k11[j + 1], k22[j + 1], k12[j + 1]
        rc = r.conjugate()
        ta, tb = a + h2 * a1, b + h2 * b1
        a2 = -1j * (p * ta + r * tb)
        b2 = -1j * (rc * ta + q * tb)
        ta, tb = a + h2 * a2, b + h2 * b2
        a3 = -1j * (p * ta + r * tb)
        b3 = -1j * (rc * ta + q * tb)
        p, q, r = k11[j + 2], k22[j + 2], k12[j + 2]
        ta, tb = a + dt * a3, b + dt * b3
        a4 = -1j * (p * ta + r * tb)
        b4 = -1j * (r.conjugate() * ta + q * tb)
        a = a + h6 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
        b = b + h6 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
        out.append((a, b))
    return np.array(out, dtype=np.complex128)
