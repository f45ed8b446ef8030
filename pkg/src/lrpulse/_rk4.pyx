# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled RK4 stepper for a driven two-level system."""
import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline void _rhs(double k11, double k22, double complex k12,
                      double complex a, double complex b,
                      double complex *da, double complex *db) noexcept nogil:
    # d(psi)/dt = -i K psi
    da[0] = -1j * (k11 * a + k12 * b)
    db[0] = -1j * (k12.conjugate() * a + k22 * b)


def propagate(double[::1] k11, double[::1] k22, double complex[::1] k12,
              double dt, double complex psi1, double complex psi2):
    cdef Py_ssize_t n_half = k11.shape[0]
    if k22.shape[0] != n_half or k12.shape[0] != n_half or n_half % 2 != 1:
        raise ValueError("rate arrays must share an odd length 2N+1")
    cdef Py_ssize_t n_steps = (n_half - 1) // 2
    out = np.empty((n_steps + 1, 2), dtype=np.complex128)
    cdef double complex[:, ::1] o = out
    cdef double complex a = psi1, b = psi2
    cdef double complex a1, b1, a2, b2, a3, b3, a4, b4
    cdef double h2 = 0.5 * dt, h6 = dt / 6.0
    cdef Py_ssize_t i, j
    o[0, 0] = a
    o[0, 1] = b
    with nogil:
        for i in range(n_steps):
            j = 2 * i
            _rhs(k11[j], k22[j], k12[j], a, b, &a1, &b1)
            _rhs(k11[j + 1], k22[j + 1], k12[j + 1], a + h2 * a1, b + h2 * b1, &a2, &b2)
            _rhs(k11[j + 1], k22[j + 1], k12[j + 1], a + h2 * a2, b + h2 * b2, &a3, &b3)
            _rhs(k11[j + 2], k22[j + 2], k12[j + 2], a + dt * a3, b + dt * b3, &a4, &b4)
            a = a + h6 * (a1 + 2.0 * a2 + 2.0 * a3 + a4)
            b = b + h6 * (b1 + 2.0 * b2 + 2.0 * b3 + b4)
            o[i + 1, 0] = a
            o[i + 1, 1] = b
    return out
