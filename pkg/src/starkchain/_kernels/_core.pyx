# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled numerical kernels (hot loops).

Mirrors starkchain._kernels.pure exactly: implicit-shift QL tridiagonal
eigensolver and the two RK4 integrators. Any behavioral change here must
be replicated in the pure backend; the test suite cross-checks both.
"""

from libc.math cimport fabs, hypot, cos, copysign, pi

import numpy as np

from starkchain.errors import ConvergenceError, NumericsError

cdef double _EPS = 2.220446049250313e-16
cdef int _MAX_SWEEPS = 50


def tridiag_eigh(diag, offdiag):
    """Implicit-shift QL eigendecomposition; see the pure backend docstring."""
    d_arr = np.array(diag, dtype=np.float64, copy=True)
    cdef Py_ssize_t n = d_arr.shape[0]
    # eigenvectors kept as rows while rotating (contiguous inner loop),
    # transposed to the columns-of-z convention on return
    zt_arr = np.eye(n)
    if n == 1:
        return d_arr, zt_arr
    e_arr = np.zeros(n)
    e_arr[: n - 1] = offdiag

    cdef double[::1] d = d_arr
    cdef double[::1] e = e_arr
    cdef double[:, ::1] zt = zt_arr
    cdef Py_ssize_t l, m, i, k
    cdef int sweeps, underflow
    cdef double dd, g, r, s, c, p, f, b, tmp

    for l in range(n):
        sweeps = 0
        while True:
            m = n - 1
            for i in range(l, n - 1):
                dd = fabs(d[i]) + fabs(d[i + 1])
                if fabs(e[i]) <= _EPS * dd:
                    m = i
                    break
            if m == l:
                break
            sweeps += 1
            if sweeps > _MAX_SWEEPS:
                raise ConvergenceError(
                    f"QL iteration failed to converge for a {n}x{n} "
                    f"tridiagonal matrix (eigenvalue {l})"
                )
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = 0
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = 1
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                for k in range(n):
                    tmp = zt[i + 1, k]
                    zt[i + 1, k] = s * zt[i, k] + c * tmp
                    zt[i, k] = c * zt[i, k] - s * tmp
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d_arr, np.ascontiguousarray(zt_arr.T)


def rk4_monodromy(double splitting, double drive_freq, double coupling,
                  Py_ssize_t n_steps):
    """One-period RK4 propagator of the driven two-level system."""
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    cdef double period = 2.0 * pi / drive_freq
    cdef double h = period / n_steps
    cdef double a = 0.5 * splitting
    cdef double t = 0.0
    cdef double complex u00 = 1.0, u01 = 0.0, u10 = 0.0, u11 = 1.0
    cdef double complex k1_00, k1_01, k1_10, k1_11
    cdef double complex k2_00, k2_01, k2_10, k2_11
    cdef double complex k3_00, k3_01, k3_10, k3_11
    cdef double complex k4_00, k4_01, k4_10, k4_11
    cdef double complex v00, v01, v10, v11
    cdef double complex mi = -1.0j
    cdef double b
    cdef Py_ssize_t step

    for step in range(n_steps):
        b = -2.0 * coupling * cos(drive_freq * t)
        k1_00 = mi * (a * u00 + b * u10)
        k1_01 = mi * (a * u01 + b * u11)
        k1_10 = mi * (b * u00 - a * u10)
        k1_11 = mi * (b * u01 - a * u11)

        b = -2.0 * coupling * cos(drive_freq * (t + 0.5 * h))
        v00 = u00 + 0.5 * h * k1_00
        v01 = u01 + 0.5 * h * k1_01
        v10 = u10 + 0.5 * h * k1_10
        v11 = u11 + 0.5 * h * k1_11
        k2_00 = mi * (a * v00 + b * v10)
        k2_01 = mi * (a * v01 + b * v11)
        k2_10 = mi * (b * v00 - a * v10)
        k2_11 = mi * (b * v01 - a * v11)

        v00 = u00 + 0.5 * h * k2_00
        v01 = u01 + 0.5 * h * k2_01
        v10 = u10 + 0.5 * h * k2_10
        v11 = u11 + 0.5 * h * k2_11
        k3_00 = mi * (a * v00 + b * v10)
        k3_01 = mi * (a * v01 + b * v11)
        k3_10 = mi * (b * v00 - a * v10)
        k3_11 = mi * (b * v01 - a * v11)

        b = -2.0 * coupling * cos(drive_freq * (t + h))
        v00 = u00 + h * k3_00
        v01 = u01 + h * k3_01
        v10 = u10 + h * k3_10
        v11 = u11 + h * k3_11
        k4_00 = mi * (a * v00 + b * v10)
        k4_01 = mi * (a * v01 + b * v11)
        k4_10 = mi * (b * v00 - a * v10)
        k4_11 = mi * (b * v01 - a * v11)

        u00 = u00 + (h / 6.0) * (k1_00 + 2.0 * k2_00 + 2.0 * k3_00 + k4_00)
        u01 = u01 + (h / 6.0) * (k1_01 + 2.0 * k2_01 + 2.0 * k3_01 + k4_01)
        u10 = u10 + (h / 6.0) * (k1_10 + 2.0 * k2_10 + 2.0 * k3_10 + k4_10)
        u11 = u11 + (h / 6.0) * (k1_11 + 2.0 * k2_11 + 2.0 * k3_11 + k4_11)
        t += h

    out = np.empty((2, 2), dtype=np.complex128)
    out[0, 0] = u00
    out[0, 1] = u01
    out[1, 0] = u10
    out[1, 1] = u11
    return out


cdef inline void _hmul(double[::1] d, double[::1] e,
                       double complex[::1] v, double complex[::1] out,
                       Py_ssize_t n) noexcept:
    cdef Py_ssize_t i
    out[0] = d[0] * v[0] + e[0] * v[1]
    for i in range(1, n - 1):
        out[i] = d[i] * v[i] + e[i - 1] * v[i - 1] + e[i] * v[i + 1]
    out[n - 1] = d[n - 1] * v[n - 1] + e[n - 2] * v[n - 2]


def rk4_tridiag_evolve(diag, offdiag, psi0, double dt, Py_ssize_t n_steps,
                       Py_ssize_t record_every):
    """Fixed-step RK4 for i dpsi/dt = H psi, tridiagonal H; records states."""
    if n_steps < 1 or record_every < 1:
        raise ValueError("n_steps and record_every must be >= 1")
    d_arr = np.ascontiguousarray(diag, dtype=np.float64)
    e_arr = np.ascontiguousarray(offdiag, dtype=np.float64)
    psi_arr = np.array(psi0, dtype=np.complex128, copy=True)
    cdef Py_ssize_t n = psi_arr.shape[0]
    if n < 2:
        raise ValueError("state must have at least 2 components")

    records_arr = np.empty((n_steps // record_every + 1, n), dtype=np.complex128)
    records_arr[0, :] = psi_arr

    cdef double[::1] d = d_arr
    cdef double[::1] e = e_arr
    cdef double complex[::1] psi = psi_arr
    cdef double complex[:, ::1] records = records_arr

    k_arrs = [np.empty(n, dtype=np.complex128) for _ in range(5)]
    cdef double complex[::1] k1 = k_arrs[0]
    cdef double complex[::1] k2 = k_arrs[1]
    cdef double complex[::1] k3 = k_arrs[2]
    cdef double complex[::1] k4 = k_arrs[3]
    cdef double complex[::1] tmp = k_arrs[4]

    cdef double complex mi = -1.0j
    cdef Py_ssize_t step, i, rec = 1
    cdef double norm0 = 0.0, norm1 = 0.0

    for i in range(n):
        norm0 += psi[i].real * psi[i].real + psi[i].imag * psi[i].imag

    for step in range(n_steps):
        _hmul(d, e, psi, k1, n)
        for i in range(n):
            k1[i] = mi * k1[i]
            tmp[i] = psi[i] + (0.5 * dt) * k1[i]
        _hmul(d, e, tmp, k2, n)
        for i in range(n):
            k2[i] = mi * k2[i]
            tmp[i] = psi[i] + (0.5 * dt) * k2[i]
        _hmul(d, e, tmp, k3, n)
        for i in range(n):
            k3[i] = mi * k3[i]
            tmp[i] = psi[i] + dt * k3[i]
        _hmul(d, e, tmp, k4, n)
        for i in range(n):
            k4[i] = mi * k4[i]
            psi[i] = psi[i] + (dt / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i])
        if (step + 1) % record_every == 0:
            for i in range(n):
                records[rec, i] = psi[i]
            rec += 1

    for i in range(n):
        norm1 += psi[i].real * psi[i].real + psi[i].imag * psi[i].imag
    if not fabs(norm1 - norm0) <= 1e-8:  # inverted so NaN from overflow also fails
        raise NumericsError(
            f"RK4 norm drift {fabs(norm1 - norm0):.2e} exceeds 1e-8; "
            "reduce the step size"
        )
    return records_arr[:rec]
