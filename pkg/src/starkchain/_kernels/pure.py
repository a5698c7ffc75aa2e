"""Pure-numpy fallback kernels.

Same algorithms as the compiled extension, with the innermost loops
expressed as numpy vector operations where possible. Selected
automatically when the extension is unavailable (see package __init__).
"""

from __future__ import annotations

import math

import numpy as np

from starkchain.errors import ConvergenceError, NumericsError

_EPS = float(np.finfo(np.float64).eps)
_MAX_SWEEPS = 50


def tridiag_eigh(diag, offdiag):
    """Eigendecomposition of a real symmetric tridiagonal matrix.

    Implicit-shift QL iteration with accumulated plane rotations, the
    classic EISPACK scheme. Returns ``(w, z)`` with eigenvalues ``w`` in
    no particular order and eigenvectors as the columns of ``z``;
    orthogonality holds to machine precision because ``z`` is a product
    of exact rotations.
    """
    d = np.array(diag, dtype=np.float64, copy=True)
    n = d.shape[0]
    # eigenvectors kept as rows while rotating (contiguous updates),
    # transposed to the columns-of-z convention on return
    zt = np.eye(n)
    if n == 1:
        return d, zt
    e = np.zeros(n)
    e[: n - 1] = offdiag

    for l in range(n):
        sweeps = 0
        while True:
            # locate the first negligible subdiagonal at or above l
            for m in range(l, n - 1):
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= _EPS * dd:
                    break
            else:
                m = n - 1
            if m == l:
                break
            sweeps += 1
            if sweeps > _MAX_SWEEPS:
                raise ConvergenceError(
                    f"QL iteration failed to converge for a {n}x{n} "
                    f"tridiagonal matrix (eigenvalue {l})"
                )
            # Wilkinson-style implicit shift from the 2x2 corner at l
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + math.copysign(r, g))
            s = 1.0
            c = 1.0
            p = 0.0
            underflow = False
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    # rotation annihilated prematurely; drop the shift and retry
                    d[i + 1] -= p
                    e[m] = 0.0
                    underflow = True
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                row = zt[i + 1].copy()
                zt[i + 1] = s * zt[i] + c * row
                zt[i] = c * zt[i] - s * row
            if underflow:
                continue
            d[l] -= p
            e[l] = g
            e[m] = 0.0
    return d, np.ascontiguousarray(zt.T)


def rk4_monodromy(splitting, drive_freq, coupling, n_steps):
    """One-period propagator of the driven two-level Hamiltonian.

    Integrates dU/dt = -i H(t) U over one drive period with classic RK4,
    for H(t) = (splitting/2)*sigma_z - 2*coupling*cos(drive_freq*t)*sigma_x,
    starting from the identity. Returns the 2x2 complex monodromy matrix.
    """
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    period = 2.0 * math.pi / drive_freq
    h = period / n_steps
    a = 0.5 * splitting
    sz = np.array([[1.0, 0.0], [0.0, -1.0]])
    sx = np.array([[0.0, 1.0], [1.0, 0.0]])

    def deriv(t, u):
        ham = a * sz - 2.0 * coupling * math.cos(drive_freq * t) * sx
        return -1j * (ham @ u)

    u = np.eye(2, dtype=complex)
    t = 0.0
    for _ in range(n_steps):
        k1 = deriv(t, u)
        k2 = deriv(t + 0.5 * h, u + 0.5 * h * k1)
        k3 = deriv(t + 0.5 * h, u + 0.5 * h * k2)
        k4 = deriv(t + h, u + h * k3)
        u = u + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        t += h
    return u


def rk4_tridiag_evolve(diag, offdiag, psi0, dt, n_steps, record_every):
    """Fixed-step RK4 integration of i dpsi/dt = H psi for tridiagonal H.

    Records the state every ``record_every`` steps (the initial state is
    always the first record). Returns an array of shape
    ``(n_records, dim)``. This is the brute-force cross-check for the
    spectral propagator, deliberately independent of any
    eigendecomposition.
    """
    if n_steps < 1 or record_every < 1:
        raise ValueError("n_steps and record_every must be >= 1")
    d = np.asarray(diag, dtype=np.float64)
    e = np.asarray(offdiag, dtype=np.float64)
    psi = np.array(psi0, dtype=np.complex128, copy=True)

    def hmul(v):
        out = d * v
        out[:-1] = out[:-1] + e * v[1:]
        out[1:] = out[1:] + e * v[:-1]
        return out

    records = [psi.copy()]
    for step in range(n_steps):
        k1 = -1j * hmul(psi)
        k2 = -1j * hmul(psi + (0.5 * dt) * k1)
        k3 = -1j * hmul(psi + (0.5 * dt) * k2)
        k4 = -1j * hmul(psi + dt * k3)
        psi = psi + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if (step + 1) % record_every == 0:
            records.append(psi.copy())
    drift = abs(float(np.sum(np.abs(psi) ** 2)) - float(np.sum(np.abs(np.asarray(psi0)) ** 2)))
    if not drift <= 1e-8:  # inverted so NaN from overflow also fails
        raise NumericsError(
            f"RK4 norm drift {drift:.2e} exceeds 1e-8; reduce the step size"
        )
    return np.array(records)
