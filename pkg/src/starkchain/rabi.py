"""Driven two-level system: Floquet matrix, parity chains, exact mapping.

A qubit driven by a classical cosine field,

    H(t) = (Omega/2) sigma_z - 2 lambda cos(omega t) sigma_x,

becomes time independent in the Floquet picture: on basis states |s, n>
(spin s = +/-, Fourier exponent n) the Floquet Hamiltonian has diagonal
s*Omega/2 + omega*n and couplings -lambda between (s, n) and (-s, n+-1).
It commutes with the parity Pi = -sigma_z (-1)^n, so the problem splits
into two decoupled chains. The odd-parity chain is, entry for entry, the
binary tilted lattice with V = lambda, eps = Omega, F = omega; the even
chain is the same with Omega -> -Omega. The Fulton-Gouterman unitary
makes the split explicit as a block diagonalization.

Quasienergies are defined modulo omega. Two independent cross-checks
live here: time-domain monodromy quasienergies (one-period RK4
propagator) and the m-independence of the physical two-component
evolution reconstructed from a Floquet eigenvector, which is unchanged
when the eigenvector is translated by 2m Fourier slots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from . import _kernels
from .errors import NumericsError
from .lattice import LatticeParams, TridiagonalMatrix, Truncation
from .spectral import eigh_tridiagonal, select_anchored_eigenstate

__all__ = [
    "RabiParams",
    "Parity",
    "FloquetMatrix",
    "SpinState",
    "build_floquet_hamiltonian",
    "parity_operator",
    "build_parity_chain",
    "lattice_from_rabi",
    "fulton_gouterman",
    "floquet_x_basis",
    "fg_block_diagonalize",
    "floquet_eigensystem",
    "translate_floquet_vector",
    "physical_state",
    "fold_quasienergy",
    "monodromy_quasienergies",
    "verification_report",
]

Parity = Literal["even", "odd"]

DEFAULT_MONODROMY_STEPS = 10_000
UNITARITY_LIMIT = 1e-8


@dataclass(frozen=True)
class RabiParams:
    """Qubit splitting Omega, drive frequency omega, coupling lambda."""

    Omega: float
    omega: float
    lam: float

    def __post_init__(self):
        for name in ("Omega", "omega", "lam"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.Omega < 0:
            raise ValueError("Omega must be >= 0 (sign is carried by the parity)")
        if self.omega <= 0:
            raise ValueError("drive frequency omega must be > 0")
        if self.lam < 0:
            raise ValueError("coupling lambda must be >= 0")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega


def _parity_sign(parity: Parity) -> int:
    if parity == "even":
        return +1
    if parity == "odd":
        return -1
    raise ValueError(f"parity must be 'even' or 'odd', got {parity!r}")


@dataclass(frozen=True)
class FloquetMatrix:
    """Dense Floquet Hamiltonian on |s, n>, n-major / spin-minor order.

    Index of |s, n> is 2*(n + N) + (0 for s=+1, 1 for s=-1), which keeps
    the couplings within a bandwidth of three.
    """

    matrix: np.ndarray
    half_width: int

    @property
    def dimension(self) -> int:
        return self.matrix.shape[0]

    def index(self, s: int, n: int) -> int:
        if s not in (+1, -1):
            raise ValueError("spin s must be +1 or -1")
        if abs(n) > self.half_width:
            raise ValueError(f"|n| must be <= {self.half_width}")
        return 2 * (n + self.half_width) + (0 if s == +1 else 1)


@dataclass(frozen=True)
class SpinState:
    """Two-component spin amplitudes (a_plus, a_minus)."""

    a_plus: complex
    a_minus: complex
    normalized: bool = field(default=False)

    def __post_init__(self):
        if self.normalized:
            total = abs(self.a_plus) ** 2 + abs(self.a_minus) ** 2
            if abs(total - 1.0) > 1e-10:
                raise ValueError("spin state flagged normalized but norm deviates from 1")

    def norm(self) -> float:
        return math.sqrt(abs(self.a_plus) ** 2 + abs(self.a_minus) ** 2)


def build_floquet_hamiltonian(rabi: RabiParams, trunc: Truncation) -> FloquetMatrix:
    """Floquet matrix with diagonal s*Omega/2 + omega*n, couplings -lambda."""
    half = trunc.half_width
    ns = np.arange(-half, half + 1)
    dim = 2 * ns.size
    h = np.zeros((dim, dim))
    up = 2 * (ns + half)
    h[up, up] = rabi.Omega / 2.0 + rabi.omega * ns
    h[up + 1, up + 1] = -rabi.Omega / 2.0 + rabi.omega * ns
    for n in ns[:-1]:
        i_up, i_dn = 2 * (n + half), 2 * (n + half) + 1
        j_up, j_dn = i_up + 2, i_dn + 2
        h[i_up, j_dn] = h[j_dn, i_up] = -rabi.lam
        h[i_dn, j_up] = h[j_up, i_dn] = -rabi.lam
    return FloquetMatrix(matrix=h, half_width=half)


def parity_operator(trunc: Truncation) -> np.ndarray:
    """Diagonal of Pi = -sigma_z (-1)^n in the |s, n> ordering (+-1 entries)."""
    half = trunc.half_width
    ns = np.arange(-half, half + 1)
    signs = np.where(ns % 2 == 0, 1.0, -1.0)
    diag = np.empty(2 * ns.size)
    diag[0::2] = -signs  # s = +1
    diag[1::2] = +signs  # s = -1
    return diag


def build_parity_chain(rabi: RabiParams, parity: Parity, trunc: Truncation) -> TridiagonalMatrix:
    """One parity chain as a tridiagonal matrix over the Fourier index n.

    Odd parity carries diagonal omega*n + (Omega/2)(-1)^n, the exact
    on-site pattern of the tilted binary lattice; even parity flips the
    sign of Omega. The arithmetic mirrors the lattice builder so the
    correspondence holds bit for bit.
    """
    psign = _parity_sign(parity)
    half = trunc.half_width
    diag = np.empty(trunc.dimension)
    for k, n in enumerate(range(-half, half + 1)):
        stagger = 1.0 if n % 2 == 0 else -1.0
        if psign < 0:
            diag[k] = rabi.omega * n + (rabi.Omega / 2.0) * stagger
        else:
            diag[k] = rabi.omega * n - (rabi.Omega / 2.0) * stagger
    offdiag = np.full(trunc.dimension - 1, -rabi.lam)
    return TridiagonalMatrix(offset=-half, diag=diag, offdiag=offdiag)


def lattice_from_rabi(rabi: RabiParams, parity: Parity) -> LatticeParams:
    """Lattice parameters realizing a parity chain: V=lambda, eps=+-Omega, F=omega."""
    sign = -_parity_sign(parity)  # odd -> +Omega, even -> -Omega
    return LatticeParams(V=rabi.lam, epsilon=sign * rabi.Omega, F=rabi.omega)


def chain_spin_of(parity: Parity, n: int) -> int:
    """Spin s of the chain state at Fourier index n (from -s(-1)^n = Pi)."""
    stagger = 1 if n % 2 == 0 else -1
    return -_parity_sign(parity) * stagger


def fulton_gouterman(trunc: Truncation) -> np.ndarray:
    """Fulton-Gouterman unitary over |+-x> (x) |n>, spin-major blocks.

    U = (1/sqrt2) [[1, 1], [(-1)^n, -(-1)^n]]; entries are 0 or +-1/sqrt2
    and U^T U is the identity up to exact float cancellation.
    """
    half = trunc.half_width
    m = trunc.dimension
    stagger = np.where(np.arange(-half, half + 1) % 2 == 0, 1.0, -1.0)
    inv_sqrt2 = 1.0 / math.sqrt(2.0)
    u = np.zeros((2 * m, 2 * m))
    idx = np.arange(m)
    u[idx, idx] = inv_sqrt2
    u[idx, idx + m] = inv_sqrt2
    u[idx + m, idx] = stagger * inv_sqrt2
    u[idx + m, idx + m] = -stagger * inv_sqrt2
    return u


def floquet_x_basis(rabi: RabiParams, trunc: Truncation) -> np.ndarray:
    """Floquet matrix in the sigma_x eigenbasis, spin-major blocks.

    Block form [[omega*E0 - lambda*K, -(Omega/2) I],
                [-(Omega/2) I, omega*E0 + lambda*K]]
    with K the nearest-neighbor shift; this is the form the
    Fulton-Gouterman unitary block-diagonalizes.
    """
    half = trunc.half_width
    m = trunc.dimension
    ns = np.arange(-half, half + 1)
    e0 = np.diag(rabi.omega * ns.astype(float))
    k = np.diag(np.ones(m - 1), 1) + np.diag(np.ones(m - 1), -1)
    h = np.zeros((2 * m, 2 * m))
    h[:m, :m] = e0 - rabi.lam * k
    h[m:, m:] = e0 + rabi.lam * k
    coupling = -(rabi.Omega / 2.0) * np.eye(m)
    h[:m, m:] = coupling
    h[m:, :m] = coupling
    return h


def fg_block_diagonalize(rabi: RabiParams, trunc: Truncation):
    """Apply the Fulton-Gouterman transform; returns (even, odd, offdiag_max).

    ``even``/``odd`` are the diagonal blocks of U^T H U (dense), which
    must reproduce the parity chains; ``offdiag_max`` is the largest
    off-diagonal-block entry and vanishes to rounding.
    """
    u = fulton_gouterman(trunc)
    h = floquet_x_basis(rabi, trunc)
    w = u.T @ h @ u
    m = trunc.dimension
    offdiag_max = max(float(np.abs(w[:m, m:]).max()), float(np.abs(w[m:, :m]).max()))
    return w[:m, :m], w[m:, m:], offdiag_max


def floquet_eigensystem(rabi: RabiParams, trunc: Truncation):
    """Quasienergy eigenpairs of the Floquet matrix, labeled by parity.

    Solved per parity chain with the tridiagonal kernel and re-embedded
    into the full |s, n> basis; the union over parities is the complete
    eigensystem. Returns a list of (quasienergy, parity, vector) sorted
    ascending in quasienergy.
    """
    half = trunc.half_width
    dim = 2 * trunc.dimension
    out = []
    for parity in ("even", "odd"):
        chain = build_parity_chain(rabi, parity, trunc)
        spec = eigh_tridiagonal(chain)
        embed = np.array(
            [
                2 * (n + half) + (0 if chain_spin_of(parity, n) == +1 else 1)
                for n in range(-half, half + 1)
            ]
        )
        for k in range(spec.dimension):
            vec = np.zeros(dim)
            vec[embed] = spec.vectors[:, k]
            out.append((float(spec.eigenvalues[k]), parity, vec))
    out.sort(key=lambda item: item[0])
    return out


def translate_floquet_vector(vec: np.ndarray, m: int) -> np.ndarray:
    """Shift a Floquet eigenvector by 2m Fourier slots (both spins alike).

    The result is again an eigenvector, with quasienergy offset by
    2*m*omega; amplitudes pushed past the window are dropped.
    """
    shift = 4 * m  # two spin entries per Fourier slot
    out = np.zeros_like(vec)
    if shift == 0:
        out[:] = vec
    elif shift > 0:
        out[shift:] = vec[:-shift]
    else:
        out[:shift] = vec[-shift:]
    return out


def physical_state(
    coeffs: np.ndarray, quasienergy: float, omega: float, t: float
) -> SpinState:
    """Two-component physical evolution carried by a Floquet eigenvector.

    a_s(t) = exp(-i e t) * sum_n exp(i n omega t) c_{s,n}; the Fourier
    index is auxiliary and contracts away, which is why translating the
    eigenvector by 2m slots (and shifting e by 2m*omega) leaves the
    result unchanged.
    """
    coeffs = np.asarray(coeffs)
    if coeffs.ndim != 1 or coeffs.size % 2 != 0:
        raise ValueError("coeffs must be a flat |s,n> vector of even length")
    m = coeffs.size // 2
    half = (m - 1) // 2
    ns = np.arange(-half, half + 1)
    phase = np.exp(1j * ns * omega * t)
    front = np.exp(-1j * quasienergy * t)
    return SpinState(
        a_plus=complex(front * np.sum(coeffs[0::2] * phase)),
        a_minus=complex(front * np.sum(coeffs[1::2] * phase)),
    )


def fold_quasienergy(e: float, omega: float) -> float:
    """Fold an energy into the zone (-omega/2, omega/2], ties to +omega/2."""
    folded = math.remainder(e, omega)
    if folded <= -0.5 * omega:
        folded += omega
    return folded


def _zone_distance(a: float, b: float, omega: float) -> float:
    return abs(math.remainder(a - b, omega))


def monodromy_quasienergies(rabi: RabiParams, step: float) -> tuple[float, float]:
    """Quasienergies from the one-period propagator, folded and sorted.

    Integrates the 2x2 Schroedinger equation over one drive period with
    RK4 at fixed step (at most ``step``, which must not exceed T/1000),
    then reads e_k = -arg(mu_k)/T off the propagator eigenvalues mu_k.
    """
    period = rabi.period
    if step <= 0 or step > period / 1000.0:
        raise ValueError("step must satisfy 0 < step <= period/1000")
    n_steps = int(math.ceil(period / step))
    u = _kernels.rk4_monodromy(rabi.Omega, rabi.omega, rabi.lam, n_steps)
    drift = float(np.abs(u @ u.conj().T - np.eye(2)).max())
    if drift > UNITARITY_LIMIT:
        raise NumericsError(
            f"monodromy unitarity drift {drift:.2e} exceeds {UNITARITY_LIMIT:g}; "
            "use a smaller step"
        )
    eigenvalues = np.linalg.eigvals(u)
    folded = sorted(
        fold_quasienergy(-float(np.angle(mu)) / period, rabi.omega)
        for mu in eigenvalues
    )
    return folded[0], folded[1]


def verification_report(
    rabi: RabiParams,
    trunc: Truncation | None = None,
    step: float | None = None,
) -> dict:
    """Quantitative self-checks of the lattice <-> driven-qubit mapping.

    Keys: ``mapping_exact`` (parity chains equal the lattice builder bit
    for bit), ``fg_offdiag_norm`` (Fulton-Gouterman block residual),
    ``parity_commutator_norm`` (||[Pi, H]||_max, exactly zero), and
    ``monodromy_vs_floquet_max_err`` (time-domain quasienergies vs the
    central chain eigenvalues, mod omega).
    """
    from .lattice import build_lattice_hamiltonian  # local to avoid cycle at import

    if trunc is None:
        trunc = Truncation(40)
    if step is None:
        step = rabi.period / DEFAULT_MONODROMY_STEPS

    mapping_exact = True
    for parity in ("even", "odd"):
        chain = build_parity_chain(rabi, parity, trunc)
        latt = build_lattice_hamiltonian(lattice_from_rabi(rabi, parity), trunc)
        mapping_exact = mapping_exact and (
            chain.offset == latt.offset
            and np.array_equal(chain.diag, latt.diag)
            and np.array_equal(chain.offdiag, latt.offdiag)
        )

    _, _, fg_offdiag = fg_block_diagonalize(rabi, trunc)

    hf = build_floquet_hamiltonian(rabi, trunc).matrix
    pi = parity_operator(trunc)
    commutator = pi[:, None] * hf - hf * pi[None, :]
    parity_norm = float(np.abs(commutator).max())

    quasi = monodromy_quasienergies(rabi, step)
    worst = 0.0
    for parity in ("even", "odd"):
        spec = eigh_tridiagonal(build_parity_chain(rabi, parity, trunc))
        central = select_anchored_eigenstate(spec, 0)
        folded = fold_quasienergy(central.eigenvalue, rabi.omega)
        err = min(_zone_distance(folded, q, rabi.omega) for q in quasi)
        worst = max(worst, err)

    return {
        "mapping_exact": bool(mapping_exact),
        "fg_offdiag_norm": fg_offdiag,
        "parity_commutator_norm": parity_norm,
        "monodromy_vs_floquet_max_err": worst,
    }
