"""Binary tight-binding lattice in a static tilt.

The model is an infinite one-dimensional chain with staggered on-site
energies and a linear potential,

    H = -V sum_n (|n><n+1| + |n+1><n|)
        + sum_n (F*n + (eps/2)*(-1)**n) |n><n|,

with hopping ``V``, on-site mismatch ``eps`` and static force ``F``.
Numerically the chain is truncated to sites ``n in [-N, N]`` (hard walls);
every public result downstream is guarded by a window-doubling test, which
is safe because the eigenstates are exponentially localized for the
parameter ranges of interest.

Site indices are absolute: every stored amplitude array carries the site
index of its first entry (``offset``), so site 0 keeps its physical meaning
at any truncation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "LatticeParams",
    "Truncation",
    "TridiagonalMatrix",
    "StateVector",
    "onsite_energy",
    "build_lattice_hamiltonian",
    "apply_ladder",
    "translate_even",
]


@dataclass(frozen=True)
class LatticeParams:
    """Model parameters (V, eps, F); energies in units of hbar = 1.

    ``epsilon`` may be negative: the sign distinguishes the two parity
    chains of the driven-qubit correspondence.
    """

    V: float
    epsilon: float
    F: float

    def __post_init__(self):
        for name in ("V", "epsilon", "F"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.V < 0:
            raise ValueError("hopping V must be >= 0")
        if self.F <= 0:
            raise ValueError("static force F must be > 0")


@dataclass(frozen=True)
class Truncation:
    """Symmetric window of sites n in [-half_width, half_width]."""

    half_width: int

    def __post_init__(self):
        if self.half_width < 1:
            raise ValueError("half_width must be >= 1")

    @property
    def dimension(self) -> int:
        return 2 * self.half_width + 1

    @property
    def sites(self) -> np.ndarray:
        return np.arange(-self.half_width, self.half_width + 1)


@dataclass(frozen=True)
class TridiagonalMatrix:
    """Real symmetric tridiagonal matrix with an absolute site offset.

    Only the diagonal and one off-diagonal are stored, so the matrix is
    symmetric by construction.
    """

    offset: int
    diag: np.ndarray
    offdiag: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "diag", np.asarray(self.diag, dtype=float))
        object.__setattr__(self, "offdiag", np.asarray(self.offdiag, dtype=float))
        if self.offdiag.shape[0] != self.diag.shape[0] - 1:
            raise ValueError("offdiag must have length len(diag) - 1")

    @property
    def dimension(self) -> int:
        return self.diag.shape[0]

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + self.dimension)

    def dense(self) -> np.ndarray:
        h = np.diag(self.diag)
        h += np.diag(self.offdiag, 1)
        h += np.diag(self.offdiag, -1)
        return h

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] = out[:-1] + self.offdiag * v[1:]
        out[1:] = out[1:] + self.offdiag * v[:-1]
        return out

    def inf_norm(self) -> float:
        row = np.abs(self.diag).astype(float)
        row[:-1] += np.abs(self.offdiag)
        row[1:] += np.abs(self.offdiag)
        return float(row.max())


@dataclass(frozen=True)
class StateVector:
    """Amplitudes c_n on the site basis, starting at site ``offset``."""

    offset: int
    amplitudes: np.ndarray
    normalized: bool = field(default=False)

    def __post_init__(self):
        amps = np.asarray(self.amplitudes)
        if amps.dtype not in (np.float64, np.complex128):
            amps = amps.astype(complex)
        object.__setattr__(self, "amplitudes", amps)
        if self.normalized:
            total = float(np.sum(np.abs(amps) ** 2))
            if abs(total - 1.0) > 1e-12:
                raise ValueError("state flagged normalized but sum |c_n|^2 deviates from 1")

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + self.amplitudes.shape[0])

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amplitudes) ** 2)))

    def amplitude_at(self, site: int) -> complex:
        k = site - self.offset
        if k < 0 or k >= self.amplitudes.shape[0]:
            return 0.0
        return self.amplitudes[k]


def onsite_energy(n: int, params: LatticeParams) -> float:
    """On-site energy F*n + (eps/2)*(-1)**n of site ``n``."""
    sign = 1.0 if n % 2 == 0 else -1.0
    return params.F * n + (params.epsilon / 2.0) * sign


def build_lattice_hamiltonian(params: LatticeParams, trunc: Truncation) -> TridiagonalMatrix:
    """Truncated lattice Hamiltonian on sites [-N, N].

    The diagonal carries the staggered, tilted on-site energies; every
    nearest-neighbor coupling equals ``-V``.
    """
    n_lo = -trunc.half_width
    diag = np.array(
        [onsite_energy(n, params) for n in range(n_lo, trunc.half_width + 1)]
    )
    offdiag = np.full(trunc.dimension - 1, -params.V)
    return TridiagonalMatrix(offset=n_lo, diag=diag, offdiag=offdiag)


def _shift(state: StateVector, shift: int) -> tuple[StateVector, float]:
    """Shift amplitudes by ``shift`` sites inside the fixed window.

    Amplitude pushed past a window edge is dropped; the dropped norm
    (sum of |c|^2) is returned alongside the new state.
    """
    amps = state.amplitudes
    dim = amps.shape[0]
    if abs(shift) >= dim:
        raise ValueError(f"shift {shift} exceeds the {dim}-site window")
    out = np.zeros_like(amps)
    if shift >= 0:
        if shift:
            leaked = float(np.sum(np.abs(amps[dim - shift:]) ** 2))
            out[shift:] = amps[: dim - shift]
        else:
            leaked = 0.0
            out[:] = amps
    else:
        leaked = float(np.sum(np.abs(amps[:-shift]) ** 2))
        out[: dim + shift] = amps[-shift:]
    return StateVector(offset=state.offset, amplitudes=out), leaked


def apply_ladder(which: str, state: StateVector) -> tuple[StateVector, float]:
    """Apply a translation-algebra generator to a state.

    ``which`` is one of ``"raise"`` (site n -> n+1), ``"lower"``
    (n -> n-1) or ``"number"`` (multiply the amplitude at site n by n).
    Returns ``(new_state, leaked_norm)``; ``leaked_norm`` is the |c|^2
    weight pushed out of the truncation window by a shift (always 0 for
    ``"number"``).
    """
    if which == "raise":
        return _shift(state, +1)
    if which == "lower":
        return _shift(state, -1)
    if which == "number":
        out = state.amplitudes * state.sites
        return StateVector(offset=state.offset, amplitudes=out), 0.0
    raise ValueError(f"unknown ladder operation {which!r}")


def translate_even(state: StateVector, m: int) -> tuple[StateVector, float]:
    """Translate a state by 2*m sites (the even translation E_+^(2m)).

    Even translations map the staggered lattice onto itself, so applying
    one to an eigenstate yields another eigenstate with energy shifted by
    2*m*F. Returns ``(new_state, leaked_norm)`` exactly like
    :func:`apply_ladder`.
    """
    return _shift(state, 2 * m)
