"""Eigendecomposition, eigenstate anchoring, IPR and spectrum sweeps.

The eigensolver contract is numerical, not algorithmic: eigenvalues
ascending, residuals below 1e-10 * ||H||_inf, pairwise orthonormality
within 1e-10, and a deterministic sign convention (largest-magnitude
component of every eigenvector is positive). The work is done by the
implicit-shift QL kernel selected at import (compiled or pure).

Because the tilted lattice repeats itself under even translations, every
eigenvalue recurs shifted by 2F and raw level indices are meaningless.
Eigenstates are therefore identified by *anchoring*: the eigenvector with
the largest weight on a chosen site represents that site's dressed state.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from . import _kernels
from .errors import ConvergenceError
from .lattice import (
    LatticeParams,
    StateVector,
    TridiagonalMatrix,
    Truncation,
    build_lattice_hamiltonian,
    onsite_energy,
)
from .textio import write_rows

__all__ = [
    "Spectrum",
    "SweepTable",
    "AnchoredEigenstate",
    "eigh_tridiagonal",
    "select_anchored_eigenstate",
    "ipr",
    "spectrum_sweep",
    "converge_truncation",
]

# eigenvectors carrying more norm than this on the outermost two sites of
# either wall are truncation artifacts and excluded from physics output
EDGE_WEIGHT_LIMIT = 1e-6
_EDGE_EXEMPT_DIM = 8  # tiny matrices (2x2 effective models, ...) have no walls

_DOUBLING_SEQUENCE = (20, 40, 80, 160)


@dataclass(frozen=True)
class Spectrum:
    """Full eigensystem of a truncated lattice Hamiltonian.

    ``vectors[:, k]`` is the unit eigenvector of ``eigenvalues[k]``;
    both are ordered ascending in energy. ``offset`` is the site index
    of the first vector component.
    """

    eigenvalues: np.ndarray
    vectors: np.ndarray
    offset: int

    @property
    def dimension(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def sites(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + self.dimension)

    def state(self, k: int) -> StateVector:
        return StateVector(
            offset=self.offset, amplitudes=self.vectors[:, k].copy(), normalized=True
        )

    def site_weights(self, site: int) -> np.ndarray:
        """|<site|phi_k>|^2 for every eigenvector k."""
        return self.vectors[site - self.offset, :] ** 2

    def edge_weights(self) -> np.ndarray:
        """Norm carried by the outermost two sites of each wall, per eigenvector."""
        if self.dimension < _EDGE_EXEMPT_DIM:
            return np.zeros(self.dimension)
        edge = self.vectors[[0, 1, -2, -1], :]
        return np.sum(edge**2, axis=0)

    def edge_flags(self) -> np.ndarray:
        return self.edge_weights() > EDGE_WEIGHT_LIMIT


class AnchoredEigenstate(NamedTuple):
    eigenvalue: float
    state: StateVector
    weight: float
    index: int
    well_anchored: bool  # False when the anchor carries < 10% of the norm


@dataclass(frozen=True)
class SweepTable:
    """Eigenvalues inside a fixed energy window along an epsilon grid."""

    epsilon_values: np.ndarray
    energies: list[np.ndarray]  # one ascending array per epsilon
    window: tuple[float, float]

    def to_rows(self) -> Iterable[tuple[str, ...]]:
        for eps, level_energies in zip(self.epsilon_values, self.energies):
            for idx, energy in enumerate(level_energies):
                yield (f"{eps:.12g}", str(idx), f"{energy:.12g}")

    def write_csv(self, out) -> None:
        write_rows(out, ("epsilon", "level_index", "energy"), self.to_rows())


def eigh_tridiagonal(matrix: TridiagonalMatrix) -> Spectrum:
    """Diagonalize a real symmetric tridiagonal matrix.

    Eigenvalues are returned ascending; each eigenvector's global sign is
    fixed so its largest-magnitude component is positive (first such
    component on ties), which makes output files reproducible.

    Raises
    ------
    ConvergenceError
        If the QL iteration exceeds its sweep budget; the message names
        the matrix size.
    """
    w, z = _kernels.tridiag_eigh(matrix.diag, matrix.offdiag)
    order = np.argsort(w, kind="stable")
    w = w[order]
    z = np.ascontiguousarray(z[:, order])
    anchor = np.argmax(np.abs(z), axis=0)
    signs = np.sign(z[anchor, np.arange(z.shape[1])])
    signs[signs == 0] = 1.0
    z *= signs
    return Spectrum(eigenvalues=w, vectors=z, offset=matrix.offset)


def ipr(state: StateVector) -> float:
    """Inverse participation ratio sum |c_n|^4 / (sum |c_n|^2)^2.

    1 for a state on a single site, 1/M for uniform spread over M sites,
    and 1/2 for the equal two-site superpositions that mark a resonance.
    """
    a2 = np.abs(state.amplitudes) ** 2
    total = float(a2.sum())
    if total == 0.0:
        raise ValueError("IPR of a zero vector is undefined")
    return float(np.sum(a2**2) / total**2)


def _interior_limit(dimension: int) -> int:
    half_width = (dimension - 1) // 2
    return half_width // 2


def select_anchored_eigenstate(
    spec: Spectrum, site: int, anchor_energy: float | None = None
) -> AnchoredEigenstate:
    """Pick the eigenpair with maximal weight on a given site.

    The site must lie in the window interior (|site| <= N/2) so that the
    choice reflects lattice physics rather than wall effects; eigenvectors
    flagged as edge states are skipped. Exact weight ties are broken by
    eigenvalue proximity to ``anchor_energy`` when given. A result with
    ``well_anchored=False`` signals that no eigenvector holds even 10% of
    its norm on the requested site.
    """
    if abs(site) > _interior_limit(spec.dimension):
        raise ValueError(
            f"anchor site {site} outside the window interior "
            f"(|site| <= {_interior_limit(spec.dimension)})"
        )
    weights = spec.site_weights(site).copy()
    weights[spec.edge_flags()] = -1.0
    best = float(weights.max())
    candidates = np.flatnonzero(weights == best)
    if candidates.size > 1 and anchor_energy is not None:
        k = candidates[np.argmin(np.abs(spec.eigenvalues[candidates] - anchor_energy))]
    else:
        k = candidates[0]
    k = int(k)
    return AnchoredEigenstate(
        eigenvalue=float(spec.eigenvalues[k]),
        state=spec.state(k),
        weight=best,
        index=k,
        well_anchored=best >= 0.1,
    )


def spectrum_sweep(
    V: float,
    F: float,
    epsilon_grid: np.ndarray,
    window: tuple[float, float],
    trunc: Truncation,
) -> SweepTable:
    """Eigenvalues inside ``window`` for each epsilon of an ascending grid.

    Edge states are dropped, so the table contains only converged lattice
    levels; this is the raw material for avoided-crossing fans.
    """
    epsilon_grid = np.asarray(epsilon_grid, dtype=float)
    if epsilon_grid.ndim != 1 or epsilon_grid.size == 0:
        raise ValueError("epsilon grid must be a non-empty 1-D sequence")
    if np.any(np.diff(epsilon_grid) <= 0):
        raise ValueError("epsilon grid must be strictly ascending")
    lo, hi = window
    if not lo < hi:
        raise ValueError("energy window must satisfy lo < hi")
    energies = []
    for eps in epsilon_grid:
        spec = _spectrum_for(LatticeParams(V=V, epsilon=float(eps), F=F), trunc)
        keep = (
            (spec.eigenvalues >= lo)
            & (spec.eigenvalues <= hi)
            & ~spec.edge_flags()
        )
        energies.append(spec.eigenvalues[keep].copy())
    return SweepTable(epsilon_values=epsilon_grid, energies=energies, window=(lo, hi))


def _spectrum_for(params: LatticeParams, trunc: Truncation) -> Spectrum:
    return eigh_tridiagonal(build_lattice_hamiltonian(params, trunc))


def _central_window_deviation(params: LatticeParams, small: Spectrum, big: Spectrum) -> float:
    """Largest shift of a central-window eigenvalue under window doubling.

    Central window means energies |e| <= F*N/2 of the smaller run; each is
    matched to the nearest eigenvalue of the doubled run. Matching by
    energy (rather than by anchored site) stays stable at anticrossings,
    where near-degenerate pairs can swap their site character.
    """
    half_width = (small.dimension - 1) // 2
    limit = params.F * half_width / 2.0
    central = small.eigenvalues[np.abs(small.eigenvalues) <= limit]
    if central.size == 0:
        return np.inf
    pos = np.searchsorted(big.eigenvalues, central)
    pos = np.clip(pos, 1, big.eigenvalues.size - 1)
    nearest = np.minimum(
        np.abs(big.eigenvalues[pos] - central),
        np.abs(big.eigenvalues[pos - 1] - central),
    )
    return float(nearest.max())


def converge_truncation(
    params: LatticeParams, tol: float, *, _cache: dict | None = None
) -> Truncation:
    """Smallest window from {20, 40, 80, 160} stable under doubling.

    A half-width N is accepted once its central-window eigenvalues move by
    less than ``tol`` when recomputed at 2N. Exponential localization makes
    this converge at N=20 for the parameter ranges of interest; failure at
    N=160 raises ConvergenceError.
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    spectra: dict[int, Spectrum] = _cache if _cache is not None else {}

    def spectrum_at(n: int) -> Spectrum:
        if n not in spectra:
            spectra[n] = _spectrum_for(params, Truncation(n))
        return spectra[n]

    for n in _DOUBLING_SEQUENCE:
        deviation = _central_window_deviation(params, spectrum_at(n), spectrum_at(2 * n))
        if deviation < tol:
            return Truncation(n)
    raise ConvergenceError(
        f"central eigenvalues still move by more than {tol:g} at half-width "
        f"{_DOUBLING_SEQUENCE[-1]} (V={params.V}, epsilon={params.epsilon}, F={params.F})"
    )


def anchored_eigenstate_at(
    params: LatticeParams, trunc: Truncation, site: int
) -> AnchoredEigenstate:
    """Convenience: diagonalize and anchor at ``site`` in one call."""
    spec = _spectrum_for(params, trunc)
    return select_anchored_eigenstate(spec, site, anchor_energy=onsite_energy(site, params))
