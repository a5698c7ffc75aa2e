"""Resonances: two-level model, gap minimization and IPR maps.

Near the n-th order resonance, eps ~ (2n+1)F, the dressed states on
sites 0 and 2n+1 repel and their gap passes through a minimum. For n=0
degenerate perturbation theory in the {|0>, |1>} subspace gives

    H_2 = [[eps/2, -V], [-V, F - eps/2]],
    e_pm = (F +- Delta)/2,  Delta = sqrt((eps-F)^2 + 4 V^2),

which captures the anticrossing but places it at eps = F exactly. The
exact diagonalization shifts it to smaller eps; the displacement
delta = (2n+1)F - eps* is the lattice analogue of the Bloch-Siegert
shift of a driven two-level system, with Shirley's perturbative value

    delta = V^2/F                      (n = 0)
    delta = (2n+1)/(n(n+1)) * V^2/F    (n >= 1).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .errors import NumericsError
from .lattice import LatticeParams, Truncation, build_lattice_hamiltonian, onsite_energy
from .spectral import (
    Spectrum,
    converge_truncation,
    eigh_tridiagonal,
    ipr,
    select_anchored_eigenstate,
)
from .textio import fmt, round12, write_rows

__all__ = [
    "TwoLevelResult",
    "AnticrossingResult",
    "IPRGrid",
    "two_level_effective",
    "rabi_transfer_probability",
    "shirley_shift",
    "gap_at",
    "find_anticrossing",
    "ipr_map",
]

GOLDEN_TOL_FACTOR = 1e-8  # epsilon resolution of the gap minimum, in units of F
COARSE_POINTS = 101
TRUNCATION_TOL = 1e-10

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class TwoLevelResult:
    """Eigendata of the 2x2 effective Hamiltonian at the n=0 resonance."""

    e_plus: float
    e_minus: float
    gap: float
    mixing_angle: float


@dataclass(frozen=True)
class AnticrossingResult:
    order: int
    V: float
    F: float
    epsilon_star: float
    gap_min: float
    shirley_prediction: float  # (2n+1)F - delta_Shirley
    evaluations: int
    truncation_used: Truncation

    def to_json_dict(self, energy_unit: float = 1.0) -> dict:
        u = energy_unit
        return {
            "order": self.order,
            "V": round12(self.V / u),
            "F": round12(self.F / u),
            "epsilon_star": round12(self.epsilon_star / u),
            "gap_min": round12(self.gap_min / u),
            "shirley_prediction": round12(self.shirley_prediction / u),
            "evaluations": self.evaluations,
            "half_width": self.truncation_used.half_width,
        }


@dataclass(frozen=True)
class IPRGrid:
    """IPR of the site-0 anchored eigenstate over a (V, epsilon) grid."""

    V_values: np.ndarray
    epsilon_values: np.ndarray
    ipr: np.ndarray  # shape (len(V_values), len(epsilon_values))

    def to_rows(self) -> Iterable[tuple[str, ...]]:
        for i, v in enumerate(self.V_values):
            for j, eps in enumerate(self.epsilon_values):
                yield (fmt(v), fmt(eps), fmt(self.ipr[i, j]))

    def write_csv(self, out) -> None:
        write_rows(out, ("V", "epsilon", "ipr"), self.to_rows())


def two_level_effective(epsilon: float, F: float, V: float) -> TwoLevelResult:
    """Eigenvalues, gap and mixing angle of the 2x2 effective model."""
    if V < 0:
        raise ValueError("V must be >= 0")
    if F <= 0:
        raise ValueError("F must be > 0")
    gap = math.hypot(epsilon - F, 2.0 * V)
    if gap == 0.0:
        raise ValueError(
            "degenerate two-level model (V=0 and epsilon=F): mixing angle undefined"
        )
    theta = math.asin(min(2.0 * V / gap, 1.0))
    return TwoLevelResult(
        e_plus=(F + gap) / 2.0,
        e_minus=(F - gap) / 2.0,
        gap=gap,
        mixing_angle=theta,
    )


def rabi_transfer_probability(epsilon: float, F: float, V: float, t: float) -> float:
    """Two-level transfer probability (4V^2/Delta^2) sin^2(Delta t / 2)."""
    if t < 0:
        raise ValueError("t must be >= 0")
    gap = math.hypot(epsilon - F, 2.0 * V)
    if gap == 0.0:
        return 0.0
    amplitude = (2.0 * V / gap) ** 2
    return amplitude * math.sin(0.5 * gap * t) ** 2


def shirley_shift(n: int, V: float, F: float) -> float:
    """Perturbative resonance-point displacement delta for order n."""
    if n < 0:
        raise ValueError("resonance order must be >= 0")
    if F <= 0:
        raise ValueError("F must be > 0")
    if n == 0:
        return V * V / F
    return (2.0 * n + 1.0) / (n * (n + 1.0)) * V * V / F


def gap_at(epsilon: float, n: int, V: float, F: float, trunc: Truncation) -> float:
    """Distance between the eigenvalues anchored at sites 0 and 2n+1.

    Each level is identified by maximal weight on its anchor site. When
    mixing is so strong that both anchors elect the same eigenvector, the
    gap is taken between the two eigenvalues with the largest combined
    weight on the pair, which is the same quantity in the two-level limit
    and keeps the objective continuous through the anticrossing.
    """
    if n < 0:
        raise ValueError("resonance order must be >= 0")
    params = LatticeParams(V=V, epsilon=epsilon, F=F)
    target = 2 * n + 1
    spec = eigh_tridiagonal(build_lattice_hamiltonian(params, trunc))
    a0 = select_anchored_eigenstate(spec, 0, anchor_energy=onsite_energy(0, params))
    a1 = select_anchored_eigenstate(spec, target, anchor_energy=onsite_energy(target, params))
    if a0.index != a1.index:
        return abs(a1.eigenvalue - a0.eigenvalue)
    combined = spec.site_weights(0) + spec.site_weights(target)
    combined[spec.edge_flags()] = -1.0
    top_two = np.argsort(combined)[-2:]
    return float(abs(spec.eigenvalues[top_two[1]] - spec.eigenvalues[top_two[0]]))


def _golden_minimize(f, a: float, b: float, tol: float):
    """Golden-section minimum of a unimodal f on [a, b]; returns (x, f(x), evals)."""
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc = f(c)
    fd = f(d)
    evals = 2
    while (b - a) > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
        evals += 1
    x = 0.5 * (a + b)
    return x, f(x), evals + 1


def find_anticrossing(n: int, V: float, F: float) -> AnticrossingResult:
    """Locate the order-n anticrossing: minimize the anchored gap over epsilon.

    The bracket [(2n+1)F - max(4*delta_S, F/2), (2n+1)F + F/2] always
    contains the minimum (resonance orders repeat every 2F, so the high
    side stays clear of the next order). A 101-point coarse scan supplies
    the golden-section start; the refinement stops once the bracket is
    narrower than 1e-8*F.
    """
    if V <= 0:
        raise ValueError("anticrossing search requires V > 0")
    if n < 0:
        raise ValueError("resonance order must be >= 0")
    delta_s = shirley_shift(n, V, F)
    center = (2 * n + 1) * F
    lo = center - max(4.0 * delta_s, F / 2.0)
    hi = center + F / 2.0

    params_center = LatticeParams(V=V, epsilon=center, F=F)
    trunc = converge_truncation(params_center, TRUNCATION_TOL)
    # anchoring site 2n+1 must stay in the window interior
    while 2 * (2 * n + 1) > trunc.half_width:
        trunc = Truncation(2 * trunc.half_width)

    evaluations = 0

    def objective(eps: float) -> float:
        nonlocal evaluations
        evaluations += 1
        return gap_at(eps, n, V, F, trunc)

    grid = np.linspace(lo, hi, COARSE_POINTS)
    coarse = np.array([objective(e) for e in grid])
    i = int(np.argmin(coarse))
    if i == 0 or i == COARSE_POINTS - 1:
        raise NumericsError(
            f"no interior gap minimum in bracket [{lo:g}, {hi:g}] "
            f"(order {n}, V={V:g}, F={F:g})"
        )
    eps_star, gap_min, refine_evals = _golden_minimize(
        objective, grid[i - 1], grid[i + 1], GOLDEN_TOL_FACTOR * F
    )
    return AnticrossingResult(
        order=n,
        V=V,
        F=F,
        epsilon_star=eps_star,
        gap_min=gap_min,
        shirley_prediction=center - delta_s,
        evaluations=evaluations,
        truncation_used=trunc,
    )


def ipr_map(V_grid, epsilon_grid, F: float) -> IPRGrid:
    """IPR of the site-0 anchored eigenstate over a (V, epsilon) grid.

    Each point is evaluated at its own doubling-converged truncation.
    Resonance ridges eps ~ (2n+1)F - delta show up as IPR ~ 1/2 against a
    localized (IPR ~ 1) background at small V and large detuning.
    """
    V_grid = np.asarray(V_grid, dtype=float)
    epsilon_grid = np.asarray(epsilon_grid, dtype=float)
    for name, grid in (("V", V_grid), ("epsilon", epsilon_grid)):
        if grid.ndim != 1 or grid.size == 0:
            raise ValueError(f"{name} grid must be a non-empty 1-D sequence")
        if np.any(np.diff(grid) <= 0):
            raise ValueError(f"{name} grid must be strictly ascending")
    if V_grid[0] <= 0:
        raise ValueError("V grid must be positive")

    values = np.empty((V_grid.size, epsilon_grid.size))
    for i, v in enumerate(V_grid):
        for j, eps in enumerate(epsilon_grid):
            params = LatticeParams(V=float(v), epsilon=float(eps), F=F)
            cache: dict[int, Spectrum] = {}
            trunc = converge_truncation(params, TRUNCATION_TOL, _cache=cache)
            spec = cache[trunc.half_width]
            anchored = select_anchored_eigenstate(
                spec, 0, anchor_energy=onsite_energy(0, params)
            )
            values[i, j] = ipr(anchored.state)
    return IPRGrid(V_values=V_grid, epsilon_values=epsilon_grid, ipr=values)
