"""Binary tight-binding lattice in a static tilt.

Spectra, avoided crossings, localization maps and site-jump dynamics of
a staggered chain under a constant force, together with its exact
correspondence to the Floquet problem of a cosine-driven two-level
system. Hot numerical kernels run in a compiled extension when
available, with a pure-numpy fallback selected at import
(``starkchain.kernel_backend()`` tells which one is active).
"""

from ._kernels import backend_name as kernel_backend
from .dynamics import JumpMetrics, Trajectory, default_time_grid, evolve, jump_metrics
from .errors import ConvergenceError, NumericsError
from .lattice import (
    LatticeParams,
    StateVector,
    TridiagonalMatrix,
    Truncation,
    apply_ladder,
    build_lattice_hamiltonian,
    onsite_energy,
    translate_even,
)
from .rabi import (
    FloquetMatrix,
    Parity,
    RabiParams,
    SpinState,
    build_floquet_hamiltonian,
    build_parity_chain,
    fulton_gouterman,
    lattice_from_rabi,
    monodromy_quasienergies,
    parity_operator,
    physical_state,
    verification_report,
)
from .resonance import (
    AnticrossingResult,
    IPRGrid,
    TwoLevelResult,
    find_anticrossing,
    gap_at,
    ipr_map,
    rabi_transfer_probability,
    shirley_shift,
    two_level_effective,
)
from .spectral import (
    Spectrum,
    SweepTable,
    converge_truncation,
    eigh_tridiagonal,
    ipr,
    select_anchored_eigenstate,
    spectrum_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "kernel_backend",
    "ConvergenceError",
    "NumericsError",
    "LatticeParams",
    "Truncation",
    "TridiagonalMatrix",
    "StateVector",
    "onsite_energy",
    "build_lattice_hamiltonian",
    "apply_ladder",
    "translate_even",
    "Spectrum",
    "SweepTable",
    "eigh_tridiagonal",
    "select_anchored_eigenstate",
    "ipr",
    "spectrum_sweep",
    "converge_truncation",
    "TwoLevelResult",
    "AnticrossingResult",
    "IPRGrid",
    "two_level_effective",
    "rabi_transfer_probability",
    "shirley_shift",
    "gap_at",
    "find_anticrossing",
    "ipr_map",
    "Trajectory",
    "JumpMetrics",
    "evolve",
    "jump_metrics",
    "default_time_grid",
    "RabiParams",
    "Parity",
    "FloquetMatrix",
    "SpinState",
    "build_floquet_hamiltonian",
    "parity_operator",
    "build_parity_chain",
    "lattice_from_rabi",
    "fulton_gouterman",
    "physical_state",
    "monodromy_quasienergies",
    "verification_report",
]
