"""Command-line interface producing reproducible CSV/JSON data files.

Subcommands map one-to-one onto the library's analyses:

    spectrum    eigenvalue fan over an epsilon grid (CSV)
    anticross   locate an order-n avoided crossing (JSON)
    evolve      occupation dynamics from a single site (CSV)
    ipr-map     localization map over (V, epsilon) (CSV)
    shirley     perturbative resonance shift (JSON)
    verify      lattice <-> driven-qubit mapping self-checks (JSON)
    monodromy   time-domain quasienergy pair (JSON)

Exit codes: 0 success, 1 argument/validation error, 2 numerical failure.
Output goes to stdout unless --out is given; identical invocations
produce byte-identical files (floats carry 12 significant digits).
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from .dynamics import evolve
from .errors import NumericsError
from .lattice import LatticeParams, Truncation
from .rabi import RabiParams, monodromy_quasienergies, verification_report
from .resonance import TRUNCATION_TOL, find_anticrossing, ipr_map, shirley_shift
from .spectral import converge_truncation, spectrum_sweep
from .textio import round12, write_json

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERICAL = 2


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage; the contract here is 1
    def exit(self, status=0, message=None):
        if message:
            sys.stderr.write(message)
        raise SystemExit(EXIT_USAGE if status else EXIT_OK)


def _grid(lo: float, hi: float, steps: int, name: str) -> np.ndarray:
    if steps < 2:
        raise ValueError(f"{name} grid needs at least 2 points")
    if not lo < hi:
        raise ValueError(f"{name} grid needs min < max")
    return np.linspace(lo, hi, steps)


def _resolve_truncation(params: LatticeParams, half_width: int | None) -> Truncation:
    if half_width is not None:
        return Truncation(half_width)
    return converge_truncation(params, TRUNCATION_TOL)


def _cmd_spectrum(ns) -> int:
    unit = ns.F if ns.in_f_units else 1.0
    grid = _grid(ns.emin, ns.emax, ns.esteps, "epsilon")
    params = LatticeParams(V=ns.V, epsilon=float(grid[-1]), F=ns.F)
    trunc = _resolve_truncation(params, ns.half_width)
    table = spectrum_sweep(ns.V, ns.F, grid, (ns.window_lo, ns.window_hi), trunc)
    if unit != 1.0:
        table = type(table)(
            epsilon_values=table.epsilon_values / unit,
            energies=[e / unit for e in table.energies],
            window=(table.window[0] / unit, table.window[1] / unit),
        )
    table.write_csv(ns.out)
    return EXIT_OK


def _cmd_anticross(ns) -> int:
    result = find_anticrossing(ns.order, ns.V, ns.F)
    unit = ns.F if ns.in_f_units else 1.0
    write_json(ns.out, result.to_json_dict(energy_unit=unit))
    return EXIT_OK


def _cmd_evolve(ns) -> int:
    params = LatticeParams(V=ns.V, epsilon=ns.epsilon, F=ns.F)
    trunc = _resolve_truncation(params, ns.half_width)
    if ns.tmax <= 0:
        raise ValueError("--tmax must be > 0")
    if ns.samples < 2:
        raise ValueError("--samples must be >= 2")
    times = np.linspace(0.0, ns.tmax, ns.samples)
    traj = evolve(params, ns.site, times, trunc)
    traj.write_csv(ns.out)
    return EXIT_OK


def _cmd_ipr_map(ns) -> int:
    v_grid = _grid(ns.vmin, ns.vmax, ns.vsteps, "V")
    e_grid = _grid(ns.emin, ns.emax, ns.esteps, "epsilon")
    grid = ipr_map(v_grid, e_grid, ns.F)
    grid.write_csv(ns.out)
    return EXIT_OK


def _cmd_shirley(ns) -> int:
    value = shirley_shift(ns.order, ns.V, ns.F)
    write_json(
        ns.out,
        {
            "order": ns.order,
            "V": round12(ns.V),
            "F": round12(ns.F),
            "shift": round12(value),
        },
    )
    return EXIT_OK


def _cmd_verify(ns) -> int:
    rabi = RabiParams(Omega=ns.Omega, omega=ns.omega, lam=ns.lam)
    trunc = Truncation(ns.half_width) if ns.half_width is not None else None
    report = verification_report(rabi, trunc=trunc, step=ns.step)
    write_json(
        ns.out,
        {
            "mapping_exact": report["mapping_exact"],
            "fg_offdiag_norm": round12(report["fg_offdiag_norm"]),
            "parity_commutator_norm": round12(report["parity_commutator_norm"]),
            "monodromy_vs_floquet_max_err": round12(
                report["monodromy_vs_floquet_max_err"]
            ),
        },
    )
    return EXIT_OK


def _cmd_monodromy(ns) -> int:
    rabi = RabiParams(Omega=ns.Omega, omega=ns.omega, lam=ns.lam)
    step = ns.step if ns.step is not None else rabi.period / 10_000
    low, high = monodromy_quasienergies(rabi, step)
    write_json(
        ns.out,
        {
            "Omega": round12(ns.Omega),
            "omega": round12(ns.omega),
            "lambda": round12(ns.lam),
            "step": round12(step),
            "quasienergies": [round12(low), round12(high)],
        },
    )
    return EXIT_OK


def _add_out(p: argparse.ArgumentParser) -> None:
    p.add_argument("--out", metavar="PATH", default=None, help="output file (default: stdout)")


def _add_lattice_args(p: argparse.ArgumentParser, with_epsilon: bool) -> None:
    p.add_argument("--V", type=float, required=True, help="hopping rate")
    p.add_argument("--F", type=float, default=1.0, help="static force (default 1)")
    if with_epsilon:
        p.add_argument("--epsilon", type=float, required=True, help="on-site mismatch")


def _add_rabi_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--Omega", type=float, required=True, help="qubit splitting")
    p.add_argument("--omega", type=float, default=1.0, help="drive frequency (default 1)")
    p.add_argument("--lambda", dest="lam", type=float, required=True, help="drive coupling")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="starkchain", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", help="eigenvalue fan over an epsilon grid (CSV)")
    _add_lattice_args(p, with_epsilon=False)
    p.add_argument("--emin", type=float, required=True)
    p.add_argument("--emax", type=float, required=True)
    p.add_argument("--esteps", type=int, default=121)
    p.add_argument("--window-lo", type=float, required=True, help="lower edge of the energy window")
    p.add_argument("--window-hi", type=float, required=True, help="upper edge of the energy window")
    p.add_argument("--half-width", type=int, default=None, help="override the automatic truncation")
    p.add_argument("--in-f-units", action="store_true", help="report energies divided by F")
    _add_out(p)
    p.set_defaults(func=_cmd_spectrum)

    p = sub.add_parser("anticross", help="locate an order-n avoided crossing (JSON)")
    p.add_argument("--order", type=int, required=True, help="resonance order n >= 0")
    _add_lattice_args(p, with_epsilon=False)
    p.add_argument("--in-f-units", action="store_true", help="report energies divided by F")
    _add_out(p)
    p.set_defaults(func=_cmd_anticross)

    p = sub.add_parser("evolve", help="occupation dynamics from a single site (CSV)")
    _add_lattice_args(p, with_epsilon=True)
    p.add_argument("--site", type=int, default=0, help="initial site (default 0)")
    p.add_argument("--tmax", type=float, required=True, help="final time (units 1/F)")
    p.add_argument("--samples", type=int, default=400)
    p.add_argument("--half-width", type=int, default=None)
    _add_out(p)
    p.set_defaults(func=_cmd_evolve)

    p = sub.add_parser("ipr-map", help="localization map over (V, epsilon) (CSV)")
    p.add_argument("--vmin", type=float, default=0.02)
    p.add_argument("--vmax", type=float, default=1.2)
    p.add_argument("--vsteps", type=int, default=60)
    p.add_argument("--emin", type=float, default=0.2)
    p.add_argument("--emax", type=float, default=6.0)
    p.add_argument("--esteps", type=int, default=120)
    p.add_argument("--F", type=float, default=1.0)
    _add_out(p)
    p.set_defaults(func=_cmd_ipr_map)

    p = sub.add_parser("shirley", help="perturbative resonance shift (JSON)")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--V", type=float, required=True)
    p.add_argument("--F", type=float, default=1.0)
    _add_out(p)
    p.set_defaults(func=_cmd_shirley)

    p = sub.add_parser("verify", help="mapping self-checks (JSON)")
    _add_rabi_args(p)
    p.add_argument("--half-width", type=int, default=None)
    p.add_argument("--step", type=float, default=None, help="monodromy integrator step")
    _add_out(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("monodromy", help="time-domain quasienergy pair (JSON)")
    _add_rabi_args(p)
    p.add_argument("--step", type=float, default=None, help="integrator step (default T/10000)")
    _add_out(p)
    p.set_defaults(func=_cmd_monodromy)

    return parser


def run(argv: list[str]) -> int:
    """Parse and execute; returns the process exit code."""
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return ns.func(ns)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
