#!/usr/bin/env python3
"""Time the compiled kernels against the pure-numpy fallback.

Run from the repository root after installing the package:

    python3 benchmarks/bench_kernels.py

The workloads mirror production use: tilted-lattice eigenproblems at the
window sizes the doubling test actually selects, one-period monodromy
integration, and a brute-force Schroedinger integration.
"""

from __future__ import annotations

import time

import numpy as np

from starkchain._kernels import available_backends, get_backend


def lattice_arrays(half_width):
    n = np.arange(-half_width, half_width + 1)
    diag = 1.0 * n + 0.5 * 4.11467 * np.where(n % 2 == 0, 1.0, -1.0)
    offdiag = np.full(n.size - 1, -1.0)
    return diag, offdiag


def time_call(fn, *args, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def main():
    backends = {name: get_backend(name) for name in available_backends()}
    print(f"backends: {', '.join(backends)}")
    rows = []

    for half_width in (20, 40, 80, 160):
        diag, offdiag = lattice_arrays(half_width)
        label = f"tridiag_eigh dim={2 * half_width + 1}"
        timings = {
            name: time_call(mod.tridiag_eigh, diag, offdiag)
            for name, mod in backends.items()
        }
        rows.append((label, timings))

    timings = {
        name: time_call(mod.rk4_monodromy, 0.3, 1.0, 0.2, 10_000)
        for name, mod in backends.items()
    }
    rows.append(("rk4_monodromy steps=10000", timings))

    diag, offdiag = lattice_arrays(20)
    psi0 = np.zeros(diag.size, dtype=complex)
    psi0[20] = 1.0
    timings = {
        name: time_call(mod.rk4_tridiag_evolve, diag, offdiag, psi0, 1e-3, 10_000, 10_000)
        for name, mod in backends.items()
    }
    rows.append(("rk4_tridiag_evolve dim=41 steps=10000", timings))

    width = max(len(label) for label, _ in rows)
    names = list(backends)
    header = f"{'workload':<{width}}  " + "  ".join(f"{n:>12}" for n in names)
    if len(names) == 2:
        header += "  speedup"
    print(header)
    for label, timings in rows:
        line = f"{label:<{width}}  " + "  ".join(
            f"{timings[n] * 1e3:>10.3f}ms" for n in names
        )
        if len(names) == 2:
            slow, fast = max(timings.values()), min(timings.values())
            line += f"  {slow / fast:>6.1f}x"
        print(line)


if __name__ == "__main__":
    main()
