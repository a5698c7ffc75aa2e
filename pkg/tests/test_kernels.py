"""Cross-checks of the numerical kernels against LAPACK and each other."""

import numpy as np
import pytest
import scipy.linalg

from starkchain import _kernels
from starkchain._kernels import pure
from starkchain.errors import ConvergenceError, NumericsError


def random_tridiagonal(rng, n, scale=1.0):
    return rng.normal(size=n) * scale, rng.normal(size=n - 1)


class TestTridiagEigh:
    @pytest.mark.parametrize("n", [1, 2, 3, 17, 64, 161])
    def test_against_lapack(self, kernels, n):
        rng = np.random.default_rng(n)
        d, e = random_tridiagonal(rng, n, scale=10.0) if n > 1 else (rng.normal(size=1), np.zeros(0))
        w, z = kernels.tridiag_eigh(d, e)
        order = np.argsort(w)
        w, z = w[order], z[:, order]
        w_ref = scipy.linalg.eigh_tridiagonal(d, e, eigvals_only=True) if n > 1 else d
        scale = max(np.abs(d).max() + (2 * np.abs(e).max() if n > 1 else 0.0), 1.0)
        np.testing.assert_allclose(w, np.sort(w_ref), atol=1e-12 * scale, rtol=0)
        dense = np.diag(d)
        if n > 1:
            dense += np.diag(e, 1) + np.diag(e, -1)
        assert np.abs(dense @ z - z * w).max() <= 1e-12 * scale
        assert np.abs(z.T @ z - np.eye(n)).max() <= 1e-12

    def test_tilted_lattice_spectrum(self, kernels):
        # the production workload: graded diagonal, constant coupling
        n = np.arange(-80, 81)
        d = 1.0 * n + 0.5 * 4.11467 * np.where(n % 2 == 0, 1.0, -1.0)
        e = np.full(n.size - 1, -1.0)
        w, z = kernels.tridiag_eigh(d, e)
        w_ref = scipy.linalg.eigh_tridiagonal(d, e, eigvals_only=True)
        np.testing.assert_allclose(np.sort(w), w_ref, atol=1e-10, rtol=0)

    def test_backends_agree(self):
        if len(_kernels.available_backends()) < 2:
            pytest.skip("only one backend built")
        rng = np.random.default_rng(5)
        d, e = random_tridiagonal(rng, 40)
        results = {}
        for name in _kernels.available_backends():
            w, z = _kernels.get_backend(name).tridiag_eigh(d, e)
            order = np.argsort(w)
            results[name] = (w[order], z[:, order])
        w_a, z_a = results["pure"]
        w_b, z_b = results["compiled"]
        np.testing.assert_allclose(w_a, w_b, rtol=0, atol=1e-13)
        # columns may differ by sign only
        overlap = np.abs(np.sum(z_a * z_b, axis=0))
        np.testing.assert_allclose(overlap, 1.0, atol=1e-12)

    def test_convergence_error_names_size(self, monkeypatch):
        monkeypatch.setattr(pure, "_MAX_SWEEPS", 0)
        rng = np.random.default_rng(1)
        d, e = random_tridiagonal(rng, 12)
        with pytest.raises(ConvergenceError, match="12x12"):
            pure.tridiag_eigh(d, e)


class TestMonodromyKernel:
    def test_undriven_qubit(self, kernels):
        # coupling 0: U(T) = diag(exp(-i*Omega*T/2), exp(+i*Omega*T/2))
        omega, Omega = 1.0, 0.3
        T = 2 * np.pi / omega
        u = kernels.rk4_monodromy(Omega, omega, 0.0, 4000)
        expected = np.diag([np.exp(-1j * Omega * T / 2), np.exp(1j * Omega * T / 2)])
        np.testing.assert_allclose(u, expected, atol=1e-12)

    def test_zero_splitting_gives_identity(self, kernels):
        # H(t) commutes with itself and integrates to zero over a period
        u = kernels.rk4_monodromy(0.0, 1.0, 0.7, 4000)
        np.testing.assert_allclose(u, np.eye(2), atol=1e-10)

    def test_unitary(self, kernels):
        u = kernels.rk4_monodromy(0.3, 1.0, 0.2, 10_000)
        np.testing.assert_allclose(u @ u.conj().T, np.eye(2), atol=1e-12)

    def test_backends_agree(self):
        if len(_kernels.available_backends()) < 2:
            pytest.skip("only one backend built")
        mats = [
            _kernels.get_backend(name).rk4_monodromy(0.3, 1.0, 0.2, 2000)
            for name in _kernels.available_backends()
        ]
        np.testing.assert_allclose(mats[0], mats[1], atol=1e-14)


class TestRk4Evolve:
    def test_against_expm(self, kernels):
        rng = np.random.default_rng(2)
        d = rng.normal(size=9)
        e = rng.normal(size=8) * 0.5
        psi0 = np.zeros(9, dtype=complex)
        psi0[4] = 1.0
        t_final = 2.0
        steps = 2000
        rec = kernels.rk4_tridiag_evolve(d, e, psi0, t_final / steps, steps, steps)
        dense = np.diag(d) + np.diag(e, 1) + np.diag(e, -1)
        expected = scipy.linalg.expm(-1j * dense * t_final) @ psi0
        np.testing.assert_allclose(rec[-1], expected, atol=1e-9)

    def test_record_cadence(self, kernels):
        d = np.zeros(4)
        e = np.full(3, -1.0)
        psi0 = np.array([1, 0, 0, 0], dtype=complex)
        rec = kernels.rk4_tridiag_evolve(d, e, psi0, 1e-3, 1000, 250)
        assert rec.shape == (5, 4)
        np.testing.assert_array_equal(rec[0], psi0)

    def test_norm_drift_guard(self, kernels):
        # giant step on a stiff diagonal: RK4 blows up and must say so
        d = np.linspace(-50, 50, 11)
        e = np.full(10, -1.0)
        psi0 = np.zeros(11, dtype=complex)
        psi0[5] = 1.0
        with np.errstate(over="ignore", invalid="ignore"):
            with pytest.raises(NumericsError, match="step"):
                kernels.rk4_tridiag_evolve(d, e, psi0, 0.5, 200, 200)
