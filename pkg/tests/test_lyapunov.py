"""Tests for the Lyapunov solver and stability analysis."""

import numpy as np
import pytest

from magnomech.exceptions import DomainError, NoSteadyStateError
from magnomech.dynamics import build_drift_diffusion
from magnomech.lyapunov import (
    CovarianceMatrix, solve_lyapunov, stability, routh_hurwitz, lyapunov_residual,
    integrate_covariance, symplectic_form,
)
from magnomech.validation import random_stable_drift


def _rotation_blocks(blocks):
    M = np.zeros((2 * len(blocks), 2 * len(blocks)))
    D = np.zeros_like(M)
    for k, (kappa, delta, thermal) in enumerate(blocks):
        i = 2 * k
        M[i:i + 2, i:i + 2] = [[-kappa, delta], [-delta, -kappa]]
        D[i:i + 2, i:i + 2] = kappa * thermal * np.eye(2)
    return M, D


class TestSolveLyapunov:
    """Algebraic steady-state covariance."""

    @pytest.mark.parametrize("method", ["schur", "kron"])
    def test_isotropic_decay(self, method):
        cm = solve_lyapunov(-0.5 * np.eye(8), np.eye(8), method=method)
        np.testing.assert_allclose(cm.V, np.eye(8), atol=1e-14)
        assert cm.residual <= 1e-14

    @pytest.mark.parametrize("method", ["schur", "kron"])
    def test_damped_rotations(self, method):
        blocks = [(0.1, 1.0, 1.0), (0.3, -2.0, 3.0), (1.0, 0.0, 41.7), (0.05, 0.5, 1.0)]
        M, D = _rotation_blocks(blocks)
        cm = solve_lyapunov(M, D, method=method)
        expected = np.diag(np.repeat([thermal / 2 for _, _, thermal in blocks], 2))
        np.testing.assert_allclose(cm.V, expected, rtol=1e-12, atol=1e-14)

    def test_unstable_drift_rejected(self):
        M = -np.eye(8)
        M[3, 3] = 1.0
        with pytest.raises(NoSteadyStateError) as info:
            solve_lyapunov(M, np.eye(8))
        assert info.value.max_real_eig == pytest.approx(1.0)

    def test_random_draws(self, rng):
        for _ in range(50):
            M = random_stable_drift(rng)
            D = np.diag(rng.uniform(0.0, 2.0, size=8))
            cm = solve_lyapunov(M, D)
            assert lyapunov_residual(M, cm.V, D) <= 1e-10
            np.testing.assert_array_equal(cm.V, cm.V.T)

    def test_methods_agree(self, rng):
        M = random_stable_drift(rng)
        D = np.diag(rng.uniform(0.5, 2.0, size=8))
        schur = solve_lyapunov(M, D).V
        kron = solve_lyapunov(M, D, method="kron").V
        np.testing.assert_allclose(schur, kron, rtol=1e-9, atol=1e-12)

    def test_idempotent_after_symmetrising(self, rng):
        M = random_stable_drift(rng)
        D = np.diag(rng.uniform(0.5, 2.0, size=8))
        V = solve_lyapunov(M, D).V
        again = solve_lyapunov(M, -(M @ V + V @ M.T)).V
        np.testing.assert_allclose(again, V, rtol=1e-9, atol=1e-12)

    def test_mode_permutation_equivariance(self, rng):
        M = random_stable_drift(rng)
        D = np.diag(rng.uniform(0.5, 2.0, size=8))
        order = [4, 5, 0, 1, 6, 7, 2, 3]
        P = np.eye(8)[order]
        V = solve_lyapunov(M, D).V
        V_perm = solve_lyapunov(P @ M @ P.T, P @ D @ P.T).V
        np.testing.assert_allclose(V_perm, P @ V @ P.T, rtol=1e-9, atol=1e-12)

    def test_time_integration_oracle(self, rng):
        M = random_stable_drift(rng, margin=(0.5, 1.0))
        D = np.diag(rng.uniform(0.1, 2.0, size=8))
        V = solve_lyapunov(M, D).V
        t_final = 20.0 / abs(stability(M).max_real_eig)
        V_t = integrate_covariance(M, D, t_final)
        assert np.linalg.norm(V_t - V) / np.linalg.norm(V) <= 1e-6

    def test_invalid_inputs(self):
        with pytest.raises(DomainError):
            solve_lyapunov(-np.eye(8), np.eye(8), method="lu")
        with pytest.raises(DomainError):
            solve_lyapunov(-np.eye(8), np.eye(4))


class TestCovarianceMatrix:
    """Blocks and physicality of the covariance matrix."""

    def test_preset_point_is_physical(self, base_cm):
        assert base_cm.is_physical()
        assert base_cm.residual <= 1e-10
        np.testing.assert_array_equal(base_cm.V, base_cm.V.T)

    def test_blocks(self):
        V = np.arange(64, dtype=float).reshape(8, 8)
        cm = CovarianceMatrix(V=V, residual=0.0)
        np.testing.assert_array_equal(cm.block("m", "c2"), V[2:4, 6:8])
        np.testing.assert_array_equal(cm.block("b", "b"), V[:2, :2])
        with pytest.raises(DomainError):
            cm.block("m", "c3")

    def test_vacuum_and_unphysical(self):
        assert CovarianceMatrix(V=0.5 * np.eye(8), residual=0.0).is_physical()
        assert not CovarianceMatrix(V=0.4 * np.eye(8), residual=0.0).is_physical()

    def test_symplectic_form(self):
        J = symplectic_form(2)
        np.testing.assert_array_equal(J @ J, -np.eye(4))
        assert J[0, 1] == 1.0 and J[1, 0] == -1.0


class TestStability:
    """Eigenvalue-based stability verdict."""

    def test_negative_identity(self):
        report = stability(-np.eye(8))
        assert report.max_real_eig == pytest.approx(-1.0)
        assert report.stable and not report.marginal
        assert report.routh_hurwitz is True
        assert len(report.eigenvalues) == 8

    def test_one_growing_mode(self):
        M = -np.eye(8)
        M[0, 0] = 1.0
        report = stability(M)
        assert not report.stable
        assert report.routh_hurwitz is False

    def test_marginal_oscillator(self):
        M = np.array([[0.0, 1.0], [-1.0, 0.0]])
        report = stability(M, scale=1.0)
        assert report.marginal
        assert abs(report.max_real_eig) <= 1e-12

    def test_damped_oscillator_routh(self):
        assert routh_hurwitz(np.array([[0.0, 1.0], [-1.0, -0.1]]))
        assert not routh_hurwitz(np.array([[0.0, 1.0], [-1.0, 0.1]]))

    def test_preset_point_is_stable(self, base, base_state):
        dd = build_drift_diffusion(base, base_state)
        report = stability(dd.M, scale=base.omega_b)
        assert report.stable
        assert report.max_real_eig < 0

    def test_report_dict(self):
        doc = stability(-np.eye(2)).to_dict()
        assert doc["stable"] is True
        assert doc["eigenvalues"][0] == {"re": -1.0, "im": 0.0}
