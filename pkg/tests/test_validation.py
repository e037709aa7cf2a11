"""Tests for the numerical property suite and its random generators."""

import numpy as np
import pytest

from magnomech.config import DEFAULT_TOLERANCES
from magnomech.lyapunov import stability, symplectic_form
from magnomech.validation import (
    PropertySuite, random_stable_drift, random_symplectic, random_physical_cm,
    random_operating_point, run_properties, evaluate_properties,
)

CHECKS = ["lyapunov_residual", "time_integration", "squeezed_vacuum", "thermal_product",
          "symplectic_match", "drift_equivalence", "operating_point"]


def _tolerances(**changes):
    tol = dict(DEFAULT_TOLERANCES, validation_draws=20, time_integration_instances=4)
    tol.update(changes)
    return tol


class TestGenerators:
    """Random draws used by the suite."""

    def test_stable_drift(self, rng):
        for _ in range(20):
            assert stability(random_stable_drift(rng)).max_real_eig <= -0.1 + 1e-9

    def test_symplectic(self, rng):
        S = random_symplectic(rng)
        J = symplectic_form(2)
        np.testing.assert_allclose(S @ J @ S.T, J, atol=1e-10)

    def test_physical_cm(self, rng):
        J = symplectic_form(2)
        for _ in range(20):
            V = random_physical_cm(rng)
            np.testing.assert_allclose(V, V.T, atol=1e-12)
            assert np.min(np.linalg.eigvalsh(V + 0.5j * J)) >= -1e-9

    def test_operating_point(self, rng):
        params, ss = random_operating_point(rng)
        assert params.omega_b > 0
        assert ss.iterations == 1


class TestSuite:
    """Property checks and their summary."""

    @pytest.fixture(scope="class")
    def results(self, base):
        return run_properties(_tolerances(), base=base)

    def test_all_checks_run(self, results):
        assert [r.name for r in results] == CHECKS

    def test_all_pass(self, results):
        failed = [f"{r.name}: {r.detail}" for r in results if not r.passed]
        assert failed == []

    def test_summary(self, results):
        summary = evaluate_properties(results)
        assert summary["passed"] == len(CHECKS)
        assert summary["failed"] == 0
        assert summary["all_passed"] is True
        assert summary["seconds"] >= 0
        assert summary["results"][0]["name"] == "lyapunov_residual"

    def test_corrupted_tolerance_fails(self, base):
        suite = PropertySuite(_tolerances(symplectic_match=-1.0), base=base)
        assert not suite.symplectic_match().passed

    def test_operating_point_skipped_without_base(self):
        result = PropertySuite(_tolerances()).operating_point()
        assert result.passed
        assert "skipped" in result.detail

    def test_unstable_base_fails(self, base):
        unstable = base.with_updates(delta_m=-base.omega_b)
        assert not PropertySuite(_tolerances(), base=unstable).operating_point().passed

    def test_integration_instances_default(self):
        assert DEFAULT_TOLERANCES["time_integration_instances"] == 100
        assert PropertySuite(dict(DEFAULT_TOLERANCES)).instances == 100

    def test_integration_instances_independent_of_draws(self, results):
        detail = next(r.detail for r in results if r.name == "time_integration")
        assert "over 4 instances" in detail

    def test_seeded(self, base):
        first = PropertySuite(_tolerances(), seed=7).lyapunov_residual().detail
        second = PropertySuite(_tolerances(), seed=7).lyapunov_residual().detail
        assert first == second
