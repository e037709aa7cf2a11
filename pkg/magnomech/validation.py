"""
Built-in property suite for the ``validate`` command.

Checks the numerical core against independent oracles:
- Lyapunov residual on random stable drift matrices
- agreement with direct time integration of dV/dt = MV + VMᵀ + D
- two-mode squeezed vacuum and thermal product states (closed-form E_N and steering)
- closed-form versus generic symplectic eigenvalues on random physical states
- drift matrix template versus ladder-operator derivation, and the trace identity
- stability and physicality at the base operating point
"""

import math
import time
import logging
from dataclasses import dataclass, asdict
from typing import Callable, Dict, Any, List, Optional, Tuple

import numpy as np
from scipy.stats import unitary_group

from .exceptions import MagnomechError
from .model import SystemParams, TWO_PI
from .steadystate import SteadyState, solve_steady_state
from .dynamics import build_drift, derive_drift, build_drift_diffusion
from .lyapunov import solve_lyapunov, stability, integrate_covariance, lyapunov_residual
from .measures import (
    BipartiteCM, log_negativity, steering, symplectic_eigenvalues, partial_transpose,
    two_mode_squeezed_cm, thermal_product_cm, correlation_report,
)

logger = logging.getLogger(__name__)


@dataclass
class PropertyResult:
    """Outcome of one property check."""
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def random_stable_drift(rng: np.random.Generator, n: int = 8,
                        margin: tuple = (0.1, 1.0)) -> np.ndarray:
    """Random real matrix shifted so that its largest real eigenvalue is −margin."""
    A = rng.normal(size=(n, n)) / math.sqrt(n)
    shift = np.max(np.linalg.eigvals(A).real) + rng.uniform(*margin)
    return A - shift * np.eye(n)


def random_symplectic(rng: np.random.Generator, n_modes: int = 2,
                      max_squeezing: float = 1.0) -> np.ndarray:
    """
    Random symplectic matrix in (x1, p1, x2, p2, ...) ordering.

    Built as passive × squeezing × passive, the passive parts from Haar-random unitaries.
    """
    perm = np.zeros((2 * n_modes, 2 * n_modes))
    for i in range(n_modes):
        perm[2 * i, i] = 1.0
        perm[2 * i + 1, n_modes + i] = 1.0

    def passive() -> np.ndarray:
        if n_modes > 1:
            U = unitary_group.rvs(n_modes, random_state=rng)
        else:
            U = np.array([[np.exp(1j * rng.uniform(0, TWO_PI))]])
        O = np.block([[U.real, -U.imag], [U.imag, U.real]])
        return perm @ O @ perm.T

    r = rng.uniform(0.0, max_squeezing, size=n_modes)
    Z = np.diag(np.ravel(np.column_stack([np.exp(-r), np.exp(r)])))
    return passive() @ Z @ passive()


def random_physical_cm(rng: np.random.Generator, n_modes: int = 2,
                       max_squeezing: float = 1.0, max_thermal: float = 2.0) -> np.ndarray:
    """Random Gaussian covariance matrix S·diag(ν)·Sᵀ with every ν >= ½."""
    nu = 0.5 + rng.uniform(0.0, max_thermal, size=n_modes)
    S = random_symplectic(rng, n_modes, max_squeezing)
    V = S @ np.diag(np.repeat(nu, 2)) @ S.T
    return 0.5 * (V + V.T)


def random_operating_point(rng: np.random.Generator) -> Tuple[SystemParams, SteadyState]:
    """Random parameters and mean-field amplitudes for drift-matrix checks."""
    params = SystemParams(
        omega_b=rng.uniform(0.5, 2.0),
        kappa_1=rng.uniform(0.0, 1.0), kappa_2=rng.uniform(0.0, 1.0),
        kappa_m=rng.uniform(0.0, 1.0), gamma_b=rng.uniform(0.0, 0.1),
        Gamma=rng.uniform(0.0, 1.0), G_mb=rng.uniform(0.0, 1.0),
        xi=rng.uniform(0.0, 1.0), phi=rng.uniform(0.0, TWO_PI),
        delta_1=rng.normal(), delta_2=rng.normal(), delta_m0=rng.normal(),
    )
    m_s = complex(rng.normal(), rng.normal()) * 10.0
    ss = SteadyState(m_s=m_s, c1_s=0j, c2_s=0j, q_s=0.0, p_s=0.0,
                     delta_m_eff=rng.normal(), delta_m0=params.delta_m0,
                     iterations=1, residual=0.0)
    return params, ss


class PropertySuite:
    """Numerical property checks with configurable tolerances."""

    def __init__(self, tolerances: Dict[str, float], seed: int = 20240601,
                 base: Optional[SystemParams] = None):
        """
        Args:
            tolerances: Thresholds keyed like the config "tolerances" section
            seed: Seed for every random draw
            base: Operating point for the stability/physicality check
        """
        self.tol = tolerances
        self.seed = seed
        self.base = base
        self.draws = int(tolerances.get("validation_draws", 1000))
        self.instances = int(tolerances.get("time_integration_instances", 100))

    def _rng(self) -> np.random.Generator:
        return np.random.default_rng(self.seed)

    def lyapunov_residual(self) -> PropertyResult:
        rng = self._rng()
        worst = 0.0
        for _ in range(self.draws):
            M = random_stable_drift(rng)
            D = np.diag(rng.uniform(0.0, 2.0, size=8))
            cm = solve_lyapunov(M, D)
            worst = max(worst, lyapunov_residual(M, cm.V, D))
        limit = self.tol["lyapunov_residual"]
        return PropertyResult("lyapunov_residual", worst <= limit,
                              f"max residual {worst:.3e} over {self.draws} draws (limit {limit:.1e})")

    def time_integration(self) -> PropertyResult:
        rng = self._rng()
        instances = self.instances
        worst = 0.0
        for _ in range(instances):
            M = random_stable_drift(rng, margin=(0.5, 1.0))
            D = np.diag(rng.uniform(0.1, 2.0, size=8))
            V = solve_lyapunov(M, D).V
            t_final = 20.0 / abs(stability(M).max_real_eig)
            V_t = integrate_covariance(M, D, t_final)
            worst = max(worst, float(np.linalg.norm(V_t - V) / np.linalg.norm(V)))
        limit = self.tol["time_integration"]
        return PropertyResult("time_integration", worst <= limit,
                              f"max relative deviation {worst:.3e} over {instances} instances "
                              f"(limit {limit:.1e})")

    def squeezed_vacuum(self) -> PropertyResult:
        limit = self.tol["measure_oracle"]
        worst = 0.0
        for r in (0.1, 0.5, 1.0):
            bcm = BipartiteCM(two_mode_squeezed_cm(r), "c1", "c2")
            E_N, _ = log_negativity(bcm)
            S_uv, S_vu = steering(bcm)
            target = math.log(math.cosh(2 * r))
            worst = max(worst, abs(E_N - 2 * r), abs(S_uv - target), abs(S_vu - target))
        return PropertyResult("squeezed_vacuum", worst <= limit,
                              f"max deviation {worst:.3e} from E_N = 2r, S = ln cosh 2r")

    def thermal_product(self) -> PropertyResult:
        limit = self.tol["measure_oracle"]
        worst = 0.0
        for n in (0.0, 1.0, 10.0):
            bcm = BipartiteCM(thermal_product_cm(n, n), "b", "m")
            E_N, nu = log_negativity(bcm)
            worst = max(worst, E_N, *steering(bcm), abs(nu - (n + 0.5)))
        return PropertyResult("thermal_product", worst <= limit,
                              f"max deviation {worst:.3e} from E_N = S = 0, ν⁻ = n + ½")

    def symplectic_match(self) -> PropertyResult:
        rng = self._rng()
        worst = 0.0
        for _ in range(self.draws):
            V4 = random_physical_cm(rng)
            _, nu = log_negativity(BipartiteCM(V4, "c1", "c2"), check=False)
            generic = symplectic_eigenvalues(partial_transpose(V4))[0]
            worst = max(worst, abs(nu - generic) / max(1.0, float(np.max(np.abs(V4)))))
        limit = self.tol["symplectic_match"]
        return PropertyResult("symplectic_match", worst <= limit,
                              f"max scaled mismatch {worst:.3e} over {self.draws} states")

    def drift_equivalence(self) -> PropertyResult:
        rng = self._rng()
        worst = 0.0
        worst_trace = 0.0
        for _ in range(self.draws):
            params, ss = random_operating_point(rng)
            template = build_drift(params, ss)
            derived = derive_drift(params, ss)
            scale = max(1.0, float(np.max(np.abs(template))))
            worst = max(worst, float(np.max(np.abs(template - derived))) / scale)
            expected = -params.gamma_b - 2 * (params.kappa_m + params.kappa_1 + params.kappa_2)
            worst_trace = max(worst_trace, abs(np.trace(template) - expected) / scale)
        limit = self.tol["drift_equivalence"]
        return PropertyResult("drift_equivalence", max(worst, worst_trace) <= limit,
                              f"max entry mismatch {worst:.3e}, trace mismatch {worst_trace:.3e}")

    def operating_point(self) -> PropertyResult:
        if self.base is None:
            return PropertyResult("operating_point", True, "skipped (no base point)")
        ss = solve_steady_state(self.base, tol=self.tol["steady_state_tol"],
                                max_iter=int(self.tol["max_iter"]))
        dd = build_drift_diffusion(self.base, ss)
        report = stability(dd.M, scale=self.base.omega_b)
        if not report.stable:
            return PropertyResult("operating_point", False,
                                  f"unstable, max Re λ = {report.max_real_eig:.3e}")
        cm = solve_lyapunov(dd.M, dd.D)
        correlation_report(cm, stability_report=report)
        return PropertyResult("operating_point", cm.is_physical(),
                              f"max Re λ = {report.max_real_eig:.3e}, |m_s| = {abs(ss.m_s):.3e}")

    def checks(self) -> List[Callable[[], PropertyResult]]:
        return [self.lyapunov_residual, self.time_integration, self.squeezed_vacuum,
                self.thermal_product, self.symplectic_match, self.drift_equivalence,
                self.operating_point]


def run_properties(tolerances: Dict[str, float], base: Optional[SystemParams] = None,
                   seed: int = 20240601) -> List[PropertyResult]:
    """
    Run every property check; an exception inside a check counts as a failure.

    Returns:
        One PropertyResult per check, with wall-clock seconds
    """
    suite = PropertySuite(tolerances, seed=seed, base=base)
    results = []
    for check in suite.checks():
        started = time.perf_counter()
        try:
            result = check()
        except (MagnomechError, np.linalg.LinAlgError) as e:
            result = PropertyResult(check.__name__, False, f"{type(e).__name__}: {e}")
        result.seconds = time.perf_counter() - started
        logger.debug("%s: %s (%.3fs)", result.name, result.passed, result.seconds)
        results.append(result)
    return results


def evaluate_properties(results: List[PropertyResult]) -> Dict[str, Any]:
    """Summary dict of a suite run."""
    return {
        "passed": sum(r.passed for r in results),
        "failed": sum(not r.passed for r in results),
        "all_passed": all(r.passed for r in results),
        "seconds": sum(r.seconds for r in results),
        "results": [r.to_dict() for r in results],
    }
