"""
Steady-state covariance matrix and dynamical stability.

The covariance matrix V of the quadrature fluctuations solves the continuous
Lyapunov equation M·V + V·Mᵀ = −D, which has a unique solution only when M is
Hurwitz-stable. ``solve_lyapunov`` therefore checks stability first and refuses
unstable drift matrices instead of returning a meaningless V.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional, Tuple, List

import numpy as np
import scipy.linalg
from scipy.integrate import solve_ivp

from .exceptions import DomainError, NoSteadyStateError, NumericalError
from .model import MODES
from .dynamics import QUADRATURE_ORDER

logger = logging.getLogger(__name__)

RESIDUAL_TOL = 1e-10
MARGINAL_RTOL = 1e-9

_MODE_INDEX = {mode: 2 * k for k, mode in enumerate(MODES)}


def symplectic_form(n_modes: int) -> np.ndarray:
    """Block-diagonal symplectic form ⊕ [[0, 1], [−1, 0]] for (x, p) ordered modes."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


@dataclass(frozen=True)
class CovarianceMatrix:
    """Steady-state covariance matrix with its Lyapunov residual."""
    V: np.ndarray
    residual: float
    ordering: Tuple[str, ...] = QUADRATURE_ORDER

    def block(self, mode_u: str, mode_v: str) -> np.ndarray:
        """2×2 block between two modes (``mode_u == mode_v`` gives the local block)."""
        for mode in (mode_u, mode_v):
            if mode not in _MODE_INDEX:
                raise DomainError(f"Unknown mode label: {mode!r}")
        i, j = _MODE_INDEX[mode_u], _MODE_INDEX[mode_v]
        return self.V[i:i + 2, j:j + 2]

    def is_physical(self, tol: float = 1e-10) -> bool:
        """Uncertainty principle V + (i/2)Ω ≥ 0 within ``tol`` (relative to max|V| when above 1)."""
        n = self.V.shape[0] // 2
        eigs = np.linalg.eigvalsh(self.V + 0.5j * symplectic_form(n))
        return bool(eigs.min() >= -tol * max(1.0, np.max(np.abs(self.V))))


@dataclass(frozen=True)
class StabilityReport:
    """Eigenvalue summary of a drift matrix."""
    max_real_eig: float
    stable: bool
    eigenvalues: List[complex] = field(default_factory=list)
    marginal: bool = False
    routh_hurwitz: Optional[bool] = None

    def to_dict(self):
        return {
            "max_real_eig": self.max_real_eig,
            "stable": self.stable,
            "marginal": self.marginal,
            "routh_hurwitz": self.routh_hurwitz,
            "eigenvalues": [{"re": z.real, "im": z.imag} for z in self.eigenvalues],
        }


def _matrix_scale(M: np.ndarray) -> float:
    scale = float(np.max(np.abs(M))) if M.size else 0.0
    return scale if scale > 0 else 1.0


def stability(M: np.ndarray, scale: Optional[float] = None) -> StabilityReport:
    """
    Eigenvalues of the drift matrix and the stability verdict.

    Args:
        M: Square drift matrix
        scale: Frequency scale for the marginal band; defaults to max|M_ij|

    Returns:
        StabilityReport with stable ⇔ max Re λ < 0. Points with
        |max Re λ| <= 1e-9·scale are flagged as marginal.
    """
    M = np.asarray(M, dtype=float)
    try:
        eigs = scipy.linalg.eigvals(M)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise NumericalError(f"eigenvalue computation failed: {e}") from e
    if not np.all(np.isfinite(eigs)):
        raise NumericalError("eigenvalue computation returned non-finite values")
    if scale is None:
        scale = _matrix_scale(M)
    max_real = float(np.max(eigs.real))
    return StabilityReport(
        max_real_eig=max_real,
        stable=max_real < 0,
        eigenvalues=[complex(z) for z in eigs],
        marginal=abs(max_real) <= MARGINAL_RTOL * scale,
        routh_hurwitz=routh_hurwitz(M),
    )


def routh_hurwitz(M: np.ndarray) -> bool:
    """
    Routh-Hurwitz test on the characteristic polynomial of M (normalised by max|M|).

    True when every entry of the first column of the Routh array is positive.
    Zero pivots count as not stable.
    """
    coeffs = np.real(np.poly(np.asarray(M, dtype=float) / _matrix_scale(M)))
    degree = len(coeffs) - 1
    if np.any(coeffs <= 0):
        return False
    width = degree // 2 + 1
    prev = np.zeros(width)
    cur = np.zeros(width)
    prev[:len(coeffs[0::2])] = coeffs[0::2]
    cur[:len(coeffs[1::2])] = coeffs[1::2]
    for _ in range(degree - 1):
        if cur[0] <= 0:
            return False
        nxt = np.zeros(width)
        nxt[:-1] = (cur[0] * prev[1:] - prev[0] * cur[1:]) / cur[0]
        prev, cur = cur, nxt
    return bool(cur[0] > 0)


def lyapunov_residual(M: np.ndarray, V: np.ndarray, D: np.ndarray) -> float:
    """‖M·V + V·Mᵀ + D‖_F / ‖D‖_F (absolute norm when D = 0)."""
    R = M @ V + V @ M.T + D
    d_norm = np.linalg.norm(D)
    return float(np.linalg.norm(R) / (d_norm if d_norm > 0 else 1.0))


def _kron_solve(A: np.ndarray, Q: np.ndarray) -> np.ndarray:
    n = A.shape[0]
    K = np.kron(np.eye(n), A) + np.kron(A, np.eye(n))
    condition = float(np.linalg.cond(K))
    if not np.isfinite(condition) or condition > 1.0 / np.finfo(float).eps:
        raise NumericalError("vectorised Lyapunov system is singular to working precision",
                             condition=condition)
    try:
        x = np.linalg.solve(K, Q.reshape(-1))
    except np.linalg.LinAlgError as e:
        raise NumericalError(f"vectorised Lyapunov solve failed: {e}", condition=condition) from e
    return x.reshape(n, n)


def _solve_scaled(M: np.ndarray, rhs: np.ndarray, method: str) -> np.ndarray:
    """Solve M·X + X·Mᵀ = rhs after dividing by max|M|."""
    s = _matrix_scale(M)
    A, Q = M / s, rhs / s
    if method == "kron":
        X = _kron_solve(A, Q)
    else:
        try:
            X = scipy.linalg.solve_continuous_lyapunov(A, Q)
        except (np.linalg.LinAlgError, ValueError) as e:
            raise NumericalError(f"Bartels-Stewart solve failed: {e}") from e
    return 0.5 * (X + X.T)


def solve_lyapunov(M: np.ndarray, D: np.ndarray, method: str = "schur",
                   residual_tol: float = RESIDUAL_TOL) -> CovarianceMatrix:
    """
    Solve M·V + V·Mᵀ = −D for the steady-state covariance matrix.

    Args:
        M: Drift matrix (must be Hurwitz-stable)
        D: Diffusion matrix
        method: "schur" (Bartels-Stewart) or "kron" (vectorised linear solve)
        residual_tol: Target for ‖MV + VMᵀ + D‖_F/‖D‖_F

    Returns:
        Symmetric CovarianceMatrix

    Raises:
        NoSteadyStateError: M has an eigenvalue with non-negative real part
        NumericalError: the solve fails or misses the residual target after refinement
    """
    if method not in ("schur", "kron"):
        raise DomainError(f"Unknown Lyapunov method: {method!r}")
    M = np.asarray(M, dtype=float)
    D = np.asarray(D, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or D.shape != M.shape:
        raise DomainError(f"M and D must be square and of equal shape, got {M.shape} and {D.shape}")

    report = stability(M)
    if not report.stable:
        raise NoSteadyStateError(
            f"drift matrix is unstable (max Re λ = {report.max_real_eig:.6e})",
            max_real_eig=report.max_real_eig,
        )

    V = _solve_scaled(M, -D, method)
    residual = lyapunov_residual(M, V, D)
    if residual > residual_tol:
        logger.debug("Lyapunov residual %.3e above target, refining", residual)
        R = M @ V + V @ M.T + D
        V = V + _solve_scaled(M, -R, method)
        residual = lyapunov_residual(M, V, D)
    if residual > residual_tol:
        raise NumericalError(f"Lyapunov residual {residual:.3e} exceeds {residual_tol:.1e}")

    ordering = QUADRATURE_ORDER if M.shape == (8, 8) else tuple(str(i) for i in range(M.shape[0]))
    return CovarianceMatrix(V=V, residual=residual, ordering=ordering)


def integrate_covariance(M: np.ndarray, D: np.ndarray, t_final: float,
                         V0: Optional[np.ndarray] = None, rtol: float = 1e-10,
                         atol: float = 1e-12) -> np.ndarray:
    """
    Integrate dV/dt = M·V + V·Mᵀ + D from V0 (zero by default) up to ``t_final``.

    Used as an independent oracle for the algebraic solution.
    """
    M = np.asarray(M, dtype=float)
    D = np.asarray(D, dtype=float)
    n = M.shape[0]
    V0 = np.zeros((n, n)) if V0 is None else np.asarray(V0, dtype=float)

    def rhs(_t, y):
        V = y.reshape(n, n)
        return (M @ V + V @ M.T + D).reshape(-1)

    sol = solve_ivp(rhs, (0.0, t_final), V0.reshape(-1), method="DOP853",
                    rtol=rtol, atol=atol)
    if not sol.success:
        raise NumericalError(f"covariance integration failed: {sol.message}")
    V = sol.y[:, -1].reshape(n, n)
    return 0.5 * (V + V.T)
