"""
Bipartite quantum correlations of the Gaussian steady state.

For a pair of modes (u, v) the 4×4 covariance matrix is reduced from the full
8×8 one and used to compute
- the logarithmic negativity E_N = max(0, −ln 2ν⁻), with ν⁻ the smaller
  symplectic eigenvalue of the partially transposed matrix;
- the Rényi-2 Gaussian steerability in both directions, where S_{u→v} is the
  amount by which u steers v.

Vacuum variance is ½, so entanglement means ν⁻ < ½.
"""

import math
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Any, List, Optional, Sequence, Tuple, Union

import numpy as np

from .exceptions import DomainError, NumericalError, PhysicalityError
from .lyapunov import CovarianceMatrix, StabilityReport, symplectic_form
from .model import MODES

logger = logging.getLogger(__name__)

STEERING_THRESHOLD = 1e-10
PHYSICALITY_TOL = 1e-9
GENERIC_MATCH_TOL = 1e-9

DEFAULT_PAIRS: Tuple[Tuple[str, str], ...] = (("c2", "c1"), ("c2", "m"), ("c2", "b"))


class SteeringClass(str, Enum):
    """Direction pattern of Gaussian steering for a bipartition."""
    NO_WAY = "no-way"
    ONE_WAY = "one-way"
    TWO_WAY = "two-way"


@dataclass(frozen=True)
class BipartiteCM:
    """
    Two-mode covariance matrix V4 = [[A, C], [Cᵀ, B]] for modes (u, v).
    """
    V4: np.ndarray
    u: str
    v: str

    @property
    def A(self) -> np.ndarray:
        return self.V4[:2, :2]

    @property
    def B(self) -> np.ndarray:
        return self.V4[2:, 2:]

    @property
    def C(self) -> np.ndarray:
        return self.V4[:2, 2:]


@dataclass(frozen=True)
class PairCorrelations:
    """Entanglement and steering of one bipartition."""
    u: str
    v: str
    E_N: float
    nu_minus: float
    S_u_to_v: float
    S_v_to_u: float
    steering_class: SteeringClass

    def to_dict(self) -> Dict[str, Any]:
        return {
            "u": self.u,
            "v": self.v,
            "E_N": self.E_N,
            "nu_minus": self.nu_minus,
            f"S_{self.u}_to_{self.v}": self.S_u_to_v,
            f"S_{self.v}_to_{self.u}": self.S_v_to_u,
            "steering_class": self.steering_class.value,
        }


@dataclass(frozen=True)
class CorrelationReport:
    """Correlations of several bipartitions at one operating point."""
    pairs: List[PairCorrelations] = field(default_factory=list)
    stable: bool = True
    max_real_eig: Optional[float] = None

    def pair(self, u: str, v: str) -> PairCorrelations:
        for entry in self.pairs:
            if (entry.u, entry.v) == (u, v):
                return entry
        raise KeyError(f"pair ({u}, {v}) not in report")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "stable": self.stable,
            "max_real_eig": self.max_real_eig,
            "pairs": [p.to_dict() for p in self.pairs],
        }


def _as_array(V: Union[CovarianceMatrix, np.ndarray]) -> np.ndarray:
    return V.V if isinstance(V, CovarianceMatrix) else np.asarray(V, dtype=float)


def reduce_cm(V: Union[CovarianceMatrix, np.ndarray], u: str, v: str) -> BipartiteCM:
    """
    Extract the 4×4 covariance matrix of modes u and v, keeping (x, p) order within each mode.
    """
    for mode in (u, v):
        if mode not in MODES:
            raise DomainError(f"Unknown mode label: {mode!r} (expected one of {MODES})")
    if u == v:
        raise DomainError(f"a bipartition needs two different modes, got {u!r} twice")
    V = _as_array(V)
    i, j = 2 * MODES.index(u), 2 * MODES.index(v)
    idx = [i, i + 1, j, j + 1]
    return BipartiteCM(V4=V[np.ix_(idx, idx)].copy(), u=u, v=v)


def partial_transpose(V4: np.ndarray, mode: int = 0) -> np.ndarray:
    """Flip the momentum sign of one mode (0 = first, 1 = second) of a two-mode CM."""
    if mode not in (0, 1):
        raise DomainError(f"mode must be 0 or 1, got {mode!r}")
    P = np.ones(4)
    P[2 * mode + 1] = -1.0
    return V4 * np.outer(P, P)


def symplectic_eigenvalues(V: np.ndarray) -> np.ndarray:
    """
    Symplectic eigenvalues of a 2n×2n covariance matrix, ascending.

    Computed as the moduli of the eigenvalues of iΩV, which come in ± pairs.
    """
    V = np.asarray(V, dtype=float)
    n = V.shape[0] // 2
    eigs = np.linalg.eigvals(1j * symplectic_form(n) @ V)
    return np.sort(np.abs(eigs))[::2]


def log_negativity(bcm: BipartiteCM, check: bool = True) -> Tuple[float, float]:
    """
    Logarithmic negativity of a two-mode Gaussian state.

    Σ̃ = det A + det B − 2 det C and
    ν⁻² = (Σ̃ − √(Σ̃² − 4 det V4)) / 2, evaluated as 2 det V4 / (Σ̃ + √(...)).

    Args:
        bcm: Two-mode covariance matrix
        check: Compare against the generic symplectic spectrum (debug runs only)

    Returns:
        (E_N in nats, ν⁻)
    """
    det_v4 = float(np.linalg.det(bcm.V4))
    if det_v4 <= 0:
        raise PhysicalityError(f"two-mode CM has non-positive determinant {det_v4:.3e}")
    sigma = (float(np.linalg.det(bcm.A)) + float(np.linalg.det(bcm.B))
             - 2.0 * float(np.linalg.det(bcm.C)))
    disc = sigma ** 2 - 4.0 * det_v4
    if disc < 0:
        if disc < -PHYSICALITY_TOL * sigma ** 2:
            raise PhysicalityError(f"Σ̃² < 4 det V4 (discriminant {disc:.3e})")
        disc = 0.0
    nu_minus = math.sqrt(2.0 * det_v4 / (sigma + math.sqrt(disc)))

    if __debug__ and check:
        generic = float(symplectic_eigenvalues(partial_transpose(bcm.V4))[0])
        if abs(generic - nu_minus) > GENERIC_MATCH_TOL * max(1.0, float(np.max(np.abs(bcm.V4)))):
            raise NumericalError(
                f"closed-form ν⁻={nu_minus:.12g} disagrees with generic {generic:.12g}"
            )

    return max(0.0, -math.log(2.0 * nu_minus)), nu_minus


def _renyi2(W: np.ndarray) -> float:
    det = float(np.linalg.det(W))
    if det <= 0:
        raise PhysicalityError(f"covariance block has non-positive determinant {det:.3e}")
    return 0.5 * math.log(det)


def steering(bcm: BipartiteCM, threshold: float = STEERING_THRESHOLD) -> Tuple[float, float]:
    """
    Rényi-2 Gaussian steerability in both directions.

    S_{u→v} = max{0, R(2A) − R(2V4)} and S_{v→u} = max{0, R(2B) − R(2V4)},
    with R(W) = ½ ln det W. Values at or below ``threshold`` are returned as
    exactly 0.0 so rounding noise never reads as steering.

    Returns:
        (S_u_to_v, S_v_to_u)
    """
    if float(np.linalg.det(bcm.V4)) <= 0:
        raise PhysicalityError("two-mode CM has non-positive determinant")
    joint = _renyi2(2.0 * bcm.V4)
    values = (_renyi2(2.0 * bcm.A) - joint, _renyi2(2.0 * bcm.B) - joint)
    return tuple(value if value > threshold else 0.0 for value in values)


def classify_steering(S_uv: float, S_vu: float,
                      threshold: float = STEERING_THRESHOLD) -> SteeringClass:
    """Classify steering as no-way, one-way or two-way using a positivity threshold."""
    positive = (S_uv > threshold) + (S_vu > threshold)
    return (SteeringClass.NO_WAY, SteeringClass.ONE_WAY, SteeringClass.TWO_WAY)[positive]


def correlate_pair(V: Union[CovarianceMatrix, np.ndarray], u: str, v: str) -> PairCorrelations:
    """All measures of one bipartition."""
    bcm = reduce_cm(V, u, v)
    E_N, nu_minus = log_negativity(bcm)
    S_uv, S_vu = steering(bcm)
    return PairCorrelations(u=u, v=v, E_N=E_N, nu_minus=nu_minus,
                            S_u_to_v=S_uv, S_v_to_u=S_vu,
                            steering_class=classify_steering(S_uv, S_vu))


def correlation_report(V: Union[CovarianceMatrix, np.ndarray],
                       pairs: Sequence[Tuple[str, str]] = DEFAULT_PAIRS,
                       stability_report: Optional[StabilityReport] = None) -> CorrelationReport:
    """Measures for every requested pair, tagged with the stability verdict if given."""
    return CorrelationReport(
        pairs=[correlate_pair(V, u, v) for u, v in pairs],
        stable=True if stability_report is None else stability_report.stable,
        max_real_eig=None if stability_report is None else stability_report.max_real_eig,
    )


def two_mode_squeezed_cm(r: float) -> np.ndarray:
    """Two-mode squeezed vacuum with squeezing r (E_N = 2r, steering ln cosh 2r both ways)."""
    ch, sh = math.cosh(2.0 * r) / 2.0, math.sinh(2.0 * r) / 2.0
    return np.array([
        [ch, 0.0, sh, 0.0],
        [0.0, ch, 0.0, -sh],
        [sh, 0.0, ch, 0.0],
        [0.0, -sh, 0.0, ch],
    ])


def thermal_product_cm(n_u: float, n_v: float) -> np.ndarray:
    """Product of two thermal states with mean occupancies n_u and n_v."""
    if n_u < 0 or n_v < 0:
        raise DomainError("thermal occupancies must be >= 0")
    return np.diag([n_u + 0.5, n_u + 0.5, n_v + 0.5, n_v + 0.5])
