"""
Linearised fluctuation dynamics: drift matrix M and diffusion matrix D.

Quadratures are ordered (q, p, x, y, X1, Y1, X2, Y2) for the phonon, magnon,
cavity-1 and cavity-2 modes, with x = (δm + δm†)/√2 and y = (δm − δm†)/(i√2).
"""

import math
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Tuple

import numpy as np
import pandas as pd

from .exceptions import NumericalError
from .model import SystemParams, BathOccupancy, bath_occupancy
from .steadystate import SteadyState

logger = logging.getLogger(__name__)

QUADRATURE_ORDER = ("q", "p", "x", "y", "X1", "Y1", "X2", "Y2")
LADDER_ORDER = ("q", "p", "m", "m†", "c1", "c1†", "c2", "c2†")

_DERIVATION_RTOL = 1e-10


def _drift_template(omega_b, gamma_b, kappa_m, kappa_1, kappa_2,
                    delta_m, delta_1, delta_2, Gamma, G_alpha, G_beta, mu, nu) -> np.ndarray:
    """Drift matrix laid out entry by entry."""
    return np.array([
        [0.0, omega_b, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [-omega_b, -gamma_b, -G_alpha, -G_beta, 0.0, 0.0, 0.0, 0.0],
        [G_beta, 0.0, -kappa_m, delta_m, 0.0, Gamma, 0.0, 0.0],
        [-G_alpha, 0.0, -delta_m, -kappa_m, -Gamma, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, Gamma, -kappa_1, delta_1, mu, nu],
        [0.0, 0.0, -Gamma, 0.0, -delta_1, -kappa_1, -nu, mu],
        [0.0, 0.0, 0.0, 0.0, -mu, nu, -kappa_2, delta_2],
        [0.0, 0.0, 0.0, 0.0, -nu, -mu, -delta_2, -kappa_2],
    ], dtype=float)


# Entries that are nonzero for generic parameters (31 of 64).
STRUCTURAL_MASK = _drift_template(*([1.0] * 13)) != 0


def _ladder_to_quadrature() -> Tuple[np.ndarray, np.ndarray]:
    s = 1.0 / math.sqrt(2.0)
    block = np.array([[s, s], [-1j * s, 1j * s]])
    block_inv = np.array([[s, 1j * s], [s, -1j * s]])
    T = np.zeros((8, 8), dtype=complex)
    T_inv = np.zeros((8, 8), dtype=complex)
    T[:2, :2] = T_inv[:2, :2] = np.eye(2)
    for k in (2, 4, 6):
        T[k:k + 2, k:k + 2] = block
        T_inv[k:k + 2, k:k + 2] = block_inv
    return T, T_inv


_T, _T_INV = _ladder_to_quadrature()


@dataclass(frozen=True)
class DriftDiffusion:
    """Drift and diffusion matrices of one operating point, plus the scalars they use."""
    M: np.ndarray
    D: np.ndarray
    alpha: float
    beta: float
    mu: float
    nu_pfc: float
    ordering: Tuple[str, ...] = QUADRATURE_ORDER


def build_drift(params: SystemParams, ss: SteadyState) -> np.ndarray:
    """
    8×8 drift matrix at the steady state ``ss``, with Δ_m = ss.delta_m_eff.

    In debug runs the matrix is checked against the one assembled from the
    ladder-operator equations (``derive_drift``).
    """
    M = _drift_template(
        omega_b=params.omega_b, gamma_b=params.gamma_b,
        kappa_m=params.kappa_m, kappa_1=params.kappa_1, kappa_2=params.kappa_2,
        delta_m=ss.delta_m_eff, delta_1=params.delta_1, delta_2=params.delta_2,
        Gamma=params.Gamma,
        G_alpha=params.G_mb * ss.alpha, G_beta=params.G_mb * ss.beta,
        mu=params.mu, nu=params.pfc_cos_term,
    )
    if __debug__:
        derived = derive_drift(params, ss)
        scale = max(np.max(np.abs(M)), 1.0)
        if not np.allclose(M, derived, rtol=0.0, atol=_DERIVATION_RTOL * scale):
            raise NumericalError(
                f"drift template and ladder derivation disagree "
                f"(max diff {np.max(np.abs(M - derived)):.3e})"
            )
    return M


def derive_drift(params: SystemParams, ss: SteadyState) -> np.ndarray:
    """
    Drift matrix assembled from the linearised ladder-operator equations.

    Builds the complex generator L on (q, p, δm, δm†, δc1, δc1†, δc2, δc2†)
    and maps it to quadratures as T·L·T⁻¹.
    """
    G = params.G_mb
    m_s = ss.m_s
    pfc = params.xi * complex(math.cos(params.phi), math.sin(params.phi))
    L = np.zeros((8, 8), dtype=complex)

    # mechanics: dq = ω_b p, dp = −ω_b q − γ_b p − G(m_s* δm + m_s δm†)
    L[0, 1] = params.omega_b
    L[1, 0] = -params.omega_b
    L[1, 1] = -params.gamma_b
    L[1, 2] = -G * m_s.conjugate()
    L[1, 3] = -G * m_s

    # magnon: dm = −(κ_m + iΔ_m)δm − iΓδc1 − iG m_s q
    L[2, 0] = -1j * G * m_s
    L[2, 2] = -complex(params.kappa_m, ss.delta_m_eff)
    L[2, 4] = -1j * params.Gamma

    # cavity 1: dc1 = −(κ1 + iΔ1)δc1 − iΓδm − iξe^{iφ}δc2
    L[4, 2] = -1j * params.Gamma
    L[4, 4] = -complex(params.kappa_1, params.delta_1)
    L[4, 6] = -1j * pfc

    # cavity 2: dc2 = −(κ2 + iΔ2)δc2 − iξe^{−iφ}δc1
    L[6, 4] = -1j * pfc.conjugate()
    L[6, 6] = -complex(params.kappa_2, params.delta_2)

    # hermitian-conjugate rows
    for row in (2, 4, 6):
        L[row + 1, 0] = L[row, 0].conjugate()
        for col in (2, 4, 6):
            L[row + 1, col + 1] = L[row, col].conjugate()

    M = _T @ L @ _T_INV
    scale = max(np.max(np.abs(M)), 1.0)
    if np.max(np.abs(M.imag)) > _DERIVATION_RTOL * scale:
        raise NumericalError("quadrature drift matrix has a non-negligible imaginary part")
    return M.real.copy()


def build_diffusion(params: SystemParams, occ: BathOccupancy) -> np.ndarray:
    """
    Diagonal diffusion matrix diag[0, γ_b𝒯_b, κ_m𝒯_m, κ_m𝒯_m, κ1𝒯1, κ1𝒯1, κ2𝒯2, κ2𝒯2],
    with 𝒯 = 2n + 1.
    """
    t_b, t_m, t_1, t_2 = (2.0 * n + 1.0 for n in (occ.n_b, occ.n_m, occ.n_1, occ.n_2))
    return np.diag([
        0.0,
        params.gamma_b * t_b,
        params.kappa_m * t_m, params.kappa_m * t_m,
        params.kappa_1 * t_1, params.kappa_1 * t_1,
        params.kappa_2 * t_2, params.kappa_2 * t_2,
    ])


def build_drift_diffusion(params: SystemParams, ss: SteadyState,
                          occ: Optional[BathOccupancy] = None) -> DriftDiffusion:
    """Drift and diffusion for one operating point (occupancies from the bath temperatures by default)."""
    if occ is None:
        occ = bath_occupancy(params)
    return DriftDiffusion(
        M=build_drift(params, ss),
        D=build_diffusion(params, occ),
        alpha=ss.alpha,
        beta=ss.beta,
        mu=params.mu,
        nu_pfc=params.pfc_cos_term,
    )


def dump_matrices(dd: DriftDiffusion, directory: str, stem: str = "point") -> Tuple[Path, Path]:
    """
    Write M and D as CSV tables labelled with the quadrature ordering.

    Returns:
        (path of M, path of D)
    """
    out_dir = Path(directory)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = []
    for name, matrix in (("M", dd.M), ("D", dd.D)):
        frame = pd.DataFrame(matrix, index=list(dd.ordering), columns=list(dd.ordering))
        path = out_dir / f"{stem}_{name}.csv"
        frame.to_csv(path, index_label="row")
        paths.append(path)
    logger.debug("wrote drift/diffusion matrices to %s", out_dir)
    return paths[0], paths[1]
