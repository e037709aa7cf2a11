"""
Semiclassical steady state of the driven magnomechanical system.

Solves the mean-field fixed point for the magnon, cavity and mechanical
amplitudes. The magnon detuning is shifted by the mechanical displacement,
Δ_m = Δ_m0 + G_mb·q_s, and q_s itself depends on |m_s|², so the solver closes
the loop with a (damped) Picard iteration on Δ_m.
"""

import math
import logging
from dataclasses import dataclass
from typing import Dict, Any, Optional, Tuple

from .exceptions import ConvergenceError, DomainError, SingularityError
from .model import SystemParams

logger = logging.getLogger(__name__)

SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class SteadyState:
    """
    Mean-field amplitudes at the fixed point.

    Attributes:
        m_s, c1_s, c2_s: Complex magnon and cavity amplitudes
        q_s, p_s: Mechanical displacement and momentum (p_s is always 0)
        delta_m_eff: Effective magnon detuning Δ_m (rad/s)
        delta_m0: Bare magnon detuning the state corresponds to (rad/s)
        iterations: Picard iterations used (1 when Δ_m is held)
        residual: Last update |ΔΔ_m| in units of ω_b
    """
    m_s: complex
    c1_s: complex
    c2_s: complex
    q_s: float
    p_s: float
    delta_m_eff: float
    delta_m0: float
    iterations: int
    residual: float

    @property
    def alpha(self) -> float:
        """√2·Re m_s."""
        return SQRT2 * self.m_s.real

    @property
    def beta(self) -> float:
        """√2·Im m_s."""
        return SQRT2 * self.m_s.imag

    def effective_coupling(self, G_mb: float) -> float:
        """Enhanced magnomechanical coupling √2·G_mb·|m_s|."""
        return SQRT2 * G_mb * abs(self.m_s)

    def to_dict(self) -> Dict[str, Any]:
        def cplx(z: complex) -> Dict[str, float]:
            return {"re": z.real, "im": z.imag}

        return {
            "m_s": cplx(self.m_s),
            "c1_s": cplx(self.c1_s),
            "c2_s": cplx(self.c2_s),
            "abs_m_s": abs(self.m_s),
            "alpha": self.alpha,
            "beta": self.beta,
            "q_s": self.q_s,
            "p_s": self.p_s,
            "delta_m_eff": self.delta_m_eff,
            "delta_m0": self.delta_m0,
            "iterations": self.iterations,
            "residual": self.residual,
        }


def _theta(params: SystemParams) -> complex:
    return (complex(params.kappa_2, params.delta_2) * complex(params.kappa_1, params.delta_1)
            + params.xi ** 2)


def magnon_amplitude(params: SystemParams, delta_m: float) -> complex:
    """
    Magnon amplitude m_s for a given effective detuning.

    m_s = (ε_m·Θ − Γ·ξ·e^{iφ}·ε_c) / (Θ·(κ_m + iΔ_m) + Γ²·(κ2 + iΔ2)),
    Θ = (κ2 + iΔ2)(κ1 + iΔ1) + ξ².
    """
    theta = _theta(params)
    pfc = params.xi * complex(math.cos(params.phi), math.sin(params.phi))
    numerator = params.eps_m * theta - params.Gamma * pfc * params.eps_c
    denominator = (theta * complex(params.kappa_m, delta_m)
                   + params.Gamma ** 2 * complex(params.kappa_2, params.delta_2))
    if denominator == 0:
        raise SingularityError("magnon amplitude denominator vanishes")
    return numerator / denominator


def cavity_amplitudes(params: SystemParams, m_s: complex) -> Tuple[complex, complex]:
    """
    Solve the two cavity equations for (c1_s, c2_s) given m_s.

    (κ1 + iΔ1)·c1 + iξe^{iφ}·c2 = −iΓ·m_s
    iξe^{−iφ}·c1 + (κ2 + iΔ2)·c2 = ε_c
    """
    theta = _theta(params)
    if theta == 0:
        raise SingularityError("cavity subsystem is singular (Θ = 0)")
    a11 = complex(params.kappa_1, params.delta_1)
    a12 = 1j * params.xi * complex(math.cos(params.phi), math.sin(params.phi))
    a21 = 1j * params.xi * complex(math.cos(params.phi), -math.sin(params.phi))
    a22 = complex(params.kappa_2, params.delta_2)
    b1 = -1j * params.Gamma * m_s
    b2 = complex(params.eps_c)
    c1 = (b1 * a22 - a12 * b2) / theta
    c2 = (a11 * b2 - a21 * b1) / theta
    return c1, c2


def _state_at(params: SystemParams, delta_m: float, delta_m0: float,
              iterations: int, residual: float) -> SteadyState:
    m_s = magnon_amplitude(params, delta_m)
    c1_s, c2_s = cavity_amplitudes(params, m_s)
    q_s = -(params.G_mb / params.omega_b) * abs(m_s) ** 2
    return SteadyState(m_s=m_s, c1_s=c1_s, c2_s=c2_s, q_s=q_s, p_s=0.0,
                       delta_m_eff=delta_m, delta_m0=delta_m0,
                       iterations=iterations, residual=residual)


def solve_steady_state(params: SystemParams, tol: float = 1e-12,
                       max_iter: int = 200) -> SteadyState:
    """
    Self-consistent steady state.

    Args:
        params: Operating point
        tol: Stop when |Δ_m^(k+1) − Δ_m^(k)| <= tol·ω_b
        max_iter: Iteration cap

    Returns:
        SteadyState at the first converged branch

    Raises:
        ConvergenceError: carrying the last iterate, when the cap is hit
    """
    if not tol > 0:
        raise DomainError(f"tol must be > 0, got {tol!r}")
    if max_iter < 1:
        raise DomainError(f"max_iter must be >= 1, got {max_iter!r}")

    if params.delta_m is not None:
        # held effective detuning: report the bare detuning it implies
        state = _state_at(params, params.delta_m, params.delta_m0, 1, 0.0)
        delta_m0 = params.delta_m - params.G_mb * state.q_s
        return SteadyState(m_s=state.m_s, c1_s=state.c1_s, c2_s=state.c2_s,
                           q_s=state.q_s, p_s=0.0, delta_m_eff=params.delta_m,
                           delta_m0=delta_m0, iterations=1, residual=0.0)

    delta = params.delta_m0
    damping = 1.0
    previous_update: Optional[float] = None
    update = 0.0
    for iteration in range(1, max_iter + 1):
        m_s = magnon_amplitude(params, delta)
        q_s = -(params.G_mb / params.omega_b) * abs(m_s) ** 2
        update = params.delta_m0 + params.G_mb * q_s - delta

        if abs(update) <= tol * params.omega_b:
            logger.debug("steady state converged after %d iterations", iteration)
            return _state_at(params, delta, params.delta_m0, iteration,
                             abs(update) / params.omega_b)

        if (previous_update is not None and damping == 1.0
                and update * previous_update < 0 and abs(update) >= 0.5 * abs(previous_update)):
            logger.debug("oscillating detuning update at iteration %d, damping on", iteration)
            damping = 0.5

        previous_update = update
        delta += damping * update

    last = _state_at(params, delta, params.delta_m0, max_iter, abs(update) / params.omega_b)
    raise ConvergenceError(
        f"steady state did not converge in {max_iter} iterations "
        f"(last update {abs(update) / params.omega_b:.3e} ω_b)",
        last_iterate=last,
    )


def fixed_point_residual(params: SystemParams, ss: SteadyState) -> float:
    """
    Largest relative residual of the five mean-field equations at ``ss``.

    Each equation's residual is divided by the sum of magnitudes of its terms.
    """
    phase = complex(math.cos(params.phi), math.sin(params.phi))
    delta_m = ss.delta_m0 + params.G_mb * ss.q_s

    def rel(terms) -> float:
        scale = sum(abs(t) for t in terms)
        return abs(sum(terms)) / scale if scale > 0 else 0.0

    residuals = [
        rel([params.omega_b * ss.p_s]) if ss.p_s else 0.0,
        rel([-params.omega_b * ss.q_s, -params.gamma_b * ss.p_s,
             -params.G_mb * abs(ss.m_s) ** 2]),
        rel([-complex(params.kappa_m, delta_m) * ss.m_s, -1j * params.Gamma * ss.c1_s,
             complex(params.eps_m)]),
        rel([-complex(params.kappa_1, params.delta_1) * ss.c1_s, -1j * params.Gamma * ss.m_s,
             -1j * params.xi * phase * ss.c2_s]),
        rel([-complex(params.kappa_2, params.delta_2) * ss.c2_s,
             -1j * params.xi * phase.conjugate() * ss.c1_s, complex(params.eps_c)]),
    ]
    return max(residuals)


def simplified_magnon_amplitude(params: SystemParams,
                                delta_m: Optional[float] = None) -> complex:
    """
    Large-detuning magnon amplitude with all decay rates dropped.

    m_s ≈ ([(iΔ2)(iΔ1) + ξ²]·ε_m − Γξe^{iφ}·ε_c) / ([(iΔ2)(iΔ1) + ξ²]·(iΔ_m) + Γ²·(iΔ2))

    Valid when |Δ1Δ2| ≫ κ1κ2; evaluated regardless.

    Args:
        params: Operating point
        delta_m: Effective detuning; defaults to the held ``params.delta_m`` or Δ_m0
    """
    if delta_m is None:
        delta_m = params.delta_m if params.delta_m is not None else params.delta_m0
    theta = (1j * params.delta_2) * (1j * params.delta_1) + params.xi ** 2
    pfc = params.xi * complex(math.cos(params.phi), math.sin(params.phi))
    numerator = theta * params.eps_m - params.Gamma * pfc * params.eps_c
    denominator = theta * (1j * delta_m) + params.Gamma ** 2 * (1j * params.delta_2)
    if denominator == 0:
        raise SingularityError("simplified magnon amplitude has a vanishing denominator")
    return numerator / denominator


def calibrate_magnomechanical_coupling(params: SystemParams, target_coupling: float) -> float:
    """
    Single-magnon coupling G_mb giving √2·G_mb·|m_s| = target_coupling.

    Needs a held effective detuning (``params.delta_m``) so that m_s does not
    depend on G_mb.
    """
    if params.delta_m is None:
        raise DomainError("calibration needs a held effective magnon detuning (delta_m)")
    if not target_coupling >= 0:
        raise DomainError(f"target coupling must be >= 0, got {target_coupling!r}")
    m_s = magnon_amplitude(params, params.delta_m)
    if m_s == 0:
        raise SingularityError("magnon amplitude is zero, coupling cannot be calibrated")
    return target_coupling / (SQRT2 * abs(m_s))
