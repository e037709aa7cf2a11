"""
Built-in operating points and sweep presets.

Base operating point (angular frequencies, ω_b = 2π×10 MHz):
- κ1 = κ2 = κ_m = 2π×1 MHz, Γ = 2π×3.2 MHz (0.32 ω_b)
- ω_c1 = ω_c2 = ω_m = 2π×10 GHz, T = 10 mK
- ε_c from an 8.9 mW drive, ε_m equal to the YIG Rabi frequency Ω
- Δ1 = Δ2 = −ω_b with the effective magnon detuning held at Δ_m = ω_b

Two values are substituted and recorded in every preset's metadata:
γ_b = 2π×100 Hz (``literal_defaults`` keeps the literal 2π×100 MHz), and G_mb.
G_mb is never given numerically; it is fixed by √2·G_mb·|m_s| = 2π×4.8 MHz at the
base point with ξ = 0, a target chosen so that the c2-b entanglement of the
``xi-scan`` sweep switches on near ξ = 0.2 ω_b (it lands at about 0.21 ω_b).

Every preset also answers to a short alias (``PRESET_ALIASES``), e.g. ``fig2a``
for ``delta1-deltam-map``.
"""

import math
import logging
from dataclasses import dataclass, field
from typing import Dict, Any, Optional, Tuple

from .exceptions import ConfigError
from .model import SystemParams, MaterialParams, TWO_PI, cavity_drive_amplitude, magnon_drive_amplitude
from .steadystate import calibrate_magnomechanical_coupling
from .sweep import SweepAxis, SweepSpec
from .measures import DEFAULT_PAIRS

logger = logging.getLogger(__name__)

OMEGA_B = TWO_PI * 10e6
KAPPA = TWO_PI * 1e6
OMEGA_MICROWAVE = TWO_PI * 10e9
GAMMA_COUPLING = 0.32 * OMEGA_B
PRESET_GAMMA_B = TWO_PI * 100.0
LITERAL_GAMMA_B = TWO_PI * 100e6
TARGET_EFFECTIVE_COUPLING = TWO_PI * 4.8e6
BASE_TEMPERATURE = 0.01

GRID_1D = 201
GRID_2D = 101


def _operating_point(material: MaterialParams, gamma_b: float) -> SystemParams:
    params = SystemParams.from_detunings(
        omega_b=OMEGA_B,
        delta_1=-OMEGA_B,
        delta_2=-OMEGA_B,
        delta_m0=OMEGA_B,
        delta_m=OMEGA_B,
        kappa_1=KAPPA,
        kappa_2=KAPPA,
        kappa_m=KAPPA,
        gamma_b=gamma_b,
        Gamma=GAMMA_COUPLING,
        xi=0.0,
        phi=0.0,
        eps_m=magnon_drive_amplitude(material),
        eps_c=cavity_drive_amplitude(material.power, KAPPA, OMEGA_MICROWAVE),
        T=BASE_TEMPERATURE,
        omega_c1=OMEGA_MICROWAVE,
        omega_c2=OMEGA_MICROWAVE,
        omega_m=OMEGA_MICROWAVE,
    )
    G_mb = calibrate_magnomechanical_coupling(params, TARGET_EFFECTIVE_COUPLING)
    return params.with_updates(G_mb=G_mb)


def base_params(material: Optional[MaterialParams] = None) -> SystemParams:
    """Base operating point of all presets (substituted γ_b, calibrated G_mb)."""
    return _operating_point(material or MaterialParams(), PRESET_GAMMA_B)


def literal_defaults(material: Optional[MaterialParams] = None) -> SystemParams:
    """Base operating point with the mechanical damping kept at the literal 2π×100 MHz."""
    return _operating_point(material or MaterialParams(), LITERAL_GAMMA_B)


@dataclass(frozen=True)
class Preset:
    """A named operating point, optionally with sweep axes."""
    name: str
    description: str
    base: SystemParams
    axis1: Optional[SweepAxis] = None
    axis2: Optional[SweepAxis] = None
    pairs: Tuple[Tuple[str, str], ...] = DEFAULT_PAIRS
    stability_only: bool = False
    notes: Tuple[str, ...] = field(default_factory=tuple)

    def sweep_spec(self, **solver_settings) -> SweepSpec:
        if self.axis1 is None:
            raise ConfigError(f"preset {self.name!r} defines no sweep axes")
        return SweepSpec(axis1=self.axis1, axis2=self.axis2, base=self.base, pairs=self.pairs,
                         stability_only=self.stability_only, **solver_settings)

    def metadata(self) -> Dict[str, Any]:
        """Provenance lines written above the CSV."""
        meta = {
            "preset": self.name,
            "description": self.description,
            "gamma_b": f"{self.base.gamma_b!r} rad/s (2pi x 100 Hz, replaces the literal 100 MHz)",
            "G_mb": f"{self.base.G_mb!r} rad/s (sqrt(2) G_mb |m_s| = 2pi x 4.8 MHz "
                    f"at Delta_1 = Delta_2 = -omega_b, Delta_m = omega_b, xi = 0; "
                    f"places the c2-b entanglement onset of the xi scan near 0.2 omega_b)",
            "eps_m": f"{self.base.eps_m!r} rad/s (set equal to the magnon Rabi frequency)",
            "kappa_m": f"{self.base.kappa_m!r} rad/s (assumed equal to the cavity linewidths)",
            "T": f"{self.base.T!r} K (base temperature)",
        }
        for k, note in enumerate(self.notes):
            meta[f"note_{k + 1}"] = note
        return meta


def _axis(name: str, start: float, stop: float, count: int) -> SweepAxis:
    return SweepAxis(name=name, start=start, stop=stop, count=count)


def build_presets(material: Optional[MaterialParams] = None) -> Dict[str, Preset]:
    """All presets keyed by name."""
    base = base_params(material)
    wb = OMEGA_B
    pfc_base = base.with_updates(xi=0.3 * wb)
    presets = [
        Preset("base-point", "base operating point, delta_1 = delta_2 = -omega_b, delta_m = omega_b",
               base),
        Preset("delta1-deltam-map", "E_N versus delta_1 and delta_m at delta_2 = -omega_b, xi = 0.3 omega_b, phi = 0",
               pfc_base, _axis("delta_1", -2 * wb, 2 * wb, GRID_2D), _axis("delta_m", -2 * wb, 2 * wb, GRID_2D)),
        Preset("delta1-delta2-map", "E_N versus delta_1 and delta_2 at delta_m = omega_b, xi = 0.3 omega_b, phi = 0",
               pfc_base, _axis("delta_1", -2 * wb, 2 * wb, GRID_2D), _axis("delta_2", -2 * wb, 2 * wb, GRID_2D)),
        Preset("delta1-xi-scan", "E_N versus delta_1 for xi in {0.1, 0.2, 0.3} omega_b",
               base, _axis("delta_1", -2 * wb, 2 * wb, GRID_1D), _axis("xi", 0.1 * wb, 0.3 * wb, 3)),
        Preset("xi-scan", "E_N versus xi at Gamma = 0.32 omega_b",
               base, _axis("xi", 0.0, wb, GRID_1D)),
        Preset("gamma-scan", "E_N versus Gamma at xi = 0.35 omega_b",
               base.with_updates(xi=0.35 * wb), _axis("Gamma", 0.0, wb, GRID_1D)),
        Preset("delta1-phase-scan", "E_N versus delta_1 for phi in {0, pi/2, pi}",
               pfc_base, _axis("delta_1", -2 * wb, 2 * wb, GRID_1D), _axis("phi", 0.0, math.pi, 3)),
        Preset("xi-temperature-map", "E_N versus xi and temperature",
               base, _axis("xi", 0.0, wb, GRID_2D), _axis("T", 0.0, 0.25, GRID_2D),
               notes=("every bath follows the swept temperature",)),
        Preset("steering-delta1", "steering versus delta_1 at xi = 0.3 omega_b",
               pfc_base, _axis("delta_1", -2 * wb, 2 * wb, GRID_1D), pairs=(("c2", "m"), ("c2", "b"))),
        Preset("steering-xi", "steering versus xi at delta_1 = -omega_b",
               base, _axis("xi", 0.0, wb, GRID_1D), pairs=(("c2", "m"), ("c2", "b"), ("c2", "c1"))),
        Preset("stability-delta1-deltam", "max real eigenvalue of the drift matrix versus delta_1 and delta_m",
               pfc_base, _axis("delta_1", -2 * wb, 2 * wb, GRID_2D), _axis("delta_m", -2 * wb, 2 * wb, GRID_2D),
               stability_only=True),
        Preset("stability-delta1-delta2", "max real eigenvalue of the drift matrix versus delta_1 and delta_2",
               pfc_base, _axis("delta_1", -2 * wb, 2 * wb, GRID_2D), _axis("delta_2", -2 * wb, 2 * wb, GRID_2D),
               stability_only=True),
    ]
    return {p.name: p for p in presets}


PRESET_NAMES = ("base-point", "delta1-deltam-map", "delta1-delta2-map", "delta1-xi-scan", "xi-scan",
                "gamma-scan", "delta1-phase-scan", "xi-temperature-map", "steering-delta1", "steering-xi",
                "stability-delta1-deltam", "stability-delta1-delta2")

# Short names accepted wherever a preset name is
PRESET_ALIASES: Dict[str, str] = {
    "fig2a": "delta1-deltam-map",
    "fig2d": "delta1-delta2-map",
    "fig3a": "delta1-xi-scan",
    "fig3d": "xi-scan",
    "fig3e": "gamma-scan",
    "fig4": "delta1-phase-scan",
    "fig5": "xi-temperature-map",
    "fig6a": "steering-delta1",
    "fig6": "steering-xi",
    "fig7a": "stability-delta1-deltam",
    "fig7b": "stability-delta1-delta2",
}

PRESET_CHOICES = PRESET_NAMES + tuple(PRESET_ALIASES)


def resolve_preset_name(name: str) -> str:
    """Canonical preset name for a name or alias."""
    canonical = PRESET_ALIASES.get(name, name)
    if canonical not in PRESET_NAMES:
        raise ConfigError(f"Unknown preset {name!r} (available: {', '.join(PRESET_CHOICES)})")
    return canonical


def get_preset(name: str, material: Optional[MaterialParams] = None) -> Preset:
    """Look up a preset by name or alias."""
    return build_presets(material)[resolve_preset_name(name)]
