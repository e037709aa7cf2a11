"""
Physical parameter model for the two-cavity magnomechanical system.

Holds the immutable parameter types (constants, operating point, YIG material,
bath occupancies) and the scalar formulas derived from them: thermal
occupancies, the cavity and magnon drive amplitudes and the optomagnonic
coupling of a YIG sphere. All angular frequencies are in rad/s.
"""

import math
import logging
from dataclasses import dataclass, asdict, fields, replace
from typing import Dict, Any, Optional

from scipy import constants as codata

from .exceptions import DomainError

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi

# Absolute agreement (relative to the largest frequency involved) required
# between stored detunings and the ones implied by absolute frequencies.
_DETUNING_MATCH_RTOL = 1e-9

# Fields stored in rad/s. Config files may give them as "<name>_over_2pi_Hz".
ANGULAR_FIELDS = (
    "omega_b", "omega_c1", "omega_c2", "omega_m", "omega_0", "omega_c_drive",
    "delta_1", "delta_2", "delta_m0", "delta_m",
    "kappa_1", "kappa_2", "kappa_m", "gamma_b",
    "Gamma", "G_mb", "xi", "eps_m", "eps_c",
)

DETUNING_FIELDS = ("delta_1", "delta_2", "delta_m0")

# Mode labels in quadrature order: phonon, magnon, cavity 1, cavity 2.
MODES = ("b", "m", "c1", "c2")


def _check_finite(name: str, value: float) -> None:
    if value is None or not math.isfinite(value):
        raise DomainError(f"{name} must be a finite number, got {value!r}")


def _check_non_negative(name: str, value: float) -> None:
    _check_finite(name, value)
    if value < 0:
        raise DomainError(f"{name} must be >= 0, got {value!r}")


def _check_positive(name: str, value: float) -> None:
    _check_finite(name, value)
    if value <= 0:
        raise DomainError(f"{name} must be > 0, got {value!r}")


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants entering the thermal and drive formulas (SI units)."""
    hbar: float = codata.hbar
    k_B: float = codata.k
    c_light: float = codata.c

    def __post_init__(self):
        for f in fields(self):
            _check_positive(f.name, getattr(self, f.name))


CODATA = PhysicalConstants()


@dataclass(frozen=True)
class MaterialParams:
    """
    YIG sphere and drive settings used to derive Γ, Ω and ε_c.

    Attributes:
        rho_s: Spin density (1/m³)
        r_sphere: Sphere radius (m)
        n_r: Refractive index
        verdet: Verdet constant (rad/(T·m))
        gamma_G: Gyromagnetic ratio (rad/(s·T))
        H_d: Magnon drive field amplitude (T)
        power: Cavity drive laser power (W)
    """
    rho_s: float = 4.22e27
    r_sphere: float = 250e-6
    n_r: float = 2.19
    verdet: float = 3.77e2
    gamma_G: float = TWO_PI * 28e9
    H_d: float = 1.3e-4
    power: float = 8.9e-3

    def __post_init__(self):
        for f in fields(self):
            _check_positive(f.name, getattr(self, f.name))

    @property
    def volume(self) -> float:
        """Sphere volume (4/3)πr³ in m³."""
        return 4.0 / 3.0 * math.pi * self.r_sphere ** 3

    @property
    def spin_number(self) -> float:
        """Total number of spins ρ_s·V."""
        return self.rho_s * self.volume

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class BathOccupancy:
    """Mean thermal quanta of the phonon, magnon and both cavity baths."""
    n_b: float = 0.0
    n_m: float = 0.0
    n_1: float = 0.0
    n_2: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            _check_non_negative(f.name, getattr(self, f.name))

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class SystemParams:
    """
    One operating point of the magnomechanical system.

    Detunings are the primary interface. When built from absolute frequencies
    (``from_frequencies``) the detunings are derived as Δ1 = ω_c1 − ω_0,
    Δ2 = ω_c2 − ω_c and Δ_m0 = ω_m − ω_0 and ``detuning_source`` is "absolute".

    ``delta_m`` optionally holds the effective magnon detuning fixed; the
    steady-state solver then reports the bare detuning Δ_m0 it implies instead
    of iterating towards self-consistency.

    ``phi`` is normalised into [0, 2π) on construction.
    """
    omega_b: float
    kappa_1: float = 0.0
    kappa_2: float = 0.0
    kappa_m: float = 0.0
    gamma_b: float = 0.0
    Gamma: float = 0.0
    G_mb: float = 0.0
    xi: float = 0.0
    phi: float = 0.0
    eps_m: float = 0.0
    eps_c: float = 0.0
    T: float = 0.0
    delta_1: float = 0.0
    delta_2: float = 0.0
    delta_m0: float = 0.0
    delta_m: Optional[float] = None
    omega_c1: float = 0.0
    omega_c2: float = 0.0
    omega_m: float = 0.0
    omega_0: Optional[float] = None
    omega_c_drive: Optional[float] = None
    detuning_source: str = "direct"
    T_b: Optional[float] = None
    T_m: Optional[float] = None
    T_1: Optional[float] = None
    T_2: Optional[float] = None

    def __post_init__(self):
        _check_positive("omega_b", self.omega_b)
        for name in ("kappa_1", "kappa_2", "kappa_m", "gamma_b", "Gamma", "G_mb",
                     "xi", "T", "omega_c1", "omega_c2", "omega_m"):
            _check_non_negative(name, getattr(self, name))
        for name in ("phi", "eps_m", "eps_c", "delta_1", "delta_2", "delta_m0"):
            _check_finite(name, getattr(self, name))
        if self.delta_m is not None:
            _check_finite("delta_m", self.delta_m)
        for name in ("T_b", "T_m", "T_1", "T_2"):
            if getattr(self, name) is not None:
                _check_non_negative(name, getattr(self, name))

        # frozen: normalise through object.__setattr__
        phi = self.phi % TWO_PI
        object.__setattr__(self, "phi", 0.0 if phi >= TWO_PI else phi)

        if self.detuning_source == "direct":
            if self.omega_0 is not None or self.omega_c_drive is not None:
                raise DomainError(
                    "drive frequencies given together with direct detunings; "
                    "use SystemParams.from_frequencies or drop omega_0/omega_c_drive"
                )
        elif self.detuning_source == "absolute":
            self._check_absolute_detunings()
        else:
            raise DomainError(f"Unknown detuning_source: {self.detuning_source!r}")

    def _check_absolute_detunings(self) -> None:
        if self.omega_0 is None or self.omega_c_drive is None:
            raise DomainError("absolute detunings need both omega_0 and omega_c_drive")
        _check_positive("omega_0", self.omega_0)
        _check_positive("omega_c_drive", self.omega_c_drive)
        implied = _detunings_from_frequencies(
            self.omega_c1, self.omega_c2, self.omega_m, self.omega_0, self.omega_c_drive
        )
        scale = max(self.omega_c1, self.omega_c2, self.omega_m, self.omega_0, self.omega_c_drive)
        for name, value in zip(DETUNING_FIELDS, implied):
            if abs(getattr(self, name) - value) > _DETUNING_MATCH_RTOL * scale:
                raise DomainError(
                    f"{name}={getattr(self, name)!r} disagrees with the absolute frequencies ({value!r})"
                )

    @classmethod
    def from_detunings(cls, omega_b: float, delta_1: float, delta_2: float,
                       delta_m0: float, **kwargs) -> "SystemParams":
        """Build an operating point from detunings given directly."""
        return cls(omega_b=omega_b, delta_1=delta_1, delta_2=delta_2,
                   delta_m0=delta_m0, detuning_source="direct", **kwargs)

    @classmethod
    def from_frequencies(cls, omega_b: float, omega_c1: float, omega_c2: float,
                         omega_m: float, omega_0: float, omega_c_drive: float,
                         **kwargs) -> "SystemParams":
        """Build an operating point from mode resonances and drive frequencies."""
        delta_1, delta_2, delta_m0 = _detunings_from_frequencies(
            omega_c1, omega_c2, omega_m, omega_0, omega_c_drive
        )
        return cls(omega_b=omega_b, omega_c1=omega_c1, omega_c2=omega_c2,
                   omega_m=omega_m, omega_0=omega_0, omega_c_drive=omega_c_drive,
                   delta_1=delta_1, delta_2=delta_2, delta_m0=delta_m0,
                   detuning_source="absolute", **kwargs)

    def with_updates(self, **changes) -> "SystemParams":
        """
        Return a copy with some fields replaced.

        Overriding a detuning of an absolute-frequency operating point turns it
        into a direct-detuning one, since the drive frequencies no longer apply.
        """
        if self.detuning_source == "absolute" and any(k in changes for k in DETUNING_FIELDS):
            changes.setdefault("omega_0", None)
            changes.setdefault("omega_c_drive", None)
            changes.setdefault("detuning_source", "direct")
        return replace(self, **changes)

    @property
    def mu(self) -> float:
        """ξ sin φ."""
        return self.xi * math.sin(self.phi)

    @property
    def pfc_cos_term(self) -> float:
        """ξ cos φ."""
        return self.xi * math.cos(self.phi)

    def bath_temperature(self, mode: str) -> float:
        """Temperature of the bath attached to ``mode`` (b, m, c1 or c2)."""
        override = dict(zip(MODES, (self.T_b, self.T_m, self.T_1, self.T_2)))
        if mode not in override:
            raise DomainError(f"Unknown mode label: {mode!r}")
        return self.T if override[mode] is None else override[mode]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def _detunings_from_frequencies(omega_c1, omega_c2, omega_m, omega_0, omega_c_drive):
    return omega_c1 - omega_0, omega_c2 - omega_c_drive, omega_m - omega_0


def thermal_occupancy(omega: float, T: float,
                      constants: PhysicalConstants = CODATA) -> float:
    """
    Bose-Einstein occupancy 1/(exp(ħω/k_BT) − 1).

    Args:
        omega: Mode frequency (rad/s), must be > 0
        T: Bath temperature (K), >= 0

    Returns:
        Mean thermal quanta, exactly 0 at T = 0
    """
    _check_finite("omega", omega)
    if omega <= 0:
        raise DomainError(f"omega must be > 0, got {omega!r}")
    _check_non_negative("T", T)
    if T == 0:
        return 0.0
    x = constants.hbar * omega / (constants.k_B * T)
    # exp(-x) / (1 - exp(-x)) stays finite for any x > 0
    return math.exp(-x) / -math.expm1(-x)


def bath_occupancy(params: SystemParams,
                   constants: PhysicalConstants = CODATA) -> BathOccupancy:
    """
    Thermal occupancies of all four baths at the operating point.

    Modes at zero temperature get n = 0 without needing their frequency, so
    parameter sets that leave ω_m or ω_cj unset are usable at T = 0.
    """
    def occ(mode: str, omega: float) -> float:
        T = params.bath_temperature(mode)
        if T == 0:
            return 0.0
        return thermal_occupancy(omega, T, constants)

    return BathOccupancy(
        n_b=occ("b", params.omega_b),
        n_m=occ("m", params.omega_m),
        n_1=occ("c1", params.omega_c1),
        n_2=occ("c2", params.omega_c2),
    )


def cavity_drive_amplitude(power: float, kappa: float, omega_c: float,
                           constants: PhysicalConstants = CODATA) -> float:
    """
    Cavity drive strength ε_c = √(2κ℘/(ħω_c)).

    Args:
        power: Laser power (W)
        kappa: Cavity decay rate (rad/s)
        omega_c: Cavity resonance (rad/s)
    """
    for name, value in (("power", power), ("kappa", kappa), ("omega_c", omega_c)):
        _check_positive(name, value)
    return math.sqrt(2.0 * kappa * power / (constants.hbar * omega_c))


def magnon_drive_amplitude(material: MaterialParams) -> float:
    """
    Rabi frequency Ω = (5/4)·γ_G·√N·H_d of the magnon drive, N = ρ_s·V.

    The model drives the magnon mode with ε_m = Ω.
    """
    return 1.25 * material.gamma_G * math.sqrt(material.spin_number) * material.H_d


def optomagnonic_coupling(material: MaterialParams,
                          constants: PhysicalConstants = CODATA) -> float:
    """Magnon / cavity-1 coupling Γ = ν·(c/n_r)·√(2/(ρ_s·V)) from the Verdet constant."""
    return (material.verdet * constants.c_light / material.n_r
            * math.sqrt(2.0 / material.spin_number))


if __name__ == "__main__":
    material = MaterialParams()
    print("YIG sphere (default material)")
    print("=" * 60)
    print(f"Spin number N:        {material.spin_number:.6e}")
    print(f"Magnon drive Ω:       {magnon_drive_amplitude(material):.6e} rad/s")
    print(f"Optomagnonic Γ:       {optomagnonic_coupling(material):.6e} rad/s")
    print(f"Cavity drive ε_c:     "
          f"{cavity_drive_amplitude(material.power, TWO_PI * 1e6, TWO_PI * 10e9):.6e} rad/s")
    print(f"n_b (10 MHz, 10 mK):  {thermal_occupancy(TWO_PI * 10e6, 0.01):.4f}")
