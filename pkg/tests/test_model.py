"""Tests for the parameter model and derived scalar formulas."""

import math

import pytest

from magnomech.exceptions import DomainError
from magnomech.model import (
    TWO_PI, PhysicalConstants, MaterialParams, BathOccupancy, SystemParams,
    thermal_occupancy, bath_occupancy, cavity_drive_amplitude, magnon_drive_amplitude,
    optomagnonic_coupling,
)
from magnomech.steadystate import solve_steady_state

OMEGA_B = TWO_PI * 10e6
MICROWAVE = TWO_PI * 10e9


class TestThermalOccupancy:
    """Bose-Einstein occupancies."""

    def test_mechanical_mode_at_10mK(self, golden):
        n = thermal_occupancy(OMEGA_B, 0.01)
        assert n == pytest.approx(golden["thermal_occupancy_10MHz_10mK"], rel=2e-3)

    def test_microwave_mode_is_effectively_empty(self):
        n = thermal_occupancy(MICROWAVE, 0.01)
        assert 0 < n < 1e-20
        assert n == pytest.approx(1.4e-21, rel=0.1)

    def test_zero_temperature_is_exactly_zero(self):
        assert thermal_occupancy(OMEGA_B, 0.0) == 0.0

    def test_huge_ratio_does_not_overflow(self):
        assert thermal_occupancy(TWO_PI * 1e15, 1e-6) == 0.0

    @pytest.mark.parametrize("omega", [0.0, -1.0, float("nan")])
    def test_invalid_frequency(self, omega):
        with pytest.raises(DomainError):
            thermal_occupancy(omega, 0.01)

    def test_negative_temperature(self):
        with pytest.raises(DomainError):
            thermal_occupancy(OMEGA_B, -0.01)

    def test_monotonicity(self):
        omegas = [OMEGA_B * k for k in (0.5, 1.0, 2.0, 4.0)]
        in_omega = [thermal_occupancy(w, 0.05) for w in omegas]
        assert all(a > b for a, b in zip(in_omega, in_omega[1:]))
        temps = [0.01, 0.05, 0.1, 0.25]
        in_T = [thermal_occupancy(OMEGA_B, T) for T in temps]
        assert all(a < b for a, b in zip(in_T, in_T[1:]))

    def test_overridable_constants(self):
        # ħ = k_B makes ħω/k_BT = ω/T
        constants = PhysicalConstants(hbar=1.0, k_B=1.0, c_light=1.0)
        assert thermal_occupancy(math.log(2.0), 1.0, constants) == pytest.approx(1.0)


class TestDriveAmplitudes:
    """Cavity and magnon drive strengths and the optomagnonic coupling."""

    def test_cavity_drive(self, golden):
        eps_c = cavity_drive_amplitude(8.9e-3, TWO_PI * 1e6, MICROWAVE)
        assert eps_c == pytest.approx(golden["cavity_drive_amplitude_rad_s"], rel=golden["rel_tol"])

    @pytest.mark.parametrize("power,kappa,omega_c", [
        (0.0, TWO_PI * 1e6, MICROWAVE),
        (8.9e-3, -1.0, MICROWAVE),
        (8.9e-3, TWO_PI * 1e6, 0.0),
    ])
    def test_cavity_drive_rejects_non_positive(self, power, kappa, omega_c):
        with pytest.raises(DomainError):
            cavity_drive_amplitude(power, kappa, omega_c)

    def test_material_volume_and_spins(self, golden):
        material = MaterialParams()
        assert material.volume == pytest.approx(4.0 / 3.0 * math.pi * (250e-6) ** 3)
        assert material.spin_number == pytest.approx(golden["spin_number"], rel=golden["rel_tol"])

    def test_magnon_drive(self, golden):
        omega = magnon_drive_amplitude(MaterialParams())
        assert omega > 0
        assert omega == pytest.approx(golden["magnon_drive_amplitude_rad_s"], rel=golden["rel_tol"])

    def test_magnon_drive_scales_with_field(self):
        weak = magnon_drive_amplitude(MaterialParams(H_d=1e-4))
        strong = magnon_drive_amplitude(MaterialParams(H_d=2e-4))
        assert strong == pytest.approx(2.0 * weak)

    def test_optomagnonic_coupling(self, golden):
        gamma = optomagnonic_coupling(MaterialParams())
        assert gamma == pytest.approx(golden["optomagnonic_coupling_rad_s"], rel=golden["rel_tol"])

    def test_material_rejects_non_positive(self):
        with pytest.raises(DomainError):
            MaterialParams(r_sphere=0.0)


class TestSystemParams:
    """Validation, constructors and derived fields of an operating point."""

    def test_phi_normalised(self):
        params = SystemParams(omega_b=1.0, phi=-math.pi / 2)
        assert params.phi == pytest.approx(1.5 * math.pi)
        assert 0.0 <= SystemParams(omega_b=1.0, phi=TWO_PI).phi < TWO_PI

    def test_pfc_terms(self):
        params = SystemParams(omega_b=1.0, xi=0.3, phi=math.pi / 2)
        assert params.mu == pytest.approx(0.3)
        assert params.pfc_cos_term == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("field", ["kappa_1", "gamma_b", "Gamma", "G_mb", "xi", "T", "omega_m"])
    def test_negative_rates_rejected(self, field):
        with pytest.raises(DomainError):
            SystemParams(omega_b=1.0, **{field: -1.0})

    @pytest.mark.parametrize("omega_b", [0.0, -1.0, float("inf")])
    def test_mechanical_frequency_must_be_positive(self, omega_b):
        with pytest.raises(DomainError):
            SystemParams(omega_b=omega_b)

    def test_drive_amplitudes_may_be_negative(self):
        params = SystemParams(omega_b=1.0, eps_m=-2.0, eps_c=-1.0)
        assert params.eps_c == -1.0

    def test_direct_point_rejects_drive_frequencies(self):
        with pytest.raises(DomainError):
            SystemParams(omega_b=1.0, omega_0=2.0, omega_c_drive=2.0)

    def test_from_frequencies_derives_detunings(self):
        params = SystemParams.from_frequencies(
            omega_b=OMEGA_B, omega_c1=MICROWAVE, omega_c2=MICROWAVE, omega_m=MICROWAVE,
            omega_0=MICROWAVE + OMEGA_B, omega_c_drive=MICROWAVE + OMEGA_B,
        )
        assert params.detuning_source == "absolute"
        assert params.delta_1 == pytest.approx(-OMEGA_B, rel=1e-9)
        assert params.delta_2 == pytest.approx(-OMEGA_B, rel=1e-9)
        assert params.delta_m0 == pytest.approx(-OMEGA_B, rel=1e-9)

    def test_inconsistent_absolute_detunings(self):
        with pytest.raises(DomainError):
            SystemParams(omega_b=OMEGA_B, omega_c1=MICROWAVE, omega_c2=MICROWAVE, omega_m=MICROWAVE,
                         omega_0=MICROWAVE, omega_c_drive=MICROWAVE, delta_1=TWO_PI * 1e6,
                         detuning_source="absolute")

    def test_absolute_and_direct_give_same_steady_state(self, base):
        absolute = SystemParams.from_frequencies(
            omega_b=base.omega_b, omega_c1=MICROWAVE, omega_c2=MICROWAVE, omega_m=MICROWAVE,
            omega_0=MICROWAVE + base.omega_b, omega_c_drive=MICROWAVE + base.omega_b,
            kappa_1=base.kappa_1, kappa_2=base.kappa_2, kappa_m=base.kappa_m,
            gamma_b=base.gamma_b, Gamma=base.Gamma, G_mb=base.G_mb,
            eps_m=base.eps_m, eps_c=base.eps_c, T=base.T, delta_m=base.omega_b,
        )
        direct = SystemParams.from_detunings(
            omega_b=base.omega_b, delta_1=-base.omega_b, delta_2=-base.omega_b,
            delta_m0=-base.omega_b, omega_c1=MICROWAVE, omega_c2=MICROWAVE, omega_m=MICROWAVE,
            kappa_1=base.kappa_1, kappa_2=base.kappa_2, kappa_m=base.kappa_m,
            gamma_b=base.gamma_b, Gamma=base.Gamma, G_mb=base.G_mb,
            eps_m=base.eps_m, eps_c=base.eps_c, T=base.T, delta_m=base.omega_b,
        )
        ss_abs = solve_steady_state(absolute)
        ss_dir = solve_steady_state(direct)
        assert abs(ss_abs.m_s - ss_dir.m_s) <= 1e-8 * abs(ss_dir.m_s)
        assert bath_occupancy(absolute) == bath_occupancy(direct)

    def test_with_updates_leaves_absolute_representation(self):
        params = SystemParams.from_frequencies(
            omega_b=1.0, omega_c1=100.0, omega_c2=100.0, omega_m=100.0,
            omega_0=101.0, omega_c_drive=101.0,
        )
        moved = params.with_updates(delta_1=0.5)
        assert moved.detuning_source == "direct"
        assert moved.omega_0 is None and moved.delta_1 == 0.5
        assert params.with_updates(xi=0.1).detuning_source == "absolute"

    def test_bath_temperature_override(self):
        params = SystemParams(omega_b=1.0, T=0.1, T_b=0.2)
        assert params.bath_temperature("b") == 0.2
        assert params.bath_temperature("c2") == 0.1
        with pytest.raises(DomainError):
            params.bath_temperature("q")


class TestBathOccupancy:
    """Occupancies of all four baths."""

    def test_zero_temperature(self):
        occ = bath_occupancy(SystemParams(omega_b=1.0))
        assert occ == BathOccupancy()

    def test_preset_point(self, base):
        occ = bath_occupancy(base)
        assert occ.n_b == pytest.approx(thermal_occupancy(base.omega_b, base.T))
        assert occ.n_m < 1e-20 and occ.n_1 < 1e-20 and occ.n_2 < 1e-20

    def test_per_bath_temperature(self):
        params = SystemParams(omega_b=OMEGA_B, omega_m=OMEGA_B, T=0.0, T_m=0.01)
        occ = bath_occupancy(params)
        assert occ.n_b == 0.0
        assert occ.n_m == pytest.approx(thermal_occupancy(OMEGA_B, 0.01))

    def test_negative_occupancy_rejected(self):
        with pytest.raises(DomainError):
            BathOccupancy(n_b=-1.0)
