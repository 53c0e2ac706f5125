import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gravloc.constants import GRAVITATIONAL_CONSTANT as G, REDUCED_PLANCK as HBAR
from gravloc.errors import ConfigError
from gravloc.estimates import (
    AvalancheSpec,
    avalanche_acceleration,
    interferometric_mass,
    reference_report,
    slab_classicality_estimate,
    sphere_classicality_estimate,
)
from gravloc.selfgrav import SlabGeometry


class TestSphereEstimate:
    def test_afm_reference_numbers(self):
        result = sphere_classicality_estimate(rho0=1.0e4, a_max=1.0e-9)
        assert result["radius_min"] == pytest.approx(1.4983e-3, rel=1e-3)
        assert result["mass_min"] == pytest.approx(1.409e-4, rel=1e-3)

    def test_radius_linear_in_a_max(self):
        low = sphere_classicality_estimate(rho0=1.0e4, a_max=1.0e-9)
        high = sphere_classicality_estimate(rho0=1.0e4, a_max=1.0e-8)
        assert high["radius_min"] == pytest.approx(10.0 * low["radius_min"], rel=1e-9)

    @given(st.floats(min_value=1.0, max_value=1e9))
    @settings(max_examples=50)
    def test_kappa_shrinks_radius_linearly(self, kappa):
        base = sphere_classicality_estimate(rho0=1.0e4, a_max=1.0e-9)
        boosted = sphere_classicality_estimate(rho0=1.0e4, a_max=1.0e-9, kappa=kappa)
        assert boosted["radius_min"] == pytest.approx(
            base["radius_min"] / kappa, rel=1e-9
        )

    def test_closed_form(self):
        rho0, a_max = 3.3e3, 2.0e-8
        result = sphere_classicality_estimate(rho0, a_max)
        assert result["radius_min"] == pytest.approx(a_max / (G * rho0), rel=1e-12)


class TestAvalanche:
    def test_geiger_mode_burst(self):
        result = avalanche_acceleration(
            AvalancheSpec(
                electrons=1.0e7,
                lead_cross_section=1.0e-9,
                transfer_time=1.0e-8,
                carrier_density=1.0e30,
            )
        )
        assert result["drift_speed"] == pytest.approx(1.0e-6, rel=1e-12)
        assert result["a_max"] == pytest.approx(1.0e2, rel=1e-12)
        assert result["rho0"] == pytest.approx(0.911, rel=1e-3)

    def test_rejects_nonpositive(self):
        with pytest.raises(ConfigError):
            AvalancheSpec(
                electrons=0.0,
                lead_cross_section=1.0e-9,
                transfer_time=1.0e-8,
                carrier_density=1.0e30,
            )


class TestSlabEstimate:
    def test_required_length_is_astronomical(self):
        side = math.sqrt(1.0e-9)
        geom = SlabGeometry(side_a=side, side_b=side, length=1.0, density=0.911)
        result = slab_classicality_estimate(geom, a_max=1.0e2)
        assert result["required_length"] == pytest.approx(7.82e11, rel=1e-2)
        assert result["margin"] < 1e-10

    def test_confining_acceleration_scales_with_density(self):
        side = 1.0e-4
        one = slab_classicality_estimate(
            SlabGeometry(side, side, 1.0, 1.0), a_max=1.0
        )
        ten = slab_classicality_estimate(
            SlabGeometry(side, side, 1.0, 10.0), a_max=1.0
        )
        assert ten["confining_acceleration"] == pytest.approx(
            10.0 * one["confining_acceleration"], rel=1e-12
        )


class TestInterferometricMass:
    def test_reference_mass(self):
        mass = interferometric_mass(rho0=1.0e4, time_of_flight=1.0e-2)
        assert mass == pytest.approx(8.857e-15, rel=1e-3)

    def test_enhanced_gravity_lowers_threshold(self):
        mass = interferometric_mass(rho0=1.0e4, time_of_flight=1.0e-2, kappa=1.0e6)
        assert mass == pytest.approx(2.22e-18, rel=1e-2)

    def test_phase_closes_at_solution(self):
        rho0, tof = 1.0e4, 1.0e-2
        mass = interferometric_mass(rho0, tof, target_phase=1.0)
        radius = (3.0 * mass / (4.0 * math.pi * rho0)) ** (1.0 / 3.0)
        phase = (6.0 / 5.0) * G * mass**2 / radius * tof / HBAR
        assert phase == pytest.approx(1.0, rel=1e-12)

    @given(st.floats(min_value=1e-2, max_value=1e2))
    @settings(max_examples=50)
    def test_scaling_in_target_phase(self, target):
        base = interferometric_mass(1.0e4, 1.0e-2, target_phase=1.0)
        scaled = interferometric_mass(1.0e4, 1.0e-2, target_phase=target)
        assert scaled == pytest.approx(base * target ** 0.6, rel=1e-9)


class TestReferenceReport:
    def test_all_headline_rows_present(self):
        report = reference_report()
        names = {row.name for row in report.rows}
        assert names == {
            "sphere_radius_min",
            "sphere_mass_min",
            "avalanche_drift_speed",
            "avalanche_a_max",
            "electron_liquid_rho0",
            "slab_required_length",
            "interferometric_mass",
        }

    def test_values_consistent(self):
        report = reference_report()
        assert report.value("sphere_radius_min") == pytest.approx(1.4983e-3, rel=1e-3)
        assert report.value("avalanche_a_max") == pytest.approx(1.0e2, rel=1e-12)
        assert report.value("slab_required_length") == pytest.approx(7.82e11, rel=1e-2)
        assert report.value("interferometric_mass") == pytest.approx(
            8.857e-15, rel=1e-3
        )

    def test_provenance_records_inputs(self):
        report = reference_report(kappa=2.0)
        for row in report.rows:
            assert isinstance(row.provenance, dict) and row.provenance
        sphere = next(r for r in report.rows if r.name == "sphere_radius_min")
        assert sphere.provenance["kappa"] == 2.0

    def test_unknown_name_raises(self):
        with pytest.raises(KeyError):
            reference_report().value("nope")
