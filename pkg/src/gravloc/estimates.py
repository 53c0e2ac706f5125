"""Closed-form SI estimates of when self-gravity keeps a detector classical.

Reproduces the headline numbers for a condensed-matter sphere, the
electron liquid of an all-electronic detector, and the interferometric
detectability of the self-interaction, with every input explicit and a
gravity-enhancement factor kappa available as a what-if.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .constants import ELECTRON_MASS, GRAVITATIONAL_CONSTANT as G, REDUCED_PLANCK as HBAR
from .errors import ConfigError
from .selfgrav import (
    SlabGeometry,
    SphereGeometry,
    classicality_margin,
    shape_factor,
    slab_profile,
    sphere_profile,
)


def _require_positive(**fields):
    for name, value in fields.items():
        if not (math.isfinite(value) and value > 0):
            raise ConfigError(f"{name} must be positive, got {value!r}")


@dataclass(frozen=True)
class AvalancheSpec:
    """Charge-transfer burst in the lead of an all-electronic detector."""

    electrons: float
    lead_cross_section: float  # m^2
    transfer_time: float  # s
    carrier_density: float  # 1/m^3
    carrier_mass: float = ELECTRON_MASS  # kg

    def __post_init__(self):
        _require_positive(
            electrons=self.electrons,
            lead_cross_section=self.lead_cross_section,
            transfer_time=self.transfer_time,
            carrier_density=self.carrier_density,
            carrier_mass=self.carrier_mass,
        )


@dataclass(frozen=True)
class EstimateRow:
    """One named scalar result with its unit and input provenance."""

    name: str
    value: float
    unit: str
    provenance: dict


@dataclass(frozen=True)
class EstimateReport:
    rows: list

    def value(self, name: str) -> float:
        for row in self.rows:
            if row.name == name:
                return row.value
        raise KeyError(name)


def sphere_classicality_estimate(rho0: float, a_max: float, kappa: float = 1.0) -> dict:
    """Minimum sphere radius and mass for classical behavior at ``a_max``.

    R_min solves margin = 1; because the sphere frequency is
    independent of R this is a_max / (kappa G rho0).
    """
    _require_positive(rho0=rho0, a_max=a_max, kappa=kappa)
    probe = sphere_profile(SphereGeometry(radius=1.0, density=rho0), kappa=kappa)
    r_min = classicality_margin(probe, a_max).min_size
    m_min = (4.0 / 3.0) * math.pi * r_min**3 * rho0
    return {"radius_min": r_min, "mass_min": m_min}


def avalanche_acceleration(spec: AvalancheSpec) -> dict:
    """Drift speed, peak acceleration and mass density of the carrier liquid.

    v = N / (n A t), a_max = v / t, rho0 = n * carrier_mass.
    """
    v = spec.electrons / (
        spec.carrier_density * spec.lead_cross_section * spec.transfer_time
    )
    return {
        "drift_speed": v,
        "a_max": v / spec.transfer_time,
        "rho0": spec.carrier_density * spec.carrier_mass,
    }


def interferometric_mass(
    rho0: float,
    time_of_flight: float,
    target_phase: float = 1.0,
    kappa: float = 1.0,
) -> float:
    """Sphere mass at which the well-depth phase reaches ``target_phase``.

    Solves (6/5) kappa G M^2 / R(M) * t / hbar = target_phase with
    R(M) = (3 M / 4 pi rho0)^(1/3); the phase scales as M^(5/3) at
    fixed density.
    """
    _require_positive(
        rho0=rho0, time_of_flight=time_of_flight, target_phase=target_phase, kappa=kappa
    )
    coefficient = (
        (6.0 / 5.0)
        * kappa
        * G
        * (4.0 * math.pi * rho0 / 3.0) ** (1.0 / 3.0)
        * time_of_flight
        / HBAR
    )
    return (target_phase / coefficient) ** (3.0 / 5.0)


def slab_classicality_estimate(
    geom: SlabGeometry, a_max: float, kappa: float = 1.0
) -> dict:
    """Confining acceleration of a slab and the length needed to confine a_max.

    The confining acceleration is omega_gr^2 * L/2 =
    kappa G rho0 d f(a/b) / 2, independent of L at fixed cross-section.
    The required length extrapolates the slender-slab form with d ~ L:
    L_required = 2 a_max / (kappa G rho0 f(a/b)).
    """
    _require_positive(a_max=a_max, kappa=kappa)
    profile = slab_profile(geom, kappa=kappa)
    confining = profile.grav_freq_sq * profile.validity_radius
    f = shape_factor(geom.side_a / geom.side_b)
    required = 2.0 * a_max / (kappa * G * geom.density * f)
    return {
        "confining_acceleration": confining,
        "required_length": required,
        "margin": confining / a_max,
    }


#: Reference inputs for the headline report: condensed-matter density,
#: AFM-detectable acceleration, Geiger-mode avalanche, and a 10 ms
#: time-of-flight interferometer.
REFERENCE_INPUTS = {
    "rho0_condensed_matter": 1.0e4,  # kg/m^3
    "a_max_afm": 1.0e-9,  # m/s^2
    "avalanche": AvalancheSpec(
        electrons=1.0e7,
        lead_cross_section=1.0e-9,
        transfer_time=1.0e-8,
        carrier_density=1.0e30,
    ),
    "time_of_flight": 1.0e-2,  # s
    "target_phase": 1.0,
}


def reference_report(kappa: float = 1.0) -> EstimateReport:
    """All headline estimates from first-principles inputs, with provenance."""
    rho0 = REFERENCE_INPUTS["rho0_condensed_matter"]
    a_max = REFERENCE_INPUTS["a_max_afm"]
    avalanche = REFERENCE_INPUTS["avalanche"]
    tof = REFERENCE_INPUTS["time_of_flight"]
    phase = REFERENCE_INPUTS["target_phase"]

    sphere = sphere_classicality_estimate(rho0, a_max, kappa)
    sphere_prov = {"rho0": rho0, "a_max": a_max, "kappa": kappa, "G": G}
    burst = avalanche_acceleration(avalanche)
    burst_prov = {
        "electrons": avalanche.electrons,
        "lead_cross_section": avalanche.lead_cross_section,
        "transfer_time": avalanche.transfer_time,
        "carrier_density": avalanche.carrier_density,
        "carrier_mass": avalanche.carrier_mass,
    }
    # electron-liquid slab: square lead of the avalanche cross-section
    side = math.sqrt(avalanche.lead_cross_section)
    slab = slab_classicality_estimate(
        SlabGeometry(side_a=side, side_b=side, length=1.0, density=burst["rho0"]),
        a_max=burst["a_max"],
        kappa=kappa,
    )
    slab_prov = dict(burst_prov, a_max=burst["a_max"], kappa=kappa, G=G)
    m_interf = interferometric_mass(rho0, tof, phase, kappa)
    interf_prov = {
        "rho0": rho0,
        "time_of_flight": tof,
        "target_phase": phase,
        "kappa": kappa,
        "G": G,
        "hbar": HBAR,
    }
    return EstimateReport(
        rows=[
            EstimateRow("sphere_radius_min", sphere["radius_min"], "m", sphere_prov),
            EstimateRow("sphere_mass_min", sphere["mass_min"], "kg", sphere_prov),
            EstimateRow("avalanche_drift_speed", burst["drift_speed"], "m/s", burst_prov),
            EstimateRow("avalanche_a_max", burst["a_max"], "m/s^2", burst_prov),
            EstimateRow("electron_liquid_rho0", burst["rho0"], "kg/m^3", burst_prov),
            EstimateRow(
                "slab_required_length", slab["required_length"], "m", slab_prov
            ),
            EstimateRow("interferometric_mass", m_interf, "kg", interf_prov),
        ]
    )
