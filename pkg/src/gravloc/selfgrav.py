"""Gravitational self-interaction profiles of rigid bodies.

A uniform rigid body confines its own center of mass in an effective
quadratic well.  This module computes the well depth, the squared
confinement frequency and the classicality margin for spheres and
slender rectangular slabs, plus a brute-force sphere-sphere overlap
energy used as an independent check of the closed forms.

Frequency conventions
---------------------
The closed-form sphere result quotes ``omega^2 = G * rho0``.  The
numerically exact curvature of the overlap energy of two uniform
spheres is ``(4*pi/3) * G * rho0``.  Both are available through the
``freq_convention`` switch; the default is ``"closed-form"`` i.e. the
plain ``G * rho0`` convention, with ``"oracle"`` preserving the
brute-force curvature.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .constants import GRAVITATIONAL_CONSTANT as G
from .errors import (
    AccuracyError,
    ConfigError,
    InvalidGeometryError,
    RegimeError,
    RegimeWarning,
)

#: Multiplier applied to G*rho0 to form the squared confinement frequency
#: of a sphere.
FREQ_PREFACTORS = {
    "closed-form": 1.0,
    "oracle": 4.0 * math.pi / 3.0,
}

#: Fractional displacement (or spread) of the validity radius above which
#: the quadratic approximation is considered strained.
QUADRATIC_GUARD_FRACTION = 0.1


def _require_finite(**fields):
    for name, value in fields.items():
        if not math.isfinite(value):
            raise InvalidGeometryError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class SphereGeometry:
    """Uniform sphere: radius [m] and mass density [kg/m^3]."""

    radius: float
    density: float

    def __post_init__(self):
        _require_finite(radius=self.radius, density=self.density)
        if self.radius <= 0:
            raise InvalidGeometryError(f"radius must be positive, got {self.radius}")
        if self.density < 0:
            raise InvalidGeometryError(f"density must be >= 0, got {self.density}")

    @property
    def mass(self) -> float:
        return (4.0 / 3.0) * math.pi * self.radius**3 * self.density


@dataclass(frozen=True)
class SlabGeometry:
    """Slender rectangular slab: cross-section side_a x side_b, length L.

    The closed forms assume L much larger than the cross-section; a
    :class:`RegimeWarning` is issued when ``length < 10 * max(a, b)``.
    """

    side_a: float
    side_b: float
    length: float
    density: float

    def __post_init__(self):
        _require_finite(
            side_a=self.side_a,
            side_b=self.side_b,
            length=self.length,
            density=self.density,
        )
        if self.side_a <= 0 or self.side_b <= 0:
            raise InvalidGeometryError(
                f"cross-section sides must be positive, got {self.side_a} x {self.side_b}"
            )
        if self.length <= 0:
            raise InvalidGeometryError(f"length must be positive, got {self.length}")
        if self.density < 0:
            raise InvalidGeometryError(f"density must be >= 0, got {self.density}")
        if self.length < 10.0 * max(self.side_a, self.side_b):
            warnings.warn(
                "slab length is less than 10x the cross-section; the slender-slab "
                "formulas are being extrapolated",
                RegimeWarning,
                stacklevel=2,
            )

    @property
    def diagonal(self) -> float:
        """Cross-section diagonal, used as the slab 'diameter'."""
        return math.hypot(self.side_a, self.side_b)

    @property
    def mass(self) -> float:
        return self.side_a * self.side_b * self.length * self.density


@dataclass(frozen=True)
class BodyProfile:
    """Self-gravity profile of a rigid body.

    mass [kg], well_depth [J] (<= 0), grav_freq_sq [1/s^2],
    validity_radius [m] (largest displacement for which the quadratic
    form is trusted), gravity_enhancement (dimensionless multiplier on G).
    """

    mass: float
    well_depth: float
    grav_freq_sq: float
    geometry: SphereGeometry | SlabGeometry
    gravity_enhancement: float
    validity_radius: float

    @property
    def stiffness(self) -> float:
        """Harmonic stiffness M * omega_gr^2 [kg/s^2]."""
        return self.mass * self.grav_freq_sq


@dataclass(frozen=True)
class QuadraticPotential:
    """Three-term quadratic self-potential: depth + harmonic + spread shift."""

    center: float
    stiffness: float
    depth: float
    spread_shift: float
    validity_radius: float

    def evaluate(self, position):
        """Potential energy [J] at ``position`` [m]."""
        return (
            self.depth
            + 0.5 * self.stiffness * (np.asarray(position) - self.center) ** 2
            + self.spread_shift
        )


@dataclass(frozen=True)
class ClassicalityMargin:
    """Ratio of maximum confining acceleration to the deconfining one."""

    margin: float
    min_size: float
    never_classical: bool


def _check_enhancement(kappa: float):
    if not math.isfinite(kappa) or kappa < 1.0:
        raise InvalidGeometryError(f"gravity enhancement must be >= 1, got {kappa}")


def sphere_profile(
    geom: SphereGeometry,
    kappa: float = 1.0,
    freq_convention: str = "closed-form",
) -> BodyProfile:
    """Self-gravity profile of a uniform sphere.

    M = (4/3) pi R^3 rho0, well depth -(6/5) kappa G M^2 / R, squared
    frequency ``prefactor * kappa G rho0`` with the prefactor set by
    ``freq_convention`` (see module docstring).
    """
    _check_enhancement(kappa)
    try:
        prefactor = FREQ_PREFACTORS[freq_convention]
    except KeyError:
        raise ConfigError(
            f"unknown freq_convention {freq_convention!r}; "
            f"expected one of {sorted(FREQ_PREFACTORS)}"
        ) from None
    mass = geom.mass
    depth = -(6.0 / 5.0) * kappa * G * mass**2 / geom.radius
    freq_sq = prefactor * kappa * G * geom.density
    return BodyProfile(
        mass=mass,
        well_depth=depth,
        grav_freq_sq=freq_sq,
        geometry=geom,
        gravity_enhancement=kappa,
        validity_radius=geom.radius,
    )


def slab_profile(geom: SlabGeometry, kappa: float = 1.0) -> BodyProfile:
    """Self-gravity profile of a slender slab (axial displacements).

    M = a b L rho0, well depth -2 ln(L/d) kappa G M^2 / L and squared
    frequency kappa G rho0 (d/L) f(a/b), with d the cross-section
    diagonal.  The validity radius is L/2.
    """
    _check_enhancement(kappa)
    d = geom.diagonal
    if geom.length <= d:
        raise RegimeError(
            f"slab length {geom.length} must exceed the cross-section diagonal {d}; "
            "the slender-slab logarithm is nonpositive"
        )
    mass = geom.mass
    depth = -2.0 * math.log(geom.length / d) * kappa * G * mass**2 / geom.length
    freq_sq = (
        kappa
        * G
        * geom.density
        * (d / geom.length)
        * shape_factor(geom.side_a / geom.side_b)
    )
    return BodyProfile(
        mass=mass,
        well_depth=depth,
        grav_freq_sq=freq_sq,
        geometry=geom,
        gravity_enhancement=kappa,
        validity_radius=geom.length / 2.0,
    )


def shape_factor(x: float) -> float:
    """Cross-section shape factor f of the slender-slab frequency formula.

    Symmetric under x -> 1/x; f(1) = 4.205; falls off as (4/x) ln x for
    large aspect ratios.
    """
    x = float(x)
    if not math.isfinite(x) or x <= 0:
        raise InvalidGeometryError(f"aspect ratio must be positive, got {x!r}")
    xi = 1.0 / x
    rp = math.sqrt(1.0 + x * x)
    rm = math.sqrt(1.0 + xi * xi)
    bracket = (
        2.0 * rm * math.log(x + rp)
        + 2.0 * rp * math.log(xi + rm)
        - (2.0 / 3.0) * (2.0 + x * x + xi * xi - x * rp - xi * rm)
    )
    return 2.0 / (x + xi) * bracket


def quadratic_potential(
    profile: BodyProfile, center: float, spread: float
) -> QuadraticPotential:
    """Quadratic self-potential about ``center`` for packet spread ``spread``.

    The spread shift is the time-dependent energy offset
    ``(1/2) M omega_gr^2 spread^2`` that feeds the global phase.
    """
    if not math.isfinite(spread) or spread < 0:
        raise ConfigError(f"spread must be >= 0, got {spread!r}")
    if spread > profile.validity_radius:
        raise RegimeError(
            f"packet spread {spread} exceeds the validity radius "
            f"{profile.validity_radius} of the quadratic approximation"
        )
    if spread > QUADRATIC_GUARD_FRACTION * profile.validity_radius:
        warnings.warn(
            "packet spread exceeds 10% of the validity radius; the quadratic "
            "approximation is strained",
            RegimeWarning,
            stacklevel=2,
        )
    return QuadraticPotential(
        center=center,
        stiffness=profile.stiffness,
        depth=profile.well_depth,
        spread_shift=0.5 * profile.stiffness * spread**2,
        validity_radius=profile.validity_radius,
    )


def classicality_margin(profile: BodyProfile, a_max: float) -> ClassicalityMargin:
    """Confining acceleration omega_gr^2 * validity_radius over ``a_max``.

    A margin much greater than one means the body stays classical under
    measurement-driven accelerations up to ``a_max``.  Also reports the
    minimum confining size (validity radius) at which the margin would
    reach one for the same density and enhancement.
    """
    if not math.isfinite(a_max) or a_max <= 0:
        raise ConfigError(f"a_max must be positive, got {a_max!r}")
    if profile.grav_freq_sq == 0.0:
        return ClassicalityMargin(margin=0.0, min_size=math.inf, never_classical=True)
    margin = profile.grav_freq_sq * profile.validity_radius / a_max
    return ClassicalityMargin(
        margin=margin,
        min_size=a_max / profile.grav_freq_sq,
        never_classical=False,
    )


# --- brute-force overlap-energy oracle -------------------------------------


def _uniform_sphere_potential_times_xi(xi, radius, mass):
    """Phi(xi) * xi for a uniform sphere of given mass and radius.

    Interior: Phi = -G M (3 R^2 - xi^2) / (2 R^3); exterior: Phi = -G M / xi.
    """
    inside = -G * mass * (3.0 * radius**2 * xi - xi**3) / (2.0 * radius**3)
    return np.where(xi <= radius, inside, -G * mass)


def _gauss_nodes(lo, hi, n):
    """Gauss-Legendre nodes/weights mapped onto [lo, hi] (arrays broadcast)."""
    x, w = np.polynomial.legendre.leggauss(n)
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = mid[..., None] + half[..., None] * x
    weights = half[..., None] * w
    return nodes, weights


def _shell_average_potential(r, sep, radius, mass, n):
    """Average of the companion sphere's potential over a shell of radius r.

    Uses the standard reduction to a 1-D integral over the distance xi,
    split at the sphere surface where the interior/exterior forms meet.
    """
    lo = np.abs(r - sep)
    hi = r + sep
    # interior piece [lo, min(hi, R)] and exterior piece [max(lo, R), hi];
    # degenerate (zero-length) pieces contribute nothing
    total = np.zeros_like(r)
    cut_hi = np.minimum(hi, radius)
    nodes, weights = _gauss_nodes(lo, np.maximum(cut_hi, lo), n)
    total += np.sum(weights * _uniform_sphere_potential_times_xi(nodes, radius, mass), axis=-1)
    cut_lo = np.maximum(lo, radius)
    nodes, weights = _gauss_nodes(cut_lo, np.maximum(hi, cut_lo), n)
    total += np.sum(weights * _uniform_sphere_potential_times_xi(nodes, radius, mass), axis=-1)
    return total / (2.0 * r * sep)


def _overlap_energy(radius, density, separation, n):
    mass = (4.0 / 3.0) * math.pi * radius**3 * density
    if separation == 0.0:
        # coincident centers: the shell average degenerates to Phi(r) itself
        nodes, weights = _gauss_nodes(0.0, radius, n)
        phi = _uniform_sphere_potential_times_xi(nodes, radius, mass) / nodes
        return 4.0 * math.pi * density * float(np.sum(weights * nodes**2 * phi))
    # panel boundaries where the integrand changes analytic form
    breaks = sorted(
        {0.0, radius}
        | {v for v in (radius - separation, separation - radius, separation) if 0.0 < v < radius}
    )
    total = 0.0
    for a, b in zip(breaks[:-1], breaks[1:]):
        nodes, weights = _gauss_nodes(a, b, n)
        nodes = nodes.ravel()
        weights = weights.ravel()
        avg = _shell_average_potential(nodes, separation, radius, mass, n)
        total += float(np.sum(weights * nodes**2 * avg))
    return 4.0 * math.pi * density * total


def overlap_energy_oracle(
    radius: float,
    density: float,
    separation: float,
    quadrature_points: int = 48,
    rtol: float = 1e-9,
) -> float:
    """Newtonian interaction energy [J] of two identical uniform spheres.

    Brute-force quadrature of the exact interior/exterior potential;
    independent of the closed-form well depth and curvature it is used
    to check.  Convergence is verified by doubling the node count;
    failure raises :class:`AccuracyError` carrying the best estimate.
    """
    if not math.isfinite(radius) or radius <= 0:
        raise InvalidGeometryError(f"radius must be positive, got {radius!r}")
    if not math.isfinite(density) or density < 0:
        raise InvalidGeometryError(f"density must be >= 0, got {density!r}")
    if not math.isfinite(separation) or separation < 0:
        raise ConfigError(f"separation must be >= 0, got {separation!r}")
    if quadrature_points < 4:
        raise ConfigError("quadrature_points must be at least 4")
    if density == 0.0:
        return 0.0
    coarse = _overlap_energy(radius, density, separation, quadrature_points)
    fine = _overlap_energy(radius, density, separation, 2 * quadrature_points)
    if abs(fine - coarse) > rtol * max(abs(fine), np.finfo(float).tiny):
        raise AccuracyError(
            f"overlap quadrature did not converge to rtol={rtol} with "
            f"{quadrature_points} points (delta {abs(fine - coarse):.3e})",
            achieved=fine,
        )
    return fine
