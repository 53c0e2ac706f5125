"""Two-branch wavepacket evolution with self-consistent quadratic gravity.

Works in dimensionless units: lengths in sqrt(hbar / (M omega_gr)),
times in 1/omega_gr, so the equation of motion is

    i dpsi/dt = [ -1/2 d^2/dx^2 - (F_branch + F_common) x
                  + 1/2 (x - x_star)^2 ] psi

with ``x_star`` the amplitude-weighted common center of mass, refreshed
from the current state every step.  Evolution is second-order Strang
splitting on a periodic spectral grid; an edge-mass guard converts
silent wraparound into an explicit error.

``nondimensionalize`` provides the conversion between a physical
:class:`~gravloc.selfgrav.BodyProfile` and these units; macroscopic
bodies give length units around 1e-13 m, which is why simulated runs
use synthetic dimensionless parameters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .constants import REDUCED_PLANCK as HBAR
from .errors import AccuracyError, ConfigError
from .selfgrav import BodyProfile

#: Fraction of the grid (per side) watched by the edge-mass guard.
EDGE_GUARD_FRACTION = 0.05
#: Probability mass allowed in the guard band before the run is aborted.
EDGE_GUARD_MASS = 1e-6


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on [-extent, extent) with fixed time step."""

    points: int
    extent: float
    dt: float
    steps: int

    def __post_init__(self):
        if self.points < 64 or self.points & (self.points - 1):
            raise ConfigError(
                f"grid points must be a power of two >= 64, got {self.points}"
            )
        if not (self.extent > 0 and math.isfinite(self.extent)):
            raise ConfigError(f"extent must be positive, got {self.extent}")
        if not (self.dt > 0 and math.isfinite(self.dt)):
            raise ConfigError(f"dt must be positive, got {self.dt}")
        if self.steps < 0:
            raise ConfigError(f"steps must be >= 0, got {self.steps}")

    @property
    def dx(self) -> float:
        return 2.0 * self.extent / self.points

    def positions(self) -> np.ndarray:
        return -self.extent + self.dx * np.arange(self.points)

    def wavenumbers(self) -> np.ndarray:
        return 2.0 * math.pi * np.fft.fftfreq(self.points, d=self.dx)


@dataclass(frozen=True)
class QuasiSpinAmplitudes:
    """Constant branch amplitudes c+ and c- with |c+|^2 + |c-|^2 = 1."""

    c_plus: complex
    c_minus: complex

    def __post_init__(self):
        total = abs(self.c_plus) ** 2 + abs(self.c_minus) ** 2
        if abs(total - 1.0) > 1e-12:
            raise ConfigError(
                f"|c+|^2 + |c-|^2 must equal 1 within 1e-12, got {total!r}"
            )

    @property
    def weight_plus(self) -> float:
        return abs(self.c_plus) ** 2

    @property
    def weight_minus(self) -> float:
        return abs(self.c_minus) ** 2

    def swapped(self) -> "QuasiSpinAmplitudes":
        return QuasiSpinAmplitudes(self.c_minus, self.c_plus)


@dataclass(frozen=True)
class MeasurementForces:
    """Constant branch forces from linear measurement potentials -F x."""

    f_plus: float
    f_minus: float
    f_common: float = 0.0

    def __post_init__(self):
        for name in ("f_plus", "f_minus", "f_common"):
            if not math.isfinite(getattr(self, name)):
                raise ConfigError(f"{name} must be finite")

    def swapped(self) -> "MeasurementForces":
        return MeasurementForces(self.f_minus, self.f_plus, self.f_common)


def _moments(psi: np.ndarray, x: np.ndarray, dx: float):
    density = np.abs(psi) ** 2
    norm = float(np.sum(density) * dx)
    mean = float(np.sum(x * density) * dx / norm)
    var = float(np.sum((x - mean) ** 2 * density) * dx / norm)
    return norm, mean, math.sqrt(max(var, 0.0))


@dataclass(frozen=True)
class BranchState:
    """Two branch wavefunctions on a shared grid plus accumulated phase."""

    grid: GridSpec
    psi_plus: np.ndarray
    psi_minus: np.ndarray
    amplitudes: QuasiSpinAmplitudes
    time: float = 0.0
    phase: float = 0.0

    @property
    def norm_plus(self) -> float:
        return _moments(self.psi_plus, self.grid.positions(), self.grid.dx)[0]

    @property
    def norm_minus(self) -> float:
        return _moments(self.psi_minus, self.grid.positions(), self.grid.dx)[0]

    @property
    def mean_plus(self) -> float:
        return _moments(self.psi_plus, self.grid.positions(), self.grid.dx)[1]

    @property
    def mean_minus(self) -> float:
        return _moments(self.psi_minus, self.grid.positions(), self.grid.dx)[1]

    @property
    def spread_plus(self) -> float:
        return _moments(self.psi_plus, self.grid.positions(), self.grid.dx)[2]

    @property
    def spread_minus(self) -> float:
        return _moments(self.psi_minus, self.grid.positions(), self.grid.dx)[2]

    @property
    def common_center(self) -> float:
        return (
            self.amplitudes.weight_plus * self.mean_plus
            + self.amplitudes.weight_minus * self.mean_minus
        )

    @property
    def separation(self) -> float:
        return self.mean_plus - self.mean_minus

    def compound_spread(self) -> float:
        """Standard deviation of the full density w+|psi+|^2 + w-|psi-|^2."""
        x = self.grid.positions()
        dx = self.grid.dx
        density = (
            self.amplitudes.weight_plus * np.abs(self.psi_plus) ** 2
            + self.amplitudes.weight_minus * np.abs(self.psi_minus) ** 2
        )
        norm = np.sum(density) * dx
        mean = np.sum(x * density) * dx / norm
        var = np.sum((x - mean) ** 2 * density) * dx / norm
        return math.sqrt(max(float(var), 0.0))

    def swapped(self) -> "BranchState":
        """Relabel the branches (+ <-> -) together with the amplitudes."""
        return replace(
            self,
            psi_plus=self.psi_minus,
            psi_minus=self.psi_plus,
            amplitudes=self.amplitudes.swapped(),
        )


@dataclass(frozen=True)
class ScalingRecord:
    """Conversion factors between SI and the dimensionless evolution units."""

    length_unit: float
    time_unit: float
    force_unit: float
    energy_unit: float
    validity_radius_dimensionless: float


def nondimensionalize(profile: BodyProfile, packet_width: float) -> ScalingRecord:
    """Natural units of the self-gravity harmonic well.

    time unit 1/omega_gr, length unit sqrt(hbar/(M omega_gr)).  The
    dimensionless validity radius shows how much room the quadratic
    regime leaves on the grid (~1e10 for a mm-scale sphere, hence the
    synthetic-regime simulations).
    """
    if profile.grav_freq_sq <= 0:
        raise ConfigError(
            "profile has zero gravitational frequency; run with gravity_on=False "
            "(free-particle mode) instead of nondimensionalizing"
        )
    if not (packet_width > 0 and math.isfinite(packet_width)):
        raise ConfigError(f"packet_width must be positive, got {packet_width!r}")
    omega = math.sqrt(profile.grav_freq_sq)
    tau = 1.0 / omega
    lam = math.sqrt(HBAR / (profile.mass * omega))
    return ScalingRecord(
        length_unit=lam,
        time_unit=tau,
        force_unit=profile.mass * omega**2 * lam,
        energy_unit=HBAR * omega,
        validity_radius_dimensionless=profile.validity_radius / lam,
    )


def init_gaussian(
    grid: GridSpec,
    center: float,
    width: float,
    amplitudes: QuasiSpinAmplitudes,
) -> BranchState:
    """Both branches start as the same normalized Gaussian.

    ``width`` is the wavefunction width w in psi ~ exp(-(x-c)^2 / (2 w^2)),
    so the density standard deviation is w / sqrt(2).  A width of 1 is the
    coherent-state width of the dimensionless harmonic well.
    """
    if not (width > 0 and math.isfinite(width)):
        raise ConfigError(f"width must be positive, got {width!r}")
    if width < 8.0 * grid.dx:
        raise ConfigError(
            f"width {width} under-resolved: needs >= 8 grid points per width "
            f"(dx = {grid.dx})"
        )
    x = grid.positions()
    psi = np.exp(-((x - center) ** 2) / (2.0 * width**2)).astype(complex)
    tail = float(np.max(np.abs(psi[[0, -1]]) ** 2))
    if tail > 1e-12:
        raise ConfigError(
            f"packet tail density {tail:.2e} at the domain edge exceeds 1e-12; "
            "enlarge the extent or narrow the packet"
        )
    psi /= math.sqrt(float(np.sum(np.abs(psi) ** 2)) * grid.dx)
    return BranchState(
        grid=grid,
        psi_plus=psi,
        psi_minus=psi.copy(),
        amplitudes=amplitudes,
    )


def _edge_guard(grid: GridSpec, *branches):
    n_guard = max(1, int(EDGE_GUARD_FRACTION * grid.points))
    for psi in branches:
        density = np.abs(psi) ** 2 * grid.dx
        if float(np.sum(density[:n_guard]) + np.sum(density[-n_guard:])) > EDGE_GUARD_MASS:
            raise AccuracyError(
                "packet reached the domain edge (guard-band mass above "
                f"{EDGE_GUARD_MASS}); enlarge the grid extent"
            )


def step(
    state: BranchState,
    forces: MeasurementForces,
    gravity_on: bool,
    depth: float = 0.0,
) -> BranchState:
    """One Strang step: half kinetic, full potential, half kinetic.

    The gravity center x_star is recomputed from the current state at
    the potential stage (self-consistency refreshed every step).
    ``depth`` is the dimensionless well-depth offset entering only the
    accumulated global phase, alongside the spread shift
    ``(1/2) compound_spread^2`` (trapezoidal in time).
    """
    grid = state.grid
    x = grid.positions()
    k = grid.wavenumbers()
    half_kinetic = np.exp(-0.25j * k**2 * grid.dt)

    spread_before = state.compound_spread() if gravity_on else 0.0

    def half_kin(psi):
        return np.fft.ifft(half_kinetic * np.fft.fft(psi))

    psi_p = half_kin(state.psi_plus)
    psi_m = half_kin(state.psi_minus)

    w_p = state.amplitudes.weight_plus
    w_m = state.amplitudes.weight_minus
    dx = grid.dx
    mean_p = _moments(psi_p, x, dx)[1]
    mean_m = _moments(psi_m, x, dx)[1]
    x_star = w_p * mean_p + w_m * mean_m

    v_p = -(forces.f_plus + forces.f_common) * x
    v_m = -(forces.f_minus + forces.f_common) * x
    if gravity_on:
        harmonic = 0.5 * (x - x_star) ** 2
        v_p = v_p + harmonic
        v_m = v_m + harmonic
    psi_p = np.exp(-1j * v_p * grid.dt) * psi_p
    psi_m = np.exp(-1j * v_m * grid.dt) * psi_m

    psi_p = half_kin(psi_p)
    psi_m = half_kin(psi_m)
    _edge_guard(grid, psi_p, psi_m)

    new_state = replace(
        state,
        psi_plus=psi_p,
        psi_minus=psi_m,
        time=state.time + grid.dt,
    )
    if gravity_on:
        spread_after = new_state.compound_spread()
        shift = depth + 0.25 * (spread_before**2 + spread_after**2)
        new_state = replace(new_state, phase=state.phase - shift * grid.dt)
    return new_state


def branch_energy(state: BranchState, forces: MeasurementForces, gravity_on: bool) -> float:
    """Amplitude-weighted energy expectation (without the depth offset)."""
    grid = state.grid
    x = grid.positions()
    k = grid.wavenumbers()
    dx = grid.dx
    x_star = state.common_center
    total = 0.0
    for psi, f_branch, weight in (
        (state.psi_plus, forces.f_plus, state.amplitudes.weight_plus),
        (state.psi_minus, forces.f_minus, state.amplitudes.weight_minus),
    ):
        if weight == 0.0:
            continue
        # Parseval: <T> = sum_k (k^2/2) |psi_hat_k|^2 dx / N
        psi_hat = np.fft.fft(psi)
        kinetic = float(np.sum(0.5 * k**2 * np.abs(psi_hat) ** 2) * dx / grid.points)
        v = -(f_branch + forces.f_common) * x
        if gravity_on:
            v = v + 0.5 * (x - x_star) ** 2
        potential = float(np.sum(v * np.abs(psi) ** 2) * dx)
        total += weight * (kinetic + potential)
    return total


@dataclass(frozen=True)
class DynamicsRecord:
    """Per-sample diagnostics of a run."""

    time: float
    mean_plus: float
    mean_minus: float
    common_center: float
    separation: float
    spread_plus: float
    spread_minus: float
    spread_compound: float
    grav_force_compound: float
    compound_acceleration: float
    phase: float
    norm_plus: float
    norm_minus: float
    energy: float


@dataclass(frozen=True)
class TimeSeries:
    """Sampled diagnostics plus the run metadata needed to audit them."""

    records: list
    forces: MeasurementForces
    amplitudes: QuasiSpinAmplitudes
    gravity_on: bool
    sample_dt: float

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])


@dataclass(frozen=True)
class EvolveScenario:
    """Declarative description of a dynamics run (dimensionless units)."""

    grid: GridSpec
    amplitudes: QuasiSpinAmplitudes
    forces: MeasurementForces
    width: float = 1.0
    center: float = 0.0
    gravity_on: bool = True
    depth: float = 0.0
    sample_every: int = 1

    def __post_init__(self):
        if self.sample_every < 1:
            raise ConfigError(f"sample_every must be >= 1, got {self.sample_every}")


def _record(state: BranchState, forces: MeasurementForces, gravity_on: bool) -> DynamicsRecord:
    w_p = state.amplitudes.weight_plus
    w_m = state.amplitudes.weight_minus
    mean_p = state.mean_plus
    mean_m = state.mean_minus
    x_star = w_p * mean_p + w_m * mean_m
    if gravity_on:
        grav = -(w_p * (mean_p - x_star) + w_m * (mean_m - x_star))
    else:
        grav = 0.0
    accel = (
        w_p * (forces.f_plus + forces.f_common)
        + w_m * (forces.f_minus + forces.f_common)
        + grav
    )
    return DynamicsRecord(
        time=state.time,
        mean_plus=mean_p,
        mean_minus=mean_m,
        common_center=x_star,
        separation=mean_p - mean_m,
        spread_plus=state.spread_plus,
        spread_minus=state.spread_minus,
        spread_compound=state.compound_spread(),
        grav_force_compound=grav,
        compound_acceleration=accel,
        phase=state.phase,
        norm_plus=state.norm_plus,
        norm_minus=state.norm_minus,
        energy=branch_energy(state, forces, gravity_on),
    )


def run(scenario: EvolveScenario) -> TimeSeries:
    """Evolve for the configured horizon, sampling diagnostics."""
    state = init_gaussian(
        scenario.grid, scenario.center, scenario.width, scenario.amplitudes
    )
    records = [_record(state, scenario.forces, scenario.gravity_on)]
    for step_index in range(1, scenario.grid.steps + 1):
        state = step(state, scenario.forces, scenario.gravity_on, scenario.depth)
        if step_index % scenario.sample_every == 0:
            records.append(_record(state, scenario.forces, scenario.gravity_on))
    return TimeSeries(
        records=records,
        forces=scenario.forces,
        amplitudes=scenario.amplitudes,
        gravity_on=scenario.gravity_on,
        sample_dt=scenario.grid.dt * scenario.sample_every,
    )


@dataclass(frozen=True)
class EhrenfestAudit:
    """Checks of force cancellation and amplitude-averaged acceleration."""

    max_grav_force: float
    expected_acceleration: float
    max_acceleration_error: float
    acceleration_tolerance: float

    @property
    def grav_force_ok(self) -> bool:
        return self.max_grav_force <= 1e-10

    @property
    def acceleration_ok(self) -> bool:
        return self.max_acceleration_error <= self.acceleration_tolerance


def ehrenfest_audit(series: TimeSeries) -> EhrenfestAudit:
    """Audit a run against the two averaged-force identities.

    (i) the compound gravitational force must vanish to roundoff at every
    sample; (ii) the central-difference acceleration of the common center
    must equal the amplitude-weighted mean measurement force.  The
    acceleration tolerance is O(sample_dt^2), reported in the result.
    """
    if len(series.records) < 3:
        raise ConfigError("ehrenfest audit needs at least 3 samples")
    grav = np.abs(series.column("grav_force_compound"))
    x_star = series.column("common_center")
    dt = series.sample_dt
    fd_accel = (x_star[2:] - 2.0 * x_star[1:-1] + x_star[:-2]) / dt**2
    w_p = series.amplitudes.weight_plus
    w_m = series.amplitudes.weight_minus
    expected = (
        w_p * series.forces.f_plus
        + w_m * series.forces.f_minus
        + series.forces.f_common
    )
    scale = max(abs(expected), 1.0)
    err = float(np.max(np.abs(fd_accel - expected)) / scale)
    return EhrenfestAudit(
        max_grav_force=float(np.max(grav)),
        expected_acceleration=expected,
        max_acceleration_error=err,
        acceleration_tolerance=max(1.0e3 * dt**2, 1e-9),
    )
