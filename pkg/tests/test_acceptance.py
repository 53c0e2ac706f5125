"""Acceptance gate: one test per headline criterion, one verdict line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the verdict
lines as they are produced.  Each test prints

    [PASS|FAIL] criterion N: <what was checked> (<measured values>)

and then asserts, so the printed table matches the pytest outcome.
Criteria 5, 6 and 9 run long simulations; the full gate takes several
minutes on first run (numba compilation included).
"""

import math
import sys
import warnings

import numpy as np
import pytest

from gravloc.constants import GRAVITATIONAL_CONSTANT as G
from gravloc.dynamics import (
    EvolveScenario,
    GridSpec,
    MeasurementForces,
    QuasiSpinAmplitudes,
    ehrenfest_audit,
    run,
)
from gravloc.escape import (
    DetectorResponse,
    SaddleModel,
    detection_probability,
    exponent_fit,
    monte_carlo_escape,
    two_detector_trial,
)
from gravloc.estimates import (
    AvalancheSpec,
    avalanche_acceleration,
    interferometric_mass,
    sphere_classicality_estimate,
)
from gravloc.selfgrav import overlap_energy_oracle, shape_factor

EQUAL = QuasiSpinAmplitudes(math.sqrt(0.5), math.sqrt(0.5))


def verdict(number: int, label: str, ok: bool, detail: str):
    status = "PASS" if ok else "FAIL"
    print(f"[{status}] criterion {number}: {label} ({detail})", flush=True)
    sys.stdout.flush()
    assert ok, f"criterion {number} failed: {label} ({detail})"


def test_criterion_1_shape_factor():
    f1 = shape_factor(1.0)
    ok = abs(f1 - 4.205) <= 1e-3
    rng = np.random.default_rng(2024)
    xs = np.exp(rng.uniform(math.log(1e-3), math.log(1e3), size=100))
    worst = max(
        abs(shape_factor(x) - shape_factor(1.0 / x)) / abs(shape_factor(x)) for x in xs
    )
    ok = ok and worst <= 1e-9
    verdict(
        1,
        "slab shape factor value and inversion symmetry",
        ok,
        f"f(1) = {f1:.6f} vs 4.205 +- 0.001; worst symmetry error {worst:.2e}",
    )


def test_criterion_2_overlap_oracle_endpoints():
    radius, density = 1.0e-2, 3.0e3
    mass = (4.0 / 3.0) * math.pi * radius**3 * density
    zero = overlap_energy_oracle(radius, density, 0.0)
    depth = -(6.0 / 5.0) * G * mass**2 / radius
    err_zero = abs(zero - depth) / abs(depth)
    contact = overlap_energy_oracle(radius, density, 2.0 * radius)
    point = -G * mass**2 / (2.0 * radius)
    err_contact = abs(contact - point) / abs(point)
    ok = err_zero <= 1e-6 and err_contact <= 1e-6
    verdict(
        2,
        "overlap energy matches -(6/5)GM^2/R at s=0 and -GM^2/2R at s=2R",
        ok,
        f"relative errors {err_zero:.2e} and {err_contact:.2e}, tol 1e-6",
    )


def test_criterion_3_si_estimates():
    sphere = sphere_classicality_estimate(rho0=1.0e4, a_max=1.0e-9)
    r_min = sphere["radius_min"]
    burst = avalanche_acceleration(
        AvalancheSpec(
            electrons=1.0e7,
            lead_cross_section=1.0e-9,
            transfer_time=1.0e-8,
            carrier_density=1.0e30,
        )
    )
    m_interf = interferometric_mass(rho0=1.0e4, time_of_flight=1.0e-2)
    ok = (
        0.5e-3 <= r_min <= 4.5e-3
        and abs(burst["a_max"] - 1.0e2) <= 1.0
        and 3.0e-15 <= m_interf <= 3.0e-14
    )
    verdict(
        3,
        "headline SI estimates (mm sphere, avalanche burst, interferometric mass)",
        ok,
        f"R_min = {r_min:.3e} m, a_max = {burst['a_max']:.4g} m/s^2, "
        f"M_interf = {m_interf:.3e} kg",
    )


def test_criterion_4_ehrenfest_audit():
    grid = GridSpec(points=512, extent=16.0, dt=1e-3, steps=4000)
    amps = QuasiSpinAmplitudes(math.sqrt(0.3), math.sqrt(0.7))
    series = run(
        EvolveScenario(
            grid=grid,
            amplitudes=amps,
            forces=MeasurementForces(0.06, -0.02, f_common=0.01),
            sample_every=10,
        )
    )
    audit = ehrenfest_audit(series)
    ok = audit.max_grav_force <= 1e-10 and audit.max_acceleration_error <= 1e-3
    verdict(
        4,
        "compound gravity force cancels; acceleration = weighted mean force",
        ok,
        f"max |F_grav| = {audit.max_grav_force:.2e} (tol 1e-10), "
        f"accel error = {audit.max_acceleration_error:.2e} (tol 1e-3)",
    )


def test_criterion_5_gravitational_confinement():
    force = 0.05
    # ten periods of the dimensionless well
    grid = GridSpec(points=1024, extent=32.0, dt=1e-3, steps=62832)
    series = run(
        EvolveScenario(
            grid=grid,
            amplitudes=EQUAL,
            forces=MeasurementForces(force, -force),
            gravity_on=True,
            sample_every=100,
        )
    )
    max_sep = float(np.max(np.abs(series.column("separation"))))
    bound = 4.0 * force
    confined_ok = abs(max_sep - bound) / bound <= 0.05

    free_grid = GridSpec(points=1024, extent=48.0, dt=1e-3, steps=8000)
    free = run(
        EvolveScenario(
            grid=free_grid,
            amplitudes=EQUAL,
            forces=MeasurementForces(force, -force),
            gravity_on=False,
            sample_every=100,
        )
    )
    free_sep = float(np.max(np.abs(free.column("separation"))))
    free_ok = free_sep > 10.0 * bound
    verdict(
        5,
        "self-gravity bounds branch separation at 4F over ten periods",
        confined_ok and free_ok,
        f"max separation {max_sep:.4f} vs 4F = {bound} (tol 5%); "
        f"gravity off reaches {free_sep:.2f} > {10.0 * bound}",
    )


def test_criterion_6_escape_exponent():
    forces = np.logspace(-3.0, -1.0, 6)
    table = []
    for force in forces:
        model = SaddleModel(1.0, 1.0, 1.0, 1.0, force=float(force))
        est = monte_carlo_escape(
            model, samples=10_000, horizon=60.0, seed=0, dof=3, dt=3e-4
        )
        table.append((float(force), est.rate))
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        fit = exponent_fit(table)
    ok = abs(fit.exponent - 1.5) <= 0.1
    verdict(
        6,
        "escape rate scales as F^1.5 across F in [1e-3, 1e-1]",
        ok,
        f"fitted exponent {fit.exponent:.3f} +- {fit.stderr:.3f} from "
        f"{fit.points_used}/6 points with nonzero rate; "
        "rates "
        + ", ".join(f"{f:.2e}:{g:.3e}" for f, g in table),
    )


def test_criterion_7_detection_power_laws():
    quarter = DetectorResponse(amplitude_sq=0.25)
    unit = DetectorResponse(amplitude_sq=1.0)
    ratio_threshold = detection_probability(quarter, "threshold") / detection_probability(
        unit, "threshold"
    )
    ratio_biased = detection_probability(quarter, "biased") / detection_probability(
        unit, "biased"
    )
    ok = ratio_threshold == pytest.approx(0.125, rel=1e-12) and ratio_biased == pytest.approx(
        0.25, rel=1e-12
    )
    verdict(
        7,
        "p(1/4)/p(1) = 1/8 at threshold bias and 1/4 when biased above",
        ok,
        f"threshold ratio {ratio_threshold}, biased ratio {ratio_biased}",
    )


def test_criterion_8_two_detector_independence():
    det = DetectorResponse(amplitude_sq=1.0, reference_probability=0.8)
    trials = 20_000
    joint = two_detector_trial(0.5, det, det, trials=trials, seed=2024)
    expected = joint.p_single_1 * joint.p_single_2
    sigma = math.sqrt(expected * (1.0 - expected) / trials)
    deviation = abs(joint.p_both - expected)
    ok = deviation <= 3.0 * sigma
    verdict(
        8,
        "joint firing probability factorizes within binomial noise",
        ok,
        f"P(both) = {joint.p_both:.5f} vs p1 p2 = {expected:.5f}, "
        f"|dev| = {deviation:.2e} <= 3 sigma = {3.0 * sigma:.2e}",
    )


def test_criterion_9_integrator_fidelity():
    # free spreading against the closed form (V = 0: splitting is exact)
    grid = GridSpec(points=512, extent=32.0, dt=1e-3, steps=4000)
    free = run(
        EvolveScenario(
            grid=grid,
            amplitudes=EQUAL,
            forces=MeasurementForces(0.0, 0.0),
            gravity_on=False,
            sample_every=500,
        )
    )
    spread_err = max(
        abs(r.spread_plus - math.sqrt(0.5 * (1.0 + r.time**2)))
        / math.sqrt(0.5 * (1.0 + r.time**2))
        for r in free.records
    )
    norm_err = float(np.max(np.abs(free.column("norm_plus") - 1.0)))

    drifts = []
    dts = (1e-2, 1e-3, 1e-4)
    for dt in dts:
        steps = int(round(4.0 / dt))
        series = run(
            EvolveScenario(
                grid=GridSpec(points=512, extent=16.0, dt=dt, steps=steps),
                amplitudes=EQUAL,
                forces=MeasurementForces(0.05, -0.05),
                gravity_on=True,
                sample_every=max(steps // 8, 1),
            )
        )
        energy = series.column("energy")
        drifts.append(float(np.max(np.abs(energy - energy[0])) / abs(energy[0])))
    slope = float(np.polyfit(np.log(dts), np.log(drifts), 1)[0])
    ok = (
        spread_err <= 1e-6
        and norm_err <= 1e-8
        and 1.7 <= slope <= 2.3
        and drifts[1] <= 1e-6
    )
    verdict(
        9,
        "free spreading exact, norms conserved, energy drift second order in dt",
        ok,
        f"spread err {spread_err:.2e} (tol 1e-6), norm err {norm_err:.2e} (tol 1e-8), "
        f"drift slope {slope:.2f} in [1.7, 2.3], drift(dt=1e-3) = {drifts[1]:.2e}",
    )
