"""Deterministic scenario execution with on-disk artifacts.

Every run writes, into its output directory:

* ``<kind>.csv``   -- tabular results, one header row naming each column
                      and its unit ("dimensionless" where applicable);
* ``summary.yaml`` -- key-value summary of the run;
* ``manifest.yaml``-- config snapshot (defaults resolved), constants,
                      package version, seed and wall-clock time.

The tabular output is a pure function of (config, seed): identical
inputs give byte-identical tables.  Partial outputs are removed if the
run fails.
"""

from __future__ import annotations

import datetime
import math
import time
from pathlib import Path

import numpy as np
import yaml

from . import __version__
from .config import ScenarioConfig, serialize_config
from .constants import (
    ELECTRON_MASS,
    ELEMENTARY_CHARGE,
    GRAVITATIONAL_CONSTANT,
    REDUCED_PLANCK,
)
from .errors import GravlocError, OutputError
from . import dynamics, escape, estimates, selfgrav


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _write_table(path: Path, header: list, rows: list):
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _run_criterion(config: ScenarioConfig, rng):
    p = config.params
    geom = selfgrav.SphereGeometry(radius=p.radius, density=p.rho0)
    profile = selfgrav.sphere_profile(
        geom, kappa=p.kappa, freq_convention=p.freq_convention
    )
    margin = selfgrav.classicality_margin(profile, p.a_max)
    header = [
        "radius [m]",
        "rho0 [kg/m^3]",
        "kappa [dimensionless]",
        "a_max [m/s^2]",
        "mass [kg]",
        "well_depth [J]",
        "grav_freq_sq [1/s^2]",
        "margin [dimensionless]",
        "min_size [m]",
    ]
    rows = [[
        p.radius,
        p.rho0,
        p.kappa,
        p.a_max,
        profile.mass,
        profile.well_depth,
        profile.grav_freq_sq,
        margin.margin,
        margin.min_size,
    ]]
    summary = {
        "margin": margin.margin,
        "min_size_m": margin.min_size,
        "never_classical": margin.never_classical,
        "classical": bool(margin.margin > 1.0),
    }
    return header, rows, summary


def _run_evolve(config: ScenarioConfig, rng):
    p = config.params
    grid = dynamics.GridSpec(points=p.points, extent=p.extent, dt=p.dt, steps=p.steps)
    amps = dynamics.QuasiSpinAmplitudes(
        math.sqrt(p.c_plus_sq), math.sqrt(1.0 - p.c_plus_sq)
    )
    scenario = dynamics.EvolveScenario(
        grid=grid,
        amplitudes=amps,
        forces=dynamics.MeasurementForces(p.f_plus, p.f_minus, p.f_common),
        width=p.width,
        center=p.center,
        gravity_on=p.gravity_on,
        depth=p.depth,
        sample_every=p.sample_every,
    )
    series = dynamics.run(scenario)
    columns = [
        ("time", "time [dimensionless]"),
        ("mean_plus", "mean_plus [dimensionless]"),
        ("mean_minus", "mean_minus [dimensionless]"),
        ("common_center", "common_center [dimensionless]"),
        ("separation", "separation [dimensionless]"),
        ("spread_plus", "spread_plus [dimensionless]"),
        ("spread_minus", "spread_minus [dimensionless]"),
        ("spread_compound", "spread_compound [dimensionless]"),
        ("grav_force_compound", "grav_force_compound [dimensionless]"),
        ("compound_acceleration", "compound_acceleration [dimensionless]"),
        ("phase", "phase [rad]"),
        ("norm_plus", "norm_plus [dimensionless]"),
        ("norm_minus", "norm_minus [dimensionless]"),
        ("energy", "energy [dimensionless]"),
    ]
    rows = [
        [getattr(record, name) for name, _ in columns] for record in series.records
    ]
    audit = dynamics.ehrenfest_audit(series)
    separation = np.abs(series.column("separation"))
    summary = {
        "max_separation": float(np.max(separation)),
        "final_phase": series.records[-1].phase,
        "max_grav_force_compound": audit.max_grav_force,
        "max_acceleration_error": audit.max_acceleration_error,
        "acceleration_tolerance": audit.acceleration_tolerance,
        "expected_acceleration": audit.expected_acceleration,
        "spread_note": "spread_compound is the std of the full two-branch density",
    }
    return [h for _, h in columns], rows, summary


def _run_escape(config: ScenarioConfig, rng):
    p = config.params
    header = [
        "force [dimensionless]",
        "rate [1/time, dimensionless]",
        "crossings [count]",
        "samples [count]",
        "half_width [1/time, dimensionless]",
    ]
    rows = []
    rates = []
    for force in p.forces:
        model = escape.SaddleModel(p.a, p.b, p.c, p.m, force)
        estimate = escape.monte_carlo_escape(
            model,
            samples=p.samples,
            horizon=p.horizon,
            seed=config.seed,
            dof=p.dof,
            dt=p.dt,
        )
        rows.append([
            force,
            estimate.rate,
            estimate.crossings,
            estimate.samples,
            estimate.half_width,
        ])
        rates.append((force, estimate.rate))
    summary = {"points": len(rows)}
    positive = [(f, g) for f, g in rates if g > 0]
    if len(positive) >= 3:
        fit = escape.exponent_fit(positive)
        summary.update(
            exponent=fit.exponent,
            exponent_stderr=fit.stderr,
            points_used=fit.points_used,
        )
    else:
        summary["exponent"] = None
        summary["note"] = "fewer than 3 positive rates; no exponent fit"
    return header, rows, summary


def _run_born(config: ScenarioConfig, rng):
    p = config.params
    header = [
        "amplitude_sq [dimensionless]",
        "probability [dimensionless]",
        "regime [label]",
    ]
    rows = []
    for amp in p.amplitudes_sq:
        resp = escape.DetectorResponse(
            amplitude_sq=amp, reference_probability=p.reference_probability
        )
        rows.append([amp, escape.detection_probability(resp, p.regime), p.regime])
    summary = {
        "regime": p.regime,
        "power": escape.REGIME_EXPONENTS[p.regime],
        "reference_probability": p.reference_probability,
    }
    return header, rows, summary


def _run_two_detector(config: ScenarioConfig, rng):
    p = config.params
    det = escape.DetectorResponse(
        amplitude_sq=1.0, reference_probability=p.reference_probability
    )
    joint = escape.two_detector_trial(
        p.c_plus_sq,
        det,
        det,
        trials=p.trials,
        seed=config.seed,
        regime=p.regime,
    )
    header = [
        "outcome [label]",
        "probability [dimensionless]",
    ]
    rows = [
        ["only_detector_1", joint.p_only_1],
        ["only_detector_2", joint.p_only_2],
        ["both", joint.p_both],
        ["neither", joint.p_neither],
    ]
    summary = {
        "p_single_1": joint.p_single_1,
        "p_single_2": joint.p_single_2,
        "p_both_observed": joint.p_both,
        "p_both_independent": joint.p_single_1 * joint.p_single_2,
        "trials": joint.trials,
        "note": "joint table factorizes; no anticorrelation mechanism exists",
    }
    return header, rows, summary


def _run_estimates(config: ScenarioConfig, rng):
    report = estimates.reference_report(kappa=config.params.kappa)
    header = ["name [label]", "value [see unit column]", "unit [label]", "provenance [key=value;...]"]
    rows = []
    for row in report.rows:
        provenance = ";".join(f"{k}={_fmt(v)}" for k, v in sorted(row.provenance.items()))
        rows.append([row.name, row.value, row.unit, provenance])
    summary = {row.name: row.value for row in report.rows}
    return header, rows, summary


_RUNNERS = {
    "criterion": _run_criterion,
    "evolve": _run_evolve,
    "escape": _run_escape,
    "born": _run_born,
    "two-detector": _run_two_detector,
    "estimates": _run_estimates,
}


def execute(config: ScenarioConfig, out_dir) -> dict:
    """Run a scenario and write its artifacts; returns the summary dict."""
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OutputError(f"cannot create output directory {out}: {exc}") from None
    written = []
    start = time.monotonic()
    try:
        rng = np.random.default_rng(config.seed)
        header, rows, summary = _RUNNERS[config.kind](config, rng)
        table_path = out / f"{config.kind}.csv"
        written.append(table_path)
        _write_table(table_path, header, rows)
        summary_path = out / "summary.yaml"
        written.append(summary_path)
        summary_path.write_text(
            yaml.safe_dump(summary, sort_keys=True), encoding="utf-8"
        )
        manifest = {
            "config": yaml.safe_load(serialize_config(config)),
            "seed": config.seed,
            "constants": {
                "G": GRAVITATIONAL_CONSTANT,
                "hbar": REDUCED_PLANCK,
                "electron_mass": ELECTRON_MASS,
                "elementary_charge": ELEMENTARY_CHARGE,
            },
            "version": __version__,
            "wall_clock_s": time.monotonic() - start,
            "written_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
        }
        manifest_path = out / "manifest.yaml"
        written.append(manifest_path)
        manifest_path.write_text(
            yaml.safe_dump(manifest, sort_keys=True), encoding="utf-8"
        )
        return summary
    except GravlocError:
        for path in written:
            path.unlink(missing_ok=True)
        raise
    except OSError as exc:
        for path in written:
            path.unlink(missing_ok=True)
        raise OutputError(f"failed writing artifacts to {out}: {exc}") from None
