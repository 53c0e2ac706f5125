"""Scenario configuration: YAML schema, validation, defaults, round-trip.

A config document names exactly one scenario kind and carries a section
of the same name with that kind's parameters:

    scenario: evolve
    seed: 42
    evolve:
      points: 512
      extent: 16.0
      ...

Unknown keys anywhere are an error (listed by name), as are missing
required keys and out-of-range values.  Defaults are resolved at parse
time so a parsed config echoes every effective value.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field, fields

import yaml

from .errors import ConfigError

SCENARIO_KINDS = (
    "criterion",
    "evolve",
    "escape",
    "born",
    "two-detector",
    "estimates",
)


def _check_keys(section: dict, allowed, context: str):
    if not isinstance(section, dict):
        raise ConfigError(f"{context} must be a mapping, got {type(section).__name__}")
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) in {context}: {', '.join(unknown)}")


def _take(section: dict, name: str, context: str, default=..., cast=float):
    if name not in section:
        if default is ...:
            raise ConfigError(f"missing required key '{name}' in {context}")
        return default
    value = section[name]
    try:
        return cast(value)
    except (TypeError, ValueError):
        raise ConfigError(
            f"key '{name}' in {context} has invalid value {value!r}"
        ) from None


def _positive(value, name, context):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
        raise ConfigError(f"key '{name}' in {context} must be positive, got {value!r}")
    return value


def _nonnegative(value, name, context):
    if not (isinstance(value, (int, float)) and math.isfinite(value) and value >= 0):
        raise ConfigError(f"key '{name}' in {context} must be >= 0, got {value!r}")
    return value


@dataclass(frozen=True)
class CriterionParams:
    """Classicality margin of a sphere (or slab) against a_max."""

    radius: float
    rho0: float
    a_max: float
    kappa: float = 1.0
    freq_convention: str = "closed-form"

    @classmethod
    def from_dict(cls, section: dict, context: str) -> "CriterionParams":
        _check_keys(section, [f.name for f in fields(cls)], context)
        radius = _positive(_take(section, "radius", context), "radius", context)
        rho0 = _nonnegative(_take(section, "rho0", context), "rho0", context)
        a_max = _positive(_take(section, "a_max", context), "a_max", context)
        kappa = _take(section, "kappa", context, default=1.0)
        if kappa < 1.0:
            raise ConfigError(f"key 'kappa' in {context} must be >= 1, got {kappa}")
        convention = _take(
            section, "freq_convention", context, default="closed-form", cast=str
        )
        if convention not in ("closed-form", "oracle"):
            raise ConfigError(
                f"key 'freq_convention' in {context} must be 'closed-form' or 'oracle'"
            )
        return cls(radius, rho0, a_max, kappa, convention)


@dataclass(frozen=True)
class EvolveParams:
    """Two-branch run in dimensionless units."""

    points: int = 512
    extent: float = 16.0
    dt: float = 1.0e-3
    steps: int = 10_000
    c_plus_sq: float = 0.5
    f_plus: float = 0.05
    f_minus: float = -0.05
    f_common: float = 0.0
    width: float = 1.0
    center: float = 0.0
    gravity_on: bool = True
    depth: float = 0.0
    sample_every: int = 10

    @classmethod
    def from_dict(cls, section: dict, context: str) -> "EvolveParams":
        _check_keys(section, [f.name for f in fields(cls)], context)
        defaults = cls()
        points = _take(section, "points", context, default=defaults.points, cast=int)
        if points < 64 or points & (points - 1):
            raise ConfigError(
                f"key 'points' in {context} must be a power of two >= 64, got {points}"
            )
        extent = _positive(
            _take(section, "extent", context, default=defaults.extent), "extent", context
        )
        dt = _positive(_take(section, "dt", context, default=defaults.dt), "dt", context)
        steps = _take(section, "steps", context, default=defaults.steps, cast=int)
        if steps < 1:
            raise ConfigError(f"key 'steps' in {context} must be >= 1, got {steps}")
        c_plus_sq = _take(section, "c_plus_sq", context, default=defaults.c_plus_sq)
        if not 0.0 <= c_plus_sq <= 1.0:
            raise ConfigError(
                f"key 'c_plus_sq' in {context} must lie in [0, 1], got {c_plus_sq}"
            )
        width = _positive(
            _take(section, "width", context, default=defaults.width), "width", context
        )
        sample_every = _take(
            section, "sample_every", context, default=defaults.sample_every, cast=int
        )
        if sample_every < 1:
            raise ConfigError(
                f"key 'sample_every' in {context} must be >= 1, got {sample_every}"
            )
        return cls(
            points=points,
            extent=extent,
            dt=dt,
            steps=steps,
            c_plus_sq=c_plus_sq,
            f_plus=_take(section, "f_plus", context, default=defaults.f_plus),
            f_minus=_take(section, "f_minus", context, default=defaults.f_minus),
            f_common=_take(section, "f_common", context, default=defaults.f_common),
            width=width,
            center=_take(section, "center", context, default=defaults.center),
            gravity_on=_take(
                section, "gravity_on", context, default=defaults.gravity_on, cast=bool
            ),
            depth=_take(section, "depth", context, default=defaults.depth),
            sample_every=sample_every,
        )


@dataclass(frozen=True)
class EscapeParams:
    """Monte Carlo escape-rate sweep over measurement forces."""

    forces: tuple = (1.0e-3, 2.512e-3, 6.31e-3, 1.585e-2, 3.981e-2, 1.0e-1)
    a: float = 1.0
    b: float = 1.0
    c: float = 1.0
    m: float = 1.0
    samples: int = 10_000
    horizon: float = 60.0
    dof: int = 3
    dt: float = 3.0e-4

    @classmethod
    def from_dict(cls, section: dict, context: str) -> "EscapeParams":
        _check_keys(section, [f.name for f in fields(cls)], context)
        defaults = cls()
        forces = section.get("forces", list(defaults.forces))
        if not isinstance(forces, (list, tuple)) or not forces:
            raise ConfigError(f"key 'forces' in {context} must be a nonempty list")
        forces = tuple(
            _nonnegative(float(f), "forces", context) for f in forces
        )
        params = {}
        for name in ("a", "b", "c", "m", "horizon", "dt"):
            params[name] = _positive(
                _take(section, name, context, default=getattr(defaults, name)),
                name,
                context,
            )
        samples = _take(section, "samples", context, default=defaults.samples, cast=int)
        if samples < 1000:
            raise ConfigError(
                f"key 'samples' in {context} must be >= 1000, got {samples}"
            )
        dof = _take(section, "dof", context, default=defaults.dof, cast=int)
        if dof not in (2, 3):
            raise ConfigError(f"key 'dof' in {context} must be 2 or 3, got {dof}")
        return cls(forces=forces, samples=samples, dof=dof, **params)


@dataclass(frozen=True)
class BornParams:
    """Detection probability across amplitudes in both bias regimes."""

    amplitudes_sq: tuple = (0.0625, 0.125, 0.25, 0.5, 1.0)
    regime: str = "threshold"
    reference_probability: float = 1.0

    @classmethod
    def from_dict(cls, section: dict, context: str) -> "BornParams":
        _check_keys(section, [f.name for f in fields(cls)], context)
        defaults = cls()
        amps = section.get("amplitudes_sq", list(defaults.amplitudes_sq))
        if not isinstance(amps, (list, tuple)) or not amps:
            raise ConfigError(f"key 'amplitudes_sq' in {context} must be a nonempty list")
        amps = tuple(float(a) for a in amps)
        for a in amps:
            if not 0.0 <= a <= 1.0:
                raise ConfigError(
                    f"key 'amplitudes_sq' in {context} must lie in [0, 1], got {a}"
                )
        regime = _take(section, "regime", context, default=defaults.regime, cast=str)
        if regime not in ("threshold", "biased"):
            raise ConfigError(
                f"key 'regime' in {context} must be 'threshold' or 'biased'"
            )
        p_ref = _take(
            section,
            "reference_probability",
            context,
            default=defaults.reference_probability,
        )
        if not 0.0 <= p_ref <= 1.0:
            raise ConfigError(
                f"key 'reference_probability' in {context} must lie in [0, 1]"
            )
        return cls(amplitudes_sq=amps, regime=regime, reference_probability=p_ref)


@dataclass(frozen=True)
class TwoDetectorParams:
    """Joint firing statistics of two independent detectors."""

    c_plus_sq: float = 0.5
    regime: str = "biased"
    reference_probability: float = 0.8
    trials: int = 20_000

    @classmethod
    def from_dict(cls, section: dict, context: str) -> "TwoDetectorParams":
        _check_keys(section, [f.name for f in fields(cls)], context)
        defaults = cls()
        c_plus_sq = _take(section, "c_plus_sq", context, default=defaults.c_plus_sq)
        if not 0.0 <= c_plus_sq <= 1.0:
            raise ConfigError(
                f"key 'c_plus_sq' in {context} must lie in [0, 1], got {c_plus_sq}"
            )
        regime = _take(section, "regime", context, default=defaults.regime, cast=str)
        if regime not in ("threshold", "biased"):
            raise ConfigError(
                f"key 'regime' in {context} must be 'threshold' or 'biased'"
            )
        p_ref = _take(
            section,
            "reference_probability",
            context,
            default=defaults.reference_probability,
        )
        if not 0.0 <= p_ref <= 1.0:
            raise ConfigError(
                f"key 'reference_probability' in {context} must lie in [0, 1]"
            )
        trials = _take(section, "trials", context, default=defaults.trials, cast=int)
        if trials < 1000:
            raise ConfigError(f"key 'trials' in {context} must be >= 1000, got {trials}")
        return cls(
            c_plus_sq=c_plus_sq,
            regime=regime,
            reference_probability=p_ref,
            trials=trials,
        )


@dataclass(frozen=True)
class EstimatesParams:
    """Headline SI estimates, optionally with gravity enhancement."""

    kappa: float = 1.0

    @classmethod
    def from_dict(cls, section: dict, context: str) -> "EstimatesParams":
        _check_keys(section, [f.name for f in fields(cls)], context)
        kappa = _take(section, "kappa", context, default=1.0)
        if kappa < 1.0:
            raise ConfigError(f"key 'kappa' in {context} must be >= 1, got {kappa}")
        return cls(kappa=kappa)


_PARAM_CLASSES = {
    "criterion": CriterionParams,
    "evolve": EvolveParams,
    "escape": EscapeParams,
    "born": BornParams,
    "two-detector": TwoDetectorParams,
    "estimates": EstimatesParams,
}


@dataclass(frozen=True)
class ScenarioConfig:
    """Validated scenario: one kind, its parameter block, and the seed."""

    kind: str
    seed: int
    params: object


def parse_config(text: str) -> ScenarioConfig:
    """Parse and validate a YAML scenario document."""
    try:
        document = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"malformed YAML: {exc}") from None
    if not isinstance(document, dict):
        raise ConfigError("config document must be a mapping")
    _check_keys(document, ("scenario", "seed") + SCENARIO_KINDS, "config")
    kind = _take(document, "scenario", "config", cast=str)
    if kind not in SCENARIO_KINDS:
        raise ConfigError(
            f"unknown scenario kind {kind!r}; expected one of {', '.join(SCENARIO_KINDS)}"
        )
    extra_sections = [k for k in SCENARIO_KINDS if k in document and k != kind]
    if extra_sections:
        raise ConfigError(
            f"config declares scenario '{kind}' but contains section(s) "
            f"{', '.join(extra_sections)}"
        )
    seed = _take(document, "seed", "config", default=0, cast=int)
    if not 0 <= seed < 2**64:
        raise ConfigError(f"seed must fit in 64 bits, got {seed}")
    section = document.get(kind, {})
    params = _PARAM_CLASSES[kind].from_dict(section, f"section '{kind}'")
    return ScenarioConfig(kind=kind, seed=seed, params=params)


def serialize_config(config: ScenarioConfig) -> str:
    """YAML document with all defaults resolved; parses back to an equal config."""
    section = asdict(config.params)
    for key, value in section.items():
        if isinstance(value, tuple):
            section[key] = list(value)
    return yaml.safe_dump(
        {"scenario": config.kind, "seed": config.seed, config.kind: section},
        sort_keys=False,
    )


def load_config(path) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    return parse_config(text)
