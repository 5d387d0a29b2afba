"""Experiment configuration files: schema, parsing, validation.

Configs are YAML mappings. Every experiment names its kind and the
oscillator(s) involved; the remaining keys parametrize the run. Unknown
keys are rejected so typos fail loudly instead of silently using a
default. The full schema:

    experiment: steadystate | sweep | ringdown | pumpprobe | intermodal

    oscillator:            # all kinds except intermodal
      frequency_hz: float        # natural frequency omega0 / 2 pi
      quality_factor: float      # Q = omega0 / gamma
      beta_m2: float             # hardening coefficient, 1/m^2 (default 0)

    steadystate:
      drive_amp: float           # force per unit mass, m/s^2
      start_hz: float
      stop_hz: float
      points: int

    sweep:
      drive_amps: [float, ...]
      start_hz: float
      stop_hz: float
      points: int
      directions: [up, down]     # default both
      dwell_decay_times: float   # default 5
      measure_cycles: int        # default 50

    ringdown:
      drive_amp: float
      drive_frequency_hz: float
      drive_decay_times: float   # forced span, units of 2/gamma (default 8)
      free_decay_times: float    # free span (default 8)
      seed_branch: upper | lower # default lower
      lp_bandwidth_hz: float     # optional; default sqrt(gamma*omega0)/2pi

    pumpprobe:
      pump_amp: float
      pump_frequency_hz: float
      probe_amp_ratio: float     # probe force relative to pump (default 0.01)
      start_hz: float
      stop_hz: float
      points: int
      timedomain_points: int     # full-integration cross-checks (default 0)
      seed_branch: upper | lower # default upper

    intermodal:
      mode1: {frequency_hz, quality_factor, beta_m2}
      mode2: {frequency_hz, quality_factor}
      drive_amp: float
      start_hz: float
      stop_hz: float
      points: int
      beta12_m2: float                # either this ...
      calibrate_shift_linewidths: float  # ... or this (fit beta12)
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Dict

import yaml

from .errors import InvalidInputError
from .model import OscillatorParams

__all__ = ["ExperimentConfig", "ConfigError", "load_config", "parse_config", "KINDS"]

KINDS = ("steadystate", "sweep", "ringdown", "pumpprobe", "intermodal")


class ConfigError(InvalidInputError):
    """Configuration file failed to parse or validate."""


def _require_mapping(value, path: str) -> dict:
    if not isinstance(value, dict):
        raise ConfigError(f"{path}: expected a mapping, got {type(value).__name__}")
    return value


def _check_keys(section: dict, allowed, required, path: str):
    unknown = set(section) - set(allowed)
    if unknown:
        raise ConfigError(f"{path}: unknown key(s) {sorted(unknown)}; allowed: {sorted(allowed)}")
    missing = set(required) - set(section)
    if missing:
        raise ConfigError(f"{path}: missing required key(s) {sorted(missing)}")


def _number(section: dict, key: str, path: str, default=None, minimum=None,
            strict_min=False) -> float:
    if key not in section:
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{path}.{key}: expected a number, got {value!r}")
    value = float(value)
    if minimum is not None:
        if strict_min and value <= minimum:
            raise ConfigError(f"{path}.{key}: must be > {minimum}, got {value}")
        if not strict_min and value < minimum:
            raise ConfigError(f"{path}.{key}: must be >= {minimum}, got {value}")
    return value


def _integer(section: dict, key: str, path: str, default=None, minimum=None) -> int:
    if key not in section:
        return default
    value = section[key]
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"{path}.{key}: expected an integer, got {value!r}")
    if minimum is not None and value < minimum:
        raise ConfigError(f"{path}.{key}: must be >= {minimum}, got {value}")
    return value


def _choice(section: dict, key: str, path: str, choices, default=None):
    if key not in section:
        return default
    value = section[key]
    if value not in choices:
        raise ConfigError(f"{path}.{key}: must be one of {sorted(choices)}, got {value!r}")
    return value


def _oscillator(section: dict, path: str, with_beta: bool = True) -> OscillatorParams:
    allowed = ["frequency_hz", "quality_factor"] + (["beta_m2"] if with_beta else [])
    _check_keys(section, allowed, ["frequency_hz", "quality_factor"], path)
    freq = _number(section, "frequency_hz", path, minimum=0.0, strict_min=True)
    q = _number(section, "quality_factor", path, minimum=1.0, strict_min=True)
    beta = _number(section, "beta_m2", path, default=0.0, minimum=0.0) if with_beta else 0.0
    try:
        return OscillatorParams.from_frequency_q(freq, q, beta)
    except InvalidInputError as exc:
        raise ConfigError(f"{path}: {exc}") from exc


def _grid_section(section: dict, path: str):
    start = _number(section, "start_hz", path, minimum=0.0, strict_min=True)
    stop = _number(section, "stop_hz", path, minimum=0.0, strict_min=True)
    points = _integer(section, "points", path, minimum=2)
    if start >= stop:
        raise ConfigError(f"{path}: start_hz ({start}) must be < stop_hz ({stop})")
    return start, stop, points


@dataclass(frozen=True)
class ExperimentConfig:
    """A fully validated experiment description."""

    kind: str
    oscillator: OscillatorParams  # mode1 for intermodal runs
    settings: Dict[str, Any] = field(default_factory=dict)
    source: Dict[str, Any] = field(default_factory=dict)


def parse_config(data: Any) -> ExperimentConfig:
    """Validate a raw config mapping into an ExperimentConfig."""
    data = _require_mapping(data, "config")
    kind = _choice(data, "experiment", "config", KINDS)
    if kind is None:
        raise ConfigError("config: missing required key 'experiment'")

    top_allowed = {"experiment", kind}
    if kind != "intermodal":
        top_allowed.add("oscillator")
    _check_keys(data, top_allowed, top_allowed, "config")

    section = _require_mapping(data[kind], f"config.{kind}")
    path = f"config.{kind}"
    settings: Dict[str, Any] = {}

    if kind == "intermodal":
        _check_keys(section,
                    ["mode1", "mode2", "drive_amp", "start_hz", "stop_hz", "points",
                     "beta12_m2", "calibrate_shift_linewidths"],
                    ["mode1", "mode2", "drive_amp", "start_hz", "stop_hz", "points"],
                    path)
        mode1 = _oscillator(_require_mapping(section["mode1"], f"{path}.mode1"),
                            f"{path}.mode1")
        mode2 = _oscillator(_require_mapping(section["mode2"], f"{path}.mode2"),
                            f"{path}.mode2", with_beta=False)
        settings["mode2"] = mode2
        settings["drive_amp"] = _number(section, "drive_amp", path, minimum=0.0)
        settings["grid"] = _grid_section(section, path)
        beta12 = _number(section, "beta12_m2", path, minimum=0.0)
        calib = _number(section, "calibrate_shift_linewidths", path, minimum=0.0,
                        strict_min=True)
        if (beta12 is None) == (calib is None):
            raise ConfigError(
                f"{path}: provide exactly one of beta12_m2 or calibrate_shift_linewidths")
        settings["beta12"] = beta12
        settings["calibrate_shift_linewidths"] = calib
        return ExperimentConfig(kind=kind, oscillator=mode1, settings=settings, source=data)

    osc = _oscillator(_require_mapping(data["oscillator"], "config.oscillator"),
                      "config.oscillator")

    if kind == "steadystate":
        _check_keys(section, ["drive_amp", "start_hz", "stop_hz", "points"],
                    ["drive_amp", "start_hz", "stop_hz", "points"], path)
        settings["drive_amp"] = _number(section, "drive_amp", path, minimum=0.0)
        settings["grid"] = _grid_section(section, path)
    elif kind == "sweep":
        _check_keys(section,
                    ["drive_amps", "start_hz", "stop_hz", "points", "directions",
                     "dwell_decay_times", "measure_cycles"],
                    ["drive_amps", "start_hz", "stop_hz", "points"], path)
        amps = section["drive_amps"]
        if (not isinstance(amps, list) or not amps
                or any(isinstance(a, bool) or not isinstance(a, (int, float)) or a < 0
                       for a in amps)):
            raise ConfigError(f"{path}.drive_amps: expected a non-empty list of "
                              f"non-negative numbers, got {amps!r}")
        settings["drive_amps"] = [float(a) for a in amps]
        settings["grid"] = _grid_section(section, path)
        directions = section.get("directions", ["up", "down"])
        if (not isinstance(directions, list) or not directions
                or any(d not in ("up", "down") for d in directions)):
            raise ConfigError(f"{path}.directions: expected a list drawn from "
                              f"['up', 'down'], got {directions!r}")
        settings["directions"] = directions
        settings["dwell_decay_times"] = _number(section, "dwell_decay_times", path,
                                                default=5.0, minimum=0.0, strict_min=True)
        settings["measure_cycles"] = _integer(section, "measure_cycles", path,
                                              default=50, minimum=1)
    elif kind == "ringdown":
        _check_keys(section,
                    ["drive_amp", "drive_frequency_hz", "drive_decay_times",
                     "free_decay_times", "seed_branch", "lp_bandwidth_hz"],
                    ["drive_amp", "drive_frequency_hz"], path)
        settings["drive_amp"] = _number(section, "drive_amp", path, minimum=0.0)
        settings["drive_frequency_hz"] = _number(section, "drive_frequency_hz", path,
                                                 minimum=0.0, strict_min=True)
        settings["drive_decay_times"] = _number(section, "drive_decay_times", path,
                                                default=8.0, minimum=0.0, strict_min=True)
        settings["free_decay_times"] = _number(section, "free_decay_times", path,
                                               default=8.0, minimum=0.0, strict_min=True)
        settings["seed_branch"] = _choice(section, "seed_branch", path,
                                          ("upper", "lower"), default="lower")
        settings["lp_bandwidth_hz"] = _number(section, "lp_bandwidth_hz", path,
                                              minimum=0.0, strict_min=True)
    elif kind == "pumpprobe":
        _check_keys(section,
                    ["pump_amp", "pump_frequency_hz", "probe_amp_ratio", "start_hz",
                     "stop_hz", "points", "timedomain_points", "seed_branch"],
                    ["pump_amp", "pump_frequency_hz", "start_hz", "stop_hz", "points"],
                    path)
        settings["pump_amp"] = _number(section, "pump_amp", path, minimum=0.0)
        settings["pump_frequency_hz"] = _number(section, "pump_frequency_hz", path,
                                                minimum=0.0, strict_min=True)
        settings["probe_amp_ratio"] = _number(section, "probe_amp_ratio", path,
                                              default=0.01, minimum=0.0, strict_min=True)
        settings["grid"] = _grid_section(section, path)
        settings["timedomain_points"] = _integer(section, "timedomain_points", path,
                                                 default=0, minimum=0)
        settings["seed_branch"] = _choice(section, "seed_branch", path,
                                          ("upper", "lower"), default="upper")
    return ExperimentConfig(kind=kind, oscillator=osc, settings=settings, source=data)


def load_config(path) -> ExperimentConfig:
    """Read and validate a YAML config file."""
    try:
        with open(path, "r") as fh:
            data = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: not valid YAML: {exc}") from exc
    except OSError as exc:
        raise ConfigError(f"{path}: {exc}") from exc
    return parse_config(data)
