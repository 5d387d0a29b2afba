"""Experiment runners: dispatch a validated config, write CSV + metadata.

Every run is a pure function of its config: no timestamps, RNG, or
machine state enter the outputs, so re-running a config reproduces the
files byte for byte. Series data goes to CSV (one header row, SI units,
'.' radix); a YAML sidecar records the full config, the tool version,
and derived quantities.
"""

from __future__ import annotations

import csv
import math
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import yaml

from . import __version__
from .config import ExperimentConfig
from .demod import ringdown_experiment
from .errors import InvalidInputError
from .intermodal import TwoModeParams, calibrate_cross_coupling, intermodal_scan
from .model import DriveTone, epsilon
from .pumpprobe import conjugate_resonances, linearized_probe_response, timedomain_mixing_check
from .steady import bistable_region, response_amplitudes
from .timedomain import network_sweep

__all__ = ["run", "write_csv", "write_metadata"]


def write_csv(path, header: List[str], rows, downsample: int = 1) -> None:
    """Write series data: header row, one record per sample.

    ``downsample`` keeps every n-th row (for carrier-rate time series
    that would otherwise swamp a plotting tool).
    """
    if downsample < 1:
        raise InvalidInputError(f"downsample must be >= 1, got {downsample}")
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for i, row in enumerate(rows):
            if i % downsample == 0:
                writer.writerow([_format(v) for v in row])


def _format(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isnan(value):
            return "nan"
        return repr(value)
    return value


def write_metadata(path, mapping: Dict) -> None:
    """Write the YAML sidecar; keys are sorted so output bytes are stable."""
    with open(path, "w") as fh:
        yaml.safe_dump(_plain(mapping), fh, sort_keys=True)


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and math.isnan(obj):
        return None
    return obj


def _grid_rad_s(grid_hz) -> np.ndarray:
    start, stop, points = grid_hz
    return 2.0 * math.pi * np.linspace(start, stop, points)


def run(config: ExperimentConfig, out_dir, downsample: int = 1,
        seed_branch: Optional[str] = None) -> List[Path]:
    """Execute one experiment; returns the written file paths.

    ``seed_branch`` overrides the branch selection of ringdown and
    pump-probe configs.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    runner = {
        "steadystate": _run_steadystate,
        "sweep": _run_sweep,
        "ringdown": _run_ringdown,
        "pumpprobe": _run_pumpprobe,
        "intermodal": _run_intermodal,
    }[config.kind]
    return runner(config, out, downsample, seed_branch)


def _base_metadata(config: ExperimentConfig) -> Dict:
    return {
        "tool": "duffinglab",
        "version": __version__,
        "config": config.source,
        "derived": {"quality_factor": config.oscillator.q,
                    "gamma_rad_s": config.oscillator.gamma},
    }


def _run_steadystate(config, out, downsample, seed_branch):
    params = config.oscillator
    amp = config.settings["drive_amp"]
    omegas = _grid_rad_s(config.settings["grid"])
    rows = []
    for w in omegas:
        for k, p in enumerate(response_amplitudes(params, amp, float(w))):
            rows.append((p.omega, p.omega / (2.0 * math.pi), p.amplitude, p.stable, k))
    csv_path = out / "steadystate.csv"
    write_csv(csv_path, ["omega_rad_s", "freq_hz", "amplitude_m", "stable", "branch_index"],
              rows, downsample)
    meta = _base_metadata(config)
    region = bistable_region(params, amp)
    peak_amp = amp / (params.gamma * params.omega0)
    meta["derived"]["peak_epsilon"] = epsilon(params, peak_amp)
    meta["derived"]["bistable_region_rad_s"] = (
        None if region is None else {"omega_lower": region.omega_lower,
                                     "omega_upper": region.omega_upper})
    meta_path = out / "steadystate.meta.yaml"
    write_metadata(meta_path, meta)
    return [csv_path, meta_path]


def _run_sweep(config, out, downsample, seed_branch):
    params = config.oscillator
    omegas = _grid_rad_s(config.settings["grid"])
    meta = _base_metadata(config)
    meta["derived"]["drive_levels"] = []
    paths = []
    for i, amp in enumerate(config.settings["drive_amps"]):
        analytic_up = []
        analytic_low = []
        for w in omegas:
            pts = [p for p in response_amplitudes(params, amp, float(w)) if p.stable]
            analytic_up.append(pts[-1].amplitude)
            analytic_low.append(pts[0].amplitude)
        level_meta = {"drive_amp": amp}
        region = bistable_region(params, amp)
        level_meta["bistable_region_rad_s"] = (
            None if region is None else {"omega_lower": region.omega_lower,
                                         "omega_upper": region.omega_upper})
        peak_amp = amp / (params.gamma * params.omega0)
        level_meta["peak_epsilon"] = epsilon(params, peak_amp)
        meta["derived"]["drive_levels"].append(level_meta)
        for direction in config.settings["directions"]:
            result = network_sweep(
                params, amp, omegas, direction,
                dwell_decay_times=config.settings["dwell_decay_times"],
                measure_cycles=config.settings["measure_cycles"])
            order = (slice(None) if direction == "up" else slice(None, None, -1))
            rows = [
                (w, w / (2.0 * math.pi), a, up, low)
                for (w, a), up, low in zip(result.points,
                                           np.asarray(analytic_up)[order],
                                           np.asarray(analytic_low)[order])
            ]
            csv_path = out / f"sweep_level{i}_{direction}.csv"
            write_csv(csv_path,
                      ["omega_rad_s", "freq_hz", "amplitude_m",
                       "analytic_upper_m", "analytic_lower_m"],
                      rows, downsample)
            paths.append(csv_path)
    meta_path = out / "sweep.meta.yaml"
    write_metadata(meta_path, meta)
    paths.append(meta_path)
    return paths


def _run_ringdown(config, out, downsample, seed_branch):
    params = config.oscillator
    s = config.settings
    branch = seed_branch or s["seed_branch"]
    drive = DriveTone(amp=s["drive_amp"], omega=2.0 * math.pi * s["drive_frequency_hz"])
    lp = (2.0 * math.pi * s["lp_bandwidth_hz"] if s["lp_bandwidth_hz"]
          else math.sqrt(params.gamma * params.omega0))
    result = ringdown_experiment(
        params, drive,
        drive_time=s["drive_decay_times"] * params.decay_time,
        free_time=s["free_decay_times"] * params.decay_time,
        prep_upper_branch=(branch == "upper"),
        lp_bandwidth=lp)
    paths = []
    header = ["t_s", "x1_m", "x2_m", "envelope_m", "inst_freq_rad_s"]
    for name, rec in (("forced", result.forced), ("free", result.free)):
        rows = zip(rec.t, rec.x1, rec.x2, rec.envelope, rec.inst_freq)
        csv_path = out / f"ringdown_{name}.csv"
        write_csv(csv_path, header, ([float(a) for a in row] for row in rows), downsample)
        paths.append(csv_path)
    meta = _base_metadata(config)
    meta["derived"]["fitted_decay_time_s"] = result.fitted_decay_time
    meta["derived"]["expected_decay_time_s"] = params.decay_time
    meta["derived"]["fitted_freq_decay_rate_per_s"] = result.fitted_freq_decay_rate
    meta["derived"]["lp_bandwidth_rad_s"] = lp
    meta_path = out / "ringdown.meta.yaml"
    write_metadata(meta_path, meta)
    paths.append(meta_path)
    return paths


def _run_pumpprobe(config, out, downsample, seed_branch):
    params = config.oscillator
    s = config.settings
    branch = seed_branch or s["seed_branch"]
    pump = DriveTone(amp=s["pump_amp"], omega=2.0 * math.pi * s["pump_frequency_hz"])
    pts = [p for p in response_amplitudes(params, pump.amp, pump.omega) if p.stable]
    pump_amplitude = (pts[-1] if branch == "upper" else pts[0]).amplitude
    eps = epsilon(params, pump_amplitude)
    probe_amp = s["probe_amp_ratio"] * pump.amp
    omegas = _grid_rad_s(s["grid"])
    rows = []
    for w in omegas:
        resp = linearized_probe_response(params, eps, pump.omega, probe_amp, float(w))
        rows.append((float(w), float(w) / (2.0 * math.pi),
                     abs(resp.at_probe), abs(resp.at_conjugate)))
    csv_path = out / "pumpprobe_scan.csv"
    write_csv(csv_path, ["omega_s_rad_s", "freq_hz", "mag_probe_m", "mag_conj_m"],
              rows, downsample)
    paths = [csv_path]
    n_td = s["timedomain_points"]
    if n_td:
        idx = np.linspace(0, len(omegas) - 1, n_td).round().astype(int)
        td_rows = []
        for k in idx:
            w = float(omegas[k])
            probe = DriveTone(amp=probe_amp, omega=w)
            meas_probe, meas_conj = timedomain_mixing_check(
                params, pump, probe, seed_branch=branch)
            td_rows.append((w, w / (2.0 * math.pi), meas_probe, meas_conj))
        td_path = out / "pumpprobe_timedomain.csv"
        write_csv(td_path,
                  ["omega_s_rad_s", "freq_hz", "measured_probe_m", "measured_conj_m"],
                  td_rows, downsample)
        paths.append(td_path)
    pair = conjugate_resonances(params, eps, pump.omega)
    meta = _base_metadata(config)
    meta["derived"]["pump_epsilon"] = eps
    meta["derived"]["pump_amplitude_m"] = pump_amplitude
    meta["derived"]["omega_s_plus_rad_s"] = pair.omega_plus
    meta["derived"]["omega_s_minus_rad_s"] = pair.omega_minus
    meta_path = out / "pumpprobe.meta.yaml"
    write_metadata(meta_path, meta)
    paths.append(meta_path)
    return paths


def _run_intermodal(config, out, downsample, seed_branch):
    mode1 = config.oscillator
    s = config.settings
    omegas = _grid_rad_s(s["grid"])
    if s["beta12"] is not None:
        params = TwoModeParams(mode1=mode1, mode2=s["mode2"], beta12=s["beta12"])
    else:
        params = calibrate_cross_coupling(mode1, s["mode2"], s["drive_amp"], omegas,
                                          shift_linewidths=s["calibrate_shift_linewidths"])
    paths = []
    for direction in ("up", "down"):
        scan = intermodal_scan(params, s["drive_amp"], omegas, direction)
        rows = [(w, w / (2.0 * math.pi), f, f / (2.0 * math.pi)) for w, f in scan]
        csv_path = out / f"intermodal_{direction}.csv"
        write_csv(csv_path,
                  ["omega_p_rad_s", "freq_p_hz", "mode2_resonance_rad_s",
                   "mode2_resonance_hz"],
                  rows, downsample)
        paths.append(csv_path)
    meta = _base_metadata(config)
    region = bistable_region(mode1, s["drive_amp"])
    meta["derived"]["beta12_m2"] = params.beta12
    meta["derived"]["mode1_bistable_region_rad_s"] = (
        None if region is None else {"omega_lower": region.omega_lower,
                                     "omega_upper": region.omega_upper})
    meta_path = out / "intermodal.meta.yaml"
    write_metadata(meta_path, meta)
    paths.append(meta_path)
    return paths
