import math
import textwrap

import pytest

from duffinglab.config import ConfigError, load_config, parse_config
from duffinglab.errors import InvalidInputError


def steady_config(**overrides):
    cfg = {
        "experiment": "steadystate",
        "oscillator": {"frequency_hz": 1057e3, "quality_factor": 5000, "beta_m2": 1e13},
        "steadystate": {"drive_amp": 51.0, "start_hz": 1055e3, "stop_hz": 1060e3,
                        "points": 101},
    }
    cfg.update(overrides)
    return cfg


class TestParse:
    def test_steadystate_roundtrip(self):
        cfg = parse_config(steady_config())
        assert cfg.kind == "steadystate"
        assert cfg.oscillator.omega0 == pytest.approx(2 * math.pi * 1057e3)
        assert cfg.oscillator.beta == 1e13
        assert cfg.settings["drive_amp"] == 51.0
        assert cfg.settings["grid"] == (1055e3, 1060e3, 101)

    def test_defaults_applied(self):
        cfg = parse_config({
            "experiment": "sweep",
            "oscillator": {"frequency_hz": 1e5, "quality_factor": 100},
            "sweep": {"drive_amps": [1.0, 2.0], "start_hz": 9e4, "stop_hz": 1.1e5,
                      "points": 11},
        })
        assert cfg.settings["directions"] == ["up", "down"]
        assert cfg.settings["dwell_decay_times"] == 5.0
        assert cfg.settings["measure_cycles"] == 50
        assert cfg.oscillator.beta == 0.0

    def test_ringdown_defaults(self):
        cfg = parse_config({
            "experiment": "ringdown",
            "oscillator": {"frequency_hz": 1e5, "quality_factor": 100},
            "ringdown": {"drive_amp": 1.0, "drive_frequency_hz": 1e5},
        })
        assert cfg.settings["seed_branch"] == "lower"
        assert cfg.settings["drive_decay_times"] == 8.0
        assert cfg.settings["lp_bandwidth_hz"] is None

    def test_intermodal_calibrated(self):
        cfg = parse_config({
            "experiment": "intermodal",
            "intermodal": {
                "mode1": {"frequency_hz": 782e3, "quality_factor": 5000, "beta_m2": 1e13},
                "mode2": {"frequency_hz": 1057e3, "quality_factor": 6000},
                "drive_amp": 51.0, "start_hz": 780e3, "stop_hz": 790e3, "points": 51,
                "calibrate_shift_linewidths": 170,
            },
        })
        assert cfg.settings["beta12"] is None
        assert cfg.settings["calibrate_shift_linewidths"] == 170
        assert cfg.settings["mode2"].q == pytest.approx(6000)

    def test_intermodal_requires_exactly_one_coupling_spec(self):
        base = {
            "mode1": {"frequency_hz": 782e3, "quality_factor": 5000, "beta_m2": 1e13},
            "mode2": {"frequency_hz": 1057e3, "quality_factor": 6000},
            "drive_amp": 51.0, "start_hz": 780e3, "stop_hz": 790e3, "points": 51,
        }
        with pytest.raises(ConfigError):
            parse_config({"experiment": "intermodal", "intermodal": dict(base)})
        both = dict(base, beta12_m2=1e14, calibrate_shift_linewidths=170)
        with pytest.raises(ConfigError):
            parse_config({"experiment": "intermodal", "intermodal": both})

    def test_unknown_key_rejected_with_path(self):
        cfg = steady_config()
        cfg["steadystate"]["typo_key"] = 1.0
        with pytest.raises(ConfigError, match="steadystate.*typo_key"):
            parse_config(cfg)

    def test_missing_experiment_rejected(self):
        with pytest.raises(ConfigError):
            parse_config({"oscillator": {"frequency_hz": 1e5, "quality_factor": 100}})

    def test_unknown_experiment_rejected(self):
        with pytest.raises(ConfigError):
            parse_config(steady_config(experiment="wobble"))

    def test_inverted_grid_rejected(self):
        cfg = steady_config()
        cfg["steadystate"]["start_hz"] = 2e6
        with pytest.raises(ConfigError, match="start_hz"):
            parse_config(cfg)

    def test_non_mapping_rejected(self):
        with pytest.raises(ConfigError):
            parse_config([1, 2, 3])

    def test_config_error_is_invalid_input(self):
        assert issubclass(ConfigError, InvalidInputError)


class TestLoad:
    def test_load_yaml_file(self, tmp_path):
        path = tmp_path / "exp.yaml"
        path.write_text(textwrap.dedent("""\
            experiment: steadystate
            oscillator:
              frequency_hz: 1057000.0
              quality_factor: 5000
              beta_m2: 1.0e+13
            steadystate:
              drive_amp: 51.0
              start_hz: 1055000.0
              stop_hz: 1060000.0
              points: 11
        """))
        cfg = load_config(path)
        assert cfg.kind == "steadystate"
        assert cfg.settings["grid"][2] == 11

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            load_config(tmp_path / "nope.yaml")

    def test_invalid_yaml(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("experiment: [unclosed\n")
        with pytest.raises(ConfigError):
            load_config(path)
