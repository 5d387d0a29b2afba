"""duffinglab: virtual nonlinear-resonance experiments on a Duffing mode.

Simulation and analysis toolkit for a hardening mechanical mode:
steady-state branch solving and hysteresis, time-domain frequency
sweeps, IQ-demodulated ring-down, pump-probe phase-conjugate mixing,
and two-mode cross-tuning.
"""

__version__ = "0.1.0"

from .errors import (
    DivergenceError,
    DuffingLabError,
    InvalidInputError,
    NearDegenerateError,
    NotSettledError,
)
from .model import DriveTone, OscillatorParams, Trajectory, acceleration, epsilon
from .steady import (
    BistableRegion,
    BranchPoint,
    backbone_frequency,
    bistable_region,
    estimate_beta,
    hysteresis_cycle,
    response_amplitudes,
)
from .timedomain import (
    SweepResult,
    harmonic_content,
    integrate,
    network_sweep,
    settle_and_measure,
    steady_seed,
)
from .demod import DemodRecord, RingdownResult, instantaneous_frequency, iq_demodulate, ringdown_experiment
from .pumpprobe import (
    ConjugatePair,
    ProbeResponse,
    conjugate_resonances,
    linearized_probe_response,
    timedomain_mixing_check,
)
from .intermodal import TwoModeParams, calibrate_cross_coupling, intermodal_scan, mode2_resonance

__all__ = [
    "__version__",
    "DuffingLabError", "InvalidInputError", "DivergenceError", "NotSettledError",
    "NearDegenerateError",
    "OscillatorParams", "DriveTone", "Trajectory", "acceleration", "epsilon",
    "BranchPoint", "BistableRegion", "response_amplitudes", "backbone_frequency",
    "bistable_region", "hysteresis_cycle", "estimate_beta",
    "SweepResult", "integrate", "settle_and_measure", "harmonic_content",
    "network_sweep", "steady_seed",
    "DemodRecord", "RingdownResult", "iq_demodulate", "instantaneous_frequency",
    "ringdown_experiment",
    "ProbeResponse", "ConjugatePair", "linearized_probe_response",
    "conjugate_resonances", "timedomain_mixing_check",
    "TwoModeParams", "mode2_resonance", "intermodal_scan", "calibrate_cross_coupling",
]
