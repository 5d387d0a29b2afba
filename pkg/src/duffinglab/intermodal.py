"""Two-mode cross-tuning: mode-1 amplitude shifts mode 2's resonance.

Large motion of one mode stiffens the membrane for every other mode.
Mode 2 is kept linear and weakly probed; its resonance frequency is
modulated by the mean-square displacement of mode 1 through a cross
coupling coefficient ``beta12``. Because mode 1 is bistable, scanning
its drive frequency up versus down leaves mode 2's resonance on a
hysteretic curve that inherits mode 1's bistable window.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .errors import InvalidInputError
from .model import OscillatorParams
from .steady import hysteresis_cycle

__all__ = [
    "TwoModeParams",
    "mode2_resonance",
    "intermodal_scan",
    "calibrate_cross_coupling",
]


@dataclass(frozen=True)
class TwoModeParams:
    """Two mechanical modes and their cross-tuning coefficient.

    ``beta12`` (1/m^2) is the fractional mode-2 stiffness shift per
    squared mode-1 one-sided amplitude; it is a fitted quantity, not
    derivable from the single-mode hardening coefficients.
    """

    mode1: OscillatorParams
    mode2: OscillatorParams
    beta12: float

    def __post_init__(self):
        if self.beta12 < 0:
            raise InvalidInputError(f"beta12 must be >= 0, got {self.beta12}")


def mode2_resonance(params: TwoModeParams, mode1_amplitude: float) -> float:
    """Mode-2 resonance frequency with mode 1 oscillating at the given amplitude.

    ``mode1_amplitude`` is the one-sided amplitude |x1|; the shift is
    mode2.omega0 * (3/2) * beta12 * amplitude^2, the cross analogue of
    the single-mode backbone.
    """
    if mode1_amplitude < 0:
        raise InvalidInputError(f"mode1_amplitude must be >= 0, got {mode1_amplitude}")
    return params.mode2.omega0 * (1.0 + 1.5 * params.beta12 * mode1_amplitude**2)


def intermodal_scan(params: TwoModeParams, mode1_drive_amp: float,
                    omega_p_grid, direction: str) -> List[Tuple[float, float]]:
    """Mode-2 resonance versus mode-1 drive frequency along one sweep direction.

    Emulates parking the mode-1 drive at each stop frequency after an
    up or down sweep: mode 1 sits on the corresponding hysteresis
    branch, and mode 2's resonance is evaluated at that amplitude.
    """
    if direction not in ("up", "down"):
        raise InvalidInputError(f"direction must be 'up' or 'down', got {direction!r}")
    up, down = hysteresis_cycle(params.mode1, mode1_drive_amp, omega_p_grid)
    branch = up if direction == "up" else down
    return [(p.omega, mode2_resonance(params, p.amplitude)) for p in branch]


def calibrate_cross_coupling(mode1: OscillatorParams, mode2: OscillatorParams,
                             mode1_drive_amp: float, omega_p_grid,
                             shift_linewidths: float = 170.0) -> TwoModeParams:
    """Fit beta12 so the maximum scan shift equals a set number of mode-2 linewidths.

    The maximum mode-1 amplitude along the up-scan sets the largest
    shift; beta12 is chosen to make that shift equal
    ``shift_linewidths * mode2.gamma``.
    """
    if shift_linewidths <= 0:
        raise InvalidInputError(f"shift_linewidths must be > 0, got {shift_linewidths}")
    up, _ = hysteresis_cycle(mode1, mode1_drive_amp, omega_p_grid)
    a_max = max(p.amplitude for p in up)
    if a_max <= 0:
        raise InvalidInputError("mode 1 never moves; cannot calibrate the coupling")
    target_shift = shift_linewidths * mode2.gamma
    beta12 = target_shift / (1.5 * mode2.omega0 * a_max**2)
    return TwoModeParams(mode1=mode1, mode2=mode2, beta12=beta12)
