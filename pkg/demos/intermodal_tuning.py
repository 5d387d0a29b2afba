"""Tune one mode's frequency by driving another.

The cross-Kerr coupling between two membrane modes turns the driven
amplitude of mode 1 into a frequency knob for mode 2: the mode-2
resonance shifts by 1.5 * beta12 * a1^2 in relative terms. Because the
mode-1 response is hysteretic inside its bistable window, the mode-2
frequency inherits that hysteresis, giving two stable "set points" at
the same drive frequency.
"""

import numpy as np

from duffinglab import (
    OscillatorParams,
    bistable_region,
    calibrate_cross_coupling,
    intermodal_scan,
)


def main():
    mode1 = OscillatorParams.from_frequency_q(782e3, 5000.0, 1e13)
    mode2 = OscillatorParams.from_frequency_q(1057e3, 6000.0, 0.0)
    amp = 51.0
    grid = np.arange(mode1.omega0 - 2 * mode1.gamma,
                     mode1.omega0 + 12 * mode1.gamma, mode1.gamma / 5)

    # Pick the coupling so the maximum shift is 170 mode-2 linewidths.
    tm = calibrate_cross_coupling(mode1, mode2, amp, grid, shift_linewidths=170.0)
    print(f"calibrated beta12   : {tm.beta12:.3e} m^-2")

    up = intermodal_scan(tm, amp, grid, "up")
    down = intermodal_scan(tm, amp, grid, "down")
    shift_up = np.array([f for _, f in up]) - mode2.omega0
    shift_down = np.array([f for _, f in down]) - mode2.omega0

    print(f"max shift (up)      : {shift_up.max() / mode2.gamma:.1f} mode-2 linewidths")
    region = bistable_region(mode1, amp)
    print(f"mode-1 window       : "
          f"[{(region.omega_lower - mode1.omega0) / mode1.gamma:+.2f}, "
          f"{(region.omega_upper - mode1.omega0) / mode1.gamma:+.2f}] linewidths")
    print()
    print(f"{'mode1 detuning':>14} {'shift up (lw)':>14} {'shift down (lw)':>16}")
    for k in range(0, len(grid), 4):
        detune = (grid[k] - mode1.omega0) / mode1.gamma
        print(f"{detune:+14.1f} {shift_up[k] / mode2.gamma:14.2f} "
              f"{shift_down[k] / mode2.gamma:16.2f}")


if __name__ == "__main__":
    main()
