"""Map the steady-state response of a hardening resonator.

The driven membrane mode answers a single tone with an amplitude that
solves a cubic: below a threshold drive there is one solution, above it
a frequency window opens with two stable branches and one unstable one
in between. This script sweeps drive frequency at a fixed drive level,
prints every branch, and locates the bistable window.
"""

import numpy as np

from duffinglab import (
    OscillatorParams,
    backbone_frequency,
    bistable_region,
    epsilon,
    response_amplitudes,
)


def main():
    params = OscillatorParams.from_frequency_q(
        frequency_hz=1057e3, q=5000.0, beta=1e13)
    drive_amp = 51.0

    region = bistable_region(params, drive_amp)
    print(f"natural frequency : {params.omega0 / (2 * np.pi):12.1f} Hz")
    print(f"linewidth         : {params.gamma / (2 * np.pi):12.3f} Hz")
    if region is None:
        print("drive below bistability threshold, single-valued response")
    else:
        lo = (region.omega_lower - params.omega0) / params.gamma
        hi = (region.omega_upper - params.omega0) / params.gamma
        print(f"bistable window   : [{lo:+.2f}, {hi:+.2f}] linewidths above resonance")

    print()
    print(f"{'detuning/gamma':>14}  {'branch amplitudes (m), * = stable'}")
    for detune in np.arange(-2.0, 4.01, 0.5):
        omega = params.omega0 + detune * params.gamma
        branches = response_amplitudes(params, drive_amp, omega)
        cells = [f"{b.amplitude:.3e}{'*' if b.stable else ' '}" for b in branches]
        print(f"{detune:+14.1f}  {'  '.join(cells)}")

    # The peak rides the backbone: resonance shifted up by half the
    # relative stiffening eps = 3 beta |x|^2.
    top = max((b for b in response_amplitudes(params, drive_amp, region.omega_upper)
               if b.stable), key=lambda b: b.amplitude)
    eps = epsilon(params, top.amplitude)
    print()
    print(f"peak amplitude    : {top.amplitude:.3e} m  (eps = {eps:.2e})")
    print(f"backbone frequency: {backbone_frequency(params, top.amplitude) / (2 * np.pi):.1f} Hz")


if __name__ == "__main__":
    main()
