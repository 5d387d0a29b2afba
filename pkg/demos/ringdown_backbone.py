"""Ring-down spectroscopy: read the backbone off a decaying oscillation.

Drive the membrane mode onto its upper branch, cut the drive, and watch
the free decay through an IQ demodulator. The envelope decays with the
linear time constant 2/gamma regardless of how nonlinear the starting
point was, while the instantaneous frequency slides back down the
backbone: at every moment it sits half the instantaneous stiffening
eps(t) = 3 beta (envelope/2)^2 above the natural frequency. The
frequency shift therefore decays at rate gamma, twice as fast as the
envelope.
"""

import numpy as np

from duffinglab import DriveTone, OscillatorParams, bistable_region, ringdown_experiment


def main():
    params = OscillatorParams.from_frequency_q(1057e3, 5000.0, 1e13)
    eps_start = 1e-3
    amp = np.sqrt(eps_start / (3 * params.beta)) * params.gamma * params.omega0
    region = bistable_region(params, amp)
    drive = DriveTone(amp=amp, omega=region.omega_upper - 0.3 * params.gamma)

    result = ringdown_experiment(params, drive,
                                 drive_time=6 * params.decay_time,
                                 free_time=8 * params.decay_time,
                                 prep_upper_branch=True)

    print(f"expected decay time : {params.decay_time * 1e3:8.3f} ms")
    print(f"fitted decay time   : {result.fitted_decay_time * 1e3:8.3f} ms")
    print(f"freq decay rate     : {result.fitted_freq_decay_rate:8.1f} /s "
          f"(gamma = {params.gamma:.1f} /s)")
    print()

    free = result.free
    eps_t = 3 * params.beta * (free.envelope / 2) ** 2
    print(f"{'t (ms)':>8} {'envelope (m)':>13} {'eps(t)':>10} "
          f"{'shift (Hz)':>11} {'backbone (Hz)':>14}")
    # Skip the low-pass filter's start-up transient before tabulating.
    omega_c = np.sqrt(params.gamma * params.omega0)
    mask = free.valid & (eps_t > 1e-4) & (free.t > 5 / omega_c)
    for i in np.linspace(0, mask.sum() - 1, 12).astype(int):
        k = np.flatnonzero(mask)[i]
        shift = (free.inst_freq[k] - params.omega0) / (2 * np.pi)
        backbone = params.omega0 * eps_t[k] / 2 / (2 * np.pi)
        print(f"{free.t[k] * 1e3:8.3f} {free.envelope[k]:13.3e} {eps_t[k]:10.2e} "
              f"{shift:11.2f} {backbone:14.2f}")


if __name__ == "__main__":
    main()
