"""Reproduce hysteretic frequency sweeps in the time domain.

A network-analyzer style measurement dwells at each frequency, lets the
oscillator settle from wherever the previous point left it, and records
the steady amplitude. Sweeping up the resonator clings to the high
branch until its saddle-node; sweeping down it stays low until the
other saddle-node. The two jump frequencies bracket the analytic
bistable window.

Uses a Q = 200 oscillator so the settling transients are short.
"""

import numpy as np

from duffinglab import (
    OscillatorParams,
    bistable_region,
    epsilon,
    network_sweep,
    response_amplitudes,
)
from duffinglab.timedomain import sweep_jump_frequency


def main():
    params = OscillatorParams.from_frequency_q(1e5, 200.0, 1e13)
    # Drive strong enough that the peak stiffening is well past the
    # bistability threshold ~ 8 / (3 sqrt(3) Q).
    eps_peak = 0.05
    amp = np.sqrt(eps_peak / (3 * params.beta)) * params.gamma * params.omega0

    region = bistable_region(params, amp)
    step = params.gamma / 5
    grid = np.arange(params.omega0 - 2 * params.gamma,
                     region.omega_upper + 2 * params.gamma, step)

    print(f"drive amplitude    : {amp:.1f} m/s^2 (peak eps = {eps_peak})")
    print(f"analytic window    : {region.omega_lower / (2 * np.pi):.1f} .. "
          f"{region.omega_upper / (2 * np.pi):.1f} Hz")

    for direction in ("up", "down"):
        result = network_sweep(params, amp, grid, direction)
        jump = sweep_jump_frequency(result)
        saddle = region.omega_upper if direction == "up" else region.omega_lower
        print(f"{direction:>4}-sweep jump at : {jump / (2 * np.pi):.1f} Hz "
              f"({(jump - saddle) / step:+.2f} grid steps from the saddle-node)")

    print()
    print(f"{'freq (Hz)':>12} {'up (m)':>12} {'down (m)':>12} {'analytic hi/lo (m)':>22}")
    up = network_sweep(params, amp, grid, "up")
    down = network_sweep(params, amp, grid, "down")
    down_by_omega = dict(zip(down.omegas, down.amplitudes))
    for w, a_up in zip(up.omegas[::4], up.amplitudes[::4]):
        stable = [b.amplitude for b in response_amplitudes(params, amp, w) if b.stable]
        analytic = f"{max(stable):.3e}/{min(stable):.3e}"
        print(f"{w / (2 * np.pi):12.1f} {a_up:12.3e} {down_by_omega[w]:12.3e} {analytic:>22}")

    top = max(up.amplitudes)
    print()
    print(f"largest swept amplitude: {top:.3e} m, eps = {epsilon(params, top):.3f}")


if __name__ == "__main__":
    main()
