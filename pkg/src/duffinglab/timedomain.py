"""Fixed-step time-domain integration and virtual instrument experiments.

The equation of motion is integrated with a classical 4th-order
Runge-Kutta scheme at a fixed step (the system is non-stiff for the
quality factors of interest, and a fixed step keeps runs bit-identical).
On top of the raw integrator sit the virtual instruments: settle-and-
measure steady-state extraction, adiabatic up/down network sweeps, and
harmonic-content measurement. The hot loops are numba-compiled.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np
from numba import njit

from . import steady
from .errors import DivergenceError, InvalidInputError, NotSettledError
from .model import (
    DEFAULT_OVERSAMPLE,
    MIN_OVERSAMPLE,
    DriveTone,
    OscillatorParams,
    Trajectory,
    check_step,
    default_dt,
)

__all__ = [
    "SweepResult",
    "integrate",
    "settle_and_measure",
    "harmonic_content",
    "network_sweep",
    "steady_seed",
]

SETTLE_DRIFT_TOL = 0.01  # relative envelope drift over the last 10 cycles


@njit(cache=True)
def _accel(omega0_sq, gamma, beta, amps, omegas, phases, x, v, t):
    f = 0.0
    for k in range(amps.shape[0]):
        f += 2.0 * amps[k] * math.cos(omegas[k] * t + phases[k])
    return f - gamma * v - omega0_sq * (1.0 + beta * x * x) * x


@njit(cache=True)
def _rk4_store(omega0_sq, gamma, beta, amps, omegas, phases, x0, v0, t0, dt, xs, vs):
    x = x0
    v = v0
    xs[0] = x
    vs[0] = v
    for i in range(1, xs.shape[0]):
        t = t0 + (i - 1) * dt
        k1x = v
        k1v = _accel(omega0_sq, gamma, beta, amps, omegas, phases, x, v, t)
        k2x = v + 0.5 * dt * k1v
        k2v = _accel(omega0_sq, gamma, beta, amps, omegas, phases,
                     x + 0.5 * dt * k1x, k2x, t + 0.5 * dt)
        k3x = v + 0.5 * dt * k2v
        k3v = _accel(omega0_sq, gamma, beta, amps, omegas, phases,
                     x + 0.5 * dt * k2x, k3x, t + 0.5 * dt)
        k4x = v + dt * k3v
        k4v = _accel(omega0_sq, gamma, beta, amps, omegas, phases,
                     x + dt * k3x, k4x, t + dt)
        x = x + dt * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0
        v = v + dt * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
        xs[i] = x
        vs[i] = v


@njit(cache=True)
def _rk4_advance(omega0_sq, gamma, beta, amps, omegas, phases, x, v, t0, dt, n):
    for i in range(n):
        t = t0 + i * dt
        k1x = v
        k1v = _accel(omega0_sq, gamma, beta, amps, omegas, phases, x, v, t)
        k2x = v + 0.5 * dt * k1v
        k2v = _accel(omega0_sq, gamma, beta, amps, omegas, phases,
                     x + 0.5 * dt * k1x, k2x, t + 0.5 * dt)
        k3x = v + 0.5 * dt * k2v
        k3v = _accel(omega0_sq, gamma, beta, amps, omegas, phases,
                     x + 0.5 * dt * k2x, k3x, t + 0.5 * dt)
        k4x = v + dt * k3v
        k4v = _accel(omega0_sq, gamma, beta, amps, omegas, phases,
                     x + dt * k3x, k4x, t + dt)
        x = x + dt * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0
        v = v + dt * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
    return x, v


@njit(cache=True)
def _rk4_project(omega0_sq, gamma, beta, amps, omegas, phases,
                 x, v, t0, dt, n, proj_omegas, cre, cim):
    """Advance n steps while accumulating (1/T) * integral x * exp(-i*w*t) dt.

    The window covers [t0, t0 + n*dt]; a uniform Riemann sum is
    spectrally accurate when the window holds an integer number of
    periods of each projected tone.
    """
    for j in range(proj_omegas.shape[0]):
        cre[j] = 0.0
        cim[j] = 0.0
    for i in range(n):
        t = t0 + i * dt
        for j in range(proj_omegas.shape[0]):
            cre[j] += x * math.cos(proj_omegas[j] * t)
            cim[j] -= x * math.sin(proj_omegas[j] * t)
        k1x = v
        k1v = _accel(omega0_sq, gamma, beta, amps, omegas, phases, x, v, t)
        k2x = v + 0.5 * dt * k1v
        k2v = _accel(omega0_sq, gamma, beta, amps, omegas, phases,
                     x + 0.5 * dt * k1x, k2x, t + 0.5 * dt)
        k3x = v + 0.5 * dt * k2v
        k3v = _accel(omega0_sq, gamma, beta, amps, omegas, phases,
                     x + 0.5 * dt * k2x, k3x, t + 0.5 * dt)
        k4x = v + dt * k3v
        k4v = _accel(omega0_sq, gamma, beta, amps, omegas, phases,
                     x + dt * k3x, k4x, t + dt)
        x = x + dt * (k1x + 2.0 * k2x + 2.0 * k3x + k4x) / 6.0
        v = v + dt * (k1v + 2.0 * k2v + 2.0 * k3v + k4v) / 6.0
    for j in range(proj_omegas.shape[0]):
        cre[j] /= n
        cim[j] /= n
    return x, v


@dataclass(frozen=True)
class SweepResult:
    """Amplitude-vs-frequency trace of a virtual network-analyzer sweep."""

    points: Tuple[Tuple[float, float], ...]
    direction: str
    dwell_cycles: int

    @property
    def omegas(self) -> np.ndarray:
        return np.array([p[0] for p in self.points])

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([p[1] for p in self.points])


def _drive_arrays(drives: Sequence[DriveTone]):
    amps = np.array([d.amp for d in drives], dtype=float)
    omegas = np.array([d.omega for d in drives], dtype=float)
    phases = np.array([d.phase for d in drives], dtype=float)
    return amps, omegas, phases


def _check_finite_state(x: float, v: float):
    if not (math.isfinite(x) and math.isfinite(v)):
        raise DivergenceError(
            "integration diverged to a non-finite state; check parameters and drive level"
        )


def integrate(params: OscillatorParams, drives: Sequence[DriveTone],
              x0: float, v0: float, duration: float, dt: float) -> Trajectory:
    """Integrate the equation of motion, storing every step.

    Deterministic: identical inputs give bit-identical trajectories.
    ``dt`` must resolve the fastest tone with at least 20 samples per
    period.
    """
    if duration <= 0:
        raise InvalidInputError(f"duration must be > 0, got {duration}")
    omega_max = max([params.omega0] + [d.omega for d in drives])
    check_step(dt, omega_max, MIN_OVERSAMPLE)
    n = int(round(duration / dt))
    if n < 1:
        raise InvalidInputError("duration shorter than one step")
    xs = np.empty(n + 1)
    vs = np.empty(n + 1)
    amps, omegas, phases = _drive_arrays(drives)
    _rk4_store(params.omega0**2, params.gamma, params.beta,
               amps, omegas, phases, float(x0), float(v0), 0.0, dt, xs, vs)
    if not (np.isfinite(xs[-1]) and np.isfinite(vs[-1])):
        raise DivergenceError(
            "integration diverged to a non-finite state; check parameters and drive level"
        )
    return Trajectory(t0=0.0, dt=dt, x=xs, v=vs)


def steady_seed(params: OscillatorParams, drive: DriveTone,
                amplitude: float, t: float = 0.0) -> Tuple[float, float]:
    """Initial (x, v) on the steady-state branch of given one-sided amplitude.

    The phase is taken from the harmonic-balance response at that
    amplitude, so seeding then settling converges onto the selected
    branch rather than the basin boundary.
    """
    eps = 3.0 * params.beta * amplitude * amplitude
    denom = (params.omega0**2 * (1.0 + eps) - drive.omega**2
             + 1j * params.gamma * drive.omega)
    xc = amplitude * cmath.exp(1j * (drive.phase - cmath.phase(denom)))
    x = 2.0 * (xc * cmath.exp(1j * drive.omega * t)).real
    v = 2.0 * (1j * drive.omega * xc * cmath.exp(1j * drive.omega * t)).real
    return x, v


def _snap_dt(drive_omega: float, dt_target: float) -> Tuple[float, int]:
    """Largest dt <= target that divides the drive period exactly."""
    period = 2.0 * math.pi / drive_omega
    n_per = int(math.ceil(period / dt_target - 1e-9))
    return period / n_per, n_per


def _settle_project(params: OscillatorParams, drives: Sequence[DriveTone],
                    measure_omegas: Sequence[float],
                    x0: float, v0: float, dt: float,
                    settle_steps: int, cycle_steps: int, measure_steps: int):
    """Settle, verify the envelope has stopped drifting, then project.

    The last 10 drive cycles of the settling segment are split into two
    5-cycle windows whose fundamental amplitudes must agree within 1%.
    Returns the complex components at ``measure_omegas`` plus the final
    state.
    """
    amps, omegas, phases = _drive_arrays(drives)
    o2, g, b = params.omega0**2, params.gamma, params.beta
    check_steps = 5 * cycle_steps
    pre_steps = settle_steps - 2 * check_steps
    if pre_steps < 0:
        raise InvalidInputError("settling span shorter than the 10-cycle drift check")
    t = 0.0
    x, v = _rk4_advance(o2, g, b, amps, omegas, phases, float(x0), float(v0), t, dt, pre_steps)
    t += pre_steps * dt
    _check_finite_state(x, v)
    w0 = np.array([drives[0].omega])
    cre = np.empty(1)
    cim = np.empty(1)
    x, v = _rk4_project(o2, g, b, amps, omegas, phases, x, v, t, dt, check_steps, w0, cre, cim)
    t += check_steps * dt
    a1 = math.hypot(cre[0], cim[0])
    x, v = _rk4_project(o2, g, b, amps, omegas, phases, x, v, t, dt, check_steps, w0, cre, cim)
    t += check_steps * dt
    a2 = math.hypot(cre[0], cim[0])
    _check_finite_state(x, v)
    scale = max(a1, a2)
    if scale > 0 and abs(a2 - a1) / scale > SETTLE_DRIFT_TOL:
        raise NotSettledError(
            f"envelope still drifting by {abs(a2 - a1) / scale:.2%} over the last "
            "10 drive cycles; increase the settling span"
        )
    pw = np.asarray(measure_omegas, dtype=float)
    cre = np.empty(len(pw))
    cim = np.empty(len(pw))
    x, v = _rk4_project(o2, g, b, amps, omegas, phases, x, v, t, dt, measure_steps, pw, cre, cim)
    _check_finite_state(x, v)
    return cre + 1j * cim, (x, v)


def settle_and_measure(params: OscillatorParams, drive: DriveTone,
                       seed_state: Optional[Tuple[float, float]] = None,
                       settle_cycles: Optional[int] = None,
                       measure_cycles: int = 50,
                       dt: Optional[float] = None) -> Tuple[float, float]:
    """Steady-state one-sided amplitude |x| and phase at the drive frequency.

    Integrates from ``seed_state`` (or rest), discards the settling
    segment, and projects the displacement onto exp(-i*omega*t) over an
    integer number of drive periods. The returned phase is relative to
    the drive phase, in (-pi, pi].

    Raises NotSettledError if the envelope is still drifting by more
    than 1% over the last 10 cycles of the settling segment.
    """
    if dt is None:
        dt = default_dt(params, [drive])
    check_step(dt, max(params.omega0, drive.omega), MIN_OVERSAMPLE)
    dt, cycle_steps = _snap_dt(drive.omega, dt)
    if settle_cycles is None:
        if seed_state is None:
            settle_cycles = int(math.ceil(20.0 * params.q / (2.0 * math.pi)))
        else:
            settle_cycles = int(math.ceil(10.0 * params.q / (2.0 * math.pi)))
    settle_cycles = max(settle_cycles, 10)
    x0, v0 = seed_state if seed_state is not None else (0.0, 0.0)
    comps, _ = _settle_project(
        params, [drive], [drive.omega], x0, v0, dt,
        settle_cycles * cycle_steps, cycle_steps, measure_cycles * cycle_steps)
    c = comps[0]
    amplitude = abs(c)
    phase = (cmath.phase(c) - drive.phase + math.pi) % (2.0 * math.pi) - math.pi
    return amplitude, phase


def harmonic_content(params: OscillatorParams, drive: DriveTone,
                     harmonics: Sequence[int] = (1, 3),
                     seed_state: Optional[Tuple[float, float]] = None,
                     settle_cycles: Optional[int] = None,
                     measure_cycles: int = 200,
                     dt: Optional[float] = None) -> dict:
    """Steady-state Fourier magnitudes |x[k*omega]| at the given harmonics."""
    omega_top = max(params.omega0, max(harmonics) * drive.omega)
    if dt is None:
        dt = 2.0 * math.pi / (DEFAULT_OVERSAMPLE * omega_top)
    # The highest harmonic must still be carrier-resolved.
    check_step(dt, omega_top, MIN_OVERSAMPLE)
    dt, cycle_steps = _snap_dt(drive.omega, dt)
    if settle_cycles is None:
        factor = 20.0 if seed_state is None else 10.0
        settle_cycles = int(math.ceil(factor * params.q / (2.0 * math.pi)))
    settle_cycles = max(settle_cycles, 10)
    x0, v0 = seed_state if seed_state is not None else (0.0, 0.0)
    comps, _ = _settle_project(
        params, [drive], [k * drive.omega for k in harmonics], x0, v0, dt,
        settle_cycles * cycle_steps, cycle_steps, measure_cycles * cycle_steps)
    return {k: abs(c) for k, c in zip(harmonics, comps)}


def network_sweep(params: OscillatorParams, amp: float, omega_grid,
                  direction: str,
                  dwell_decay_times: float = 5.0,
                  measure_cycles: int = 50,
                  dt: Optional[float] = None) -> SweepResult:
    """Virtual network-analyzer sweep with adiabatic state carry-over.

    The final state at each grid point seeds the next, so the response
    follows a branch continuously and jumps at the saddle-nodes exactly
    as the physical instrument does; ``direction`` is ``"up"`` or
    ``"down"``.
    """
    if direction not in ("up", "down"):
        raise InvalidInputError(f"direction must be 'up' or 'down', got {direction!r}")
    if amp < 0:
        raise InvalidInputError(f"amp must be >= 0, got {amp}")
    grid = np.asarray(omega_grid, dtype=float)
    steps = np.diff(grid)
    if len(grid) < 2 or not (np.all(steps > 0) or np.all(steps < 0)):
        raise InvalidInputError("omega_grid must be strictly monotonic with >= 2 points")
    ascending = steps[0] > 0
    if (direction == "up") != ascending:
        grid = grid[::-1]
    if dt is None:
        dt = default_dt(params, [DriveTone(amp=amp, omega=float(grid.max()))])
    dwell_time = dwell_decay_times * params.decay_time
    o2, g, b = params.omega0**2, params.gamma, params.beta
    state = (0.0, 0.0)
    points = []
    dwell_cycles = 0
    for w in grid:
        dtp, cycle_steps = _snap_dt(w, dt)
        dwell_cycles = max(10, int(math.ceil(dwell_time / (cycle_steps * dtp))))
        drive = DriveTone(amp=amp, omega=float(w))
        amps, omegas, phases = _drive_arrays([drive])
        x, v = _rk4_advance(o2, g, b, amps, omegas, phases,
                            state[0], state[1], 0.0, dtp, dwell_cycles * cycle_steps)
        _check_finite_state(x, v)
        t = dwell_cycles * cycle_steps * dtp
        pw = np.array([w])
        cre = np.empty(1)
        cim = np.empty(1)
        x, v = _rk4_project(o2, g, b, amps, omegas, phases, x, v, t, dtp,
                            measure_cycles * cycle_steps, pw, cre, cim)
        _check_finite_state(x, v)
        points.append((float(w), math.hypot(cre[0], cim[0])))
        state = (x, v)
    return SweepResult(points=tuple(points), direction=direction, dwell_cycles=dwell_cycles)


def sweep_jump_frequency(result: SweepResult) -> float:
    """Grid frequency at which the swept amplitude jumps between branches.

    Returns the last frequency before the largest single-step relative
    amplitude change, i.e. the edge the instrument fell off.
    """
    a = result.amplitudes
    w = result.omegas
    rel = np.abs(np.diff(a)) / np.maximum(a[:-1], a[1:])
    k = int(np.argmax(rel))
    return float(w[k])


def upper_branch_seed(params: OscillatorParams, drive: DriveTone) -> Tuple[float, float]:
    """Initial state on the highest stable branch at the drive frequency."""
    pts = steady.response_amplitudes(params, drive.amp, drive.omega)
    top = [p for p in pts if p.stable][-1]
    return steady_seed(params, drive, top.amplitude)


def lower_branch_seed(params: OscillatorParams, drive: DriveTone) -> Tuple[float, float]:
    """Initial state on the lowest stable branch at the drive frequency."""
    pts = steady.response_amplitudes(params, drive.amp, drive.omega)
    low = [p for p in pts if p.stable][0]
    return steady_seed(params, drive, low.amplitude)
