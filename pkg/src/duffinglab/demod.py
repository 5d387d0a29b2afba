"""IQ demodulation, instantaneous-frequency estimation, and ring-down runs.

A trajectory x(t) is mixed with 2*cos(w_ref*t) and 2*sin(w_ref*t) and
low-pass filtered, giving the slowly varying quadratures X1, X2 with

    x(t) ~ X1(t)*cos(w_ref*t) + X2(t)*sin(w_ref*t).

The envelope sqrt(X1^2 + X2^2) is the full (two-sided) oscillation
amplitude, i.e. twice the one-sided amplitude used by the steady-state
solver. The instantaneous frequency follows from the unwrapped
quadrature phase; during a free nonlinear decay it rides the backbone
down to the natural frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidInputError, NotSettledError
from .model import DriveTone, OscillatorParams, Trajectory, default_dt, epsilon
from .timedomain import integrate, upper_branch_seed, lower_branch_seed

__all__ = [
    "DemodRecord",
    "RingdownResult",
    "iq_demodulate",
    "instantaneous_frequency",
    "ringdown_experiment",
]

# Fraction of the peak envelope below which the phase is considered noise.
ENVELOPE_VALIDITY_FRACTION = 1e-3
# Smoothing window for the instantaneous frequency, in carrier periods.
FREQ_SMOOTH_PERIODS = 10.0


@dataclass(frozen=True)
class DemodRecord:
    """Demodulated quadratures on a uniform time grid.

    ``valid`` marks samples where the envelope exceeds the noise-floor
    threshold; ``inst_freq`` is NaN elsewhere.
    """

    t: np.ndarray
    x1: np.ndarray
    x2: np.ndarray
    envelope: np.ndarray
    inst_freq: np.ndarray
    valid: np.ndarray
    omega_ref: float
    dt: float


@dataclass(frozen=True)
class RingdownResult:
    """Forced segment (t <= 0), free segment (t >= 0), and decay fits.

    ``fitted_decay_time`` is the envelope 1/e time of the free decay;
    ``fitted_freq_decay_rate`` is the exponential rate at which the
    instantaneous-frequency shift relaxes (NaN when the preparation was
    linear and there is no measurable shift to fit).
    """

    forced: DemodRecord
    free: DemodRecord
    fitted_decay_time: float
    fitted_freq_decay_rate: float


def _single_pole_lowpass(u: np.ndarray, dt: float, bandwidth: float) -> np.ndarray:
    """First-order recursive low-pass, -3 dB at ``bandwidth`` rad/s."""
    from scipy.signal import lfilter

    a = 1.0 - math.exp(-bandwidth * dt)
    return lfilter([a], [1.0, a - 1.0], u)


def _smooth(u: np.ndarray, window: int) -> np.ndarray:
    if window <= 1:
        return u
    kernel = np.ones(window) / window
    pad = np.concatenate([np.full(window - 1, u[0]), u])
    return np.convolve(pad, kernel, mode="valid")


def iq_demodulate(traj: Trajectory, omega_ref: float, lp_bandwidth: float,
                  gamma: Optional[float] = None) -> DemodRecord:
    """Demodulate a trajectory into slowly varying quadratures.

    ``lp_bandwidth`` must sit between the envelope scale and the
    carrier: gamma << lp_bandwidth << omega_ref. When ``gamma`` is given
    the lower ordering is validated too.
    """
    if omega_ref <= 0:
        raise InvalidInputError(f"omega_ref must be > 0, got {omega_ref}")
    if not (0 < lp_bandwidth < 0.5 * omega_ref):
        raise InvalidInputError(
            f"lp_bandwidth = {lp_bandwidth:.3g} must satisfy 0 < lp_bandwidth << "
            f"omega_ref = {omega_ref:.3g}"
        )
    if gamma is not None and lp_bandwidth < 2.0 * gamma:
        raise InvalidInputError(
            f"lp_bandwidth = {lp_bandwidth:.3g} too close to the damping rate "
            f"gamma = {gamma:.3g}; the envelope would be distorted"
        )
    t = traj.t
    x1 = _single_pole_lowpass(2.0 * traj.x * np.cos(omega_ref * t), traj.dt, lp_bandwidth)
    x2 = _single_pole_lowpass(2.0 * traj.x * np.sin(omega_ref * t), traj.dt, lp_bandwidth)
    envelope = np.hypot(x1, x2)
    valid = envelope > ENVELOPE_VALIDITY_FRACTION * envelope.max()
    inst = _instantaneous_frequency(t, x1, x2, envelope, valid, omega_ref, traj.dt)
    return DemodRecord(t=t, x1=x1, x2=x2, envelope=envelope, inst_freq=inst,
                       valid=valid, omega_ref=omega_ref, dt=traj.dt)


def _instantaneous_frequency(t, x1, x2, envelope, valid, omega_ref, dt) -> np.ndarray:
    # A tone at omega_ref + d gives X1 ~ cos(d*t), X2 ~ -sin(d*t), so the
    # phase atan2(-X2, X1) advances at +d.
    phase = np.unwrap(np.arctan2(-x2, x1))
    dphi = np.gradient(phase, dt)
    # Two cascaded half-width averages: same total window and group
    # delay as a single flat window, but a second-order null at the
    # 2*omega_ref image frequency so its leakage stays nulled even when
    # the signal sits slightly off omega_ref.
    half = max(1, int(round(0.5 * FREQ_SMOOTH_PERIODS * 2.0 * math.pi / (omega_ref * dt))))
    inst = omega_ref + _smooth(_smooth(dphi, half), half)
    return np.where(valid, inst, np.nan)


def instantaneous_frequency(record: DemodRecord) -> np.ndarray:
    """Instantaneous angular frequency of a demodulated record.

    Equal to ``record.inst_freq``; recomputed here from the quadratures
    so a record with edited quadratures stays consistent.
    """
    return _instantaneous_frequency(record.t, record.x1, record.x2, record.envelope,
                                    record.valid, record.omega_ref, record.dt)


def _loglinear_fit(t: np.ndarray, y: np.ndarray) -> tuple:
    """Least-squares slope/intercept of ln(y) vs t. Returns (rate, y0)."""
    mask = y > 0
    if mask.sum() < 10:
        return math.nan, math.nan
    coeffs = np.polyfit(t[mask], np.log(y[mask]), 1)
    return float(coeffs[0]), float(math.exp(coeffs[1]))


def ringdown_experiment(params: OscillatorParams, drive: DriveTone,
                        drive_time: float, free_time: float,
                        prep_upper_branch: bool = False,
                        lp_bandwidth: Optional[float] = None,
                        dt: Optional[float] = None) -> RingdownResult:
    """Drive to steady state, cut the drive at t = 0, record the decay.

    The forced segment is seeded on the analytic steady-state branch
    (the highest stable one when ``prep_upper_branch`` is set, emulating
    the upward sweep that parks the mode there) and integrated for
    ``drive_time`` so the settling criterion of ``settle_and_measure``
    holds at t = 0. Both segments are demodulated at the natural
    frequency; the free envelope is fitted to A*exp(-t/tau) and the free
    frequency shift to an exponential relaxation.
    """
    if drive_time <= 0 or free_time <= 0:
        raise InvalidInputError("drive_time and free_time must be > 0")
    if dt is None:
        # Commensurate with the demodulation carrier: with an integer
        # number of steps per natural period, the frequency-smoothing
        # window spans whole carrier periods and the moving average
        # nulls the 2*omega0 image leaking through the low-pass filter.
        # The doubled rate also keeps the integrator's own frequency
        # error well under the backbone shift at eps = 1e-4.
        steps = math.ceil(4.0 * math.pi / (params.omega0 * default_dt(params, [drive])))
        dt = 2.0 * math.pi / (params.omega0 * steps)
    if lp_bandwidth is None:
        lp_bandwidth = math.sqrt(params.gamma * params.omega0)

    seed = (upper_branch_seed(params, drive) if prep_upper_branch
            else lower_branch_seed(params, drive))
    forced_traj = integrate(params, [drive], seed[0], seed[1], drive_time, dt)
    free_traj = integrate(params, [], forced_traj.x[-1], forced_traj.v[-1], free_time, dt)
    forced_traj = Trajectory(t0=-forced_traj.duration, dt=dt, x=forced_traj.x, v=forced_traj.v)

    forced = iq_demodulate(forced_traj, params.omega0, lp_bandwidth, gamma=params.gamma)
    free = iq_demodulate(free_traj, params.omega0, lp_bandwidth, gamma=params.gamma)

    # Settled at t = 0: envelope drift over the last 10 drive cycles <= 1%.
    # Cycle-averaged halves so residual carrier ripple does not register.
    n5 = max(2, int(round(5.0 * 2.0 * math.pi / (drive.omega * dt))))
    if len(forced.envelope) < 2 * n5:
        raise InvalidInputError(
            "drive_time shorter than the 10-cycle settling check; increase it"
        )
    first, last = forced.envelope[-2 * n5:-n5], forced.envelope[-n5:]
    drift = abs(last.mean() - first.mean()) / max(last.mean(), 1e-300)
    if drift > 0.01:
        raise NotSettledError(
            f"forced envelope still drifting by {drift:.2%} at switch-off; "
            "increase drive_time"
        )

    # Skip the filter transient, stop where the validity threshold bites.
    t_filter = 3.0 / lp_bandwidth
    env0 = free.envelope[free.t >= t_filter][0] if np.any(free.t >= t_filter) else free.envelope[0]
    fit_mask = (free.t >= t_filter) & (free.envelope > ENVELOPE_VALIDITY_FRACTION * env0)
    slope, _ = _loglinear_fit(free.t[fit_mask], free.envelope[fit_mask])
    decay_time = -1.0 / slope if slope < 0 else math.nan

    # Frequency relaxation: fit ln(inst_freq - omega0) where the shift is
    # resolvable, i.e. eps(t) between 1e-4 and its initial value.
    shift = free.inst_freq - params.omega0
    eps_t = epsilon(params, 1.0) * (free.envelope / 2.0) ** 2
    freq_mask = fit_mask & np.isfinite(shift) & (shift > 0) & (eps_t > 1e-4)
    if freq_mask.sum() >= 10 and np.nanmax(eps_t[fit_mask]) > 2e-4:
        rate, _ = _loglinear_fit(free.t[freq_mask], shift[freq_mask])
        freq_rate = -rate
    else:
        freq_rate = math.nan
    return RingdownResult(forced=forced, free=free,
                          fitted_decay_time=decay_time,
                          fitted_freq_decay_rate=freq_rate)
