"""Core oscillator model: parameter types, equation of motion, nonlinearity strength.

All quantities are SI. A mechanical mode is described by its angular
resonance frequency ``omega0`` (rad/s), energy damping rate ``gamma``
(rad/s) and hardening coefficient ``beta`` (1/m^2). The equation of
motion integrated and solved throughout the library is

    x'' + gamma * x' + omega0^2 * (1 + beta * x^2) * x = sum_k 2 * a_k * cos(w_k t + p_k)

with each drive tone contributing a force per unit mass ``a_k`` through
the factor-2 cosine convention (so the complex amplitude of the drive at
``+w_k`` is exactly ``a_k * exp(i p_k)``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

__all__ = [
    "OscillatorParams",
    "DriveTone",
    "Trajectory",
    "acceleration",
    "epsilon",
    "MIN_OVERSAMPLE",
    "DEFAULT_OVERSAMPLE",
]

# Samples per carrier period 2*pi/omega0: hard floor and default.
MIN_OVERSAMPLE = 20
DEFAULT_OVERSAMPLE = 40


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise InvalidInputError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class OscillatorParams:
    """One mechanical mode.

    Attributes
    ----------
    omega0 : float
        Angular resonance frequency, rad/s. Must be positive.
    gamma : float
        Damping rate, rad/s. Must be positive and smaller than omega0
        (underdamped, Q > 1).
    beta : float
        Hardening coefficient, 1/m^2. Must be >= 0; only upward-bending
        resonances are modeled.
    """

    omega0: float
    gamma: float
    beta: float = 0.0

    def __post_init__(self):
        for name in ("omega0", "gamma", "beta"):
            _require_finite(name, getattr(self, name))
        if self.omega0 <= 0:
            raise InvalidInputError(f"omega0 must be > 0, got {self.omega0}")
        if self.gamma <= 0:
            raise InvalidInputError(f"gamma must be > 0, got {self.gamma}")
        if self.omega0 / self.gamma <= 1:
            raise InvalidInputError(
                f"underdamped mode required: Q = omega0/gamma = "
                f"{self.omega0 / self.gamma:.3g} must be > 1"
            )
        if self.beta < 0:
            raise InvalidInputError(f"beta must be >= 0 (hardening), got {self.beta}")

    @property
    def q(self) -> float:
        """Quality factor omega0/gamma."""
        return self.omega0 / self.gamma

    @property
    def decay_time(self) -> float:
        """Envelope 1/e decay time of the free oscillator, 2/gamma."""
        return 2.0 / self.gamma

    @classmethod
    def from_frequency_q(cls, frequency_hz: float, q: float, beta: float = 0.0) -> "OscillatorParams":
        """Build from an ordinary frequency in Hz and a quality factor."""
        omega0 = 2.0 * math.pi * float(frequency_hz)
        if q <= 0:
            raise InvalidInputError(f"quality factor must be > 0, got {q}")
        return cls(omega0=omega0, gamma=omega0 / float(q), beta=beta)


@dataclass(frozen=True)
class DriveTone:
    """A monochromatic actuation 2*amp*cos(omega*t + phase).

    ``amp`` is a force per unit mass (m/s^2); the factor 2 makes ``amp``
    the one-sided complex drive amplitude.
    """

    amp: float
    omega: float
    phase: float = 0.0

    def __post_init__(self):
        for name in ("amp", "omega", "phase"):
            _require_finite(name, getattr(self, name))
        if self.amp < 0:
            raise InvalidInputError(f"amp must be >= 0, got {self.amp}")
        if self.omega <= 0:
            raise InvalidInputError(f"omega must be > 0, got {self.omega}")
        if not (0.0 <= self.phase < 2.0 * math.pi):
            object.__setattr__(self, "phase", self.phase % (2.0 * math.pi))

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    def force(self, t):
        """Instantaneous drive force per unit mass at time(s) ``t``."""
        return 2.0 * self.amp * np.cos(self.omega * np.asarray(t) + self.phase)


@dataclass(frozen=True)
class Trajectory:
    """Uniformly sampled displacement/velocity time series.

    Sample ``k`` is at time ``t0 + k*dt``. ``oversample_omega`` records
    the highest angular frequency the step size was validated against.
    """

    t0: float
    dt: float
    x: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "x", np.asarray(self.x, dtype=float))
        object.__setattr__(self, "v", np.asarray(self.v, dtype=float))
        if self.dt <= 0 or not math.isfinite(self.dt):
            raise InvalidInputError(f"dt must be positive and finite, got {self.dt}")
        if self.x.ndim != 1 or self.x.shape != self.v.shape or len(self.x) < 2:
            raise InvalidInputError(
                "x and v must be 1-d arrays of equal length >= 2, got shapes "
                f"{self.x.shape} and {self.v.shape}"
            )

    def __len__(self) -> int:
        return len(self.x)

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(len(self.x))

    @property
    def duration(self) -> float:
        return self.dt * (len(self.x) - 1)


def check_step(dt: float, omega_max: float, oversample: int = MIN_OVERSAMPLE) -> None:
    """Reject step sizes that under-resolve the carrier at ``omega_max``."""
    limit = 2.0 * math.pi / (oversample * omega_max)
    if dt > limit * (1.0 + 1e-12):
        raise InvalidInputError(
            f"dt = {dt:.3e} s under-resolves the carrier: need dt <= "
            f"{limit:.3e} s ({oversample} samples per period at "
            f"omega = {omega_max:.6g} rad/s)"
        )


def default_dt(params: OscillatorParams, drives=()) -> float:
    """Step size giving DEFAULT_OVERSAMPLE samples per period of the fastest tone."""
    omega_max = max([params.omega0] + [d.omega for d in drives])
    return 2.0 * math.pi / (DEFAULT_OVERSAMPLE * omega_max)


def acceleration(params: OscillatorParams, drives, x: float, v: float, t: float) -> float:
    """Right-hand side of the equation of motion.

    Returns the instantaneous acceleration
    ``sum_k 2*amp_k*cos(omega_k*t + phase_k) - gamma*v - omega0^2*(1 + beta*x^2)*x``.
    """
    x = _require_finite("x", x)
    v = _require_finite("v", v)
    t = _require_finite("t", t)
    force = 0.0
    for d in drives:
        force += 2.0 * d.amp * math.cos(d.omega * t + d.phase)
    return force - params.gamma * v - params.omega0**2 * (1.0 + params.beta * x * x) * x


def epsilon(params: OscillatorParams, amplitude: float) -> float:
    """Nonlinearity strength 3*beta*amplitude^2.

    ``amplitude`` is the one-sided (complex) oscillation amplitude, i.e.
    half the peak-to-mean displacement of the cosine motion.
    """
    amplitude = _require_finite("amplitude", amplitude)
    if amplitude < 0:
        raise InvalidInputError(f"amplitude must be >= 0, got {amplitude}")
    return 3.0 * params.beta * amplitude * amplitude
