"""Steady-state response of the driven mode by harmonic balance.

Keeping only the fundamental, the forced oscillation amplitude a = |x|
at drive frequency ``omega`` satisfies the cubic (in u = a^2)

    u * [ (omega0^2*(1 + 3*beta*u) - omega^2)^2 + gamma^2*omega0^2 ] = amp^2

whose 1 or 3 positive roots are the lower/upper/unstable branches of the
hardening resonance. This module finds all of them, classifies their
stability, locates the saddle-node (jump) frequencies bounding the
bistable window, follows branches to build hysteresis cycles, and
inverts the backbone relation to estimate beta from a measured peak.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidInputError
from .model import OscillatorParams, epsilon

__all__ = [
    "BranchPoint",
    "BistableRegion",
    "response_amplitudes",
    "backbone_frequency",
    "bistable_region",
    "hysteresis_cycle",
    "estimate_beta",
]

# Residual tolerance on the amplitude cubic, relative to amp^2.
RESIDUAL_RTOL = 1e-10
# Absolute tolerance of the saddle-node bisection, in units of omega0.
SADDLE_TOL = 1e-9


@dataclass(frozen=True)
class BranchPoint:
    """One steady-state solution at a single drive frequency."""

    omega: float
    amplitude: float
    stable: bool


@dataclass(frozen=True)
class BistableRegion:
    """Saddle-node frequencies bounding the 3-solution window.

    ``omega_lower`` is where a downward sweep jumps up; ``omega_upper``
    is where an upward sweep falls off the upper branch.
    """

    omega_lower: float
    omega_upper: float

    def __post_init__(self):
        if not self.omega_lower < self.omega_upper:
            raise InvalidInputError(
                f"omega_lower ({self.omega_lower}) must be < omega_upper ({self.omega_upper})"
            )

    @property
    def width(self) -> float:
        return self.omega_upper - self.omega_lower

    def __contains__(self, omega: float) -> bool:
        return self.omega_lower < omega < self.omega_upper


def _cubic_coeffs(params: OscillatorParams, amp: float, omega: float):
    """Coefficients of the residual cubic in u = amplitude^2."""
    a = params.omega0**2 - omega**2
    b = 3.0 * params.beta * params.omega0**2
    g2 = (params.gamma * params.omega0) ** 2
    # u*(a + b*u)^2 + g2*u - amp^2
    return b * b, 2.0 * a * b, a * a + g2, -amp * amp


def _residual(params: OscillatorParams, amp: float, omega: float, u: float) -> float:
    a = params.omega0**2 - omega**2
    b = 3.0 * params.beta * params.omega0**2
    g2 = (params.gamma * params.omega0) ** 2
    return u * ((a + b * u) ** 2 + g2) - amp * amp


def _drive_squared(params: OscillatorParams, omega: float, u: float) -> float:
    """amp^2 required to sustain amplitude^2 = u at frequency omega."""
    a = params.omega0**2 - omega**2
    b = 3.0 * params.beta * params.omega0**2
    g2 = (params.gamma * params.omega0) ** 2
    return u * ((a + b * u) ** 2 + g2)


def _roots_u(params: OscillatorParams, amp: float, omega: float) -> list:
    """All real non-negative roots u of the amplitude cubic, bisection-refined."""
    if amp == 0.0:
        return [0.0]
    c3, c2, c1, c0 = _cubic_coeffs(params, amp, omega)
    if c3 == 0.0:
        # beta = 0: linear response, single root.
        return [-c0 / c1]
    # Rescale so the roots are O(1): raw u is ~(displacement)^2 ~ 1e-17,
    # far below the companion-matrix noise floor of np.roots.
    scale = (amp * amp / c3) ** (1.0 / 3.0)
    raw = scale * np.roots([c3 * scale**3, c2 * scale**2, c1 * scale, c0])
    candidates = sorted(
        float(r.real) for r in raw if abs(r.imag) <= 1e-6 * abs(r.real) and r.real > 0
    )
    if not candidates:
        raise RuntimeError("internal error: amplitude cubic returned no positive roots")
    # Polish each closed-form root by bracketed bisection; the closed
    # form loses digits near the saddle-node degeneracy. Midpoints
    # between neighboring candidates make disjoint brackets, so close
    # roots cannot collapse onto each other.
    u_max = (10.0 * amp / (params.gamma * params.omega0)) ** 2
    bounds = [0.0]
    for left, right in zip(candidates[:-1], candidates[1:]):
        bounds.append(0.5 * (left + right))
    bounds.append(max(2.0 * candidates[-1], u_max))
    # Refine in the O(1) scaled variable: the roots sit ~1e-17, far
    # below brentq's absolute termination tolerance in raw units.
    g = lambda w: _residual(params, amp, omega, scale * w)
    refined = []
    for u, lo, hi in zip(candidates, bounds[:-1], bounds[1:]):
        if g(lo / scale) * g(hi / scale) <= 0:
            u = scale * brentq(g, lo / scale, hi / scale,
                               rtol=8.9e-16, xtol=1e-24, maxiter=200)
        refined.append(u)
    return refined


def _stability(params: OscillatorParams, omega: float, u: float) -> bool:
    """Stable iff the drive power needed grows with amplitude^2 along the cubic."""
    a = params.omega0**2 - omega**2
    b = 3.0 * params.beta * params.omega0**2
    g2 = (params.gamma * params.omega0) ** 2
    d = (a + b * u) ** 2 + g2 + u * 2.0 * b * (a + b * u)
    return d > 0


def response_amplitudes(params: OscillatorParams, amp: float, omega: float) -> list:
    """All steady-state branch points at drive (amp, omega), sorted by amplitude.

    Returns 1 or 3 ``BranchPoint``s; with 3 roots exactly the middle one
    is unstable.
    """
    if amp < 0:
        raise InvalidInputError(f"amp must be >= 0, got {amp}")
    if omega <= 0:
        raise InvalidInputError(f"omega must be > 0, got {omega}")
    roots = _roots_u(params, amp, omega)
    points = [
        BranchPoint(omega=omega, amplitude=math.sqrt(u), stable=_stability(params, omega, u))
        for u in roots
    ]
    if len(points) == 3:
        points = [
            BranchPoint(points[0].omega, points[0].amplitude, True),
            BranchPoint(points[1].omega, points[1].amplitude, False),
            BranchPoint(points[2].omega, points[2].amplitude, True),
        ]
    return points


def backbone_frequency(params: OscillatorParams, amplitude: float) -> float:
    """Preferred oscillation frequency omega0*(1 + eps/2) at the given amplitude."""
    return params.omega0 * (1.0 + 0.5 * epsilon(params, amplitude))


def _root_count(params: OscillatorParams, amp: float, omega: float) -> int:
    return len(_roots_u(params, amp, omega))


def bistable_region(params: OscillatorParams, amp: float) -> Optional[BistableRegion]:
    """Saddle-node frequencies bracketing the 3-solution window, or None.

    Returns None when the drive is below the bistability threshold.
    """
    if amp < 0:
        raise InvalidInputError(f"amp must be >= 0, got {amp}")
    if params.beta == 0.0 or amp == 0.0:
        return None
    # The 3-root window, when present, sits between omega0 and the
    # backbone at the peak amplitude amp/(gamma*omega0).
    u_peak = (amp / (params.gamma * params.omega0)) ** 2
    omega_peak = backbone_frequency(params, math.sqrt(u_peak))
    lo = params.omega0
    hi = params.omega0 + 2.0 * (omega_peak - params.omega0) + 2.0 * params.gamma
    grid = np.linspace(lo, hi, 400)
    counts = [_root_count(params, amp, w) for w in grid]
    if 3 not in counts:
        return None
    first = counts.index(3)
    last = len(counts) - 1 - counts[::-1].index(3)

    tol = SADDLE_TOL * params.omega0

    def bisect(w_single, w_triple):
        while abs(w_triple - w_single) > tol:
            mid = 0.5 * (w_single + w_triple)
            if _root_count(params, amp, mid) == 3:
                w_triple = mid
            else:
                w_single = mid
        return 0.5 * (w_single + w_triple)

    if first == 0:
        omega_lower = bisect(lo - 10.0 * params.gamma, grid[0])
    else:
        omega_lower = bisect(grid[first - 1], grid[first])
    if last == len(counts) - 1:
        raise RuntimeError("internal error: bistable window extends past search bracket")
    omega_upper = bisect(grid[last + 1], grid[last])
    return BistableRegion(omega_lower=omega_lower, omega_upper=omega_upper)


def hysteresis_cycle(params: OscillatorParams, amp: float, omega_grid):
    """Analytic up- and down-sweep branches over a frequency grid.

    Pure branch following on the cubic solutions: the up branch rides
    the highest stable amplitude (dropping at the upper saddle-node),
    the down branch rides the lowest (jumping up at the lower one).

    Returns ``(up_branch, down_branch)`` as lists of BranchPoint in grid
    order.
    """
    omega_grid = np.asarray(omega_grid, dtype=float)
    steps = np.diff(omega_grid)
    if len(omega_grid) < 2 or not (np.all(steps > 0) or np.all(steps < 0)):
        raise InvalidInputError("omega_grid must be strictly monotonic with >= 2 points")
    up, down = [], []
    for w in omega_grid:
        pts = response_amplitudes(params, amp, w)
        stable = [p for p in pts if p.stable]
        up.append(stable[-1])
        down.append(stable[0])
    return up, down


def estimate_beta(omega0: float, peak_omega: float, peak_amplitude: float) -> float:
    """Invert the backbone relation at a measured response peak.

    ``peak_amplitude`` is the one-sided amplitude |x| at the peak of a
    swept response; the peak rides the backbone, so
    beta = 2*(peak_omega - omega0) / (3*omega0*peak_amplitude^2).
    """
    if peak_amplitude <= 0:
        raise InvalidInputError(f"peak_amplitude must be > 0, got {peak_amplitude}")
    if peak_omega < omega0:
        raise InvalidInputError(
            f"peak_omega ({peak_omega}) < omega0 ({omega0}): softening response "
            "is outside this model"
        )
    return 2.0 * (peak_omega - omega0) / (3.0 * omega0 * peak_amplitude**2)
