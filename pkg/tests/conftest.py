"""Shared fixtures: a fast low-Q oscillator for unit tests and the
high-Q membrane parameter set used by the acceptance runs."""

import numpy as np
import pytest

from duffinglab import DriveTone, OscillatorParams, integrate
from duffinglab.model import default_dt


@pytest.fixture(scope="session", autouse=True)
def _warm_kernels():
    # First call into the compiled integrator pays the JIT cost; do it
    # once here so individual test timings stay meaningful.
    p = OscillatorParams.from_frequency_q(1e5, 50.0, 0.0)
    d = DriveTone(amp=1.0, omega=p.omega0)
    integrate(p, [d], 0.0, 0.0, 20.0 * 2.0 * np.pi / p.omega0, default_dt(p, [d]))


@pytest.fixture
def fast_linear():
    """Low-Q linear oscillator: settles in a few hundred cycles."""
    return OscillatorParams.from_frequency_q(1e5, 200.0, 0.0)


@pytest.fixture
def fast_duffing():
    """Low-Q hardening oscillator for quick nonlinear tests."""
    return OscillatorParams.from_frequency_q(1e5, 200.0, 1e13)


@pytest.fixture
def membrane():
    """High-Q membrane mode used by the slower end-to-end checks."""
    return OscillatorParams.from_frequency_q(1057e3, 5000.0, 1e13)
