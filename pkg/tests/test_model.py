import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from duffinglab import (
    DriveTone,
    InvalidInputError,
    OscillatorParams,
    Trajectory,
    acceleration,
    epsilon,
)
from duffinglab.model import check_step, default_dt, DEFAULT_OVERSAMPLE


class TestOscillatorParams:
    def test_basic_construction(self):
        p = OscillatorParams(omega0=1e6, gamma=100.0, beta=1e13)
        assert p.q == 1e4
        assert p.decay_time == 2.0 / 100.0

    def test_from_frequency_q(self):
        p = OscillatorParams.from_frequency_q(1057e3, 5000.0, 1e13)
        assert p.omega0 == pytest.approx(2 * math.pi * 1057e3)
        assert p.q == pytest.approx(5000.0)
        assert p.gamma == pytest.approx(p.omega0 / 5000.0)

    @pytest.mark.parametrize("kwargs", [
        dict(omega0=0.0, gamma=1.0),
        dict(omega0=-1e6, gamma=1.0),
        dict(omega0=1e6, gamma=0.0),
        dict(omega0=1e6, gamma=-5.0),
        dict(omega0=1e6, gamma=2e6),        # overdamped
        dict(omega0=1e6, gamma=1.0, beta=-1e12),
        dict(omega0=math.nan, gamma=1.0),
        dict(omega0=1e6, gamma=math.inf),
    ])
    def test_rejects_bad_parameters(self, kwargs):
        with pytest.raises(InvalidInputError):
            OscillatorParams(**kwargs)

    def test_frozen(self):
        p = OscillatorParams(omega0=1e6, gamma=100.0)
        with pytest.raises(AttributeError):
            p.omega0 = 2e6


class TestDriveTone:
    def test_force_convention(self):
        d = DriveTone(amp=3.0, omega=10.0, phase=0.0)
        assert d.force(0.0) == pytest.approx(6.0)
        assert d.force(d.period / 2) == pytest.approx(-6.0)

    def test_phase_wraps(self):
        d = DriveTone(amp=1.0, omega=1.0, phase=-math.pi / 2)
        assert d.phase == pytest.approx(3 * math.pi / 2)

    @pytest.mark.parametrize("kwargs", [
        dict(amp=-1.0, omega=1.0),
        dict(amp=1.0, omega=0.0),
        dict(amp=1.0, omega=-2.0),
        dict(amp=math.nan, omega=1.0),
    ])
    def test_rejects_bad_drive(self, kwargs):
        with pytest.raises(InvalidInputError):
            DriveTone(**kwargs)


class TestTrajectory:
    def test_time_axis(self):
        tr = Trajectory(t0=1.0, dt=0.5, x=np.zeros(4), v=np.zeros(4))
        assert np.allclose(tr.t, [1.0, 1.5, 2.0, 2.5])
        assert tr.duration == pytest.approx(1.5)
        assert len(tr) == 4

    def test_shape_mismatch_rejected(self):
        with pytest.raises(InvalidInputError):
            Trajectory(t0=0.0, dt=0.1, x=np.zeros(4), v=np.zeros(3))

    def test_bad_dt_rejected(self):
        with pytest.raises(InvalidInputError):
            Trajectory(t0=0.0, dt=0.0, x=np.zeros(3), v=np.zeros(3))


class TestStepValidation:
    def test_default_dt_oversamples_fastest_tone(self):
        p = OscillatorParams(omega0=1e6, gamma=100.0)
        d = DriveTone(amp=1.0, omega=3e6)
        dt = default_dt(p, [d])
        assert dt == pytest.approx(2 * math.pi / (DEFAULT_OVERSAMPLE * 3e6))

    def test_check_step_accepts_default(self):
        p = OscillatorParams(omega0=1e6, gamma=100.0)
        check_step(default_dt(p), p.omega0)

    def test_check_step_rejects_coarse(self):
        with pytest.raises(InvalidInputError):
            check_step(1.0, 1e6)


class TestAcceleration:
    def test_linear_restoring_force(self):
        p = OscillatorParams(omega0=2.0, gamma=0.5, beta=0.0)
        # a = -gamma*v - omega0^2*x at zero drive
        assert acceleration(p, [], 1.0, 3.0, 0.0) == pytest.approx(-0.5 * 3.0 - 4.0)

    def test_hardening_term(self):
        p = OscillatorParams(omega0=2.0, gamma=0.5, beta=10.0)
        lin = acceleration(OscillatorParams(2.0, 0.5, 0.0), [], 0.1, 0.0, 0.0)
        assert acceleration(p, [], 0.1, 0.0, 0.0) == pytest.approx(lin - 4.0 * 10.0 * 0.1**3)

    def test_drive_sum(self):
        p = OscillatorParams(omega0=2.0, gamma=0.5)
        drives = [DriveTone(amp=1.0, omega=3.0), DriveTone(amp=2.0, omega=5.0, phase=math.pi)]
        expected = 2.0 * 1.0 * math.cos(0.0) + 2.0 * 2.0 * math.cos(math.pi)
        assert acceleration(p, drives, 0.0, 0.0, 0.0) == pytest.approx(expected)

    def test_rejects_nonfinite_state(self):
        p = OscillatorParams(omega0=2.0, gamma=0.5)
        with pytest.raises(InvalidInputError):
            acceleration(p, [], math.nan, 0.0, 0.0)


class TestEpsilon:
    def test_value(self):
        p = OscillatorParams(omega0=1e6, gamma=100.0, beta=1e13)
        assert epsilon(p, 1e-8) == pytest.approx(3e13 * 1e-16)

    def test_rejects_negative_amplitude(self):
        p = OscillatorParams(omega0=1e6, gamma=100.0, beta=1e13)
        with pytest.raises(InvalidInputError):
            epsilon(p, -1e-9)

    @settings(max_examples=50, deadline=None)
    @given(scale=st.floats(min_value=0.1, max_value=10.0),
           amp=st.floats(min_value=1e-12, max_value=1e-6))
    def test_quadratic_scaling(self, scale, amp):
        p = OscillatorParams(omega0=1e6, gamma=100.0, beta=1e13)
        assert epsilon(p, scale * amp) == pytest.approx(scale**2 * epsilon(p, amp), rel=1e-12)
