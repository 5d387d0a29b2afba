import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from duffinglab import (
    BistableRegion,
    InvalidInputError,
    OscillatorParams,
    backbone_frequency,
    bistable_region,
    epsilon,
    estimate_beta,
    hysteresis_cycle,
    response_amplitudes,
)
from duffinglab.steady import _residual


def make_params(beta=1e13, q=5000.0):
    return OscillatorParams.from_frequency_q(1057e3, q, beta)


def drive_for_peak_eps(params, eps_peak):
    """Drive amplitude whose resonant response reaches the given eps."""
    a = math.sqrt(eps_peak / (3.0 * params.beta))
    return a * params.gamma * params.omega0


class TestLinearLimit:
    def test_matches_closed_form(self):
        p = make_params(beta=0.0)
        amp = 1.0
        for omega in [p.omega0 - 5 * p.gamma, p.omega0, p.omega0 + 5 * p.gamma]:
            pts = response_amplitudes(p, amp, omega)
            assert len(pts) == 1
            expected = amp / math.hypot(p.omega0**2 - omega**2, p.gamma * p.omega0)
            assert pts[0].amplitude == pytest.approx(expected, rel=1e-12)
            assert pts[0].stable

    def test_resonant_amplitude(self):
        p = make_params(beta=0.0)
        pts = response_amplitudes(p, 2.5, p.omega0)
        assert pts[0].amplitude == pytest.approx(2.5 / (p.gamma * p.omega0), rel=1e-12)


class TestBranches:
    def test_one_or_three_solutions(self):
        p = make_params()
        amp = drive_for_peak_eps(p, 1e-3)
        reg = bistable_region(p, amp)
        counts = set()
        for omega in np.linspace(p.omega0 - 5 * p.gamma, p.omega0 + 5 * p.gamma, 60):
            n = len(response_amplitudes(p, amp, omega))
            counts.add(n)
            assert n in (1, 3)
            assert (n == 3) == (omega in reg)
        assert counts == {1, 3}

    def test_middle_branch_unstable(self):
        p = make_params()
        amp = drive_for_peak_eps(p, 1e-3)
        reg = bistable_region(p, amp)
        omega = 0.5 * (reg.omega_lower + reg.omega_upper)
        pts = response_amplitudes(p, amp, omega)
        assert [q.stable for q in pts] == [True, False, True]
        assert pts[0].amplitude < pts[1].amplitude < pts[2].amplitude

    def test_residuals_vanish(self):
        p = make_params()
        amp = drive_for_peak_eps(p, 1e-3)
        for omega in np.linspace(p.omega0 - 3 * p.gamma, p.omega0 + 3 * p.gamma, 40):
            for q in response_amplitudes(p, amp, omega):
                assert abs(_residual(p, amp, omega, q.amplitude**2)) < 1e-8 * amp**2

    def test_rejects_bad_inputs(self):
        p = make_params()
        with pytest.raises(InvalidInputError):
            response_amplitudes(p, -1.0, p.omega0)
        with pytest.raises(InvalidInputError):
            response_amplitudes(p, 1.0, 0.0)

    @settings(max_examples=30, deadline=None)
    @given(level=st.floats(min_value=0.1, max_value=10.0),
           detune=st.floats(min_value=-8.0, max_value=8.0))
    def test_roots_positive_and_sorted(self, level, detune):
        p = make_params()
        amp = level * drive_for_peak_eps(p, 1e-3)
        omega = p.omega0 + detune * p.gamma
        pts = response_amplitudes(p, amp, omega)
        amps = [q.amplitude for q in pts]
        assert all(a > 0 for a in amps)
        assert amps == sorted(amps)


class TestBackbone:
    def test_shift_is_half_epsilon(self):
        p = make_params()
        a = 1e-8
        assert backbone_frequency(p, a) == pytest.approx(
            p.omega0 * (1 + 0.5 * epsilon(p, a)), rel=1e-14)

    def test_linear_mode_has_flat_backbone(self):
        p = make_params(beta=0.0)
        assert backbone_frequency(p, 1e-6) == p.omega0


class TestBistableRegion:
    def test_region_edges_are_fold_points(self):
        p = make_params()
        amp = drive_for_peak_eps(p, 1e-3)
        reg = bistable_region(p, amp)
        delta = 1e-6 * p.omega0
        assert len(response_amplitudes(p, amp, reg.omega_lower - delta)) == 1
        assert len(response_amplitudes(p, amp, reg.omega_upper + delta)) == 1
        mid = 0.5 * (reg.omega_lower + reg.omega_upper)
        assert len(response_amplitudes(p, amp, mid)) == 3

    def test_below_threshold_returns_none(self):
        p = make_params()
        assert bistable_region(p, 1e-4) is None

    def test_linear_mode_never_bistable(self):
        p = make_params(beta=0.0)
        assert bistable_region(p, 100.0) is None

    def test_window_widens_with_drive(self):
        p = make_params()
        amp = drive_for_peak_eps(p, 1e-3)
        w1 = bistable_region(p, amp).width
        w2 = bistable_region(p, 2 * amp).width
        assert w2 > w1

    def test_contains(self):
        reg = BistableRegion(omega_lower=10.0, omega_upper=20.0)
        assert 15.0 in reg
        assert 5.0 not in reg
        assert reg.width == 10.0

    def test_inverted_region_rejected(self):
        with pytest.raises(InvalidInputError):
            BistableRegion(omega_lower=20.0, omega_upper=10.0)


class TestHysteresisCycle:
    def test_branches_differ_only_in_window(self):
        p = make_params()
        amp = drive_for_peak_eps(p, 1e-3)
        reg = bistable_region(p, amp)
        grid = np.linspace(p.omega0 - 3 * p.gamma, p.omega0 + 5 * p.gamma, 120)
        up, down = hysteresis_cycle(p, amp, grid)
        for w, pu, pd in zip(grid, up, down):
            assert pu.amplitude >= pd.amplitude
            if w in reg:
                assert pu.amplitude > pd.amplitude
            else:
                assert pu.amplitude == pytest.approx(pd.amplitude, rel=1e-9)

    def test_rejects_non_monotonic_grid(self):
        p = make_params()
        with pytest.raises(InvalidInputError):
            hysteresis_cycle(p, 1.0, [p.omega0, p.omega0 + 1.0, p.omega0])


class TestEstimateBeta:
    def test_exact_inversion(self):
        p = make_params()
        a = 1e-8
        peak_omega = backbone_frequency(p, a)
        assert estimate_beta(p.omega0, peak_omega, a) == pytest.approx(p.beta, rel=1e-12)

    def test_rejects_softening_peak(self):
        p = make_params()
        with pytest.raises(InvalidInputError):
            estimate_beta(p.omega0, p.omega0 - 1.0, 1e-8)

    def test_rejects_zero_amplitude(self):
        p = make_params()
        with pytest.raises(InvalidInputError):
            estimate_beta(p.omega0, p.omega0 + 1.0, 0.0)
