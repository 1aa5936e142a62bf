"""Displaced-frame cavity amplitude tests.

The driven amplitude obeys  d alpha/dt = -i f(t) - (i delta + kappa/2) alpha
with alpha(t0) = 0, whose exact solution is the convolution

    alpha(t) = -i integral_{t0}^{t} f(s) exp[-(i delta + kappa/2)(t - s)] ds.

The quadrature of that convolution is the oracle for the IVP solver.
"""

import numpy as np
import pytest
from scipy.integrate import quad

from cqgate.errors import DegenerateMode, GridMismatch
from cqgate.frame import (
    ComplexTrajectory,
    displacement_solution,
    displacement_trajectory,
    effective_rabi,
    steady_state_amplitude,
    trajectory_from_csv,
    trajectory_to_csv,
)
from cqgate.model import (
    CavityMode,
    DotParams,
    DrivePulse,
    NumericOptions,
    TimeGrid,
    pulse_envelope,
)


def _convolution_oracle(mode, t0, t):
    """Exact alpha(t) by adaptive quadrature of the convolution integral."""
    rate = 1j * mode.delta + 0.5 * mode.kappa

    def integrand_re(s):
        return (-1j * pulse_envelope(mode.drive, s) * np.exp(-rate * (t - s))).real

    def integrand_im(s):
        return (-1j * pulse_envelope(mode.drive, s) * np.exp(-rate * (t - s))).imag

    re, _ = quad(integrand_re, t0, t, limit=400)
    im, _ = quad(integrand_im, t0, t, limit=400)
    return re + 1j * im


GAUSS = DrivePulse(shape="gaussian", amplitude=2.0, sigma=1.5, center=0.0)
MODE = CavityMode(delta=4.0, kappa=0.8, drive=GAUSS)
NUMERIC = NumericOptions()


class TestDisplacementOracle:
    def test_matches_convolution_quadrature(self):
        """IVP trajectory vs the convolution integral, 1e-6 relative."""
        sol = displacement_solution(MODE, -15.0, 15.0, NUMERIC)
        scale = max(abs(sol(t)) for t in np.linspace(-15, 15, 61))
        for t in (-2.0, -0.5, 0.0, 0.7, 2.5, 6.0, 12.0):
            exact = _convolution_oracle(MODE, -15.0, t)
            assert abs(complex(sol(t)) - exact) <= 1e-6 * scale

    def test_starts_at_zero(self):
        sol = displacement_solution(MODE, -15.0, 15.0, NUMERIC)
        assert abs(complex(sol(-15.0))) == 0.0

    def test_linearity_in_amplitude(self):
        """Doubling the drive amplitude doubles alpha pointwise."""
        from dataclasses import replace

        mode2 = replace(MODE, drive=replace(GAUSS, amplitude=4.0))
        s1 = displacement_solution(MODE, -15.0, 15.0, NUMERIC)
        s2 = displacement_solution(mode2, -15.0, 15.0, NUMERIC)
        for t in (-1.0, 0.0, 2.0, 8.0):
            assert complex(s2(t)) == pytest.approx(2.0 * complex(s1(t)), rel=1e-7)

    def test_ring_down_after_pulse(self):
        """Once the drive is off, alpha decays as exp[-(i delta + kappa/2) dt]."""
        sol = displacement_solution(MODE, -15.0, 15.0, NUMERIC)
        t_ref = 10.0  # support ends at 9 sigma = 9; well past it
        a_ref = complex(sol(t_ref))
        rate = 1j * MODE.delta + 0.5 * MODE.kappa
        for dt in (0.5, 1.5, 3.0):
            expected = a_ref * np.exp(-rate * dt)
            assert complex(sol(t_ref + dt)) == pytest.approx(expected, abs=1e-8)

    def test_zero_drive_stays_zero(self):
        mode = CavityMode(delta=4.0, kappa=0.8, drive=DrivePulse(amplitude=0.0))
        traj = displacement_trajectory(mode, TimeGrid(-5, 5, 100), NUMERIC)
        assert np.all(traj.values == 0)


class TestQuasiStaticLimit:
    def test_slow_pulse_tracks_minus_f_over_delta(self):
        """For sigma delta >> 1 and kappa = 0, alpha(t) ~ -f(t)/delta."""
        pulse = DrivePulse(shape="gaussian", amplitude=1.0, sigma=20.0)
        mode = CavityMode(delta=5.0, kappa=0.0, drive=pulse)
        sol = displacement_solution(mode, -200.0, 200.0, NUMERIC)
        for t in (-10.0, 0.0, 10.0):
            expected = -complex(pulse_envelope(pulse, t)) / mode.delta
            assert complex(sol(t)) == pytest.approx(expected, rel=5e-3)


class TestSteadyState:
    def test_constant_drive_fixed_point(self):
        mode = CavityMode(delta=4.0, kappa=0.8, drive=DrivePulse(amplitude=0.0))
        f0 = 1.0 + 0.5j
        alpha = steady_state_amplitude(mode, f0)
        # fixed point of the flow: -i f - (i delta + kappa/2) alpha = 0
        assert -1j * f0 - (1j * mode.delta + 0.4) * alpha == pytest.approx(0.0)

    def test_undriven_undamped_mode_rejected(self):
        mode = CavityMode(delta=0.0, kappa=0.0, drive=DrivePulse(amplitude=0.0))
        with pytest.raises(DegenerateMode):
            steady_state_amplitude(mode, 1.0)


class TestEffectiveRabi:
    def test_pointwise_coupling_sum(self):
        grid = TimeGrid(0.0, 1.0, 4)
        vals = np.array([0, 1, 2, 3, 4], dtype=complex)
        traj = ComplexTrajectory(grid, vals)
        dot = DotParams(label="A", delta_exciton=10.0, couplings=(2.0 + 1.0j,),
                        gamma=1.0)
        omega = effective_rabi(dot, [traj])
        assert np.allclose(omega.values, (2.0 + 1.0j) * vals)

    def test_grid_mismatch_rejected(self):
        t1 = ComplexTrajectory(TimeGrid(0.0, 1.0, 4), np.zeros(5, complex))
        dot = DotParams(label="A", delta_exciton=10.0, couplings=(1.0, 1.0),
                        gamma=1.0)
        t2 = ComplexTrajectory(TimeGrid(0.0, 2.0, 4), np.zeros(5, complex))
        with pytest.raises(GridMismatch):
            effective_rabi(dot, [t1, t2])


class TestTrajectoryCsv:
    def test_round_trip(self, tmp_path):
        grid = TimeGrid(-1.0, 1.0, 50)
        values = np.exp(1j * np.linspace(0, 3, 51)) * np.linspace(0, 2, 51)
        traj = ComplexTrajectory(grid, values)
        path = tmp_path / "alpha.csv"
        trajectory_to_csv(traj, str(path))
        back = trajectory_from_csv(str(path))
        assert np.allclose(back.values, values, atol=1e-8)
        assert np.allclose(back.times(), traj.times(), atol=1e-8)

    def test_header(self, tmp_path):
        traj = ComplexTrajectory(TimeGrid(0, 1, 2), np.zeros(3, complex))
        path = tmp_path / "alpha.csv"
        trajectory_to_csv(traj, str(path))
        assert path.read_text().splitlines()[0] == "t,re,im"
