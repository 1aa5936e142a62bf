"""Tests for the eigen-tracking (instantaneous diagonalization) solver."""

import dataclasses

import numpy as np
import pytest

from conftest import make_system
from cqgate.adiabatic import SECTOR_LABELS, adiabatic_evolve, eigen_to_csv, eigen_track
from cqgate.errors import TrackingLoss
from cqgate.frame import ComplexTrajectory, displacement_solution
from cqgate.hilbert import build_space, system_operators
from cqgate.model import validate_config
from cqgate.perturb import nonlinear_phase_4th


def _omega_pair(system):
    """Effective Rabi trajectories for both dots on the system grid."""
    grid = system.time_grid
    sol = displacement_solution(system.modes[0], grid.t0, grid.t1, system.numeric)
    alpha = np.asarray(sol(grid.times()), dtype=complex)
    return tuple(
        ComplexTrajectory(grid, dot.couplings[0] * alpha) for dot in system.dots
    )


class TestEigenTrack:
    def test_static_system_gives_constant_bare_energies(self):
        """No coupling and no drive: branches sit at -w_A-w_B, -w_A, -w_B, 0."""
        eigen = eigen_track(make_system(g=0.0, amplitude=0.0, omega=0.7))
        expected = np.array([-1.4, -0.7, -0.7, 0.0])
        assert np.allclose(eigen.eigenvalues, expected[None, :], atol=1e-12)
        assert np.allclose(eigen.phases, expected * 50.0, rtol=1e-9)

    def test_eigenvalue_sum_rule(self, system):
        """The full spectrum sums to trace(H), which the drive cannot change."""
        ops = system_operators(system, build_space(system))
        trace_h = float(np.real(np.trace(ops.static)))
        sums = eigen_track(system).all_eigenvalues.sum(axis=1)
        assert np.allclose(sums, trace_h, rtol=1e-10, atol=1e-10)

    def test_branches_return_to_bare_states(self):
        eigen = eigen_track(make_system(amplitude=3.0))
        assert np.all(eigen.end_overlaps >= 0.999)

    def test_grid_refinement_stability(self):
        """Doubling the grid changes each accumulated phase by < 1e-4 rad."""
        coarse = eigen_track(make_system(amplitude=3.0, n_steps=2000)).phases
        fine = eigen_track(make_system(amplitude=3.0, n_steps=4000)).phases
        assert np.max(np.abs(coarse - fine)) < 1e-4

    def test_swapping_dots_swaps_middle_sectors(self):
        base = make_system(amplitude=3.0, n_steps=800)
        da = dataclasses.replace(base.dot_a, couplings=(5.0,), delta_exciton=20.0)
        db = dataclasses.replace(base.dot_b, couplings=(3.0,), delta_exciton=30.0)
        fwd = dataclasses.replace(base.to_config(), dot_a=da, dot_b=db)
        rev = dataclasses.replace(
            base.to_config(),
            dot_a=dataclasses.replace(db, label="A"),
            dot_b=dataclasses.replace(da, label="B"),
        )
        p_fwd = eigen_track(validate_config(fwd)).phases
        p_rev = eigen_track(validate_config(rev)).phases
        assert np.allclose(p_fwd[[0, 2, 1, 3]], p_rev, atol=1e-12)

    def test_unresolved_crossing_raises_tracking_loss(self):
        """A strong drive on a coarse grid breaks branch continuity."""
        with pytest.raises(TrackingLoss):
            eigen_track(make_system(amplitude=60.0, n_steps=40))

    def test_exact_bright_degeneracy_raises_tracking_loss(self):
        """delta * Delta = 2 g^2 makes a dressed state degenerate with a bare
        branch; the drive then mixes the pair and the branch identity is lost.
        """
        with pytest.raises(TrackingLoss):
            eigen_track(make_system(delta_exciton=10.0, amplitude=3.0))


class TestEntanglingPhase:
    @pytest.mark.parametrize("g, rel", [(0.5, 0.02), (0.25, 0.005)])
    def test_matches_fourth_order_at_small_coupling(self, g, rel):
        """The tracked phase combination reduces to the fourth-order cross
        term, with O(g^2) relative corrections."""
        system = make_system(g=g, amplitude=3.0)
        result = adiabatic_evolve(system)
        om_a, om_b = _omega_pair(system)
        phi = nonlinear_phase_4th(om_a, om_b, system.dots, system.modes)
        assert result.theta_ab_raw == pytest.approx(phi / 4.0, rel=rel)

    def test_quartic_scaling_in_coupling(self):
        """Halving g reduces the entangling angle by about 2^4."""
        big = adiabatic_evolve(make_system(g=0.5, amplitude=3.0)).theta_ab_raw
        small = adiabatic_evolve(make_system(g=0.25, amplitude=3.0)).theta_ab_raw
        assert 14.0 < big / small < 18.0


class TestAdiabaticEvolve:
    def test_lossless_output_is_pure(self):
        result = adiabatic_evolve(make_system(gamma=0.0, kappa=0.0, amplitude=3.0))
        rho = result.rho_qubits.matrix
        assert np.real(np.trace(rho @ rho)) == pytest.approx(1.0, abs=1e-8)
        assert result.leakage == pytest.approx(0.0, abs=1e-12)
        assert np.allclose(result.eigen.pair_exponents, 0.0, atol=1e-12)

    def test_populations_conserved(self):
        result = adiabatic_evolve(make_system(amplitude=3.0))
        diag = np.real(np.diag(result.rho_qubits.matrix))
        assert np.allclose(diag, 0.25, atol=1e-12)

    def test_loss_produces_positive_decay_exponents(self):
        result = adiabatic_evolve(make_system(amplitude=3.0))
        assert np.all(result.eigen.pair_exponents > 0.0)
        assert 0.0 < result.leakage < 0.1

    def test_static_system_gives_zero_entangling_angle(self):
        result = adiabatic_evolve(make_system(g=0.0, amplitude=0.0))
        assert result.gate_phases.theta_ab == pytest.approx(0.0, abs=1e-12)


class TestCsvExport:
    def test_columns_and_rows(self, tmp_path, system):
        eigen = eigen_track(system)
        path = tmp_path / "eigen.csv"
        eigen_to_csv(eigen, str(path))
        lines = path.read_text().strip().split("\n")
        header = lines[0].split(",")
        assert header == (
            ["t"]
            + [f"lambda_{s}" for s in SECTOR_LABELS]
            + [f"phase_{s}" for s in SECTOR_LABELS]
        )
        assert len(lines) == 1 + len(eigen.times)
        first = [float(x) for x in lines[1].split(",")]
        assert first[0] == pytest.approx(eigen.times[0])
