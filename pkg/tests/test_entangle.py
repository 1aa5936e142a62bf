"""Density-matrix utilities, concurrence, and gate-phase extraction."""

import math

import numpy as np
import pytest

from cqgate.density import DensityMatrix, pure_state
from cqgate.entangle import (
    TEST_STATE,
    apply_phase_gate,
    concurrence,
    extract_phases,
    phases_from_sector_args,
    reduce_to_qubits,
)
from cqgate.errors import InvalidDensityMatrix, LeakageTooLarge, NotPure
from cqgate.hilbert import HilbertSpace


def _dm(matrix):
    return DensityMatrix(np.asarray(matrix, dtype=complex), time=0.0)


def _bell(sign=+1):
    v = np.array([1, 0, 0, sign], dtype=complex) / math.sqrt(2)
    return _dm(np.outer(v, v.conj()))


class TestDensityMatrix:
    def test_pure_state_projector(self):
        v = np.array([1, 1j], dtype=complex) / math.sqrt(2)
        rho = pure_state(v, time=0.0)
        assert rho.purity() == pytest.approx(1.0)
        assert rho.trace() == pytest.approx(1.0)

    def test_non_hermitian_rejected(self):
        with pytest.raises(InvalidDensityMatrix):
            _dm([[1.0, 1.0], [0.0, 0.0]]).check()

    def test_negative_eigenvalue_rejected(self):
        with pytest.raises(InvalidDensityMatrix):
            _dm([[1.5, 0.0], [0.0, -0.5]]).check()

    def test_trace_check(self):
        with pytest.raises(InvalidDensityMatrix):
            _dm([[0.7, 0], [0, 0.7]]).check(trace_preserving=True)


class TestConcurrence:
    def test_bell_state(self):
        assert concurrence(_bell()) == pytest.approx(1.0, abs=1e-12)

    def test_product_state(self):
        v = np.array([1, 0, 0, 0], dtype=complex)
        assert concurrence(_dm(np.outer(v, v))) == pytest.approx(0.0, abs=1e-12)

    def test_maximally_mixed(self):
        assert concurrence(_dm(np.eye(4) / 4)) == 0.0

    def test_werner_state_oracle(self):
        """C = max(0, (3p-1)/2) for p |Phi+><Phi+| + (1-p) I/4."""
        for p, expected in ((0.5, 0.25), (0.8, 0.7), (0.2, 0.0)):
            rho = p * _bell().matrix + (1 - p) * np.eye(4) / 4
            assert concurrence(_dm(rho)) == pytest.approx(expected, abs=1e-10)

    def test_local_unitary_invariance(self):
        rng = np.random.default_rng(7)

        def haar2():
            z = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            q, r = np.linalg.qr(z)
            return q * (np.diag(r) / np.abs(np.diag(r)))

        rho = 0.6 * _bell().matrix + 0.4 * np.eye(4) / 4
        u = np.kron(haar2(), haar2())
        rotated = u @ rho @ u.conj().T
        assert concurrence(_dm(rotated)) == pytest.approx(
            concurrence(_dm(rho)), abs=1e-10)

    def test_benchmark_state_sine_law(self):
        """The benchmark superposition under a pure theta_AB gate has
        concurrence |sin 2 theta_AB|."""
        for theta in (0.1, math.pi / 8, math.pi / 4, 0.6):
            final = apply_phase_gate(0.0, 0.0, theta, TEST_STATE)
            rho = _dm(np.outer(final, final.conj()))
            assert concurrence(rho) == pytest.approx(
                abs(math.sin(2 * theta)), abs=1e-7)


class TestReduceToQubits:
    def test_projects_and_renormalizes(self):
        space = HilbertSpace(fock_cutoff=1)
        full = np.zeros((space.dimension, space.dimension), dtype=complex)
        # 90% on |0,0,0>, 10% stranded on a trion state of dot A
        full[space.index(0, 0, 0), space.index(0, 0, 0)] = 0.9
        full[space.index(2, 0, 0), space.index(2, 0, 0)] = 0.1
        rho4, leakage = reduce_to_qubits(DensityMatrix(full, 0.0), space)
        assert leakage == pytest.approx(0.1)
        assert rho4.matrix[0, 0] == pytest.approx(1.0)

    def test_large_leakage_rejected(self):
        space = HilbertSpace(fock_cutoff=1)
        full = np.zeros((space.dimension, space.dimension), dtype=complex)
        full[space.index(2, 2, 0), space.index(2, 2, 0)] = 1.0
        with pytest.raises(LeakageTooLarge):
            reduce_to_qubits(DensityMatrix(full, 0.0), space)


class TestPhaseExtraction:
    def test_round_trip_through_gate(self):
        """apply_phase_gate then extract_phases recovers all angles."""
        ta, tb, tab, g = 0.3, -0.45, math.pi / 4, 0.8
        final = apply_phase_gate(ta, tb, tab, TEST_STATE, global_phase=g)
        ph = extract_phases(final)
        assert ph.theta_a == pytest.approx(ta, abs=1e-10)
        assert ph.theta_b == pytest.approx(tb, abs=1e-10)
        assert ph.theta_ab == pytest.approx(tab, abs=1e-10)
        assert ph.global_phase == pytest.approx(g, abs=1e-10)

    def test_round_trip_from_density_matrix(self):
        final = apply_phase_gate(0.1, 0.2, 0.3, TEST_STATE)
        rho = _dm(np.outer(final, final.conj()))
        ph = extract_phases(rho)
        assert ph.theta_ab == pytest.approx(0.3, abs=1e-10)

    def test_mixed_state_rejected(self):
        with pytest.raises(NotPure):
            extract_phases(_dm(np.eye(4) / 4))

    def test_sector_args_sign_convention(self):
        """phi_jk = g + theta_a z_j + theta_b z_k + theta_ab z_j z_k with
        z_0 = +1, z_1 = -1."""
        ta, tb, tab, g = 0.2, 0.3, 0.15, 0.05
        phi = np.array([
            g + ta + tb + tab,
            g + ta - tb - tab,
            g - ta + tb - tab,
            g - ta - tb + tab,
        ])
        ph = phases_from_sector_args(phi)
        assert ph.theta_a == pytest.approx(ta, abs=1e-12)
        assert ph.theta_b == pytest.approx(tb, abs=1e-12)
        assert ph.theta_ab == pytest.approx(tab, abs=1e-12)
        assert ph.global_phase == pytest.approx(g, abs=1e-12)

    def test_entangling_combination(self):
        """4 theta_AB = phi00 - phi01 - phi10 + phi11."""
        phi = np.array([0.4, 0.1, -0.2, 0.3])
        ph = phases_from_sector_args(phi)
        assert 4 * ph.theta_ab == pytest.approx(
            phi[0] - phi[1] - phi[2] + phi[3], abs=1e-12)
