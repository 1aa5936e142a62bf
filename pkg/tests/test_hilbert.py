"""Hilbert-space layout, Hamiltonian assembly, and collapse operators."""

import numpy as np
import pytest

from cqgate.errors import MultiModeUnsupported
from cqgate.hilbert import (
    HilbertSpace,
    build_space,
    hamiltonian_at,
    lindblad_ops,
    operator_to_dict,
    system_operators,
)

from conftest import make_system


class TestIndexing:
    space = HilbertSpace(fock_cutoff=3)

    def test_dimension(self):
        assert self.space.dimension == 36

    def test_index_unindex_round_trip(self):
        for a in range(3):
            for b in range(3):
                for n in range(4):
                    assert self.space.unindex(self.space.index(a, b, n)) == (a, b, n)

    def test_indices_cover_space(self):
        seen = {self.space.index(a, b, n)
                for a in range(3) for b in range(3) for n in range(4)}
        assert seen == set(range(36))

    def test_sector_sizes(self):
        sizes = sorted(len(self.space.sector_indices(a, b))
                       for a in (False, True) for b in (False, True))
        assert sizes == [4, 8, 8, 16]
        total = sum(len(self.space.sector_indices(a, b))
                    for a in (False, True) for b in (False, True))
        assert total == 36


class TestHamiltonian:
    def test_hermitian(self, system):
        space = build_space(system)
        h = hamiltonian_at(0.0, system, space, (1.0 + 0.5j, 0.3 - 0.1j))
        assert np.allclose(h, h.conj().T)

    def test_sectors_are_invariant(self, system):
        """The drive never connects dark and bright manifolds."""
        space = build_space(system)
        h = hamiltonian_at(0.0, system, space, (1.0 + 0.5j, 0.3 - 0.1j))
        for a in (False, True):
            for b in (False, True):
                inside = space.sector_indices(a, b)
                outside = np.setdiff1d(np.arange(space.dimension), inside)
                assert np.allclose(h[np.ix_(inside, outside)], 0.0)

    def test_single_excitation_block_eigenvalues(self):
        """Dark-A sector, one excitation: a 2x2 Jaynes-Cummings block."""
        system = make_system(g=2.0, delta=5.0, delta_exciton=20.0)
        space = build_space(system)
        h = hamiltonian_at(0.0, system, space, (0.0, 0.0))
        i1 = space.index(0, 1, 1)   # |0,1,1>: one photon
        i2 = space.index(0, 2, 0)   # |0,e,0>: one trion
        block = h[np.ix_([i1, i2], [i1, i2])]
        assert np.allclose(block, [[5.0, 2.0], [2.0, 20.0]])
        expected = np.linalg.eigvalsh([[5.0, 2.0], [2.0, 20.0]])
        delta, gap = 12.5, np.sqrt(7.5**2 + 4.0)
        assert np.allclose(expected, [delta - gap, delta + gap])

    def test_dark_level_energy(self):
        system = make_system(omega=0.7)
        space = build_space(system)
        h = hamiltonian_at(0.0, system, space, (0.0, 0.0))
        i = space.index(0, 0, 0)
        assert h[i, i] == pytest.approx(-2 * 0.7)

    def test_excitation_number_conserved(self, system):
        """[H, n_photons + n_trions] = 0 when the semiclassical drive is off."""
        space = build_space(system)
        ops = system_operators(system, space)
        h = hamiltonian_at(0.0, system, space, (0.0, 0.0))
        excit = ops.number.copy()
        for which in range(2):
            p_e1 = ops.raise_e1[which]
            excit += p_e1 @ p_e1.conj().T  # projector onto |e> of dot j
        assert np.allclose(h @ excit - excit @ h, 0.0, atol=1e-12)


class TestCollapseOperators:
    def test_rates_and_count(self, system):
        ops = lindblad_ops(system, build_space(system))
        assert len(ops) == 3  # cavity + two dots

    def test_zero_rate_channels_omitted(self):
        system = make_system(kappa=0.0, gamma=0.0)
        ops = lindblad_ops(system, build_space(system))
        assert len(ops) == 0

    def test_cavity_operator_lowers_photon_number(self, system):
        space = build_space(system)
        a_op = lindblad_ops(system, space)[0]
        vec = np.zeros(space.dimension)
        vec[space.index(0, 0, 2)] = 1.0
        out = a_op @ vec
        expect = np.zeros(space.dimension)
        expect[space.index(0, 0, 1)] = np.sqrt(2.0)  # sqrt(kappa n), kappa=1
        assert np.allclose(out, expect)

    def test_emission_returns_trion_to_bright(self, system):
        space = build_space(system)
        l_a = lindblad_ops(system, space)[1]
        vec = np.zeros(space.dimension)
        vec[space.index(2, 0, 0)] = 1.0
        out = l_a @ vec
        expect = np.zeros(space.dimension)
        expect[space.index(1, 0, 0)] = 1.0
        assert np.allclose(out, expect)


class TestBuildSpace:
    def test_multi_mode_rejected(self, system):
        from dataclasses import replace

        two_mode = replace(system, modes=system.modes * 2)
        with pytest.raises(MultiModeUnsupported):
            build_space(two_mode)

    def test_operator_to_dict_round_trip_shape(self):
        m = np.array([[1.0, 1.0j], [-1.0j, 2.0]])
        d = operator_to_dict(m)
        assert d["dimension"] == 2
        assert len(d["entries"]) == 4
        assert d["entries"][1] == [0.0, 1.0]
