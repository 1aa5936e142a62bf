"""Operators on the truncated space of two three-level dots and one mode.

Basis ordering is |dot A> x |dot B> x |n>, dot levels ordered (0, 1, e) and
photon number ascending, so index = (a*3 + b)*(N+1) + n and the dimension is
9(N+1).

The Hamiltonian never couples a dot's dark level |0> to its {|1>, |e>}
manifold, so the full space splits into four invariant sectors labelled by
which dots are bright; ``sector_indices`` exposes that block structure for
the eigen-tracking solver.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MultiModeUnsupported
from .model import ValidatedSystem

LEVELS = ("0", "1", "e")
DIM_DOT = 3


@dataclass(frozen=True)
class HilbertSpace:
    fock_cutoff: int

    @property
    def dim_fock(self) -> int:
        return self.fock_cutoff + 1

    @property
    def dimension(self) -> int:
        return DIM_DOT * DIM_DOT * self.dim_fock

    def index(self, a: int, b: int, n: int) -> int:
        return (a * DIM_DOT + b) * self.dim_fock + n

    def unindex(self, idx: int) -> tuple[int, int, int]:
        n = idx % self.dim_fock
        ab = idx // self.dim_fock
        return ab // DIM_DOT, ab % DIM_DOT, n

    def sector_indices(self, a_bright: bool, b_bright: bool) -> np.ndarray:
        """Indices of the invariant block where each dot is dark (level 0)
        or confined to its bright {1, e} manifold."""
        a_levels = (1, 2) if a_bright else (0,)
        b_levels = (1, 2) if b_bright else (0,)
        idx = [
            self.index(a, b, n)
            for a in a_levels
            for b in b_levels
            for n in range(self.dim_fock)
        ]
        return np.array(idx, dtype=int)

    def bare_qubit_index(self, j: int, k: int) -> int:
        """Index of |j>_A |k>_B |vacuum> for qubit labels j, k in {0, 1}."""
        return self.index(j, k, 0)


def build_space(system: ValidatedSystem) -> HilbertSpace:
    if len(system.modes) != 1:
        raise MultiModeUnsupported(
            f"Hilbert-space solvers support exactly one mode, got {len(system.modes)}"
        )
    return HilbertSpace(system.fock_cutoff)


def _annihilation(dim_fock: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim_fock, dtype=float)), 1).astype(complex)


def _dot_operator(op3: np.ndarray, which: int, dim_fock: int) -> np.ndarray:
    eye3 = np.eye(DIM_DOT)
    a_part = op3 if which == 0 else eye3
    b_part = op3 if which == 1 else eye3
    return np.kron(np.kron(a_part, b_part), np.eye(dim_fock)).astype(complex)


def _proj(level: int) -> np.ndarray:
    p = np.zeros((DIM_DOT, DIM_DOT))
    p[level, level] = 1.0
    return p


_RAISE_E1 = np.zeros((DIM_DOT, DIM_DOT))
_RAISE_E1[2, 1] = 1.0  # |e><1|
_LOWER_1E = _RAISE_E1.T  # |1><e|


@dataclass(frozen=True)
class SystemOperators:
    """Static operators reused when assembling H(t)."""

    space: HilbertSpace
    photon: np.ndarray          # a
    number: np.ndarray          # a^dag a
    raise_e1: tuple[np.ndarray, np.ndarray]   # |e><1|_j, j = A, B
    static: np.ndarray          # all time-independent terms of H

    @property
    def dimension(self) -> int:
        return self.space.dimension


def system_operators(system: ValidatedSystem, space: HilbertSpace) -> SystemOperators:
    nf = space.dim_fock
    a_local = _annihilation(nf)
    photon = np.kron(np.eye(DIM_DOT * DIM_DOT), a_local).astype(complex)
    number = photon.conj().T @ photon
    mode = system.modes[0]

    static = mode.delta * number
    raises = []
    for which, dot in enumerate(system.dots):
        p_e1 = _dot_operator(_RAISE_E1, which, nf)
        raises.append(p_e1)
        static = static - dot.omega * _dot_operator(_proj(0), which, nf)
        static = static + dot.delta_exciton * _dot_operator(_proj(2), which, nf)
        coupling = dot.couplings[0] * (p_e1 @ photon)
        static = static + coupling + coupling.conj().T
    return SystemOperators(
        space=space,
        photon=photon,
        number=number,
        raise_e1=(raises[0], raises[1]),
        static=static,
    )


def hamiltonian_at(t: float, system: ValidatedSystem, space: HilbertSpace,
                   omegas: tuple[complex, complex],
                   ops: SystemOperators | None = None) -> np.ndarray:
    """H(t) with the semiclassical drives Omega_A(t), Omega_B(t) inserted."""
    ops = ops or system_operators(system, space)
    h = ops.static.copy()
    for om, p_e1 in zip(omegas, ops.raise_e1):
        if om != 0:
            drive = om * p_e1
            h += drive + drive.conj().T
    return h


def lindblad_ops(system: ValidatedSystem, space: HilbertSpace) -> list[np.ndarray]:
    """Collapse operators sqrt(kappa) a and sqrt(gamma_j) |1><e|_j.

    Spontaneous emission returns the trion to the driven level |1>; the dark
    level |0> has no decay channel.  Zero-rate channels are omitted.
    """
    ops = []
    mode = system.modes[0]
    nf = space.dim_fock
    if mode.kappa > 0:
        a_local = _annihilation(nf)
        ops.append(np.sqrt(mode.kappa) * np.kron(np.eye(DIM_DOT * DIM_DOT), a_local))
    for which, dot in enumerate(system.dots):
        if dot.gamma > 0:
            ops.append(np.sqrt(dot.gamma) * _dot_operator(_LOWER_1E, which, nf))
    return ops


def operator_to_dict(matrix: np.ndarray) -> dict:
    """JSON-friendly dump: dimension plus row-major [re, im] pairs."""
    m = np.asarray(matrix, dtype=complex)
    return {
        "dimension": m.shape[0],
        "entries": [[v.real, v.imag] for v in m.ravel()],
    }
