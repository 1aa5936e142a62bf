"""Qubit-subspace reduction, Wootters concurrence, and phase extraction.

The gate unitary acts diagonally on the qubit basis; with sigma_z |0> = +|0>
the sector phases decompose as

    phi_jk = phi_global + theta_a z_j + theta_b z_k + theta_ab z_j z_k,

so the entangling angle is theta_ab = (phi_00 - phi_01 - phi_10 + phi_11)/4.
The sign convention was fixed against loss-free simulation: a positive
fourth-order entangling-phase integral yields a positive theta_ab, and the
paper-style test state [|0>+|1>][|0>-|1>]/2 acquires concurrence
|sin(2 theta_ab)|.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .density import DensityMatrix
from .errors import InvalidDensityMatrix, LeakageTooLarge, NotPure
from .hilbert import HilbertSpace

#: amplitudes of the benchmark state [|0>+|1>]_A x [|0>-|1>]_B / 2
#: on (|00>, |01>, |10>, |11>)
TEST_STATE = np.array([0.5, -0.5, 0.5, -0.5], dtype=complex)

_EIGENVALUE_CLIP = -1e-10


@dataclass(frozen=True)
class GatePhases:
    theta_a: float
    theta_b: float
    theta_ab: float
    global_phase: float
    sector_phases: tuple[float, float, float, float]       # phi_00, 01, 10, 11
    decay_exponents: tuple[float, ...] = ()                 # per coherence pair

    def to_dict(self) -> dict:
        return asdict(self)


def _wrap(angle: float) -> float:
    """Map an angle to (-pi, pi]."""
    a = math.fmod(angle + math.pi, 2.0 * math.pi)
    if a <= 0:
        a += 2.0 * math.pi
    return a - math.pi


def reduce_to_qubits(rho_full: DensityMatrix, space: HilbertSpace
                     ) -> tuple[DensityMatrix, float]:
    """Partial-trace the photon, project on the qubit span, renormalize.

    Returns the 4x4 state (trace 1) and the leakage 1 - trace of the
    projected block.  Leakage >= 0.5 makes renormalization meaningless and
    raises LeakageTooLarge.
    """
    m = rho_full.matrix
    if m.shape[0] != space.dimension:
        raise InvalidDensityMatrix(
            f"state dimension {m.shape[0]} does not match space {space.dimension}"
        )
    nf = space.dim_fock
    rho4 = np.zeros((4, 4), dtype=complex)
    sectors = ((0, 0), (0, 1), (1, 0), (1, 1))
    for p, (j, k) in enumerate(sectors):
        for q, (jp, kp) in enumerate(sectors):
            rows = [space.index(j, k, n) for n in range(nf)]
            cols = [space.index(jp, kp, n) for n in range(nf)]
            rho4[p, q] = m[rows, cols].sum()
    tr = float(np.trace(rho4).real)
    leakage = 1.0 - tr
    if leakage >= 0.5:
        raise LeakageTooLarge(f"leakage {leakage:.3f} >= 0.5")
    return DensityMatrix(rho4 / tr, rho_full.time), leakage


def concurrence(rho: DensityMatrix) -> float:
    """Wootters concurrence of a two-qubit density matrix."""
    if rho.dimension != 4:
        raise InvalidDensityMatrix("concurrence is defined for 4x4 states")
    rho.check(trace_preserving=True)
    m = rho.matrix
    sy = np.array([[0.0, -1.0j], [1.0j, 0.0]])
    yy = np.kron(sy, sy)
    product = m @ yy @ m.conj() @ yy
    eig = np.real(np.linalg.eigvals(product))
    if eig.min() < _EIGENVALUE_CLIP * max(1.0, abs(eig).max()):
        raise InvalidDensityMatrix("Wootters product has a large negative eigenvalue")
    lam = np.sort(np.sqrt(np.clip(eig, 0.0, None)))[::-1]
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def phases_from_sector_args(phi: np.ndarray,
                            decay_exponents: tuple[float, ...] = ()
                            ) -> GatePhases:
    """Solve phi_jk = g + theta_a z_j + theta_b z_k + theta_ab z_j z_k."""
    phi00, phi01, phi10, phi11 = (float(p) for p in phi)
    theta_a = (phi00 + phi01 - phi10 - phi11) / 4.0
    theta_b = (phi00 - phi01 + phi10 - phi11) / 4.0
    theta_ab = (phi00 - phi01 - phi10 + phi11) / 4.0
    global_phase = (phi00 + phi01 + phi10 + phi11) / 4.0
    return GatePhases(
        theta_a=_wrap(theta_a),
        theta_b=_wrap(theta_b),
        theta_ab=_wrap(theta_ab),
        global_phase=_wrap(global_phase),
        sector_phases=(phi00, phi01, phi10, phi11),
        decay_exponents=tuple(decay_exponents),
    )


def extract_phases(final_state: np.ndarray | DensityMatrix,
                   initial: np.ndarray = TEST_STATE) -> GatePhases:
    """Recover (theta_a, theta_b, theta_ab, global) from a loss-free run.

    Accepts either a 4-component state vector or a pure 4x4 density matrix.
    The run must be diagonal in the qubit basis (a phase gate); amplitudes
    are compared entry by entry against the initial state.
    """
    if isinstance(final_state, DensityMatrix):
        rho = final_state
        if abs(rho.purity() - 1.0) > 1e-6:
            raise NotPure(f"purity {rho.purity():.8f} below the pure-state threshold")
        w, v = np.linalg.eigh(rho.matrix)
        vec = v[:, int(np.argmax(w))]
    else:
        vec = np.asarray(final_state, dtype=complex)
        vec = vec / np.linalg.norm(vec)
    init = np.asarray(initial, dtype=complex)
    if np.any(np.abs(init) < 1e-12):
        raise ValueError("initial state must populate all four sectors")
    ratios = vec / init
    mags = np.abs(ratios)
    if mags.max() - mags.min() > 1e-6 * mags.max():
        raise NotPure("evolution is not a pure phase gate on the qubit basis")
    phi = np.unwrap(np.angle(ratios))
    return phases_from_sector_args(phi)


def apply_phase_gate(theta_a: float, theta_b: float, theta_ab: float,
                     state: np.ndarray = TEST_STATE,
                     global_phase: float = 0.0) -> np.ndarray:
    """Apply exp(i theta_a Za) exp(i theta_b Zb) exp(i theta_ab Za Zb)."""
    z = np.array([1.0, -1.0])
    phases = np.array(
        [
            global_phase + theta_a * za + theta_b * zb + theta_ab * za * zb
            for za in z
            for zb in z
        ]
    )
    return np.asarray(state, dtype=complex) * np.exp(1j * phases)
