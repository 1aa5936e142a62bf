"""Master-equation solvers for the full dot-dot-cavity density matrix.

Three integrators share one right-hand side:

* ``fixed-rk4``      classical 4th-order Runge-Kutta on a uniform step,
* ``adaptive-embedded``  Dormand-Prince 5(4) with PI step control,
* ``semi-implicit``  Crank-Nicolson on the vectorized Liouvillian with
  step-doubling error control (robust for stiff, strongly damped runs).

The density matrix is re-symmetrized after every accepted step and its
trace and positivity are checked on every returned sample.  The population
of the top Fock level is monitored; if it exceeds the configured threshold
the truncated basis is no longer trustworthy and the run aborts.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .density import DensityMatrix, pure_state
from .entangle import TEST_STATE, reduce_to_qubits
from .errors import StepFailure, TruncationOverflow
from .frame import displacement_solution
from .hilbert import HilbertSpace, build_space, lindblad_ops, system_operators
from .model import ValidatedSystem


@dataclass(frozen=True)
class GateRunResult:
    """Outcome of propagating the benchmark state through one pulse."""

    rho_qubits: DensityMatrix       # reduced, renormalized 4x4 matrix
    rho_full: DensityMatrix         # raw final state in the full basis
    leakage: float                  # population outside the bare qubit levels
    photon_residue: float           # <a^dag a> at the final time
    max_top_fock: float             # peak population of Fock level N
    steps: int                      # accepted integrator steps


@dataclass
class _Rhs:
    """Lindblad right-hand side with cached operators."""

    system: ValidatedSystem
    space: HilbertSpace

    def __post_init__(self) -> None:
        self.ops = system_operators(self.system, self.space)
        self.collapse = lindblad_ops(self.system, self.space)
        self.ldl = [c.conj().T @ c for c in self.collapse]
        mode = self.system.modes[0]
        if mode.drive.is_zero():
            self._alpha = None
        else:
            grid = self.system.time_grid
            self._alpha = displacement_solution(mode, grid.t0, grid.t1,
                                                self.system.numeric)
        self.n_calls = 0

    def omegas(self, t: float) -> tuple[complex, complex]:
        if self._alpha is None:
            return 0.0 + 0.0j, 0.0 + 0.0j
        alpha = complex(self._alpha(t))
        return tuple(dot.couplings[0] * alpha for dot in self.system.dots)

    def hamiltonian(self, t: float) -> np.ndarray:
        h = self.ops.static.copy()
        for om, p_e1 in zip(self.omegas(t), self.ops.raise_e1):
            if om != 0:
                drive = om * p_e1
                h += drive + drive.conj().T
        return h

    def __call__(self, t: float, rho: np.ndarray) -> np.ndarray:
        self.n_calls += 1
        h = self.hamiltonian(t)
        out = -1j * (h @ rho - rho @ h)
        for c, ldl in zip(self.collapse, self.ldl):
            out += c @ rho @ c.conj().T - 0.5 * (ldl @ rho + rho @ ldl)
        return out

    def liouvillian(self, t: float) -> np.ndarray:
        """Dense superoperator acting on the column-stacked density matrix."""
        d = self.space.dimension
        eye = np.eye(d)
        h = self.hamiltonian(t)
        sup = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
        for c, ldl in zip(self.collapse, self.ldl):
            sup += np.kron(c, c.conj())
            sup -= 0.5 * (np.kron(ldl, eye) + np.kron(eye, ldl.T))
        return sup


def _symmetrize(rho: np.ndarray) -> np.ndarray:
    return 0.5 * (rho + rho.conj().T)


def _top_fock_population(rho: np.ndarray, space: HilbertSpace) -> float:
    top = space.fock_cutoff
    pop = 0.0
    for a in range(3):
        for b in range(3):
            i = space.index(a, b, top)
            pop += rho[i, i].real
    return pop


class _TruncationMonitor:
    def __init__(self, space: HilbertSpace, threshold: float) -> None:
        self.space = space
        self.threshold = threshold
        self.peak = 0.0

    def check(self, t: float, rho: np.ndarray) -> None:
        pop = _top_fock_population(rho, self.space)
        self.peak = max(self.peak, pop)
        if pop > self.threshold:
            raise TruncationOverflow(
                f"top Fock level holds population {pop:.3e} > "
                f"{self.threshold:.3e} at t={t:.4g}; raise fock_cutoff"
            )


# Dormand-Prince 5(4) tableau
_DP_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_DP_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640,
                   -92097 / 339200, 187 / 2100, 1 / 40])


def _advance_rk4(rhs, t0: float, t1: float, rho: np.ndarray, numeric,
                 monitor) -> tuple[np.ndarray, int]:
    span = t1 - t0
    n = max(1, int(np.ceil(span / numeric.max_step)))
    h = span / n
    t = t0
    for _ in range(n):
        k1 = rhs(t, rho)
        k2 = rhs(t + h / 2, rho + h / 2 * k1)
        k3 = rhs(t + h / 2, rho + h / 2 * k2)
        k4 = rhs(t + h, rho + h * k3)
        rho = _symmetrize(rho + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4))
        t += h
        monitor.check(t, rho)
    return rho, n


def _advance_dp45(rhs, t0: float, t1: float, rho: np.ndarray, numeric,
                  monitor) -> tuple[np.ndarray, int]:
    t = t0
    h = min(numeric.max_step, (t1 - t0) / 10 or numeric.max_step)
    accepted = 0
    k_cache = rhs(t, rho)  # FSAL
    while t < t1 - 1e-14 * max(1.0, abs(t1)):
        h = min(h, t1 - t)
        if h < numeric.min_step:
            raise StepFailure(
                f"adaptive step underflow: h={h:.3e} < min_step "
                f"{numeric.min_step:.3e} at t={t:.4g}"
            )
        ks = [k_cache]
        failed = False
        for s in range(1, 7):
            y = rho
            for a, k in zip(_DP_A[s], ks):
                y = y + h * a * k
            ks.append(rhs(t + _DP_C[s] * h, y))
        y5 = rho
        y4 = rho
        for b5, b4, k in zip(_DP_B5, _DP_B4, ks):
            if b5 != 0.0:
                y5 = y5 + h * b5 * k
            if b4 != 0.0:
                y4 = y4 + h * b4 * k
        err = y5 - y4
        scale = numeric.abs_tol + numeric.rel_tol * np.maximum(np.abs(rho), np.abs(y5))
        err_norm = float(np.sqrt(np.mean(np.abs(err / scale) ** 2)))
        if err_norm <= 1.0:
            t += h
            rho = _symmetrize(y5)
            k_cache = ks[6]
            accepted += 1
            monitor.check(t, rho)
        else:
            failed = True
            k_cache = ks[0]
        factor = 0.9 * (max(err_norm, 1e-10)) ** (-0.2)
        factor = min(5.0, max(0.2, factor))
        if failed:
            factor = min(factor, 1.0)
        h = min(numeric.max_step, h * factor)
    return rho, accepted


def _cn_step(rhs, t: float, h: float, vec: np.ndarray) -> np.ndarray:
    sup = rhs.liouvillian(t + h / 2)
    d2 = sup.shape[0]
    eye = np.eye(d2)
    return np.linalg.solve(eye - (h / 2) * sup, vec + (h / 2) * (sup @ vec))


def _advance_cn(rhs, t0: float, t1: float, rho: np.ndarray, numeric,
                monitor) -> tuple[np.ndarray, int]:
    d = rho.shape[0]
    vec = rho.reshape(-1)
    t = t0
    h = min(numeric.max_step, (t1 - t0) / 10 or numeric.max_step)
    accepted = 0
    while t < t1 - 1e-14 * max(1.0, abs(t1)):
        h = min(h, t1 - t)
        if h < numeric.min_step:
            raise StepFailure(
                f"semi-implicit step underflow: h={h:.3e} at t={t:.4g}"
            )
        full = _cn_step(rhs, t, h, vec)
        half = _cn_step(rhs, t, h / 2, vec)
        half = _cn_step(rhs, t + h / 2, h / 2, half)
        err = full - half
        scale = numeric.abs_tol + numeric.rel_tol * np.maximum(np.abs(vec), np.abs(half))
        err_norm = float(np.sqrt(np.mean(np.abs(err / scale) ** 2)))
        if err_norm <= 1.0:
            t += h
            # Richardson combination is 3rd-order accurate for the 2nd-order CN step
            vec = (4.0 * half - full) / 3.0
            rho_now = _symmetrize(vec.reshape(d, d))
            vec = rho_now.reshape(-1)
            accepted += 1
            monitor.check(t, rho_now)
        factor = 0.9 * (max(err_norm, 1e-10)) ** (-1.0 / 3.0)
        h = min(numeric.max_step, h * min(5.0, max(0.2, factor)))
    return vec.reshape(d, d), accepted


_ADVANCERS = {
    "fixed-rk4": _advance_rk4,
    "adaptive-embedded": _advance_dp45,
    "semi-implicit": _advance_cn,
}


@dataclass(frozen=True)
class MasterSolution:
    """Sampled density matrices plus integrator diagnostics."""

    samples: list[DensityMatrix]
    steps: int
    peak_top_fock: float

    def final(self) -> DensityMatrix:
        return self.samples[-1]


def evolve_master(system: ValidatedSystem, initial: DensityMatrix,
                  sample_times: np.ndarray | None = None) -> MasterSolution:
    """Integrate the master equation, sampling at the given times.

    The first sample time must equal the grid start; defaults to the grid
    endpoints only.
    """
    space = build_space(system)
    rhs = _Rhs(system, space)
    numeric = system.numeric
    try:
        advance = _ADVANCERS[numeric.integrator]
    except KeyError:
        raise StepFailure(f"unknown integrator {numeric.integrator!r}") from None

    grid = system.time_grid
    if sample_times is None:
        sample_times = np.array([grid.t0, grid.t1])
    sample_times = np.asarray(sample_times, dtype=float)

    initial.check()
    rho = np.array(initial.matrix, dtype=complex)
    monitor = _TruncationMonitor(space, numeric.trunc_threshold)
    monitor.check(sample_times[0], rho)
    out = [DensityMatrix(rho.copy(), time=float(sample_times[0]))]
    total_steps = 0
    for t_prev, t_next in zip(sample_times[:-1], sample_times[1:]):
        rho, n = advance(rhs, float(t_prev), float(t_next), rho, numeric, monitor)
        total_steps += n
        sample = DensityMatrix(rho.copy(), time=float(t_next))
        sample.check()
        out.append(sample)
    return MasterSolution(samples=out, steps=total_steps, peak_top_fock=monitor.peak)


def gate_run(system: ValidatedSystem,
             initial_qubit_state: np.ndarray = TEST_STATE) -> GateRunResult:
    """Propagate the benchmark two-qubit state through one full pulse."""
    space = build_space(system)
    psi0 = np.zeros(space.dimension, dtype=complex)
    amps = np.asarray(initial_qubit_state, dtype=complex)
    for p, (j, k) in enumerate(((0, 0), (0, 1), (1, 0), (1, 1))):
        psi0[space.bare_qubit_index(j, k)] = amps[p]
    rho0 = pure_state(psi0, time=system.time_grid.t0)

    solution = evolve_master(system, rho0)
    rho_final = solution.final()
    ops = system_operators(system, space)
    photon_residue = float(np.real(np.trace(ops.number @ rho_final.matrix)))
    rho4, leakage = reduce_to_qubits(rho_final, space)
    return GateRunResult(
        rho_qubits=rho4,
        rho_full=rho_final,
        leakage=leakage,
        photon_residue=photon_residue,
        max_top_fock=solution.peak_top_fock,
        steps=solution.steps,
    )


def populations_to_csv(samples: list[DensityMatrix], space: HilbertSpace,
                       path: str) -> None:
    """CSV of qubit-sector populations and photon number versus time."""
    a_local = np.diag(np.arange(space.dim_fock, dtype=float))
    number = np.kron(np.eye(9), a_local)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,pop_00,pop_01,pop_10,pop_11,photon,trace\n")
        for s in samples:
            rho = s.matrix
            row = [f"{s.time:.9g}"]
            for j, k in ((0, 0), (0, 1), (1, 0), (1, 1)):
                i = space.bare_qubit_index(j, k)
                row.append(f"{rho[i, i].real:.9g}")
            row.append(f"{np.real(np.trace(number @ rho)):.9g}")
            row.append(f"{np.real(np.trace(rho)):.9g}")
            fh.write(",".join(row) + "\n")
