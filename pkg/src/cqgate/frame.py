"""Classical displaced-frame dynamics.

The empty-cavity coherent amplitude alpha(t) obeys the linear IVP

    d(alpha)/dt = -i f(t) - (i delta + kappa/2) alpha,   alpha(t0) = 0,

where f is the drive envelope folded with the cavity coupling.  The
effective semiclassical drive seen by dot j is Omega_j(t) = sum_mu
g_{j,mu} alpha_mu(t).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import DegenerateMode, GridMismatch, StepFailure
from .model import CavityMode, DotParams, NumericOptions, TimeGrid, pulse_envelope


@dataclass(frozen=True)
class ComplexTrajectory:
    """Complex samples on a uniform time grid."""

    grid: TimeGrid
    values: np.ndarray  # complex, len(grid) entries

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.shape != (len(self.grid),):
            raise GridMismatch(
                f"{v.shape[0] if v.ndim else 0} samples for a grid of {len(self.grid)} points"
            )
        if not np.all(np.isfinite(v.view(float))):
            raise ValueError("trajectory contains non-finite samples")
        object.__setattr__(self, "values", v)

    def times(self) -> np.ndarray:
        return self.grid.times()


def displacement_solution(mode: CavityMode, t0: float, t1: float,
                          numeric: NumericOptions | None = None):
    """Solve the displacement IVP and return a dense callable alpha(t)."""
    numeric = numeric or NumericOptions()
    decay = 1j * mode.delta + 0.5 * mode.kappa

    def rhs(t, y):
        return [-1j * pulse_envelope(mode.drive, t) - decay * y[0]]

    sol = solve_ivp(
        rhs,
        (t0, t1),
        [0.0 + 0.0j],
        method="RK45",
        rtol=numeric.rel_tol,
        atol=numeric.abs_tol,
        max_step=max(mode.drive.sigma / 4.0, numeric.min_step)
        if mode.drive.shape == "gaussian"
        else np.inf,
        dense_output=True,
    )
    if not sol.success:
        raise StepFailure(f"displacement integration failed: {sol.message}")

    def alpha(t):
        return sol.sol(np.asarray(t, dtype=float))[0]

    return alpha


def displacement_trajectory(mode: CavityMode, grid: TimeGrid,
                            numeric: NumericOptions | None = None) -> ComplexTrajectory:
    """Coherent cavity amplitude alpha(t) sampled on the grid."""
    if mode.drive.is_zero():
        return ComplexTrajectory(grid, np.zeros(len(grid), dtype=complex))
    alpha = displacement_solution(mode, grid.t0, grid.t1, numeric)
    return ComplexTrajectory(grid, np.asarray(alpha(grid.times()), dtype=complex))


def effective_rabi(dot: DotParams, alphas: list[ComplexTrajectory]) -> ComplexTrajectory:
    """Pointwise Omega_j(t) = sum_mu g_{j,mu} alpha_mu(t)."""
    if len(alphas) != len(dot.couplings):
        raise GridMismatch(
            f"{len(alphas)} trajectories for {len(dot.couplings)} couplings"
        )
    grid = alphas[0].grid
    for traj in alphas[1:]:
        if traj.grid != grid:
            raise GridMismatch("alpha trajectories live on different grids")
    total = np.zeros(len(grid), dtype=complex)
    for g, traj in zip(dot.couplings, alphas):
        total += g * traj.values
    return ComplexTrajectory(grid, total)


def steady_state_amplitude(mode: CavityMode, f0: complex) -> complex:
    """Fixed point -i f0 / (i delta + kappa/2) of the displacement IVP."""
    denom = 1j * mode.delta + 0.5 * mode.kappa
    if denom == 0:
        raise DegenerateMode("delta = kappa = 0 has no steady state")
    return -1j * f0 / denom


def trajectory_to_csv(traj: ComplexTrajectory, path: str) -> None:
    """Write columns t, re, im with 9 significant digits."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("t,re,im\n")
        for t, v in zip(traj.times(), traj.values):
            fh.write(f"{t:.9g},{v.real:.9g},{v.imag:.9g}\n")


def trajectory_from_csv(path: str) -> ComplexTrajectory:
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    data = np.atleast_2d(data)
    t = data[:, 0]
    n = len(t) - 1
    grid = TimeGrid(float(t[0]), float(t[-1]), n)
    return ComplexTrajectory(grid, data[:, 1] + 1j * data[:, 2])
