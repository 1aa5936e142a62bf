"""Closed-form analytics for the driven two-dot cavity system.

Everything here is a quadrature or an algebraic formula: Stark angles,
the fourth-order nonlinear (entangling) phase, second-order dispersive
phase-space paths and their geometric phases, path-distance decoherence,
the detuning trade-off, cooperativity, and planar-cavity design numbers.
Drive amplitudes enter as |Omega|^2 wherever a squared amplitude appears.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import (
    GridMismatch,
    NonpositiveC,
    NonpositiveInput,
    ReflectivityOutOfRange,
    ZeroDetuning,
    ZeroGamma,
    ZeroKappa,
)
from .frame import ComplexTrajectory
from .model import CavityMode, DotParams


def _quad(values: np.ndarray, times: np.ndarray) -> float:
    return float(np.trapezoid(values, times))


def stark_angle(omega_traj: ComplexTrajectory, delta_exciton: float) -> float:
    """Accumulated ac-Stark angle of the bright state.

    theta = (Delta/2) * integral [ sqrt(1 + 4|Omega(t)|^2/Delta^2) - 1 ] dt
    """
    if delta_exciton == 0:
        raise ZeroDetuning("stark_angle requires a nonzero exciton detuning")
    om2 = np.abs(omega_traj.values) ** 2
    integrand = 0.5 * delta_exciton * (np.sqrt(1.0 + 4.0 * om2 / delta_exciton**2) - 1.0)
    return _quad(integrand, omega_traj.times())


def nonlinear_phase_4th(
    omega_a: ComplexTrajectory,
    omega_b: ComplexTrajectory,
    dots: tuple[DotParams, DotParams],
    modes: tuple[CavityMode, ...],
) -> float:
    """Fourth-order entangling phase.

    2 Re sum_mu integral Omega_A(t) conj(Omega_B(t)) g_A,mu conj(g_B,mu)
                          / (Delta_A Delta_B delta_mu) dt
    """
    dot_a, dot_b = dots
    if dot_a.delta_exciton == 0 or dot_b.delta_exciton == 0:
        raise ZeroDetuning("nonlinear phase requires nonzero exciton detunings")
    if omega_a.grid != omega_b.grid:
        raise GridMismatch("Omega_A and Omega_B live on different grids")
    gsum = 0.0 + 0.0j
    for g_a, g_b, mode in zip(dot_a.couplings, dot_b.couplings, modes):
        if mode.delta == 0:
            raise ZeroDetuning("nonlinear phase requires nonzero cavity detunings")
        gsum += g_a * np.conj(g_b) / mode.delta
    cross = omega_a.values * np.conj(omega_b.values)
    integrand = 2.0 * np.real(cross * gsum) / (dot_a.delta_exciton * dot_b.delta_exciton)
    return _quad(integrand, omega_a.times())


SECTORS = ("00", "01", "10", "11")


def dispersive_amplitudes(
    alphas: list[ComplexTrajectory],
    dots: tuple[DotParams, DotParams],
    modes: tuple[CavityMode, ...],
    numeric=None,
) -> dict[str, list[ComplexTrajectory]]:
    """Lab-frame qubit-conditioned cavity amplitudes per sector.

    A bright dot j dispersively shifts mode mu by |g_{j,mu}|^2 / Delta_j,
    so the field conditioned on sector jk follows the displacement equation
    at the shifted detuning and, in the lab frame, rotates at that detuning:

        alpha^jk_mu(t) = beta_mu(t; delta_mu + shift_jk) exp(-i (delta_mu
                         + shift_jk) t).

    It is these rotating paths that enclose phase-space area; their signed
    area combination reproduces the fourth-order entangling phase and their
    pairwise distances drive the loss-induced dephasing.  ``alphas`` fixes
    the time grid (and is what every path reduces to when all g vanish,
    up to the common rotation).
    """
    from .model import NumericOptions

    dot_a, dot_b = dots
    for mode in modes:
        if mode.delta == 0:
            raise ZeroDetuning("dispersive amplitudes require nonzero cavity detunings")
    if dot_a.delta_exciton == 0 or dot_b.delta_exciton == 0:
        raise ZeroDetuning("dispersive amplitudes require nonzero exciton detunings")
    numeric = numeric or NumericOptions()
    grid = alphas[0].grid
    times = grid.times()

    def shifted(bright: tuple[DotParams, ...]) -> list[ComplexTrajectory]:
        from dataclasses import replace

        from .frame import displacement_trajectory

        out = []
        for mu, mode in enumerate(modes):
            shift = sum(abs(dot.couplings[mu]) ** 2 / dot.delta_exciton
                        for dot in bright)
            delta_jk = mode.delta + shift
            if shift == 0.0:
                beta = alphas[mu]
            else:
                beta = displacement_trajectory(replace(mode, delta=delta_jk),
                                               grid, numeric)
            values = beta.values * np.exp(-1j * delta_jk * times)
            out.append(ComplexTrajectory(grid, values))
        return out

    return {
        "00": shifted(()),
        "01": shifted((dot_b,)),
        "10": shifted((dot_a,)),
        "11": shifted((dot_a, dot_b)),
    }


def geometric_phase(path: ComplexTrajectory) -> float:
    """Phase-space area integral Im[ conj(d alpha/dt) alpha ] dt."""
    t = path.times()
    adot = np.gradient(path.values, t)  # centered differences, one-sided ends
    return _quad(np.imag(np.conj(adot) * path.values), t)


def geometric_nonlinear_phase(amps: dict[str, list[ComplexTrajectory]]) -> float:
    """Signed area combination phi^11 + phi^00 - phi^01 - phi^10."""
    sign = {"11": 1.0, "00": 1.0, "01": -1.0, "10": -1.0}
    total = 0.0
    for sector, paths in amps.items():
        total += sign[sector] * sum(geometric_phase(p) for p in paths)
    return total


def path_distance_decay(path1: ComplexTrajectory, path2: ComplexTrajectory,
                        kappa: float) -> float:
    """Integrated loss-induced distinguishability (kappa/2)|a1 - a2|^2."""
    if path1.grid != path2.grid:
        raise GridMismatch("paths live on different grids")
    d2 = np.abs(path1.values - path2.values) ** 2
    return _quad(0.5 * kappa * d2, path1.times())


def decoherence_exponent(
    omega: ComplexTrajectory,
    dot: DotParams,
    modes: tuple[CavityMode, ...],
    x: float = 1.0,
    y: float = 1.0,
) -> float:
    """Integral of the combined single-dot decay rate

    Gamma(t) = x gamma |Omega|^2/Delta^2
             + y sum_mu kappa_mu |Omega|^2 |g_mu|^2 / (Delta^2 delta_mu^2).
    """
    if dot.delta_exciton == 0:
        raise ZeroDetuning("decoherence exponent requires a nonzero exciton detuning")
    om2 = np.abs(omega.values) ** 2
    rate = x * dot.gamma * om2 / dot.delta_exciton**2
    for g, mode in zip(dot.couplings, modes):
        if mode.kappa == 0:
            continue
        if mode.delta == 0:
            raise ZeroDetuning("decoherence exponent requires nonzero cavity detunings")
        rate = rate + y * mode.kappa * om2 * abs(g) ** 2 / (
            dot.delta_exciton**2 * mode.delta**2
        )
    return _quad(rate, omega.times())


def _pair_coupling2(dots: tuple[DotParams, DotParams], mu: int) -> float:
    """Geometric mean |g_A||g_B| of the two dots' couplings to mode mu."""
    dot_a, dot_b = dots
    return abs(dot_a.couplings[mu]) * abs(dot_b.couplings[mu])


def _pair_gamma(dots: tuple[DotParams, DotParams]) -> float:
    return math.sqrt(dots[0].gamma * dots[1].gamma)


def optimal_detuning(dots: tuple[DotParams, DotParams],
                     modes: tuple[CavityMode, ...]) -> float:
    """Detuning maximizing phase growth per unit decoherence.

    sqrt( sum_mu kappa_mu |g_mu|^2 / gamma ), proportionality constant 1;
    used to seed the numeric detuning optimizer.
    """
    gamma = _pair_gamma(dots)
    if gamma <= 0:
        raise ZeroGamma("optimal detuning requires gamma > 0")
    total = sum(m.kappa * _pair_coupling2(dots, mu) for mu, m in enumerate(modes))
    return math.sqrt(total / gamma)


def cooperativity(dots: tuple[DotParams, DotParams],
                  modes: tuple[CavityMode, ...]) -> float:
    """C = 4 sum_mu |g_mu|^2 / (gamma kappa_mu)."""
    gamma = _pair_gamma(dots)
    if gamma <= 0:
        raise ZeroGamma("cooperativity requires gamma > 0")
    total = 0.0
    for mu, mode in enumerate(modes):
        g2 = _pair_coupling2(dots, mu)
        if g2 == 0:
            continue
        if mode.kappa <= 0:
            raise ZeroKappa("cooperativity requires kappa > 0 on coupled modes")
        total += 4.0 * g2 / (gamma * mode.kappa)
    return total


def fidelity_estimate(c: float) -> float:
    """Approximate gate fidelity (1/2)[1 + exp(-1/sqrt(C))]."""
    if c <= 0:
        raise NonpositiveC("fidelity estimate requires C > 0")
    return 0.5 * (1.0 + math.exp(-1.0 / math.sqrt(c)))


def adiabatic_min_sigma(c: float, kappa: float, delta_exciton: float,
                        gamma: float) -> float:
    """Characteristic pulse-width scale sqrt(C) kappa^2 / (Delta^2 gamma).

    Adiabaticity requires sigma much larger than this; callers apply a
    configurable multiple (default 100).
    """
    if min(c, kappa, abs(delta_exciton), gamma) <= 0:
        raise NonpositiveInput("adiabatic bound requires positive inputs")
    return math.sqrt(c) * kappa**2 / (delta_exciton**2 * gamma)


def planar_cavity_cooperativity(q: float, lambda0: float, bohr_radius: float,
                                cavity_length: float) -> float:
    """Cooperativity of a large dot in a planar microcavity.

    Q lambda0^3 / [ pi^3 (a_B*)^2 L ], all lengths in the same unit.
    """
    if min(q, lambda0, bohr_radius, cavity_length) <= 0:
        raise NonpositiveInput("planar cavity estimate requires positive inputs")
    return q * lambda0**3 / (math.pi**3 * bohr_radius**2 * cavity_length)


def cavity_mode_radius(lambda0: float, r1: float, r2: float) -> float:
    """Inherent planar-cavity mode radius lambda0 / sqrt(2 pi (1 - R))."""
    if not (0 < r1 < 1 and 0 < r2 < 1):
        raise ReflectivityOutOfRange("reflectivities must lie strictly in (0, 1)")
    r_eff = math.sqrt(r1 * r2)
    return lambda0 / math.sqrt(2.0 * math.pi * (1.0 - r_eff))


@dataclass(frozen=True)
class AnalyticEstimates:
    theta_a: float
    theta_b: float
    theta_ab: float
    delta_opt: float
    cooperativity: float
    fidelity_est: float
    sigma_min: float
    gamma_exponent: float

    def to_dict(self) -> dict:
        return asdict(self)


def analytic_estimates(system) -> AnalyticEstimates:
    """All scalar estimates for a validated system in one record."""
    from .frame import displacement_trajectory, effective_rabi

    grid = system.time_grid
    alphas = [displacement_trajectory(m, grid, system.numeric) for m in system.modes]
    om_a = effective_rabi(system.dot_a, alphas)
    om_b = effective_rabi(system.dot_b, alphas)
    dots = system.dots
    c = cooperativity(dots, system.modes)
    gamma = _pair_gamma(dots)
    kappa = max(m.kappa for m in system.modes)
    sigma_min = (
        adiabatic_min_sigma(c, kappa, dots[0].delta_exciton, gamma)
        if c > 0 and kappa > 0
        else 0.0
    )
    x, yv = system.numeric.x, system.numeric.y
    g_exp = decoherence_exponent(om_a, system.dot_a, system.modes, x, yv) + \
        decoherence_exponent(om_b, system.dot_b, system.modes, x, yv)
    return AnalyticEstimates(
        theta_a=stark_angle(om_a, system.dot_a.delta_exciton),
        theta_b=stark_angle(om_b, system.dot_b.delta_exciton),
        theta_ab=nonlinear_phase_4th(om_a, om_b, dots, system.modes),
        delta_opt=optimal_detuning(dots, system.modes) if gamma > 0 else float("nan"),
        cooperativity=c,
        fidelity_est=fidelity_estimate(c) if c > 0 else float("nan"),
        sigma_min=sigma_min,
        gamma_exponent=g_exp,
    )
