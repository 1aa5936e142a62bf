"""Calibration and parameter sweeps.

``calibrate_amplitude`` finds the pulse energy that realizes a requested
entangling angle, seeded by inverting the fourth-order phase formula (the
phase is quadratic in the drive amplitude, so one trajectory evaluation at
unit amplitude fixes the scale) and refined with a fixed-point iteration on
the tracked-eigenvalue phases.

``optimize_detuning`` maximizes the final concurrence over the laser-cavity
detuning with a golden-section search, recalibrating the amplitude at each
candidate.

``concurrence_surface`` evaluates a deterministic grid of (g, kappa) or
(C, kappa) operating points, recalibrating per point, and writes CSV plus a
JSON metadata sidecar keyed by a hash of the base configuration.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .adiabatic import AdiabaticResult, adiabatic_evolve
from .entangle import concurrence
from .errors import (
    BracketFailure,
    CQGateError,
    NoBracket,
    TargetUnreachable,
)
from .model import (
    CavityMode,
    SystemConfig,
    ValidatedSystem,
    config_to_json,
    validate_config,
)
from .perturb import adiabatic_min_sigma, cooperativity, optimal_detuning

DEFAULT_TARGET = math.pi / 4

_MAX_AMPLITUDE_RATIO = 100.0   # refinement gives up past this multiple of the seed


@dataclass(frozen=True)
class CalibrationResult:
    amplitude: complex
    theta_ab: float
    seed_amplitude: complex
    seed_theta: float
    iterations: int
    evolution: AdiabaticResult


def _with_amplitude(system: ValidatedSystem, amplitude: complex) -> ValidatedSystem:
    mode = system.modes[0]
    new_mode = replace(mode, drive=replace(mode.drive, amplitude=amplitude))
    return replace(system, modes=(new_mode,) + system.modes[1:])


def _unit_phase(system: ValidatedSystem) -> float:
    """Fourth-order phase integral of a unit-energy pulse, quasi-static limit.

    With the cavity slaved to the drive (alpha = -f/delta) the phase
    integral collapses to 2 Re[(g_A conj(g_B))^2 / delta^3] / (Delta_A
    Delta_B) per mode times the pulse energy; cross-mode terms are dropped.
    """
    dot_a, dot_b = system.dots
    total = 0.0
    for mu, mode in enumerate(system.modes):
        pair = dot_a.couplings[mu] * np.conj(dot_b.couplings[mu])
        total += 2.0 * (pair**2 / mode.delta**3).real
    return total / (dot_a.delta_exciton * dot_b.delta_exciton)


def calibrate_amplitude(system: ValidatedSystem,
                        target: float = DEFAULT_TARGET,
                        tol: float = 1e-3,
                        max_iter: int = 30) -> CalibrationResult:
    """Find the real pulse amplitude realizing entangling angle ``target``."""
    if target == 0.0:
        zero = adiabatic_evolve(_with_amplitude(system, 0.0))
        return CalibrationResult(0.0, zero.theta_ab_raw, 0.0, zero.theta_ab_raw,
                                 0, zero)

    phi_unit = _unit_phase(system)
    if phi_unit == 0.0:
        raise NoBracket("unit-amplitude pulse produces no entangling phase; "
                        "check couplings and detunings")
    # entangling angle is (phase integral)/4 and quadratic in the amplitude
    ratio = 4.0 * target / phi_unit
    if ratio < 0:
        raise TargetUnreachable(
            f"target {target:.4g} has the opposite sign to the phase produced "
            f"by this configuration ({phi_unit:.4g} per unit energy)"
        )
    seed = math.sqrt(ratio)

    amplitude = seed
    result = adiabatic_evolve(_with_amplitude(system, amplitude))
    theta = result.theta_ab_raw
    seed_theta = theta
    for it in range(1, max_iter + 1):
        if abs(theta - target) <= tol:
            return CalibrationResult(amplitude, theta, seed, seed_theta, it, result)
        if theta * target <= 0:
            raise TargetUnreachable(
                f"realized angle {theta:.4g} flipped sign during refinement "
                f"at amplitude {amplitude:.4g}"
            )
        amplitude = amplitude * math.sqrt(target / theta)
        if not (seed / _MAX_AMPLITUDE_RATIO <= amplitude
                <= seed * _MAX_AMPLITUDE_RATIO):
            raise TargetUnreachable(
                f"amplitude escaped [{seed / _MAX_AMPLITUDE_RATIO:.4g}, "
                f"{seed * _MAX_AMPLITUDE_RATIO:.4g}] while chasing "
                f"target {target:.4g}; the angle saturates below the target"
            )
        result = adiabatic_evolve(_with_amplitude(system, amplitude))
        theta = result.theta_ab_raw
    raise TargetUnreachable(
        f"calibration did not converge in {max_iter} iterations "
        f"(last angle {theta:.4g}, target {target:.4g})"
    )


@dataclass(frozen=True)
class DetuningResult:
    delta: float
    concurrence: float
    amplitude: complex
    theta_ab: float
    analytic_delta: float
    evaluations: int


def _with_delta(system: ValidatedSystem, delta: float) -> ValidatedSystem:
    new_mode = replace(system.modes[0], delta=delta)
    return replace(system, modes=(new_mode,) + system.modes[1:])


def optimize_detuning(system: ValidatedSystem,
                      target: float = DEFAULT_TARGET,
                      rel_tol: float = 0.01) -> DetuningResult:
    """Golden-section maximization of concurrence over the cavity detuning.

    Searches [delta0/5, 5 delta0] around the analytic optimum delta0 in log
    space.  If the best value sits at a bracket edge the objective is not
    unimodal inside the bracket and the search aborts.
    """
    delta0 = optimal_detuning(system.dots, system.modes)
    cache: dict[float, tuple[float, CalibrationResult]] = {}
    n_eval = 0

    def objective(log_d: float) -> float:
        nonlocal n_eval
        if log_d not in cache:
            cal = calibrate_amplitude(_with_delta(system, math.exp(log_d)), target)
            cache[log_d] = (concurrence(cal.evolution.rho_qubits), cal)
            n_eval += 1
        return cache[log_d][0]

    lo = math.log(delta0 / 5.0)
    hi = math.log(delta0 * 5.0)
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    x1 = hi - inv_phi * (hi - lo)
    x2 = lo + inv_phi * (hi - lo)
    f_lo, f_hi = objective(lo), objective(hi)
    f1, f2 = objective(x1), objective(x2)
    while hi - lo > math.log1p(rel_tol):
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - inv_phi * (hi - lo)
            f1 = objective(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + inv_phi * (hi - lo)
            f2 = objective(x2)
    best_log, (best_c, best_cal) = max(cache.items(), key=lambda kv: kv[1][0])
    if max(f_lo, f_hi) >= best_c - 1e-9:
        raise BracketFailure(
            f"concurrence is maximized at a bracket edge "
            f"(edges {f_lo:.4g}/{f_hi:.4g}, interior best {best_c:.4g}); "
            f"not unimodal in [{delta0 / 5:.4g}, {delta0 * 5:.4g}]"
        )
    return DetuningResult(
        delta=math.exp(best_log),
        concurrence=best_c,
        amplitude=best_cal.amplitude,
        theta_ab=best_cal.theta_ab,
        analytic_delta=delta0,
        evaluations=n_eval,
    )


@dataclass(frozen=True)
class SweepResult:
    axes: dict[str, list[float]]
    records: list[dict]
    config_hash: str
    target: float

    @property
    def all_failed(self) -> bool:
        return bool(self.records) and all(r["error"] for r in self.records)


def config_hash(cfg: SystemConfig) -> str:
    """Short stable digest of a configuration."""
    return hashlib.sha256(config_to_json(cfg, indent=None).encode()).hexdigest()[:16]


def _point_system(base: ValidatedSystem, g: float, kappa: float) -> ValidatedSystem:
    """Operating point with couplings g, loss kappa and rescaled pulse width.

    The cavity detuning is set to the analytic optimum and the pulse width
    to the configured multiple of the minimum adiabatic width, so points
    with equal cooperativity are directly comparable.
    """
    dot_a = replace(base.dot_a, couplings=(complex(g),))
    dot_b = replace(base.dot_b, couplings=(complex(g),))
    dots = (dot_a, dot_b)
    mode = replace(base.modes[0], kappa=kappa)
    c = cooperativity(dots, (mode,))
    delta = optimal_detuning(dots, (mode,))
    gamma = math.sqrt(dot_a.gamma * dot_b.gamma)
    # decoherence-driven width floor, plus spectral-gap floors so the pulse
    # bandwidth stays far below both detunings
    sigma = max(
        base.numeric.adiabatic_margin
        * adiabatic_min_sigma(c, kappa, dot_a.delta_exciton, gamma),
        10.0 / delta,
        10.0 / abs(dot_a.delta_exciton),
    )
    pulse = replace(mode.drive, shape="gaussian", sigma=sigma, center=0.0,
                    support=None)
    mode = replace(mode, delta=delta, drive=pulse)
    span = 10.5 * sigma   # pulse support (6 sigma) plus margin (4 sigma) + slack
    grid = replace(base.time_grid, t0=-span, t1=span,
                   n_steps=max(base.time_grid.n_steps, 2000))
    cfg = SystemConfig(dot_a=dot_a, dot_b=dot_b, modes=(mode,),
                       fock_cutoff=base.fock_cutoff, time_grid=grid,
                       numeric=base.numeric)
    return validate_config(cfg)


def _evaluate_point(base: ValidatedSystem, record: dict, target: float) -> dict:
    out = dict(record)
    out.update(cooperativity=math.nan, delta=math.nan, amplitude=math.nan,
               theta_ab=math.nan, concurrence=math.nan, leakage=math.nan,
               error="")
    try:
        gamma = math.sqrt(base.dot_a.gamma * base.dot_b.gamma)
        kappa = float(record.get("kappa", base.modes[0].kappa))
        if "g" in record:
            g = float(record["g"])
        elif "C" in record:
            g = 0.5 * math.sqrt(float(record["C"]) * gamma * kappa)
        else:
            raise CQGateError("sweep axes must include 'g' or 'C'")
        point = _point_system(base, g, kappa)
        out["cooperativity"] = cooperativity(point.dots, point.modes)
        out["delta"] = point.modes[0].delta
        cal = calibrate_amplitude(point, target)
        out["amplitude"] = abs(cal.amplitude)
        out["theta_ab"] = cal.theta_ab
        out["concurrence"] = concurrence(cal.evolution.rho_qubits)
        out["leakage"] = cal.evolution.leakage
    except CQGateError as exc:
        out["error"] = f"{type(exc).__name__}: {exc}"
    return out


def concurrence_surface(base: ValidatedSystem,
                        axes: dict[str, list[float]],
                        target: float = DEFAULT_TARGET,
                        jobs: int = 1) -> SweepResult:
    """Evaluate the concurrence over the cartesian product of the axes.

    Axis names: ``g``, ``kappa``, ``C`` (cooperativity; converted to g at
    the point's kappa).  Individual point failures are recorded in the
    ``error`` column; output ordering follows the grid regardless of jobs.
    """
    names = list(axes)
    points = [dict(zip(names, combo))
              for combo in itertools.product(*(axes[n] for n in names))]
    if jobs > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(
                lambda p: _evaluate_point(base, p, target), points))
    else:
        records = [_evaluate_point(base, p, target) for p in points]
    return SweepResult(
        axes={n: [float(v) for v in axes[n]] for n in names},
        records=records,
        config_hash=config_hash(base.to_config()),
        target=target,
    )


_CSV_FIELDS = ("cooperativity", "delta", "amplitude", "theta_ab",
               "concurrence", "leakage")


def sweep_to_csv(result: SweepResult, path: str) -> None:
    """Deterministic CSV: grid order, fixed 9-significant-digit formatting."""
    names = list(result.axes)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(["index"] + names + list(_CSV_FIELDS) + ["error"]) + "\n")
        for i, rec in enumerate(result.records):
            row = [str(i)]
            row += [f"{float(rec[n]):.9g}" for n in names]
            row += [f"{float(rec[f]):.9g}" for f in _CSV_FIELDS]
            row.append(rec["error"].replace(",", ";"))
            fh.write(",".join(row) + "\n")


def sweep_metadata(result: SweepResult) -> dict:
    return {
        "config_hash": result.config_hash,
        "axes": result.axes,
        "target": result.target,
        "points": len(result.records),
        "failed": sum(1 for r in result.records if r["error"]),
    }


def sweep_metadata_to_json(result: SweepResult, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(sweep_metadata(result), fh, indent=2, sort_keys=True)
        fh.write("\n")
