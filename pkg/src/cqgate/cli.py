"""Command-line front end.

Subcommands:

* ``estimate``   closed-form figures of merit from a configuration file,
* ``calibrate``  solve for the pulse amplitude realizing a target angle,
* ``simulate``   run the gate with the tracked-eigenvalue and/or master
  -equation solver and report phases, concurrence and losses,
* ``sweep``      concurrence over a (g, kappa) or (C, kappa) grid, CSV out.

Exit codes: 0 success, 2 configuration/validation problem, 3 solver
failure, 4 every sweep point failed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .adiabatic import adiabatic_evolve, eigen_to_csv
from .entangle import concurrence
from .errors import ConfigError, SolverError
from .frame import displacement_trajectory, trajectory_to_csv
from .lindblad import gate_run
from .model import ValidatedSystem, load_config, validate_config
from .perturb import analytic_estimates, dispersive_amplitudes
from .sweep import (
    DEFAULT_TARGET,
    calibrate_amplitude,
    concurrence_surface,
    config_hash,
    sweep_metadata_to_json,
    sweep_to_csv,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_SWEEP_EMPTY = 4


def _load_system(path: str) -> ValidatedSystem:
    try:
        cfg = load_config(path)
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"cannot read configuration {path!r}: {exc}") from exc
    return validate_config(cfg)


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _cmd_estimate(args: argparse.Namespace) -> int:
    system = _load_system(args.config)
    est = analytic_estimates(system)
    report = {
        "config_hash": config_hash(system.to_config()),
        "estimates": est.to_dict(),
        "version": __version__,
    }
    _emit(report, args.out)
    return EXIT_OK


def _cmd_calibrate(args: argparse.Namespace) -> int:
    system = _load_system(args.config)
    cal = calibrate_amplitude(system, target=args.target, tol=args.tol)
    report = {
        "config_hash": config_hash(system.to_config()),
        "target": args.target,
        "amplitude": abs(cal.amplitude),
        "theta_ab": cal.theta_ab,
        "seed_amplitude": abs(cal.seed_amplitude),
        "seed_theta": cal.seed_theta,
        "iterations": cal.iterations,
        "concurrence": concurrence(cal.evolution.rho_qubits),
        "version": __version__,
    }
    _emit(report, args.out)
    return EXIT_OK


def _phase_dict(phases) -> dict:
    return {
        "theta_a": phases.theta_a,
        "theta_b": phases.theta_b,
        "theta_ab": phases.theta_ab,
        "global_phase": phases.global_phase,
        "sector_phases": list(phases.sector_phases),
    }


def _cmd_simulate(args: argparse.Namespace) -> int:
    system = _load_system(args.config)
    report: dict = {
        "config_hash": config_hash(system.to_config()),
        "solver": args.solver,
        "version": __version__,
    }
    if args.trajectories:
        os.makedirs(args.trajectories, exist_ok=True)
    if args.solver in ("adiabatic", "both"):
        ad = adiabatic_evolve(system)
        report["adiabatic"] = {
            "phases": _phase_dict(ad.gate_phases),
            "theta_ab_raw": ad.theta_ab_raw,
            "concurrence": concurrence(ad.rho_qubits),
            "leakage": ad.leakage,
        }
        if args.trajectories:
            eigen_to_csv(ad.eigen, os.path.join(args.trajectories, "eigen.csv"))
    if args.solver in ("lindblad", "both"):
        run = gate_run(system)
        report["lindblad"] = {
            "concurrence": concurrence(run.rho_qubits),
            "leakage": run.leakage,
            "photon_residue": run.photon_residue,
            "max_top_fock": run.max_top_fock,
            "steps": run.steps,
        }
    if args.trajectories:
        alphas = [displacement_trajectory(mode, system.time_grid, system.numeric)
                  for mode in system.modes]
        for mu, traj in enumerate(alphas):
            trajectory_to_csv(
                traj, os.path.join(args.trajectories, f"alpha_{mu}.csv"))
        sectors = dispersive_amplitudes(alphas, system.dots, system.modes,
                                        system.numeric)
        for label, paths in sectors.items():
            trajectory_to_csv(
                paths[0], os.path.join(args.trajectories, f"sector_{label}.csv"))
    _emit(report, args.out)
    return EXIT_OK


def _parse_axis(spec: str) -> tuple[str, list[float]]:
    if "=" not in spec:
        raise ConfigError(f"axis must look like name=v1,v2,... got {spec!r}")
    name, _, rest = spec.partition("=")
    name = name.strip()
    if name not in ("g", "kappa", "C"):
        raise ConfigError(f"unknown sweep axis {name!r}; use g, kappa or C")
    try:
        values = [float(v) for v in rest.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"bad axis values in {spec!r}: {exc}") from exc
    if not values:
        raise ConfigError(f"axis {name!r} has no values")
    return name, values


def _default_jobs() -> int:
    env = os.environ.get("CPHASE_SIM_THREADS", "")
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def _cmd_sweep(args: argparse.Namespace) -> int:
    system = _load_system(args.config)
    axes: dict[str, list[float]] = {}
    for spec in args.axis:
        name, values = _parse_axis(spec)
        axes[name] = values
    if not axes:
        raise ConfigError("sweep needs at least one --axis")
    jobs = args.jobs if args.jobs is not None else _default_jobs()
    result = concurrence_surface(system, axes, target=args.target, jobs=jobs)
    sweep_to_csv(result, args.out)
    if args.meta:
        sweep_metadata_to_json(result, args.meta)
    n_failed = sum(1 for r in result.records if r["error"])
    print(f"{len(result.records)} points, {n_failed} failed -> {args.out}")
    if result.all_failed:
        return EXIT_SWEEP_EMPTY
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cqgate",
        description="Simulate a single-pulse cavity-mediated controlled-phase "
                    "gate between two optically driven quantum dots.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_est = sub.add_parser("estimate", help="closed-form figures of merit")
    p_est.add_argument("--config", required=True)
    p_est.add_argument("--out", default=None, help="write JSON report here")
    p_est.set_defaults(func=_cmd_estimate)

    p_cal = sub.add_parser("calibrate", help="solve for the pulse amplitude")
    p_cal.add_argument("--config", required=True)
    p_cal.add_argument("--target", type=float, default=DEFAULT_TARGET,
                       help="entangling angle in radians (default pi/4)")
    p_cal.add_argument("--tol", type=float, default=1e-3)
    p_cal.add_argument("--out", default=None)
    p_cal.set_defaults(func=_cmd_calibrate)

    p_sim = sub.add_parser("simulate", help="run the gate")
    p_sim.add_argument("--config", required=True)
    p_sim.add_argument("--solver", choices=("adiabatic", "lindblad", "both"),
                       default="adiabatic")
    p_sim.add_argument("--out", default=None)
    p_sim.add_argument("--trajectories", default=None,
                       help="directory for trajectory CSV files")
    p_sim.set_defaults(func=_cmd_simulate)

    p_sw = sub.add_parser("sweep", help="concurrence over a parameter grid")
    p_sw.add_argument("--config", required=True)
    p_sw.add_argument("--axis", action="append", default=[],
                      help="e.g. --axis C=10,100 --axis kappa=0.5,1,2")
    p_sw.add_argument("--target", type=float, default=DEFAULT_TARGET)
    p_sw.add_argument("--jobs", type=int, default=None,
                      help="worker threads (default CPHASE_SIM_THREADS or 1)")
    p_sw.add_argument("--out", required=True, help="CSV output path")
    p_sw.add_argument("--meta", default=None, help="JSON metadata path")
    p_sw.set_defaults(func=_cmd_sweep)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())
