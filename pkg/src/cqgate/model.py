"""Domain types, validation, and nondimensionalization.

All rates are expressed in units of the spontaneous-emission rate of dot A
and all times in its inverse; ``validate_config`` rescales an arbitrary
input so that ``dot_a.gamma == 1`` and returns an immutable system
description shared by every solver.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import (
    ConfigError,
    GridTooShort,
    NegativeRate,
    TruncationZero,
    ZeroDetuning,
)

#: Gaussian envelopes are clamped to zero beyond this many widths from the
#: center; the neglected tail carries < 1e-7 of the pulse energy.
GAUSSIAN_TRUNCATION = 6.0

#: Required grid margin, in pulse widths, on each side of the pulse support.
GRID_MARGIN_SIGMA = 4.0


@dataclass(frozen=True)
class DrivePulse:
    """Classical drive envelope f(t) (cavity-coupling prefactor folded in).

    shape:
        "gaussian" | "flat-top" | "custom-sampled"
    amplitude:
        complex scale A.  For a Gaussian, f(t) = A (2 pi sigma^2)^(-1/4)
        exp(-(t-center)^2 / 4 sigma^2), so integral |f|^2 dt = |A|^2.
    support:
        (t_start, t_end); the envelope is identically zero outside.
        Defaults to center +- 6 sigma for a Gaussian.
    """

    shape: str = "gaussian"
    amplitude: complex = 0.0
    sigma: float = 1.0
    center: float = 0.0
    support: tuple[float, float] | None = None
    samples_t: tuple[float, ...] = ()
    samples_v: tuple[complex, ...] = ()

    def resolved_support(self) -> tuple[float, float]:
        if self.support is not None:
            return self.support
        if self.shape == "gaussian":
            w = GAUSSIAN_TRUNCATION * self.sigma
            return (self.center - w, self.center + w)
        if self.shape == "custom-sampled" and self.samples_t:
            return (self.samples_t[0], self.samples_t[-1])
        return (self.center, self.center)

    def is_zero(self) -> bool:
        if self.shape == "custom-sampled":
            return not self.samples_v or all(v == 0 for v in self.samples_v)
        return self.amplitude == 0


def pulse_envelope(pulse: DrivePulse, t) -> complex | np.ndarray:
    """Evaluate the drive envelope at time(s) t; zero outside the support."""
    t = np.asarray(t, dtype=float)
    lo, hi = pulse.resolved_support()
    inside = (t >= lo) & (t <= hi)
    if pulse.shape == "gaussian":
        s = pulse.sigma
        prof = (2.0 * math.pi * s * s) ** (-0.25) * np.exp(
            -((t - pulse.center) ** 2) / (4.0 * s * s)
        )
        out = pulse.amplitude * prof * inside
    elif pulse.shape == "flat-top":
        out = pulse.amplitude * inside.astype(float)
    elif pulse.shape == "custom-sampled":
        re = np.interp(t, pulse.samples_t, np.real(pulse.samples_v), left=0.0, right=0.0)
        im = np.interp(t, pulse.samples_t, np.imag(pulse.samples_v), left=0.0, right=0.0)
        out = (re + 1j * im) * inside
    else:
        raise ConfigError(f"unknown pulse shape {pulse.shape!r}")
    if out.ndim == 0:
        return complex(out)
    return out


@dataclass(frozen=True)
class DotParams:
    """One quantum dot: dark level |0>, bright level |1>, trion |e>."""

    label: str
    omega: float = 0.0              # Zeeman splitting; energy of |0> is -omega
    delta_exciton: float = 1.0      # laser-trion detuning, must be nonzero
    couplings: tuple[complex, ...] = (0.0,)   # g per cavity mode
    gamma: float = 1.0              # spontaneous emission |e> -> |1>


@dataclass(frozen=True)
class CavityMode:
    delta: float = 1.0              # laser-cavity detuning
    kappa: float = 0.0              # photon loss rate
    drive: DrivePulse = field(default_factory=DrivePulse)


@dataclass(frozen=True)
class TimeGrid:
    t0: float
    t1: float
    n_steps: int

    def times(self) -> np.ndarray:
        return np.linspace(self.t0, self.t1, self.n_steps + 1)

    def __len__(self) -> int:
        return self.n_steps + 1


@dataclass(frozen=True)
class NumericOptions:
    integrator: str = "adaptive-embedded"   # | "fixed-rk4" | "semi-implicit"
    abs_tol: float = 1e-10
    rel_tol: float = 1e-8
    max_step: float = 1.0
    min_step: float = 1e-12
    x: float = 1.0                  # phenomenological spontaneous-emission weight
    y: float = 1.0                  # phenomenological cavity-loss weight
    trunc_threshold: float = 1e-4   # allowed top-Fock population before abort
    adiabatic_margin: float = 100.0  # multiple of the minimum adiabatic width


@dataclass(frozen=True)
class SystemConfig:
    dot_a: DotParams
    dot_b: DotParams
    modes: tuple[CavityMode, ...]
    fock_cutoff: int = 3
    time_grid: TimeGrid = field(default_factory=lambda: TimeGrid(-10.0, 10.0, 1000))
    numeric: NumericOptions = field(default_factory=NumericOptions)


@dataclass(frozen=True)
class ValidatedSystem:
    """Immutable, nondimensionalized system (dot A gamma equals 1).

    ``scale`` is the original gamma of dot A: rates were divided by it and
    times multiplied by it.  Safe to share read-only across workers.
    """

    dot_a: DotParams
    dot_b: DotParams
    modes: tuple[CavityMode, ...]
    fock_cutoff: int
    time_grid: TimeGrid
    numeric: NumericOptions
    scale: float = 1.0

    @property
    def dots(self) -> tuple[DotParams, DotParams]:
        return (self.dot_a, self.dot_b)

    def to_config(self) -> SystemConfig:
        return SystemConfig(
            dot_a=self.dot_a,
            dot_b=self.dot_b,
            modes=self.modes,
            fock_cutoff=self.fock_cutoff,
            time_grid=self.time_grid,
            numeric=self.numeric,
        )


def _check_rates(cfg: SystemConfig) -> None:
    for dot in (cfg.dot_a, cfg.dot_b):
        if dot.gamma < 0:
            raise NegativeRate(f"gamma of dot {dot.label} is negative")
        if dot.delta_exciton == 0:
            raise ZeroDetuning(f"delta_exciton of dot {dot.label} is zero")
        if len(dot.couplings) != len(cfg.modes):
            raise ConfigError(
                f"dot {dot.label} has {len(dot.couplings)} couplings for "
                f"{len(cfg.modes)} modes"
            )
    for i, mode in enumerate(cfg.modes):
        if mode.kappa < 0:
            raise NegativeRate(f"kappa of mode {i} is negative")
        if not math.isfinite(mode.delta):
            raise ConfigError(f"delta of mode {i} is not finite")


def _check_grid(cfg: SystemConfig) -> None:
    grid = cfg.time_grid
    if not grid.t0 < grid.t1:
        raise GridTooShort("time grid has t0 >= t1")
    if grid.n_steps < 2:
        raise GridTooShort("time grid needs at least 2 steps")
    for i, mode in enumerate(cfg.modes):
        pulse = mode.drive
        if pulse.is_zero():
            continue
        if pulse.shape == "gaussian" and pulse.sigma <= 0:
            raise ConfigError(f"mode {i}: gaussian pulse requires sigma > 0")
        lo, hi = pulse.resolved_support()
        margin = GRID_MARGIN_SIGMA * (pulse.sigma if pulse.shape == "gaussian" else 0.0)
        if grid.t0 > lo - margin or grid.t1 < hi + margin:
            raise GridTooShort(
                f"grid [{grid.t0}, {grid.t1}] does not cover pulse support "
                f"[{lo}, {hi}] with a {margin} margin on each side"
            )


def validate_config(cfg: SystemConfig) -> ValidatedSystem:
    """Check every invariant and return the nondimensionalized system."""
    if not cfg.modes:
        raise ConfigError("at least one cavity mode is required")
    _check_rates(cfg)
    _check_grid(cfg)
    if cfg.fock_cutoff < 0:
        raise ConfigError("fock_cutoff must be nonnegative")
    if cfg.fock_cutoff == 0 and any(not m.drive.is_zero() for m in cfg.modes):
        raise TruncationZero("fock_cutoff = 0 with a nonzero drive")

    scale = cfg.dot_a.gamma if cfg.dot_a.gamma > 0 else 1.0
    if scale != 1.0:
        r = 1.0 / scale  # rate divisor
        cfg = SystemConfig(
            dot_a=_rescale_dot(cfg.dot_a, r, scale),
            dot_b=_rescale_dot(cfg.dot_b, r, scale),
            modes=tuple(_rescale_mode(m, r, scale) for m in cfg.modes),
            fock_cutoff=cfg.fock_cutoff,
            time_grid=TimeGrid(
                cfg.time_grid.t0 * scale, cfg.time_grid.t1 * scale, cfg.time_grid.n_steps
            ),
            numeric=replace(
                cfg.numeric,
                max_step=cfg.numeric.max_step * scale,
                min_step=cfg.numeric.min_step * scale,
            ),
        )
    return ValidatedSystem(
        dot_a=cfg.dot_a,
        dot_b=cfg.dot_b,
        modes=cfg.modes,
        fock_cutoff=cfg.fock_cutoff,
        time_grid=cfg.time_grid,
        numeric=cfg.numeric,
        scale=scale,
    )


def _rescale_dot(dot: DotParams, r: float, s: float) -> DotParams:
    return replace(
        dot,
        omega=dot.omega * r,
        delta_exciton=dot.delta_exciton * r,
        couplings=tuple(g * r for g in dot.couplings),
        gamma=dot.gamma * r,
    )


def _rescale_mode(mode: CavityMode, r: float, s: float) -> CavityMode:
    pulse = mode.drive
    # Gaussian amplitude carries units rate*sqrt(time): the r*sqrt(s) factor
    # keeps integral |f|^2 dt equal to |amplitude|^2 in the new units.
    amp_scale = r * math.sqrt(s) if pulse.shape == "gaussian" else r
    new_pulse = replace(
        pulse,
        amplitude=pulse.amplitude * amp_scale,
        sigma=pulse.sigma * s,
        center=pulse.center * s,
        support=None if pulse.support is None else (pulse.support[0] * s, pulse.support[1] * s),
        samples_t=tuple(t * s for t in pulse.samples_t),
        samples_v=tuple(v * r for v in pulse.samples_v),
    )
    return replace(mode, delta=mode.delta * r, kappa=mode.kappa * r, drive=new_pulse)


# ---------------------------------------------------------------------------
# JSON serialization (complex numbers as [re, im]; rates in units of gamma_A)


def _c2j(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _j2c(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    return complex(v[0], v[1])


def config_to_dict(cfg: SystemConfig) -> dict:
    def pulse_d(p: DrivePulse) -> dict:
        d = {
            "shape": p.shape,
            "amplitude": _c2j(p.amplitude),
            "sigma": p.sigma,
            "center": p.center,
        }
        if p.support is not None:
            d["support"] = list(p.support)
        if p.samples_t:
            d["samples_t"] = list(p.samples_t)
            d["samples_v"] = [_c2j(v) for v in p.samples_v]
        return d

    def dot_d(dot: DotParams) -> dict:
        return {
            "label": dot.label,
            "omega": dot.omega,
            "delta_exciton": dot.delta_exciton,
            "couplings": [_c2j(g) for g in dot.couplings],
            "gamma": dot.gamma,
        }

    return {
        "dot_a": dot_d(cfg.dot_a),
        "dot_b": dot_d(cfg.dot_b),
        "modes": [
            {"delta": m.delta, "kappa": m.kappa, "drive": pulse_d(m.drive)}
            for m in cfg.modes
        ],
        "fock_cutoff": cfg.fock_cutoff,
        "time_grid": {
            "t0": cfg.time_grid.t0,
            "t1": cfg.time_grid.t1,
            "n_steps": cfg.time_grid.n_steps,
        },
        "numeric": {
            "integrator": cfg.numeric.integrator,
            "abs_tol": cfg.numeric.abs_tol,
            "rel_tol": cfg.numeric.rel_tol,
            "max_step": cfg.numeric.max_step,
            "min_step": cfg.numeric.min_step,
            "x": cfg.numeric.x,
            "y": cfg.numeric.y,
            "trunc_threshold": cfg.numeric.trunc_threshold,
            "adiabatic_margin": cfg.numeric.adiabatic_margin,
        },
    }


def config_from_dict(d: dict) -> SystemConfig:
    def pulse_p(pd: dict) -> DrivePulse:
        return DrivePulse(
            shape=pd.get("shape", "gaussian"),
            amplitude=_j2c(pd.get("amplitude", 0.0)),
            sigma=pd.get("sigma", 1.0),
            center=pd.get("center", 0.0),
            support=tuple(pd["support"]) if "support" in pd else None,
            samples_t=tuple(pd.get("samples_t", ())),
            samples_v=tuple(_j2c(v) for v in pd.get("samples_v", ())),
        )

    def dot_p(dd: dict) -> DotParams:
        return DotParams(
            label=dd["label"],
            omega=dd.get("omega", 0.0),
            delta_exciton=dd["delta_exciton"],
            couplings=tuple(_j2c(g) for g in dd["couplings"]),
            gamma=dd.get("gamma", 1.0),
        )

    nd = d.get("numeric", {})
    tg = d["time_grid"]
    return SystemConfig(
        dot_a=dot_p(d["dot_a"]),
        dot_b=dot_p(d["dot_b"]),
        modes=tuple(
            CavityMode(delta=md["delta"], kappa=md.get("kappa", 0.0), drive=pulse_p(md["drive"]))
            for md in d["modes"]
        ),
        fock_cutoff=d.get("fock_cutoff", 3),
        time_grid=TimeGrid(tg["t0"], tg["t1"], tg["n_steps"]),
        numeric=NumericOptions(**nd) if nd else NumericOptions(),
    )


def config_to_json(cfg: SystemConfig, indent: int | None = 2) -> str:
    return json.dumps(config_to_dict(cfg), indent=indent, sort_keys=True)


def config_from_json(text: str) -> SystemConfig:
    return config_from_dict(json.loads(text))


def load_config(path: str) -> SystemConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return config_from_json(fh.read())


def save_config(cfg: SystemConfig, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(config_to_json(cfg))
        fh.write("\n")
