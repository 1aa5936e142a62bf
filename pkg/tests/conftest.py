"""Shared configuration factories for the test suite."""

import pytest

from cqgate.model import (
    CavityMode,
    DotParams,
    DrivePulse,
    NumericOptions,
    SystemConfig,
    TimeGrid,
    validate_config,
)


def make_system(
    g=5.0,
    kappa=1.0,
    delta=5.0,
    delta_exciton=20.0,
    sigma=2.5,
    amplitude=1.0,
    fock_cutoff=3,
    n_steps=2000,
    gamma=1.0,
    omega=0.0,
    span_sigma=10.0,
    trunc_threshold=1e-3,
    integrator="adaptive-embedded",
    center=0.0,
):
    """Symmetric single-mode two-dot system, already validated."""
    pulse = DrivePulse(shape="gaussian", amplitude=amplitude, sigma=sigma,
                       center=center)
    mode = CavityMode(delta=delta, kappa=kappa, drive=pulse)
    dot_a = DotParams(label="A", omega=omega, delta_exciton=delta_exciton,
                      couplings=(g,), gamma=gamma)
    dot_b = DotParams(label="B", omega=omega, delta_exciton=delta_exciton,
                      couplings=(g,), gamma=gamma)
    grid = TimeGrid(center - span_sigma * sigma, center + span_sigma * sigma,
                    n_steps)
    numeric = NumericOptions(trunc_threshold=trunc_threshold,
                             integrator=integrator)
    cfg = SystemConfig(dot_a=dot_a, dot_b=dot_b, modes=(mode,),
                       fock_cutoff=fock_cutoff, time_grid=grid,
                       numeric=numeric)
    return validate_config(cfg)


@pytest.fixture
def system():
    return make_system()
