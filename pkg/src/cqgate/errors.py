"""Typed errors shared across the package.

Config/validation problems raise ConfigError subclasses; numerical failures
inside a solver raise SolverError subclasses.  The CLI maps the two families
to distinct exit codes.
"""


class CQGateError(Exception):
    """Base class for all package errors."""


class ConfigError(CQGateError):
    """Invalid or inconsistent system description."""


class NegativeRate(ConfigError):
    pass


class ZeroDetuning(ConfigError):
    pass


class ZeroGamma(ConfigError):
    pass


class ZeroKappa(ConfigError):
    pass


class NonpositiveC(ConfigError):
    pass


class NonpositiveInput(ConfigError):
    pass


class ReflectivityOutOfRange(ConfigError):
    pass


class GridTooShort(ConfigError):
    pass


class TruncationZero(ConfigError):
    pass


class GridMismatch(ConfigError):
    pass


class DegenerateMode(ConfigError):
    pass


class MultiModeUnsupported(ConfigError):
    pass


class InvalidDensityMatrix(ConfigError):
    pass


class LeakageTooLarge(ConfigError):
    pass


class NotPure(ConfigError):
    pass


class SolverError(CQGateError):
    """Numerical failure during a simulation run."""


class StepFailure(SolverError):
    pass


class TrackingLoss(SolverError):
    pass


class DegenerateStart(SolverError):
    pass


class TruncationOverflow(SolverError):
    pass


class NoBracket(SolverError):
    pass


class TargetUnreachable(SolverError):
    pass


class BracketFailure(SolverError):
    pass
