"""Error taxonomy shared across the package.

ConfigError marks bad user input (CLI exit code 2). Everything else derived
from NumericsError marks a failed computation (CLI exit code 3).
"""


class SolarAuditError(Exception):
    pass


class ConfigError(SolarAuditError):
    """Invalid configuration: unknown keys, bad values, broken constraints."""


class NumericsError(SolarAuditError):
    """A numerical routine could not produce a trustworthy result."""


class DimensionMismatchError(NumericsError):
    def __init__(self, expected, got, what="operator"):
        self.expected = expected
        self.got = got
        super().__init__(
            f"dimension mismatch: {what} has dimension {got}, expected {expected}"
        )


class StateValidationError(NumericsError):
    """A matrix failed the density-matrix invariants."""


class DegenerateSteadyStateError(NumericsError):
    def __init__(self, null_dimension):
        self.null_dimension = null_dimension
        super().__init__(
            f"steady state is not unique: null space has dimension {null_dimension}"
        )


class SteadyStateConvergenceError(NumericsError):
    def __init__(self, residual, tol):
        self.residual = residual
        self.tol = tol
        super().__init__(
            f"steady-state residual {residual:.3e} exceeds tolerance {tol:.1e}"
        )


class StepUnderflowError(NumericsError):
    def __init__(self, time):
        self.time = time
        super().__init__(
            f"integration step underflows at t = {time!r}; "
            "requested accuracy is unreachable at this time scale"
        )


class TruncationOverflowError(NumericsError):
    def __init__(self, weight, n_max):
        self.weight = weight
        self.n_max = n_max
        super().__init__(
            f"population {weight:.3e} at the truncation edge n_max = {n_max} "
            "exceeds 1e-6; rerun with a larger n_max"
        )
