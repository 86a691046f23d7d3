"""Exception types shared across the package."""


class CurveLabError(Exception):
    """Base class for all curve-lab errors."""


class InputError(CurveLabError):
    """Malformed or precondition-violating input."""


class DegenerateInputError(InputError):
    """Input is structurally valid but degenerate for the operation."""


class InconsistentDataError(InputError):
    """Declared metadata contradicts the data itself (e.g. bad Lipschitz bound)."""


class HorizonError(CurveLabError):
    """A bounded search ran out of budget before finding an admissible element."""

    def __init__(self, message: str, level: int | None = None):
        super().__init__(message)
        self.level = level


class ScheduleError(InputError):
    """A multi-scale schedule cannot be realized on the given grid."""
