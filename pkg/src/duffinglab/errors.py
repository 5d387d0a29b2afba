"""Exception hierarchy shared across the library."""


class DuffingLabError(Exception):
    """Base class for all library errors."""


class InvalidInputError(DuffingLabError, ValueError):
    """Raised when arguments violate a documented precondition."""


class DivergenceError(DuffingLabError, RuntimeError):
    """Raised when the integrator state becomes non-finite (unphysical parameters)."""


class NotSettledError(DuffingLabError, RuntimeError):
    """Raised when a steady-state measurement is attempted before the envelope has settled."""


class NearDegenerateError(DuffingLabError, RuntimeError):
    """Raised when a linear system is too ill-conditioned to solve reliably."""

    def __init__(self, message: str, condition_number: float):
        super().__init__(f"{message} (condition number {condition_number:.3e})")
        self.condition_number = condition_number
