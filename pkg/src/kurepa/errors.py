"""Exception hierarchy shared by every evaluation route."""


class KurepaError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(KurepaError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class ConvergenceError(KurepaError, ArithmeticError):
    """A series, recurrence or quadrature failed to reach its tolerance."""


class NonFiniteError(KurepaError, ArithmeticError):
    """A value overflowed or became NaN at an operation boundary."""


class PoleError(KurepaError, ValueError):
    """Evaluation was requested exactly at a pole."""

    def __init__(self, location, message=None):
        self.location = location
        super().__init__(message or f"pole at z = {location}")


class NearPoleError(PoleError):
    """Evaluation was requested inside the exclusion radius of a pole
    (or of a point where the chosen formula is singular)."""

    def __init__(self, location, distance, radius):
        self.distance = distance
        self.radius = radius
        super().__init__(
            location,
            f"z is {distance:.3g} from the singular point {location} "
            f"(exclusion radius {radius:g})",
        )
