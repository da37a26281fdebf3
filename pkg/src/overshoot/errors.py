"""Exception types shared across the package."""


class ParameterError(ValueError):
    """A parameter lies outside the admissible range of an operation."""


class DomainError(ParameterError):
    """A bound is requested where it is undefined (e.g. L <= 1)."""


class PreconditionError(ValueError):
    """A structural hypothesis of a result does not hold for the inputs."""


class ToleranceError(ArithmeticError):
    """A requested numerical tolerance could not be certified."""


class NonConvergenceError(ToleranceError):
    """A truncated series keeps growing as more terms are added.

    ``estimates`` holds ``(terms, value)`` pairs from the doubling run and
    ``growth`` the average increment per doubling of the term count.
    """

    def __init__(self, message, estimates=(), growth=float("nan")):
        super().__init__(message)
        self.estimates = list(estimates)
        self.growth = growth
