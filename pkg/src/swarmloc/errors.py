"""Exception hierarchy shared by every module of the package."""


class SwarmlocError(Exception):
    """Base class for all errors raised by swarmloc."""


class ConfigError(SwarmlocError, ValueError):
    """A configuration value is invalid. ``field`` names the offending key."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class UsageError(SwarmlocError, ValueError):
    """An operation was called with arguments outside its contract."""


class DomainError(SwarmlocError, ValueError):
    """A numeric input lies outside the domain of a model formula."""


class DivergenceError(SwarmlocError, ArithmeticError):
    """An iterative solver produced a non-finite iterate."""


class DegenerateGeometryError(SwarmlocError, ArithmeticError):
    """The anchor geometry makes the linearized system singular."""
