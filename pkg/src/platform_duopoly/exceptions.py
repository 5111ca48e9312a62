"""Exception hierarchy shared by the package."""


class DuopolyError(Exception):
    """Base class for all errors raised by ``platform_duopoly``."""


class ConfigurationError(DuopolyError):
    """A market or sweep configuration violates a model assumption."""


class DomainError(DuopolyError, ValueError):
    """An argument lies outside the domain of an operation."""


class ConvergenceError(DuopolyError):
    """An iterative solver stopped before reaching its tolerance."""


class AssumptionError(DuopolyError):
    """Utility parameters do not satisfy the assumptions behind the closed form."""


class NonPositiveJoinUtility(AssumptionError):
    """Joining a platform is not strictly beneficial for one side of the market."""

    def __init__(self, side, platform, value):
        self.side = side
        self.platform = platform
        self.value = value
        super().__init__(
            f"{side} utility of joining platform {platform} is {value!r}, must be > 0"
        )


class UnsupportedModelError(DuopolyError):
    """The requested prediction is not available for this loyalty model."""
