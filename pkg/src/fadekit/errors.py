"""Exception types shared across the library."""


class FadekitError(Exception):
    """Base class for all fadekit errors."""


class DomainError(FadekitError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConvergenceError(FadekitError):
    """An iterative or adaptive routine failed to reach its tolerance."""


class NonFiniteError(FadekitError):
    """An integrand returned NaN or infinity away from the endpoints."""


class PoleSeparationError(FadekitError):
    """No contour abscissa separates the two gamma pole families."""


class DivergentInverseMoment(FadekitError):
    """The inverse SNR moment diverges, so the channel cannot be inverted."""


class ConfigError(FadekitError, ValueError):
    """A scenario configuration failed to parse or validate."""
