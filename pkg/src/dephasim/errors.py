"""Exception types shared across the package.

Config-time problems (bad parameters, malformed scenario files) raise
:class:`ConfigError`; runtime numerical failures (quadrature that cannot reach
tolerance, integrator positivity violations) raise :class:`NumericalError`
subclasses.  The CLI maps these to exit codes 2 and 3 respectively.
"""


class ConfigError(ValueError):
    """Invalid configuration or parameters; message names the offending field."""


class NumericalError(RuntimeError):
    """A numerical procedure failed to meet its contract."""


class QuadratureError(NumericalError):
    """Adaptive quadrature did not converge within tolerance.

    Carries the best value and the achieved error estimate so callers can
    report how far off the result is.
    """

    def __init__(self, message, value=None, error_estimate=None):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class PositivityError(NumericalError):
    """Density-matrix positivity violated beyond tolerance during integration."""


class KrausUndefinedError(ValueError):
    """Operation elements are undefined: the initial coherence factor is zero."""


class KrausInvalidError(ValueError):
    """Operation elements do not exist: the completion radicand is negative."""


class UnsupportedRegimeError(ConfigError):
    """Parameters outside the regime the model supports."""
