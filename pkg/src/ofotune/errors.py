class OfoError(Exception):
    """Base class for controller/library errors."""


class InvalidModelError(OfoError):
    """Plant returned non-finite objective or gradient data."""


class IllConditionedMetricError(OfoError):
    """Scaling matrix is numerically singular (condition number > 1e12)."""


class DegenerateFitError(OfoError):
    """Quadratic step model cannot be fitted (zero fit abscissa)."""


class IntegrationError(OfoError):
    """ODE integration produced a non-finite state."""


class ConfigError(OfoError):
    """Scenario configuration is missing, inconsistent, or unparseable."""
