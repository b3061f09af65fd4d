"""Exception hierarchy shared by the engines, models and CLI."""


class HybridModError(Exception):
    """Base class for all package errors."""


class InvalidModulusError(HybridModError, ValueError):
    pass


class BoundsError(HybridModError, IndexError):
    pass


class InfeasibleGeometryError(HybridModError, ValueError):
    pass


class ConfigurationError(HybridModError, ValueError):
    pass


class CalibrationRequiredError(HybridModError, LookupError):
    """No cost entry exists for the requested width."""


class CalibrationError(HybridModError, ValueError):
    """The calibration system could not be solved for a row."""

    def __init__(self, message, n=None, diagnostics=None):
        super().__init__(message)
        self.n = n
        self.diagnostics = diagnostics or {}


class UndefinedMetricError(HybridModError, ZeroDivisionError):
    pass


class InvariantError(HybridModError, AssertionError):
    """An internal datapath bound was violated; signals an engine bug."""
