"""
Error hierarchy

Every error raised on purpose by lsvrand derives from LsvError and carries the
process exit code the command line maps it to.
"""

from typing import Optional


class LsvError(Exception):
    """Base class for lsvrand errors."""

    exit_code = 1


class ConfigurationError(LsvError):
    """Invalid configuration, law or argument."""

    exit_code = 2


class RangeError(ConfigurationError, ValueError):
    """A requested index, window or horizon is outside the available range."""


class DomainError(ConfigurationError, ValueError):
    """A point lies outside the unit interval."""


class ShapeError(ConfigurationError, ValueError):
    """Arrays or grids that must match do not."""


class NumericalError(LsvError):
    """A numerical procedure failed."""

    exit_code = 3


class RootFindingError(NumericalError):
    """Branch inversion did not converge."""


class SingularDensityError(NumericalError):
    """A density vanishes on a cell where it has to be divided by."""

    def __init__(self, message: str, cell: Optional[int] = None):
        super().__init__(message)
        self.cell = cell


class DegenerateCltError(NumericalError):
    """Variance is numerically zero, so no normalization exists."""


class CapabilityError(LsvError):
    """The operation is not supported for this input kind."""

    exit_code = 4


class AcceptanceError(LsvError):
    """A fitted quantity failed its configured acceptance threshold."""

    exit_code = 5


class ManifestIntegrityError(AcceptanceError):
    """An output file listed in the manifest is missing or was modified."""
