"""Exception hierarchy.

Two branches matter to callers: InputError for bad arguments or data
(CLI exit code 1) and ComputationError for numeric trouble that no
argument fix can repair (CLI exit code 2).
"""


class MindiagError(Exception):
    """Base class for package errors."""


class InputError(MindiagError):
    """Caller supplied an argument, file, or configuration we reject."""


class DomainError(InputError):
    """Evaluation point lies outside a profile's domain."""


class UndefinedPointError(InputError):
    """A metric query involved the anchor point, where the value is undefined."""


class EmptyLevelSetError(InputError):
    """Requested level is at or below the function's minimum."""


class PoleError(InputError):
    """Query point sits on a pole of the requested quantity."""


class EmptyCellError(InputError):
    """A site's cell contains no raster pixels."""

    def __init__(self, site_index, message=None):
        self.site_index = site_index
        super().__init__(message or f"cell of site {site_index} is empty")


class ComputationError(MindiagError):
    """Numeric failure: no bracket, no convergence, or a degenerate input."""


class NumericError(ComputationError):
    """Root finding or iteration failed to converge."""


class DegeneracyError(ComputationError):
    """Configuration is degenerate (coincident features); perturb the input."""


class ConstructionError(ComputationError):
    """Internal consistency check failed during diagram construction."""
