"""Exception types raised across the package."""


class ExitWeightError(Exception):
    """Base class for all errors raised by exitweight."""


class ParameterRangeError(ExitWeightError, ValueError):
    pass


class DimensionTooLargeError(ExitWeightError):
    """An exhaustive computation was requested above its configured cutoff."""


class GridError(ExitWeightError, ValueError):
    pass


class FormatError(ExitWeightError, ValueError):
    """Malformed input file (e.g. a .gm generator matrix)."""


class InconsistentDistributionError(ExitWeightError, ValueError):
    """A weight distribution failed an integrality or consistency check."""
