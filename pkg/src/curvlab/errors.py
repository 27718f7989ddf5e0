"""Exception types raised by curvlab."""


class CurvlabError(Exception):
    """Base class for all curvlab errors."""


class InvalidInput(CurvlabError, ValueError):
    """Non-finite data, wrong shapes, or a tensor violating the curvature symmetries."""


class InvalidDimension(CurvlabError, ValueError):
    """The requested dimension is outside the range an operation supports."""


class InvalidFrame(CurvlabError, ValueError):
    """Vectors that are not orthonormal (beyond the accepted drift)."""


class DimensionMismatch(CurvlabError, ValueError):
    """A frame and a tensor live in spaces of different dimension."""


class UsageError(CurvlabError):
    """Bad command-line usage (unknown model name, malformed parameters)."""
