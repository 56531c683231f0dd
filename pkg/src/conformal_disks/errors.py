"""Exception taxonomy shared by all modules.

Every error raised on a documented failure path derives from ToolkitError so
callers (and the service layer) can catch the whole family at once.
"""


class ToolkitError(Exception):
    """Base class for all toolkit errors."""


class DomainError(ToolkitError):
    """Evaluation at a point outside the map's domain (e.g. at a special
    conformal pole, detected by a vanishing denominator)."""


class RadiusError(ToolkitError):
    """Series evaluated or composed outside its validity radius."""


class DegenerateError(ToolkitError):
    """Vanishing derivative where an invertible jet is required."""


class ContainmentError(ToolkitError):
    """Image of the unit disk is not contained in the open unit disk."""


class DisjointnessError(ToolkitError):
    """Two embeddings of a configuration have overlapping images."""


class SeparationError(ToolkitError):
    """Contraction centers closer than the minimum separation."""


class UnsupportedError(ToolkitError):
    """Operation outside the supported closed-form cases."""


class ZeroMeanError(ToolkitError):
    """A two-dimensional operation required a zero-mean distribution."""


class DimensionError(ToolkitError):
    """Operation undefined in this dimension."""


class TruncationError(ToolkitError):
    """Requested data beyond the stored truncation degree."""


class RegionError(ToolkitError):
    """Point configuration outside the validity region of an expansion."""


class SingularError(ToolkitError):
    """Evaluation at (or too close to) a kernel singularity."""


class ToleranceError(ToolkitError):
    """Quadrature error estimate exceeds the requested tolerance."""


class RecordError(ToolkitError):
    """Malformed or inconsistent text record."""
