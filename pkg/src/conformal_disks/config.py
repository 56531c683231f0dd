"""Run configuration and global defaults.

All tolerances and truncation degrees live here so that the CLI, the service
and the test-suites share one set of knobs.
"""
from __future__ import annotations

from dataclasses import dataclass, field

# Global default truncation degree for holomorphic series and cocycle tables.
DEFAULT_TRUNCATION = 32

# Sequence forms of distributions are stored up to this degree.  In d = 2 the
# harmonic spaces are two-dimensional and the full series truncation is cheap;
# for d >= 3 exact basis construction grows quickly with the degree, so the
# default is capped (callers may ask for more explicitly).
SEQUENCE_DEGREE_CAP = 10

# Default quadrature tolerances: single integrals / double integrals.
QUAD_TOL_SINGLE = 1e-6
QUAD_TOL_DOUBLE = 1e-4

# Boundary sample counts used by the certification routines.
BOUNDARY_SAMPLES_2D = 256
BOUNDARY_SAMPLES_3D = 512

# Padding added to ||a|| when issuing a decay certificate for a delta.
CERTIFICATE_PAD = 1e-9

# Guard threshold for special conformal denominators.
SPECIAL_CONFORMAL_GUARD = 1e-14

# Side length of the bivariate coefficient tables backing the d = 2 cocycle.
# Entries are float-exact on the band n + m <= size - 3, which covers the
# 24 x 24 block needed by the vanishing checks with margin.
COCYCLE_TABLE_SIZE = 56

# Minimum center separation allowed in contractions.
MIN_SEPARATION = 1e-10


def sequence_truncation(dim: int, trunc: int | None = None) -> int:
    """Degree up to which sequence forms are populated in dimension `dim`."""
    if trunc is not None:
        return trunc
    if dim == 2:
        return DEFAULT_TRUNCATION
    return min(DEFAULT_TRUNCATION, SEQUENCE_DEGREE_CAP)


@dataclass(frozen=True)
class RunConfig:
    """Configuration shared by CLI commands and service endpoints."""

    dim: int = 2
    truncation: int = DEFAULT_TRUNCATION
    tol_single: float = QUAD_TOL_SINGLE
    tol_double: float = QUAD_TOL_DOUBLE
    samples: int = 20
    seed: int = 0
    out: str | None = None

    def __post_init__(self) -> None:
        if self.dim < 2:
            raise ValueError("dimension must be at least 2")
        if self.truncation < 4:
            raise ValueError("truncation degree must be at least 4")
        if self.tol_single <= 0 or self.tol_double <= 0:
            raise ValueError("tolerances must be positive")
        if self.samples < 1:
            raise ValueError("sample count must be positive")
