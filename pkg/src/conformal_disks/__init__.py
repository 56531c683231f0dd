"""Computational toolkit for the conformal Laplacian on flat disks.

Conformal disk embeddings and their operad, exact harmonic-polynomial
analysis, growth-certified harmonic distributions, contraction products
with the d = 2 cocycle correction, and an independent quadrature oracle.
"""

from .config import DEFAULT_TRUNCATION, RunConfig
from .conformal import (
    Dilation,
    HolomorphicSeries,
    Mobius,
    Orthogonal,
    SpecialConformal,
    Translation,
    Word,
    apply,
    compose,
    conformal_factor,
    identity_word,
    mobius_from_disk_data,
    mobius_identity,
    schwarzian,
)
from .distributions import (
    HarmonicDistribution,
    cft_norm_sq,
    delta_at,
    derivative_delta,
    growth_check,
    is_zero_mean,
    pair,
    wirtinger_delta,
)
from .errors import (
    ContainmentError,
    DegenerateError,
    DimensionError,
    DisjointnessError,
    DomainError,
    RecordError,
    SeparationError,
    ToleranceError,
    ToolkitError,
    ZeroMeanError,
)
from .fock import (
    HarmonicCocycle,
    Kernel,
    Observable,
    anomaly_check,
    cocycle,
    contraction_value,
    correlation_function,
    correlator,
    normalize,
    pushforward,
    rho,
    vacuum_state,
)
from .harmonic import (
    dim_harm,
    gegenbauer,
    green_expansion_partial,
    green_kernel,
    harmonic_projection,
    orthonormal_basis,
    sphere_inner,
    zonal,
)
from .operad import (
    DiskConfiguration,
    DiskEmbedding,
    compose_at,
    identity_configuration,
    make_ball,
    make_configuration,
    permute,
)
from .oracle import (
    BumpFunction,
    QuadratureRule,
    bump,
    numeric_contraction,
    numeric_pair,
    verify_cg_intertwine,
    verify_pushforward_integral,
)
from .polynomial import Polynomial
from .suites import run_suite

__version__ = "0.1.0"
