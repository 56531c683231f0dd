"""HTTP service exposing the toolkit.

One POST endpoint per command: correlator, cocycle, green-expand,
growth-check, operad-compose, verify.  The CLI drives these same routes
through an in-process transport, so the service is the single entry
point into the library.  Library errors come back as status 422 with a
structured {"error": kind, "detail": ...} body.
"""

from __future__ import annotations

import cmath
import math

import numpy as np
from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from . import conformal as cf
from . import fock, records, suites
from .config import DEFAULT_TRUNCATION, QUAD_TOL_DOUBLE, QUAD_TOL_SINGLE, RunConfig
from .distributions import growth_check
from .errors import DegenerateError, RecordError, ToolkitError
from .harmonic import expansion_term, green_expansion_partial, green_kernel
from .operad import compose_at

app = FastAPI(title="conformal-disks")


def error_kind(exc: Exception) -> str:
    if isinstance(exc, RecordError):
        return "parse"
    if isinstance(exc, ToolkitError):
        # ContainmentError -> "containment" and so on
        return type(exc).__name__.removesuffix("Error").lower()
    return "value"


@app.exception_handler(ToolkitError)
@app.exception_handler(ValueError)
@app.exception_handler(TypeError)
@app.exception_handler(IndexError)
async def _library_error(request: Request, exc: Exception):
    return JSONResponse(
        status_code=422, content={"error": error_kind(exc), "detail": str(exc)}
    )


@app.get("/")
def health():
    return {"service": "conformal-disks", "commands": list(COMMANDS)}


# ---------------------------------------------------------------------------
# correlator
# ---------------------------------------------------------------------------


class CorrelatorRequest(BaseModel):
    config: dict
    observables: list[dict]


class CorrelatorResponse(BaseModel):
    value: float | list[float]
    matchings: int


@app.post("/correlator", response_model=CorrelatorResponse)
def run_correlator(req: CorrelatorRequest) -> CorrelatorResponse:
    config = records.parse_config(req.config)
    factors = [records.parse_observable(r) for r in req.observables]
    product = fock.rho(config, *factors)
    value, matchings = fock.correlation_function(product)
    rec = records.correlator_record(value, matchings)
    return CorrelatorResponse(value=rec["value"], matchings=rec["matchings"])


# ---------------------------------------------------------------------------
# cocycle
# ---------------------------------------------------------------------------


class CocycleRequest(BaseModel):
    phi: dict
    psi: dict | None = None
    trunc: int = 24
    grid: int = 20


class CocycleResponse(BaseModel):
    table_max: float
    identity_residual: float
    schwarzian_residual: float
    a_table: list[list[list[float]]]


def _grid_points(grid: int) -> tuple:
    # two transversal segments inside the disk: grid x grid pairs (z, w)
    s = np.linspace(-0.55, 0.55, grid)
    return s * np.exp(0.5j), s * np.exp(-1.1j) + 0.02j


def _analytic(m):
    return m.to_mobius() if isinstance(m, cf.Word) else m


@app.post("/cocycle", response_model=CocycleResponse)
def run_cocycle(req: CocycleRequest) -> CocycleResponse:
    phi = _analytic(records.parse_map(req.phi))
    coc_phi = fock.cocycle(phi)
    zs, ws = _grid_points(req.grid)

    identity_residual = 0.0
    if req.psi is not None:
        psi = _analytic(records.parse_map(req.psi))
        coc_psi = fock.cocycle(psi)
        series_phi = phi
        if isinstance(series_phi, cf.HolomorphicSeries):
            series_phi = series_phi.with_truncation(40)
        coc_comp = fock.cocycle(cf.compose(series_phi, psi))
        psi_zs = np.array([psi.evaluate(z) for z in zs])
        psi_ws = np.array([psi.evaluate(w) for w in ws])
        lhs = coc_comp.h_grid(zs, ws)
        rhs = coc_psi.h_grid(zs, ws) + coc_phi.h_grid(psi_zs, psi_ws)
        identity_residual = float(np.abs(lhs - rhs).max())

    schwarzian_residual = _schwarzian_diag_residual(phi, coc_phi)
    block = coc_phi.a_table[: req.trunc + 1, : req.trunc + 1]
    table = [[[v.real, v.imag] for v in row] for row in block]
    return CocycleResponse(
        table_max=float(np.abs(block).max()),
        identity_residual=identity_residual,
        schwarzian_residual=schwarzian_residual,
        a_table=table,
    )


def _schwarzian_diag_residual(phi, coc, degree: int = 16, samples: int = 24) -> float:
    diag = [sum(coc.a_table[i, k - i] for i in range(k + 1)) for k in range(degree + 1)]
    worst = 0.0
    for j in range(samples):
        z = 0.5 * (0.2 + 0.8 * j / samples) * cmath.exp(2j * math.pi * j / samples)
        sval = cf.schwarzian(phi, z).value / 6
        worst = max(worst, abs(sval - sum(c * z**k for k, c in enumerate(diag))))
    return worst


# ---------------------------------------------------------------------------
# green expansion
# ---------------------------------------------------------------------------


class GreenExpandRequest(BaseModel):
    dim: int
    x: list[float]
    y: list[float]
    degree: int = 16


class GreenExpandResponse(BaseModel):
    value: float
    exact: float
    residual: float
    terms: list[float]


@app.post("/green-expand", response_model=GreenExpandResponse)
def run_green_expand(req: GreenExpandRequest) -> GreenExpandResponse:
    x, y = np.asarray(req.x), np.asarray(req.y)
    if req.degree < 0:
        raise ValueError("expansion degree must be non-negative")
    value = green_expansion_partial(req.dim, x, y, req.degree)
    exact = green_kernel(req.dim, x, y)
    terms = [expansion_term(req.dim, n, x, y) for n in range(req.degree + 1)]
    return GreenExpandResponse(
        value=value, exact=exact, residual=abs(value - exact), terms=terms
    )


# ---------------------------------------------------------------------------
# growth check
# ---------------------------------------------------------------------------


class GrowthCheckRequest(BaseModel):
    distribution: dict


class GrowthCheckResponse(BaseModel):
    certified: bool
    C: float | None = None
    rho: float | None = None


@app.post("/growth-check", response_model=GrowthCheckResponse)
def run_growth_check(req: GrowthCheckRequest) -> GrowthCheckResponse:
    t = records.parse_distribution(req.distribution)
    cert = growth_check(t)
    if cert is None:
        return GrowthCheckResponse(certified=False)
    return GrowthCheckResponse(certified=True, C=cert[0], rho=cert[1])


# ---------------------------------------------------------------------------
# operad composition
# ---------------------------------------------------------------------------


class OperadComposeRequest(BaseModel):
    outer: dict
    inner: dict
    slot: int = 1


class OperadComposeResponse(BaseModel):
    config: dict
    disjointness_margin: float
    containment_margin: float


@app.post("/operad-compose", response_model=OperadComposeResponse)
def run_operad_compose(req: OperadComposeRequest) -> OperadComposeResponse:
    outer = records.parse_config(req.outer)
    inner = records.parse_config(req.inner, dim=outer.dim)
    composed = compose_at(outer, req.slot, inner)
    margin = min((e.containment_margin for e in composed.embeddings), default=1.0)
    return OperadComposeResponse(
        config=records.config_record(composed),
        disjointness_margin=composed.disjointness_margin,
        containment_margin=margin,
    )


# ---------------------------------------------------------------------------
# verification suites
# ---------------------------------------------------------------------------


class VerifyRequest(BaseModel):
    selector: str = "all"
    dim: int = 2
    truncation: int = DEFAULT_TRUNCATION
    tol_single: float = QUAD_TOL_SINGLE
    tol_double: float = QUAD_TOL_DOUBLE
    samples: int = 20
    seed: int = 0


class VerifyResponse(BaseModel):
    passed: bool
    reports: list[dict]


@app.post("/verify", response_model=VerifyResponse)
def run_verify(req: VerifyRequest) -> VerifyResponse:
    cfg = RunConfig(
        dim=req.dim,
        truncation=req.truncation,
        tol_single=req.tol_single,
        tol_double=req.tol_double,
        samples=req.samples,
        seed=req.seed,
    )
    reports = suites.run_suite(req.selector, cfg)
    return VerifyResponse(passed=suites.suite_passed(reports), reports=reports)


COMMANDS = (
    "correlator",
    "cocycle",
    "green-expand",
    "growth-check",
    "operad-compose",
    "verify",
)
