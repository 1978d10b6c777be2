"""HTTP face of the toolkit: three POST endpoints over the runner layer."""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import IndsumError
from . import runners
from . import schemas as sc

app = FastAPI(
    title="indsum",
    version=__version__,
    description=(
        "Exact moments, asymptotic constants, simulation and Monte Carlo "
        "validation for infinite sums of independent indicators "
        "(Ginibre radial counts, Karlin occupancy)."
    ),
)


@app.exception_handler(IndsumError)
async def _numerical_error(request, exc: IndsumError):
    body = sc.ErrorBody(error="numerical", detail=str(exc))
    return JSONResponse(status_code=409, content=body.model_dump())


@app.exception_handler(ValueError)
async def _config_error(request, exc: ValueError):
    body = sc.ErrorBody(error="config", detail=str(exc))
    return JSONResponse(status_code=422, content=body.model_dump())


@app.get("/health")
def health() -> dict:
    return {"status": "ok", "version": __version__}


@app.post("/stats", response_model=sc.StatsResponse)
def stats(req: sc.StatsRequest) -> sc.StatsResponse:
    return runners.run_stats(req)


@app.post("/validate", response_model=sc.ValidateResponse)
def validate(req: sc.ValidateRequest) -> sc.ValidateResponse:
    return runners.run_validate(req)


@app.post("/lil-trace", response_model=sc.LilTraceResponse)
def lil_trace(req: sc.LilTraceRequest) -> sc.LilTraceResponse:
    return runners.run_lil_trace(req)
