"""Pydantic request/response models: the wire format of the service and CLI."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, model_validator

from ..core import IndicatorModel
from ..ginibre import GinibreModel
from ..karlin import KarlinModel, parse_rho_spec
from ..specfun import Accuracy

SCHEMA_VERSION = "1"


class AccuracySpec(BaseModel):
    abs_tol: float = 1e-9
    rel_tol: float = 0.0
    max_terms: int = 10_000_000

    def build(self) -> Accuracy:
        return Accuracy(abs_tol=self.abs_tol, rel_tol=self.rel_tol, max_terms=self.max_terms)


class ModelSpec(BaseModel):
    """Which indicator-sum model a request addresses.

    Karlin families are given either by the plain-text form
    ("powerlaw alpha=0.5") in rho_spec, or by variant plus the named
    parameter fields.
    """

    model: Literal["ginibre", "karlin"]
    rho_spec: Optional[str] = None
    variant: Optional[str] = None
    alpha: Optional[float] = None
    log_exponent: Optional[float] = None
    beta: Optional[float] = None
    sigma: Optional[float] = None
    lam: Optional[float] = Field(default=None, alias="lambda")
    j: int = 1

    model_config = {"populate_by_name": True}

    @model_validator(mode="after")
    def _check(self):
        if self.model == "karlin" and not (self.rho_spec or self.variant):
            raise ValueError("karlin model needs rho_spec or variant")
        if self.j < 1:
            raise ValueError("j must be >= 1")
        return self

    def rho_text(self) -> str:
        if self.rho_spec:
            return self.rho_spec
        v = (self.variant or "").lower()
        if v == "powerlaw":
            return f"powerlaw alpha={self.alpha}"
        if v == "borderline":
            return f"borderline log_exponent={self.log_exponent}"
        if v == "dehaan-poly":
            return f"dehaan-poly beta={self.beta}"
        if v == "dehaan-stretched":
            return f"dehaan-stretched sigma={self.sigma} lambda={self.lam}"
        raise ValueError(f"unknown karlin variant {self.variant!r}")

    def build(self) -> IndicatorModel:
        if self.model == "ginibre":
            return GinibreModel()
        return KarlinModel(parse_rho_spec(self.rho_text()), self.j)


class ConstantsOut(BaseModel):
    variant: str
    j: int
    mean_constant: float
    mean_scale: str
    var_constant: float
    var_scale: str
    kstar_constant: Optional[float] = None
    kstar_scale: Optional[str] = None
    lil_constant: float
    normalization: str
    mu: float
    q: float
    flags: list[str] = []


class StatsRow(BaseModel):
    t: float
    mean: float
    variance: float
    kstar_mean: Optional[float] = None
    closed_form_mean: Optional[float] = None
    closed_form_variance: Optional[float] = None
    scale_name: Optional[str] = None
    scale_value: Optional[float] = None
    mean_ratio: Optional[float] = None
    var_ratio: Optional[float] = None


class StatsRequest(BaseModel):
    model: ModelSpec
    times: list[float] = []
    constants: bool = False
    accuracy: AccuracySpec = AccuracySpec()


class StatsResponse(BaseModel):
    schema_version: str = SCHEMA_VERSION
    model: str
    rows: list[StatsRow]
    constants: Optional[ConstantsOut] = None


class ReportOut(BaseModel):
    statistic: str
    model: str
    t: float
    n_samples: int
    estimate: float
    target: float
    stderr: float
    tolerance: float
    verdict: str


class ValidateRequest(BaseModel):
    suite: Literal["clt", "expmoment", "absmoment", "bounds"]
    model: ModelSpec
    t: float
    n_samples: int = 100_000
    seed: int
    workers: int = 1
    thetas: list[float] = [1.0]
    ps: list[float] = [1.0, 2.0, 4.0]
    eps: float = 1e-3
    accuracy: AccuracySpec = AccuracySpec()


class ValidateResponse(BaseModel):
    schema_version: str = SCHEMA_VERSION
    suite: str
    seed: int
    reports: list[ReportOut]
    all_passed: bool


class LilTraceRequest(BaseModel):
    model: ModelSpec
    gamma: float
    n_max: int
    seed: int
    eps: float = 1e-3
    accuracy: AccuracySpec = AccuracySpec()


class TraceRow(BaseModel):
    n: int
    tau_n: float
    value: float
    running_max: float


class LilTraceResponse(BaseModel):
    """Trace rows plus the sidecar facts: the normalization regime and the
    almost-sure envelope constant (value 1 in normalized units)."""

    schema_version: str = SCHEMA_VERSION
    model: str
    gamma: float
    regime: str
    mu: float
    q: float
    start_n: int
    normalized_constant: float = 1.0
    lil_constant: float
    lil_constant_flags: list[str] = []
    running_max_final: float
    running_min_final: float
    rows: list[TraceRow]


class ErrorBody(BaseModel):
    error: Literal["config", "numerical"]
    detail: str
