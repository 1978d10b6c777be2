"""Request -> response logic shared by the HTTP app and the CLI."""

from __future__ import annotations

import math

from .. import core, karlin, montecarlo
from ..ginibre import GinibreModel, lil_envelope_ginibre, var_exact
from ..karlin import KarlinModel, asymptotic_constants, mean_Kj_star
from . import schemas as sc


def _constants_for(model) -> sc.ConstantsOut:
    if isinstance(model, GinibreModel):
        return sc.ConstantsOut(
            variant="ginibre",
            j=1,
            mean_constant=1.0,
            mean_scale="t",
            var_constant=1.0 / math.sqrt(math.pi),
            var_scale="sqrt(t)",
            lil_constant=math.pi**-0.25,
            normalization="log",
            mu=2.0,
            q=0.0,
        )
    cs = asymptotic_constants(model.rho, model.j)
    return sc.ConstantsOut(
        variant=cs.variant,
        j=cs.j,
        mean_constant=cs.mean_constant,
        mean_scale=cs.mean_scale,
        var_constant=cs.var_constant,
        var_scale=cs.var_scale,
        kstar_constant=cs.kstar_constant,
        kstar_scale=cs.kstar_scale,
        lil_constant=cs.lil_constant,
        normalization=cs.normalization,
        mu=cs.mu,
        q=cs.q,
        flags=list(cs.flags),
    )


def _scale_value(model: KarlinModel, t: float, scale_name: str):
    spec = model.rho
    if scale_name == "rho(t)":
        return spec.rho_smooth(t)
    if scale_name == "ell(t)":
        return spec.ell_hat(t)
    if scale_name == "t*hat_L(t)":
        return t * spec.hat_L_realized(t)
    return None


def run_stats(req: sc.StatsRequest) -> sc.StatsResponse:
    model = req.model.build()
    acc = req.accuracy.build()
    rows = []
    for t in req.times:
        mean = core.mean_b(model, t, acc)
        var = core.var_a(model, t, acc)
        if isinstance(model, GinibreModel):
            rows.append(
                sc.StatsRow(
                    t=t,
                    mean=mean,
                    variance=var,
                    closed_form_mean=float(t),
                    closed_form_variance=var_exact(t) if t > 0 else 0.0,
                    scale_name="sqrt(t/pi)",
                    scale_value=math.sqrt(t / math.pi) if t > 0 else 0.0,
                    var_ratio=var / math.sqrt(t / math.pi) if t > 0 else None,
                )
            )
        else:
            cs = asymptotic_constants(model.rho, model.j)
            scale = _scale_value(model, t, cs.var_scale) if t > 1 else None
            rows.append(
                sc.StatsRow(
                    t=t,
                    mean=mean,
                    variance=var,
                    kstar_mean=mean_Kj_star(model, t, acc),
                    scale_name=cs.var_scale,
                    scale_value=scale,
                    mean_ratio=(mean / _scale_value(model, t, cs.mean_scale))
                    if t > 1 and _scale_value(model, t, cs.mean_scale)
                    else None,
                    var_ratio=(var / scale) if scale else None,
                )
            )
    constants = _constants_for(model) if req.constants else None
    return sc.StatsResponse(model=model.label, rows=rows, constants=constants)


def _to_report_out(r) -> sc.ReportOut:
    return sc.ReportOut(**r.to_dict())


def run_validate(req: sc.ValidateRequest) -> sc.ValidateResponse:
    model = req.model.build()
    acc = req.accuracy.build()
    reports = []
    if req.suite == "clt":
        reports.append(
            montecarlo.clt_report(
                model, req.t, req.n_samples, req.seed, req.workers, req.eps, acc
            )
        )
    elif req.suite == "expmoment":
        for theta in req.thetas:
            reports.append(
                montecarlo.exp_moment_report(
                    model, req.t, theta, req.n_samples, req.seed, req.workers, req.eps, acc
                )
            )
    elif req.suite == "absmoment":
        for p in req.ps:
            reports.append(
                montecarlo.abs_moment_report(
                    model, req.t, p, req.n_samples, req.seed, req.workers, req.eps, acc
                )
            )
    else:  # bounds
        for theta in req.thetas:
            reports.append(
                core.exp_moment_bound_check(
                    model, req.t, theta, req.n_samples, req.seed, acc, req.eps
                )
            )
    all_passed = all(r.passed for r in reports)
    return sc.ValidateResponse(
        suite=req.suite,
        seed=req.seed,
        reports=[_to_report_out(r) for r in reports],
        all_passed=all_passed,
    )


def run_lil_trace(req: sc.LilTraceRequest) -> sc.LilTraceResponse:
    model = req.model.build()
    acc = req.accuracy.build()
    trace = montecarlo.lil_trace(model, req.gamma, req.n_max, req.seed, req.eps, acc)
    if isinstance(model, GinibreModel):
        lil_constant = lil_envelope_ginibre(math.e * 2)[2]
        flags: list[str] = []
    else:
        cs = asymptotic_constants(model.rho, model.j)
        lil_constant = cs.lil_constant
        flags = list(cs.flags)
    rows = [
        sc.TraceRow(n=int(n), tau_n=float(tau), value=float(v), running_max=float(m))
        for n, tau, v, m in zip(trace.ns, trace.taus, trace.values, trace.running_max)
    ]
    return sc.LilTraceResponse(
        model=model.label,
        gamma=req.gamma,
        regime=trace.regime,
        mu=model.mu,
        q=model.q,
        start_n=trace.start_n,
        lil_constant=lil_constant,
        lil_constant_flags=flags,
        running_max_final=float(trace.running_max[-1]),
        running_min_final=float(trace.running_min[-1]),
        rows=rows,
    )
