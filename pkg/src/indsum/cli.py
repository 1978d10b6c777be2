"""Command-line client for the indicator-sum toolkit.

Every command builds a typed request, executes it through the service
layer (in-process by default, over HTTP with --server) and writes the
response as JSON, or CSV plus a JSON sidecar for traces.

Exit codes: 0 success, 2 configuration error, 3 numerical failure,
4 validation failure (a non-informational report did not pass).
"""

from __future__ import annotations

import json
import os
import sys

import click
from pydantic import ValidationError

from .errors import IndsumError
from .service import runners
from .service import schemas as sc

EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VALIDATION = 4


def _dump_json(payload: dict) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def _write(text: str, output: str | None):
    if output:
        with open(output, "w") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


def _model_options(fn):
    opts = [
        click.option("--model", "model_name", type=click.Choice(["ginibre", "karlin"]), required=True),
        click.option("--rho-spec", default=None, help='plain-text family, e.g. "powerlaw alpha=0.5"'),
        click.option("--variant", default=None,
                     type=click.Choice(["powerlaw", "borderline", "dehaan-poly", "dehaan-stretched"])),
        click.option("--alpha", type=float, default=None),
        click.option("--log-exponent", type=float, default=None),
        click.option("--beta", type=float, default=None),
        click.option("--sigma", type=float, default=None),
        click.option("--lam", "--lambda", "lam", type=float, default=None),
        click.option("--j", type=int, default=1, show_default=True),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _accuracy_options(fn):
    for opt in reversed([
        click.option("--abs-tol", type=float, default=1e-9, show_default=True),
        click.option("--rel-tol", type=float, default=0.0, show_default=True),
        click.option("--max-terms", type=int, default=10_000_000, show_default=True),
    ]):
        fn = opt(fn)
    return fn


def _build_model_spec(model_name, rho_spec, variant, alpha, log_exponent, beta, sigma, lam, j):
    return sc.ModelSpec(
        model=model_name,
        rho_spec=rho_spec,
        variant=variant,
        alpha=alpha,
        log_exponent=log_exponent,
        beta=beta,
        sigma=sigma,
        lam=lam,
        j=j,
    )


def _seed_from(seed):
    if seed is not None:
        return seed
    env = os.environ.get("INDSUM_SEED")
    if env is not None:
        return int(env)
    raise click.UsageError("a --seed is required for stochastic commands (or set INDSUM_SEED)")


def _workers_from(workers):
    if workers is not None:
        return workers
    return int(os.environ.get("INDSUM_WORKERS", "1"))


def _post(server: str, path: str, req) -> dict:
    import httpx

    resp = httpx.post(server.rstrip("/") + path, json=req.model_dump(), timeout=None)
    if resp.status_code == 200:
        return resp.json()
    try:
        body = resp.json()
    except Exception:
        raise click.ClickException(f"server error {resp.status_code}: {resp.text}")
    detail = body.get("detail", resp.text)
    if resp.status_code == 409:
        click.echo(f"numerical failure: {detail}", err=True)
        sys.exit(EXIT_NUMERICAL)
    click.echo(f"configuration rejected: {detail}", err=True)
    sys.exit(EXIT_CONFIG)


def _execute(server, path, req, runner):
    try:
        if server:
            return _post(server, path, req)
        return runner(req).model_dump()
    except (ValidationError, ValueError) as exc:
        click.echo(f"configuration rejected: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    except IndsumError as exc:
        click.echo(f"numerical failure: {exc}", err=True)
        sys.exit(EXIT_NUMERICAL)


@click.group()
def main():
    """Exact evaluation, constants, simulation and validation runs."""


@main.command()
@_model_options
@_accuracy_options
@click.option("--t", "times", type=float, multiple=True, help="evaluation time (repeatable)")
@click.option("--constants", is_flag=True, help="include asymptotic constants")
@click.option("--output", default=None, help="write JSON here instead of stdout")
@click.option("--server", default=None, help="POST to a running service instead of in-process")
def stats(model_name, rho_spec, variant, alpha, log_exponent, beta, sigma, lam, j,
          abs_tol, rel_tol, max_terms, times, constants, output, server):
    """Exact b(t), a(t), closed forms and ratio diagnostics."""
    try:
        req = sc.StatsRequest(
            model=_build_model_spec(model_name, rho_spec, variant, alpha, log_exponent,
                                    beta, sigma, lam, j),
            times=list(times),
            constants=constants,
            accuracy=sc.AccuracySpec(abs_tol=abs_tol, rel_tol=rel_tol, max_terms=max_terms),
        )
    except (ValidationError, ValueError) as exc:
        click.echo(f"configuration rejected: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    payload = _execute(server, "/stats", req, runners.run_stats)
    _write(_dump_json(payload), output)


@main.command()
@click.argument("suite", type=click.Choice(["clt", "expmoment", "absmoment", "bounds"]))
@_model_options
@_accuracy_options
@click.option("--t", type=float, required=True)
@click.option("--n", "n_samples", type=int, default=100_000, show_default=True)
@click.option("--seed", type=int, default=None, help="RNG seed (required; INDSUM_SEED fallback)")
@click.option("--workers", type=int, default=None, help="worker threads (INDSUM_WORKERS fallback)")
@click.option("--theta", "thetas", type=float, multiple=True, help="exp-moment/bounds arguments")
@click.option("--p", "ps", type=float, multiple=True, help="absolute-moment orders")
@click.option("--eps", type=float, default=1e-3, show_default=True,
              help="certified sampling TV budget per replicate")
@click.option("--output", default=None)
@click.option("--server", default=None)
def validate(suite, model_name, rho_spec, variant, alpha, log_exponent, beta, sigma, lam, j,
             abs_tol, rel_tol, max_terms, t, n_samples, seed, workers, thetas, ps, eps,
             output, server):
    """Monte Carlo validation suites; exit 4 unless every report passes."""
    try:
        req = sc.ValidateRequest(
            suite=suite,
            model=_build_model_spec(model_name, rho_spec, variant, alpha, log_exponent,
                                    beta, sigma, lam, j),
            t=t,
            n_samples=n_samples,
            seed=_seed_from(seed),
            workers=_workers_from(workers),
            thetas=list(thetas) or [1.0],
            ps=list(ps) or [1.0, 2.0, 4.0],
            eps=eps,
            accuracy=sc.AccuracySpec(abs_tol=abs_tol, rel_tol=rel_tol, max_terms=max_terms),
        )
    except (ValidationError, ValueError) as exc:
        click.echo(f"configuration rejected: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    payload = _execute(server, "/validate", req, runners.run_validate)
    _write(_dump_json(payload), output)
    if not payload["all_passed"]:
        click.echo("validation failed", err=True)
        sys.exit(EXIT_VALIDATION)


@main.command("lil-trace")
@_model_options
@_accuracy_options
@click.option("--gamma", type=float, required=True)
@click.option("--n-max", type=int, required=True)
@click.option("--seed", type=int, default=None)
@click.option("--eps", type=float, default=1e-3, show_default=True)
@click.option("--output", required=True, help="CSV path; the JSON sidecar lands next to it")
@click.option("--server", default=None)
def lil_trace_cmd(model_name, rho_spec, variant, alpha, log_exponent, beta, sigma, lam, j,
                  abs_tol, rel_tol, max_terms, gamma, n_max, seed, eps, output, server):
    """One normalized path along the variance checkpoints tau_n (informational)."""
    try:
        req = sc.LilTraceRequest(
            model=_build_model_spec(model_name, rho_spec, variant, alpha, log_exponent,
                                    beta, sigma, lam, j),
            gamma=gamma,
            n_max=n_max,
            seed=_seed_from(seed),
            eps=eps,
            accuracy=sc.AccuracySpec(abs_tol=abs_tol, rel_tol=rel_tol, max_terms=max_terms),
        )
    except (ValidationError, ValueError) as exc:
        click.echo(f"configuration rejected: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    payload = _execute(server, "/lil-trace", req, runners.run_lil_trace)
    lines = ["n,tau_n,value,running_max"]
    for row in payload["rows"]:
        lines.append(f"{row['n']},{row['tau_n']!r},{row['value']!r},{row['running_max']!r}")
    _write("\n".join(lines) + "\n", output)
    sidecar = {k: v for k, v in payload.items() if k != "rows"}
    root, _ = os.path.splitext(output)
    with open(root + ".json", "w") as fh:
        fh.write(_dump_json(sidecar))


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port):
    """Run the HTTP service."""
    import uvicorn

    from .service.app import app

    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()
