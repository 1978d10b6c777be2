"""Monte Carlo validation of the normal limit and LIL trace diagnostics.

Replicates are drawn in fixed-size blocks, each block from an independent
substream derived from (seed, block index).  Results are therefore
bit-identical for any worker count: workers only change which thread
evaluates a block, never the stream it consumes or the reduction order.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import core
from .core import IndicatorModel, REPLICATE_BLOCK, lower_grid, replicate_generator
from .reports import FAIL, PASS, ValidationReport
from .specfun import Accuracy, DEFAULT_ACCURACY

__all__ = [
    "ks_statistic",
    "ks_critical",
    "normal_abs_moment",
    "clt_report",
    "exp_moment_report",
    "exp_moment_report_from_samples",
    "abs_moment_report",
    "abs_moment_report_from_samples",
    "LilTrace",
    "lil_trace",
    "sample_statistic_replicates",
]

KS_LEVEL = 0.001
_KS_COEF = math.sqrt(-0.5 * math.log(KS_LEVEL / 2.0))  # ~1.9495


def ks_critical(n: int, level: float = KS_LEVEL) -> float:
    """Asymptotic Kolmogorov critical value c(level)/sqrt(n)."""
    return math.sqrt(-0.5 * math.log(level / 2.0)) / math.sqrt(n)


def ks_statistic(samples: np.ndarray, cdf) -> float:
    """sup-norm distance between the empirical CDF of sorted samples and cdf."""
    x = np.asarray(samples, dtype=float)
    if x.size == 0:
        raise ValueError("samples must be nonempty")
    if np.any(np.diff(x) < 0):
        raise ValueError("samples must be sorted nondecreasing")
    n = x.size
    f = np.asarray(cdf(x), dtype=float)
    grid = np.arange(n, dtype=float)
    return float(np.max(np.maximum(f - grid / n, (grid + 1.0) / n - f)))


def _root_seed(rng) -> int:
    if isinstance(rng, np.random.Generator):
        return int(rng.integers(0, 2**63 - 1))
    return int(rng)


def sample_statistic_replicates(
    model: IndicatorModel,
    t: float,
    n_samples: int,
    seed: int,
    workers: int = 1,
    eps: float = 1e-3,
) -> np.ndarray:
    """n_samples independent draws of X(t), block-deterministic in the seed."""
    profile = core.single_time_profile(model, t, eps)
    blocks = [
        (i, min(REPLICATE_BLOCK, n_samples - i * REPLICATE_BLOCK))
        for i in range((n_samples + REPLICATE_BLOCK - 1) // REPLICATE_BLOCK)
    ]

    def run(block):
        idx, size = block
        return core.sample_counts_block(profile, size, replicate_generator(seed, idx))

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(run, blocks))
    else:
        parts = [run(b) for b in blocks]
    return np.concatenate(parts)


def _normalized_samples(model, t, n_samples, seed, workers, eps, acc):
    b = core._b_eval(model, t, acc)
    a = core._a_eval(model, t, acc)
    counts = sample_statistic_replicates(model, t, n_samples, seed, workers, eps)
    return (counts - b) / math.sqrt(a), b, a


def clt_report(
    model: IndicatorModel,
    t: float,
    n_samples: int,
    rng,
    workers: int = 1,
    eps: float = 1e-3,
    acc: Accuracy = DEFAULT_ACCURACY,
) -> ValidationReport:
    """KS distance of the normalized count against the standard normal law.

    The pass tolerance is the level-0.001 KS critical value plus one
    lattice spacing 1/sqrt(a(t)) of the normalized integer counts.
    """
    if n_samples < 10_000:
        raise ValueError("n_samples must be >= 1e4")
    a = core._a_eval(model, t, acc)
    if a < 25.0:
        raise ValueError(f"var at t={t:g} is {a:.3g} < 25: CLT regime not reached")
    from scipy.special import ndtr

    z, _, a = _normalized_samples(model, t, n_samples, _root_seed(rng), workers, eps, acc)
    z.sort()
    ks = ks_statistic(z, ndtr)
    tol = ks_critical(n_samples) + 1.0 / math.sqrt(a)
    return ValidationReport(
        statistic="clt-ks",
        model=model.label,
        t=t,
        n_samples=n_samples,
        estimate=ks,
        target=0.0,
        stderr=0.5 / math.sqrt(n_samples),
        tolerance=tol,
        verdict=PASS if ks < tol else FAIL,
    )


def exp_moment_report_from_samples(
    z: np.ndarray, theta: float, model_label: str, t: float, drift_allowance: float
) -> ValidationReport:
    """Empirical E exp(theta Z) against exp(theta^2/2) with a finite-t drift term."""
    y = np.exp(theta * np.asarray(z, dtype=float))
    est = float(np.mean(y))
    stderr = float(np.std(y, ddof=1)) / math.sqrt(y.size)
    target = math.exp(0.5 * theta * theta)
    tol = 5.0 * stderr + drift_allowance
    return ValidationReport(
        statistic=f"exp-moment theta={theta:g}",
        model=model_label,
        t=t,
        n_samples=int(y.size),
        estimate=est,
        target=target,
        stderr=stderr,
        tolerance=tol,
        verdict=PASS if abs(est - target) <= tol else FAIL,
    )


def exp_moment_report(
    model: IndicatorModel,
    t: float,
    theta: float,
    n_samples: int,
    rng,
    workers: int = 1,
    eps: float = 1e-3,
    acc: Accuracy = DEFAULT_ACCURACY,
) -> ValidationReport:
    """Exponential-moment convergence check at one time point."""
    if abs(theta) > 2.0:
        raise ValueError("|theta| must be <= 2")
    if n_samples < 100_000:
        raise ValueError("n_samples must be >= 1e5")
    z, _, a = _normalized_samples(model, t, n_samples, _root_seed(rng), workers, eps, acc)
    return exp_moment_report_from_samples(
        z, theta, model.label, t, abs(theta) ** 3 / math.sqrt(a)
    )


def normal_abs_moment(p: float) -> float:
    """E|Normal(0,1)|^p = 2^{p/2} Gamma((p+1)/2) / sqrt(pi)."""
    return 2.0 ** (p / 2.0) * math.gamma((p + 1.0) / 2.0) / math.sqrt(math.pi)


def abs_moment_report_from_samples(
    z: np.ndarray, p: float, model_label: str, t: float
) -> ValidationReport:
    y = np.abs(np.asarray(z, dtype=float)) ** p
    est = float(np.mean(y))
    stderr = float(np.std(y, ddof=1)) / math.sqrt(y.size)
    target = normal_abs_moment(p)
    tol = 5.0 * stderr
    return ValidationReport(
        statistic=f"abs-moment p={p:g}",
        model=model_label,
        t=t,
        n_samples=int(y.size),
        estimate=est,
        target=target,
        stderr=stderr,
        tolerance=tol,
        verdict=PASS if abs(est - target) <= tol else FAIL,
    )


def abs_moment_report(
    model: IndicatorModel,
    t: float,
    p: float,
    n_samples: int,
    rng,
    workers: int = 1,
    eps: float = 1e-3,
    acc: Accuracy = DEFAULT_ACCURACY,
) -> ValidationReport:
    """p-th absolute moment of the normalized count against the normal value."""
    if not 0.0 < p <= 6.0:
        raise ValueError("p must lie in (0, 6]")
    if n_samples < 100_000:
        raise ValueError("n_samples must be >= 1e5")
    z, _, _ = _normalized_samples(model, t, n_samples, _root_seed(rng), workers, eps, acc)
    return abs_moment_report_from_samples(z, p, model.label, t)


# ---------------------------------------------------------------------------
# LIL traces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class LilTrace:
    """Normalized path values along the variance-crossing checkpoints tau_n.

    values[n] = (X(tau_n) - b(tau_n)) / sqrt(2 (q+1) a loglog a)  if mu = 1
              = (X(tau_n) - b(tau_n)) / sqrt(2 (mu-1) a log a)    if mu > 1

    with a = a(tau_n).  The theoretical limsup in these units is 1; at a
    finite horizon the trace is informational only.  Running min is kept
    too (the corresponding liminf is -1).
    """

    model: str
    gamma: float
    regime: str  # "log" or "loglog"
    ns: np.ndarray
    taus: np.ndarray
    values: np.ndarray
    running_max: np.ndarray
    running_min: np.ndarray
    start_n: int
    constant: float = 1.0
    flags: tuple = ()

    def __post_init__(self):
        if np.any(np.diff(self.running_max) < 0):
            raise ValueError("running max must be nondecreasing")


def lil_trace(
    model: IndicatorModel,
    gamma: float,
    n_max: int,
    rng,
    eps: float = 1e-3,
    acc: Accuracy = DEFAULT_ACCURACY,
) -> LilTrace:
    """One sampled path observed at the checkpoints tau_1..tau_n_max."""
    grid = lower_grid(model, gamma, n_max, acc)
    regime = "loglog" if model.mu == 1.0 else "log"

    # drop leading checkpoints where the normalizing log factor is not positive
    h = np.empty(n_max)
    for i, w in enumerate(grid.levels):
        if model.mu == 1.0:
            h[i] = (model.q + 1.0) * math.log(math.log(w)) if w > math.e else 0.0
        else:
            h[i] = (model.mu - 1.0) * math.log(w) if w > 1.0 else 0.0
    usable = h > 0
    if not np.any(usable):
        raise ValueError("no checkpoint has a positive normalization; increase n_max")
    start = int(np.argmax(usable))
    ns = np.arange(1, n_max + 1)[start:]
    taus = grid.times[start:]
    keep = np.concatenate(([True], np.diff(taus) > 0))
    ns, taus = ns[keep], taus[keep]

    seed = _root_seed(rng)
    path = core.sample_path(model, taus, eps, replicate_generator(seed, 0))
    values = np.empty(taus.size)
    for i, (tau, n_idx) in enumerate(zip(taus, ns)):
        b = core._b_eval(model, float(tau), acc)
        a = float(grid.levels[n_idx - 1])
        values[i] = (path.counts[i] - b) / math.sqrt(2.0 * a * h[n_idx - 1])
    return LilTrace(
        model=model.label,
        gamma=gamma,
        regime=regime,
        ns=ns,
        taus=taus,
        values=values,
        running_max=np.maximum.accumulate(values),
        running_min=np.minimum.accumulate(values),
        start_n=int(ns[0]),
        flags=grid.flags,
    )
