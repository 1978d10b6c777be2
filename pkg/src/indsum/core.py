"""The indicator-sum process X(t) = sum_k 1{A_k(t)}.

A model supplies the per-index activation probabilities prob(k, t)
(nondecreasing in t, nonincreasing in k) together with certified tail
evaluations of the mean and variance series beyond a cutoff.  On top of
those hooks this module provides:

  * mean_b / var_a        truncated series with certified total error,
  * sample_counts         replicates of X(t) at one time point,
  * sample_path           one monotone path on a time grid,
  * exp_moment_bound_check
  * upper_grid / lower_grid   the deterministic level-crossing checkpoints.

Sampling splits the index axis into three zones: indices that are active
with probability >= 1 - cut (counted deterministically), a window of
genuinely random indices, and a far tail whose Bernoulli field is replaced
by a Poisson count with matching mean.  The total-variation cost of the two
replacements is bounded explicitly and kept below the caller's eps, so the
sampled law is within eps of the exact one while the cost per replicate
stays proportional to the window width.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import BisectionError, TruncationError
from .reports import FAIL, PASS, ValidationReport
from .specfun import Accuracy, DEFAULT_ACCURACY

__all__ = [
    "IndicatorModel",
    "PathSample",
    "CheckpointGrid",
    "SingleTimeProfile",
    "mean_b",
    "var_a",
    "sample_counts",
    "sample_path",
    "exp_moment_bound_check",
    "upper_grid",
    "lower_grid",
    "replicate_generator",
]

_BLOCK = 1 << 20  # fixed summation block: keeps reductions bit-stable


class IndicatorModel(abc.ABC):
    """Family of indicator probabilities p_k(t) with certified series tails.

    mu is the growth exponent linking mean and variance (b = O(a^mu)); q
    refines the mu = 1 case (b/a = O((log a)^q)).  Both are analytic
    metadata supplied per model, not estimated.
    """

    label: str = "model"
    mu: float = 1.0
    q: float = 0.0

    @abc.abstractmethod
    def prob(self, ks, t):
        """P(A_k(t)) for an integer array ks, vectorized."""

    @abc.abstractmethod
    def comp_prob(self, ks, t):
        """1 - prob(k, t) evaluated without cancellation."""

    @abc.abstractmethod
    def min_tail_start(self, t: float) -> int:
        """Smallest cutoff K at which the tail formulas below are valid."""

    @abc.abstractmethod
    def mean_tail(self, K: int, t: float) -> tuple[float, float]:
        """(value, certified error) for sum_{k>K} prob(k, t)."""

    @abc.abstractmethod
    def var_tail(self, K: int, t: float) -> tuple[float, float]:
        """(value, certified error) for sum_{k>K} prob(k,t)(1 - prob(k,t))."""

    @abc.abstractmethod
    def sq_tail_bound(self, K: int, t: float) -> float:
        """Certified upper bound on sum_{k>K} prob(k, t)^2."""

    @abc.abstractmethod
    def activation_times(self, K: int, rng: np.random.Generator) -> np.ndarray:
        """One draw of the activation times T_1..T_K (T_k = inf{t: k active})."""

    # fast closed forms, used by grid solvers when available
    def mean_closed_form(self, t: float):
        return None

    def var_closed_form(self, t: float):
        return None

    def max_index(self):
        """Largest usable index, or None when the family extends indefinitely."""
        return None

    def truncation_index(self, t: float, eps: float, max_k: int = 10**12) -> int:
        """Smallest cutoff K (up to doubling) with certified sum_{k>K} prob < eps."""
        if eps <= 0:
            raise ValueError("eps must be positive")
        K = max(1, self.min_tail_start(t))
        while True:
            value, err = self.mean_tail(K, t)
            if value + err < eps:
                return K
            if K > max_k:
                raise TruncationError(
                    f"{self.label}: tail mass at K={K} still "
                    f"{value + err:.3g} >= eps={eps:.3g}"
                )
            K *= 2


# ---------------------------------------------------------------------------
# truncated series with certified tails
# ---------------------------------------------------------------------------


def _blocked_sum(term_fn, K: int) -> float:
    """sum_{k=1}^{K} term_fn(k) in fixed-size blocks (order-deterministic)."""
    parts = []
    lo = 1
    while lo <= K:
        hi = min(lo + _BLOCK - 1, K)
        ks = np.arange(lo, hi + 1, dtype=np.int64)
        parts.append(float(np.sum(term_fn(ks))))
        lo = hi + 1
    return math.fsum(parts)


def _series(model: IndicatorModel, t: float, acc: Accuracy, kind: str) -> float:
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return 0.0
    if kind == "mean":
        term = lambda ks: model.prob(ks, t)
        tail = model.mean_tail
    else:
        term = lambda ks: model.prob(ks, t) * model.comp_prob(ks, t)
        tail = model.var_tail
    horizon = model.max_index()
    K = max(1, model.min_tail_start(t))
    if horizon is not None:
        K = min(K, horizon)
    while True:
        tail_value, tail_err = tail(K, t)
        head = _blocked_sum(term, K)
        value = head + tail_value
        if tail_err <= acc.budget(value):
            return value
        if 2 * K > acc.max_terms or (horizon is not None and K >= horizon):
            raise TruncationError(
                f"{model.label} {kind} series at t={t:g}: certified tail error "
                f"{tail_err:.3g} exceeds budget {acc.budget(value):.3g} "
                f"at K={K} (max_terms={acc.max_terms})"
            )
        K = 2 * K if horizon is None else min(2 * K, horizon)


def mean_b(model: IndicatorModel, t: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """b(t) = E X(t) = sum_k prob(k, t), certified to acc."""
    return _series(model, t, acc, "mean")


def var_a(model: IndicatorModel, t: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """a(t) = Var X(t) = sum_k prob(k,t)(1 - prob(k,t)), certified to acc."""
    return _series(model, t, acc, "var")


def _b_eval(model, t, acc):
    v = model.mean_closed_form(t)
    return v if v is not None else mean_b(model, t, acc)


def _a_eval(model, t, acc):
    v = model.var_closed_form(t)
    return v if v is not None else var_a(model, t, acc)


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SingleTimeProfile:
    """Decomposition of X(t) into deterministic + window + Poisson-tail parts."""

    t: float
    base: int             # indices 1..base counted as active
    ks: np.ndarray        # random window indices
    qs: np.ndarray        # their activation probabilities
    tail_mean: float      # Poisson replacement mean for k > ks[-1]
    tv_bound: float       # certified total-variation distance to the exact law

    @property
    def mean(self) -> float:
        return self.base + float(np.sum(self.qs)) + self.tail_mean

    @property
    def variance(self) -> float:
        return float(np.sum(self.qs * (1.0 - self.qs))) + self.tail_mean


def _largest_true(fn, lo: int, hi: int) -> int:
    """Largest k in [lo, hi] with fn(k) True, assuming fn nonincreasing in k.

    Returns lo - 1 when fn(lo) is already False.
    """
    if not fn(lo):
        return lo - 1
    if fn(hi):
        return hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if fn(mid):
            lo = mid
        else:
            hi = mid
    return lo


def single_time_profile(
    model: IndicatorModel,
    t: float,
    eps: float = 1e-3,
    *,
    cut: float = 1e-13,
    q_switch: float = 0.05,
    max_window: int = 50_000_000,
) -> SingleTimeProfile:
    """Zone decomposition of X(t) with certified TV budget eps.

    eps bounds P(any index 1..base inactive) plus the Le Cam distance of the
    Poisson tail replacement; both parts are certified from the model's tail
    bounds, growing the window until the budget is met.  Profiles are pure
    functions of (model, t, eps) and are memoized on the model instance.
    """
    if t <= 0:
        raise ValueError("t must be positive")
    if eps <= 0:
        raise ValueError("eps must be positive")
    cache = model.__dict__.setdefault("_profile_cache", {})
    key = (t, eps, cut, q_switch)
    if key in cache:
        return cache[key]

    def active_whp(k):
        return float(model.comp_prob(np.array([k]), t)[0]) <= cut

    hi0 = max(4, model.min_tail_start(t))
    base = _largest_true(active_whp, 1, hi0)
    if base < 0:
        base = 0
    base_bias = base * cut  # sum of neglected inactivity probabilities

    def small_q(k):
        # indicator that prob(k) <= q_switch; nondecreasing in k
        return float(model.prob(np.array([k]), t)[0]) > q_switch

    horizon = model.max_index()
    if horizon is not None:
        max_window = min(max_window, horizon)
    lo_q = min(max(base + 1, 1), hi0)
    K0 = max(_largest_true(small_q, lo_q, hi0) + 1, base + 1, model.min_tail_start(t))
    K0 = min(K0, max_window)
    while True:
        tv = model.sq_tail_bound(K0, t) + base_bias
        if tv <= eps:
            break
        if K0 >= max_window:
            raise TruncationError(
                f"{model.label}: single-time window at t={t:g} cannot reach "
                f"tv budget {eps:.3g} (bound {tv:.3g} at K={K0})"
            )
        # grow the random window geometrically in width, not in raw index
        K0 = min(base + max(2 * (K0 - base), 64), max_window)
    tail_mean, tail_err = model.mean_tail(K0, t)
    ks = np.arange(base + 1, K0 + 1, dtype=np.int64)
    qs = np.asarray(model.prob(ks, t), dtype=float)
    profile = SingleTimeProfile(
        t=t,
        base=base,
        ks=ks,
        qs=qs,
        tail_mean=tail_mean,
        tv_bound=tv + tail_err,
    )
    if len(cache) < 64:
        cache[key] = profile
    return profile


REPLICATE_BLOCK = 4096  # replicate batch size; part of the determinism contract


def replicate_generator(seed: int, block_index: int) -> np.random.Generator:
    """Independent substream for one replicate block of a run."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(block_index)]))


def sample_counts_block(profile: SingleTimeProfile, size: int, rng: np.random.Generator) -> np.ndarray:
    """`size` independent draws of X(t) from a zone profile."""
    w = profile.qs.size
    counts = np.full(size, profile.base, dtype=np.int64)
    if w:
        rows = max(1, (1 << 24) // max(w, 1))  # bound the uniform buffer
        lo = 0
        while lo < size:
            hi = min(lo + rows, size)
            u = rng.random((hi - lo, w))
            counts[lo:hi] += (u < profile.qs[None, :]).sum(axis=1)
            lo = hi
    if profile.tail_mean > 0:
        counts += rng.poisson(profile.tail_mean, size)
    return counts


def sample_counts(
    model: IndicatorModel,
    t: float,
    size: int,
    eps: float = 1e-3,
    rng: np.random.Generator | int = 0,
) -> np.ndarray:
    """Independent replicates of X(t); law within certified TV eps of exact."""
    profile = single_time_profile(model, t, eps)
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    return sample_counts_block(profile, size, gen)


@dataclass(frozen=True)
class PathSample:
    """One monotone trajectory of X on an increasing time grid."""

    grid: np.ndarray
    counts: np.ndarray
    seed: object
    tv_bound: float = 0.0

    def __post_init__(self):
        if np.any(np.diff(self.counts) < 0):
            raise ValueError("path counts must be nondecreasing")


def sample_path(
    model: IndicatorModel,
    grid,
    eps: float = 1e-3,
    rng: np.random.Generator | int = 0,
    *,
    seed_record=None,
) -> PathSample:
    """One path of X on `grid` via activation-time coupling.

    Indices up to the window cutoff get exact activation times; the far
    tail contributes independent Poisson increments per grid cell with the
    exact mean increment, at certified TV cost below eps.
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0 or np.any(np.diff(grid) <= 0):
        raise ValueError("grid must be nonempty and strictly increasing")
    if grid[0] < 0:
        raise ValueError("grid times must be nonnegative")
    gen = rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)
    t_max = float(grid[-1])
    if t_max == 0.0:
        # prob(k, 0) = 0 for these models: nothing can have activated
        return PathSample(grid=grid, counts=np.zeros(grid.size, dtype=np.int64), seed=seed_record)

    profile = single_time_profile(model, t_max, eps)
    K0 = int(profile.ks[-1]) if profile.ks.size else profile.base
    times = model.activation_times(K0, gen)
    times.sort()
    counts = np.searchsorted(times, grid, side="right").astype(np.int64)

    if profile.tail_mean > 0:
        tail_means = np.empty(grid.size)
        for i, u in enumerate(grid):
            tail_means[i] = model.mean_tail(K0, float(u))[0] if u > 0 else 0.0
        increments = np.diff(np.concatenate(([0.0], tail_means)))
        increments = np.maximum(increments, 0.0)
        counts += np.cumsum(gen.poisson(increments)).astype(np.int64)

    return PathSample(grid=grid, counts=counts, seed=seed_record, tv_bound=profile.tv_bound)


# ---------------------------------------------------------------------------
# moment-bound verifier
# ---------------------------------------------------------------------------


def _log_mean_exp(x: np.ndarray) -> tuple[float, float]:
    """(log mean exp(x), relative stderr of mean exp(x)), overflow-safe."""
    m = float(np.max(x))
    w = np.exp(x - m)
    mean_w = float(np.mean(w))
    var_w = float(np.var(w, ddof=1)) if x.size > 1 else 0.0
    rel_stderr = math.sqrt(var_w / x.size) / mean_w if mean_w > 0 else 0.0
    return m + math.log(mean_w), rel_stderr


def exp_moment_bound_check(
    model: IndicatorModel,
    t: float,
    theta: float,
    n_samples: int,
    rng: np.random.Generator | int = 0,
    acc: Accuracy = DEFAULT_ACCURACY,
    eps: float = 1e-4,
) -> ValidationReport:
    """Monte Carlo check of the two product-form MGF bounds.

    (i)  E exp(theta (X - b)) <= exp(theta^2 e^{|theta|} a / 2)
    (ii) E exp(theta X)       <= exp((e^theta - 1) b)

    The report's estimate is the worse of the two ratios estimate/bound;
    the verdict passes iff both empirical means stay below their bounds
    within a 5-standard-error margin.
    """
    if n_samples < 10_000:
        raise ValueError("n_samples must be >= 1e4")
    b = mean_b(model, t, acc)
    a = var_a(model, t, acc)
    counts = sample_counts(model, t, n_samples, eps, rng).astype(float)

    log_est_centered, rerr_c = _log_mean_exp(theta * (counts - b))
    log_bound_centered = 0.5 * theta * theta * math.exp(abs(theta)) * a

    log_est_raw, rerr_r = _log_mean_exp(theta * counts)
    log_bound_raw = (math.exp(theta) - 1.0) * b

    margin_c = math.log1p(5.0 * rerr_c)
    margin_r = math.log1p(5.0 * rerr_r)
    ok = (log_est_centered <= log_bound_centered + margin_c) and (
        log_est_raw <= log_bound_raw + margin_r
    )
    worst = max(log_est_centered - log_bound_centered, log_est_raw - log_bound_raw)
    return ValidationReport(
        statistic=f"mgf-bound theta={theta:g}",
        model=model.label,
        t=t,
        n_samples=n_samples,
        estimate=math.exp(min(worst, 700.0)),
        target=1.0,
        stderr=max(rerr_c, rerr_r),
        tolerance=math.exp(max(margin_c, margin_r)) - 1.0,
        verdict=PASS if ok else FAIL,
    )


# ---------------------------------------------------------------------------
# checkpoint grids
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CheckpointGrid:
    """Level sequence v_n or w_n with the times where b or a first exceeds it."""

    kind: str                   # "upper" or "lower"
    params: dict
    levels: np.ndarray
    times: np.ndarray
    flags: tuple = ()

    def __post_init__(self):
        if np.any(np.diff(self.levels) <= 0):
            raise ValueError("levels must be strictly increasing")
        if np.any(np.diff(self.times) < 0):
            raise ValueError("times must be nondecreasing")


_T_FLOOR = 1e-12


def _crossing_time(fn, level: float, t_hint: float, rel_tol: float = 1e-9) -> tuple[float, bool]:
    """inf{t > 0 : fn(t) > level} for nondecreasing fn; bool flags floor hits."""
    if fn(_T_FLOOR) > level:
        return _T_FLOOR, True
    hi = max(t_hint, 1.0)
    lo = _T_FLOOR
    doublings = 0
    while fn(hi) <= level:
        lo = hi
        hi *= 2.0
        doublings += 1
        if doublings > 4000 or not math.isfinite(hi):
            raise BisectionError(f"level {level:g} never exceeded up to t={hi:g}")
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if fn(mid) > level:
            hi = mid
        else:
            lo = mid
    return hi, False


def _grid_levels(kind: str, model: IndicatorModel, n_max: int, *, kappa=None, rho=None, gamma=None):
    ns = np.arange(1, n_max + 1, dtype=float)
    if kind == "upper":
        if model.mu > 1.0:
            mu_rho = model.mu + rho
            expo = mu_rho * (1.0 - kappa) / (mu_rho - 1.0)
            return ns**expo
        q_rho = model.q + rho
        return np.exp(ns ** ((1.0 - kappa) / (q_rho + 1.0)))
    if model.mu > 1.0:
        return ns ** ((1.0 + gamma) / (model.mu - 1.0))
    return np.exp(ns ** ((1.0 + gamma) / (model.q + 1.0)))


def upper_grid(
    model: IndicatorModel,
    kappa: float,
    rho: float,
    n_max: int,
    acc: Accuracy = DEFAULT_ACCURACY,
) -> CheckpointGrid:
    """Times t_n = inf{t : b(t) > v_n(kappa, mu)} for n = 1..n_max."""
    if not (0 < kappa < 1 and 0 < rho < 1):
        raise ValueError("kappa and rho must lie in (0, 1)")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    levels = _grid_levels("upper", model, n_max, kappa=kappa, rho=rho)
    fn = lambda t: _b_eval(model, t, acc)
    times = np.empty(n_max)
    flags = []
    hint = 1.0
    for i, v in enumerate(levels):
        tt, floored = _crossing_time(fn, float(v), hint)
        times[i] = tt if i == 0 else max(tt, times[i - 1])
        hint = times[i]
        if floored:
            flags.append(f"n={i + 1}: level below b at the lower horizon")
    return CheckpointGrid(
        kind="upper",
        params={"kappa": kappa, "rho": rho, "mu": model.mu, "q": model.q},
        levels=levels,
        times=times,
        flags=tuple(flags),
    )


def lower_grid(
    model: IndicatorModel,
    gamma: float,
    n_max: int,
    acc: Accuracy = DEFAULT_ACCURACY,
) -> CheckpointGrid:
    """Times tau_n = inf{t : a(t) > w_n(gamma, mu)} for n = 1..n_max."""
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    levels = _grid_levels("lower", model, n_max, gamma=gamma)
    fn = lambda t: _a_eval(model, t, acc)
    times = np.empty(n_max)
    flags = []
    hint = 1.0
    for i, w in enumerate(levels):
        tt, floored = _crossing_time(fn, float(w), hint)
        times[i] = tt if i == 0 else max(tt, times[i - 1])
        hint = times[i]
        if floored:
            flags.append(f"n={i + 1}: level below a at the lower horizon")
    return CheckpointGrid(
        kind="lower",
        params={"gamma": gamma, "mu": model.mu, "q": model.q},
        levels=levels,
        times=times,
        flags=tuple(flags),
    )
