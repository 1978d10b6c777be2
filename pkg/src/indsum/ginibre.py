"""Radial point count of the infinite Ginibre process.

By Kostlan's representation the number of points in the disk of area
pi * t equals in law N(t) = sum_k 1{Gamma_k <= t} with independent
Gamma_k ~ Gamma(k, 1), so the whole indicator-sum machinery applies with
prob(k, t) = P{Gamma_k <= t}.

Closed forms implemented here:

    Var N(t) = t e^{-2t} (I_0(2t) + I_1(2t))
             = sqrt(t/pi) - 1/(16 sqrt(pi t)) + o(t^{-1/2})

    discrete Bessel law  P{Y = n} ~ (t/2)^{2n+nu} / (n! Gamma(n+nu+1)),
    normalized by I_nu(t), with closed-form MGF and moments via the
    Bessel ratio R_nu = I_{nu+1} / I_nu  (t (1 - R_nu(t)) -> nu + 1/2).

    the window-variance fraction f(x) with f'(x) = 2 sqrt(pi) Phi(x) Phi(-x),
    governing how much of Var N(t) lives in indices t +/- x sqrt(t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .core import IndicatorModel
from .specfun import (
    bessel_i_scaled,
    log_gamma,
    normal_cdf,
    reg_inc_gamma_lower,
    reg_inc_gamma_upper,
)

__all__ = [
    "GinibreModel",
    "var_exact",
    "window_variance",
    "window_fraction_f",
    "solve_window_x",
    "WindowRoot",
    "DiscreteBessel",
    "lil_envelope_ginibre",
]


def var_exact(t: float) -> float:
    """Var N(t) = t e^{-2t} (I_0(2t) + I_1(2t)), overflow-free for large t."""
    if t <= 0:
        raise ValueError("t must be positive")
    return t * (bessel_i_scaled(0.0, 2.0 * t) + bessel_i_scaled(1.0, 2.0 * t))


class GinibreModel(IndicatorModel):
    """Indicator-sum model of the Ginibre radial count (mu = 2)."""

    label = "ginibre"
    mu = 2.0
    q = 0.0

    def prob(self, ks, t):
        return reg_inc_gamma_lower(np.asarray(ks, dtype=float), t)

    def comp_prob(self, ks, t):
        return reg_inc_gamma_upper(np.asarray(ks, dtype=float), t)

    def mean_closed_form(self, t: float):
        return float(t)

    def var_closed_form(self, t: float):
        return var_exact(t) if t > 0 else 0.0

    def min_tail_start(self, t: float) -> int:
        return int(math.ceil(t)) + 1

    def mean_tail(self, K: int, t: float):
        # sum_{k>K} P{Poisson(t) >= k} = E(Poisson(t) - K)^+ exactly
        if t == 0.0:
            return 0.0, 0.0
        hi = t * reg_inc_gamma_lower(float(K), t)
        lo = K * reg_inc_gamma_lower(float(K + 1), t)
        return max(hi - lo, 0.0), 4e-16 * (hi + lo) + 1e-300

    def sq_tail_bound(self, K: int, t: float) -> float:
        # q_{k+1}/q_k <= t/(k+1): geometric beyond K once K >= t
        if t == 0.0:
            return 0.0
        r = t / (K + 2.0)
        if r >= 1.0:
            return math.inf
        q1 = float(reg_inc_gamma_lower(float(K + 1), t))
        return q1 * q1 / (1.0 - r * r)

    def var_tail(self, K: int, t: float):
        mean_val, mean_err = self.mean_tail(K, t)
        sq = min(self.sq_tail_bound(K, t), mean_val)
        return mean_val - 0.5 * sq, 0.5 * sq + mean_err

    def activation_times(self, K: int, rng: np.random.Generator) -> np.ndarray:
        # independent Gamma(k, 1) per index: the independence across k is what
        # makes Var N(t) ~ sqrt(t/pi); a shared renewal stream would turn the
        # count into a plain Poisson process with variance t.
        return rng.standard_gamma(np.arange(1.0, K + 1.0))


# ---------------------------------------------------------------------------
# window variance around the bulk index t
# ---------------------------------------------------------------------------


def window_variance(t: float, x: float) -> float:
    """Variance carried by indices k in (floor(t - x sqrt(t)) - 1, floor(t + x sqrt(t))]."""
    if x <= 0:
        raise ValueError("x must be positive")
    c = math.floor(t - x * math.sqrt(t)) - 1
    d = math.floor(t + x * math.sqrt(t))
    if c < 1:
        raise ValueError("t too small: window must start at index >= 1")
    if d <= c:
        raise ValueError("empty index window")
    ks = np.arange(c + 1, d + 1, dtype=float)
    return float(np.sum(reg_inc_gamma_lower(ks, t) * reg_inc_gamma_upper(ks, t)))


def window_fraction_f(x) -> float:
    """Limit fraction of Var N(t) captured by the +/- x sqrt(t) window.

    f(0) = 0, f is strictly increasing with f' = 2 sqrt(pi) Phi(x) Phi(-x),
    and f(x) -> 1 as x -> infinity.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be >= 0")
    root2 = math.sqrt(2.0)
    e = np.exp(-0.5 * x * x)
    out = (
        normal_cdf(root2 * x)
        - normal_cdf(-root2 * x)
        - root2 * e * normal_cdf(x)
        + root2 * e * normal_cdf(-x)
        + 2.0 * math.sqrt(math.pi) * x * normal_cdf(-x) * normal_cdf(x)
    )
    return float(out) if np.ndim(out) == 0 else out


class WindowRoot(NamedTuple):
    x: float
    capped: bool


_X_CAP = 8.0  # f(8) is 1 to double precision


def solve_window_x(varsigma: float, tol: float = 1e-10) -> WindowRoot:
    """Unique x > 0 with f(x) = 1 - varsigma, by bisection on [0, 8].

    For varsigma so small that the root exceeds the bracket, the cap is
    returned with capped=True.
    """
    if not 0.0 < varsigma < 1.0:
        raise ValueError("varsigma must lie in (0, 1)")
    target = 1.0 - varsigma
    if window_fraction_f(_X_CAP) < target:
        return WindowRoot(_X_CAP, True)
    lo, hi = 0.0, _X_CAP
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if window_fraction_f(mid) < target:
            lo = mid
        else:
            hi = mid
        if abs(window_fraction_f(mid) - target) < tol:
            return WindowRoot(mid, False)
    return WindowRoot(0.5 * (lo + hi), False)


# ---------------------------------------------------------------------------
# discrete Bessel distribution
# ---------------------------------------------------------------------------


@dataclass
class DiscreteBessel:
    """Integer law with pmf (t/2)^{2n+nu} / (I_nu(t) n! Gamma(n+nu+1))."""

    nu: float
    t: float

    def __post_init__(self):
        if self.nu <= -1:
            raise ValueError("nu must be > -1")
        if self.t <= 0:
            raise ValueError("t must be > 0")
        self._cum = None

    def _log_norm(self) -> float:
        # log I_nu(t) via the scaled Bessel function
        return math.log(bessel_i_scaled(self.nu, self.t)) + self.t

    def logpmf(self, n):
        n = np.asarray(n, dtype=float)
        if np.any(n < 0):
            raise ValueError("n must be >= 0")
        out = (
            (2.0 * n + self.nu) * math.log(self.t / 2.0)
            - log_gamma(n + 1.0)
            - log_gamma(n + self.nu + 1.0)
            - self._log_norm()
        )
        return out

    def pmf(self, n):
        out = np.exp(self.logpmf(n))
        return float(out) if np.ndim(out) == 0 else out

    def mgf(self, p: float) -> float:
        """E e^{pY} = e^{-nu p / 2} I_nu(e^{p/2} t) / I_nu(t)."""
        s = math.exp(0.5 * p) * self.t
        log_ratio = (
            math.log(bessel_i_scaled(self.nu, s)) + s
            - math.log(bessel_i_scaled(self.nu, self.t)) - self.t
        )
        return math.exp(-0.5 * self.nu * p + log_ratio)

    def moments(self) -> tuple[float, float]:
        """(mean, variance) via the Bessel ratios R_nu = I_{nu+1}/I_nu."""
        r0 = bessel_i_scaled(self.nu + 1.0, self.t) / bessel_i_scaled(self.nu, self.t)
        r1 = bessel_i_scaled(self.nu + 2.0, self.t) / bessel_i_scaled(self.nu + 1.0, self.t)
        mean = 0.5 * self.t * r0
        var = 0.25 * self.t * self.t * r0 * (r1 - r0) + 0.5 * self.t * r0
        return mean, var

    def _cumulative(self) -> np.ndarray:
        if self._cum is None:
            mean, var = self.moments()
            n_max = int(mean + 50.0 * math.sqrt(var + 1.0) + 64)
            while True:
                cum = np.cumsum(self.pmf(np.arange(n_max + 1)))
                if 1.0 - cum[-1] <= 1e-12:
                    break
                n_max *= 2
            self._cum = cum
        return self._cum

    def sample(self, rng: np.random.Generator, size=None):
        """Exact inversion sampling from the cached cumulative table."""
        cum = self._cumulative()
        u = rng.random(size)
        out = np.searchsorted(cum, u, side="right")
        return int(out) if size is None else out.astype(np.int64)


# ---------------------------------------------------------------------------
# LIL envelope
# ---------------------------------------------------------------------------


def lil_envelope_ginibre(t: float) -> tuple[float, float, float]:
    """(center, scale, constant) of the almost-sure envelope for the disk count:

        limsup (N(t) - t) / (t^{1/4} (log t)^{1/2}) = pi^{-1/4}.
    """
    if t <= math.e:
        raise ValueError("t must exceed e")
    scale = t**0.25 * math.sqrt(math.log(t))
    return float(t), scale, math.pi**-0.25
