"""Karlin occupancy scheme: box families, exact moments, asymptotic constants.

A box-probability family is defined through the counting function
rho(t) = #{k : 1/p_k <= t} it should realize:

    PowerLaw(alpha)          p_k ~ k^{-1/alpha},  rho(t) ~ (t/Z)^alpha
    BorderlinePower(s)       p_k = c/(k log^s(k+2)),  rho(t) ~ t L(t),
                             L(t) = c (log t)^{-s}  (index 1 with vanishing L)
    DeHaanPoly(beta)         rho in de Haan's class, ell(t) ~ (log t)^beta
    DeHaanStretched(sig,lam) ell(t) ~ exp(sig (log t)^lam)

Poissonized occupancy counts K_j(t) (boxes with >= j balls at Poisson time
t) are sums of independent indicators with prob(k, t) = P{Gamma_j <= p_k t};
their mean/variance series are evaluated with certified tails:

  * PowerLaw: tails summed exactly through Hurwitz-zeta power series - the
    raw series needs ~1e15 terms at absolute 1e-9 for j = 1, the zeta form
    a few hundred.
  * BorderlinePower: midpoint Euler-Maclaurin integral plus a closed-form
    remainder bracket.
  * de Haan families: superexponential decay, plain truncation bounds.

The deterministic scheme (exactly n balls) gets exact means/variances from
binomial box laws, including the O(K^2) pairwise covariance sum with a
certified bound on omitted pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy import special as sp

from .core import IndicatorModel, _blocked_sum
from .errors import HorizonError, TruncationError
from .specfun import Accuracy, DEFAULT_ACCURACY

__all__ = [
    "RhoSpec",
    "PowerLaw",
    "BorderlinePower",
    "DeHaanPoly",
    "DeHaanStretched",
    "ExplicitBoxes",
    "KarlinModel",
    "build_pk",
    "rho_eval",
    "hat_L",
    "mean_Kj",
    "var_Kj",
    "mean_Kj_star",
    "ConstantSet",
    "asymptotic_constants",
    "det_mean",
    "det_var",
    "DetVarResult",
    "det_sample",
    "occupancy_at_least",
    "occupancy_exactly",
    "exotic_condition_probe",
    "exotic_ratio_trend",
    "ExoticReport",
    "parse_rho_spec",
]

_LOG_HALF = math.log(0.5)


def _log_hurwitz_zeta(s, a: float):
    """log of zeta(s, a) = sum_{r>=0} (a+r)^{-s}, stable for any s, a >= 1.

    scipy's zeta under/overflows once a^{-s} leaves the double range; the
    Euler-Maclaurin expansion (through B8, relative error ~ (s/a)^9) covers
    a >= 8 s, and a bounded geometric-style log-sum covers the rest.
    """
    s = np.asarray(s, dtype=float)
    out = np.empty(s.shape or (1,))
    flat = s.reshape(-1)
    for i, si in enumerate(flat):
        if si * math.log(a) < 600.0:
            z = sp.zeta(si, a)
            if z > 0 and math.isfinite(z):
                out.reshape(-1)[i] = math.log(z)
                continue
        if a >= 8.0 * si:
            # a^{-s} (a/(s-1) + 1/2 + B2 s/(2 a) - ...) with Bernoulli terms
            core = a / (si - 1.0) + 0.5
            rising = si
            core += rising / (12.0 * a)
            rising *= (si + 1.0) * (si + 2.0)
            core -= rising / (720.0 * a**3)
            rising *= (si + 3.0) * (si + 4.0)
            core += rising / (30240.0 * a**5)
            rising *= (si + 5.0) * (si + 6.0)
            core -= rising / (1209600.0 * a**7)
            out.reshape(-1)[i] = -si * math.log(a) + math.log(core)
            continue
        # a < 8 s: terms (a/(a+r))^s decay like e^{-s r / (a + r)}; the sum
        # needs O(a log(1/eps) / s) <= O(8 * 41) terms
        total = 1.0
        r = 1
        while True:
            term = math.exp(si * math.log(a / (a + r)))
            total += term
            if term < 1e-18 * total or r > 100_000:
                break
            r += 1
        out.reshape(-1)[i] = -si * math.log(a) + math.log(total)
    return out.reshape(s.shape) if s.shape else float(out[0])


# ---------------------------------------------------------------------------
# series kernels: g(p) summed over boxes, with small-p structure
# ---------------------------------------------------------------------------


class TailKernel:
    """One summand family g(p_k) with its small-p envelope.

    coupling * p <= 1/2 marks the regime where the envelope and the
    coefficient series are valid:  exp(log_lead) * p^m0 * (1 - corr * p)
    <= g(p) <= exp(log_lead) * p^m0.
    """

    coupling: float
    m0: int
    log_lead: float
    corr: float

    def eval(self, p):
        raise NotImplementedError

    def coeff_logs(self, n_terms: int):
        """(signs, log magnitudes) of g(p) = sum c_m p^m, m = m0..m0+n_terms-1.

        None when no coefficient series is implemented (bound-only tails).
        """
        return None


def _poisson_cdf_coeffs_y(j: int, n_terms: int) -> np.ndarray:
    """Coefficients of P(j, y) = sum_{n>=0} a_n y^{j+n} (alternating, |a_n|<=1)."""
    ns = np.arange(n_terms, dtype=float)
    log_a = -sp.gammaln(j) - sp.gammaln(ns + 1.0) - np.log(j + ns)
    return np.where(ns % 2 == 0, 1.0, -1.0) * np.exp(log_a)


class PoissonMeanKernel(TailKernel):
    """g(p) = P{Poisson(t p) >= j} = P(j, t p)."""

    def __init__(self, j: int, t: float):
        self.j, self.t = j, t
        self.coupling = t
        self.m0 = j
        self.log_lead = j * math.log(t) - sp.gammaln(j + 1)
        self.corr = t

    def eval(self, p):
        return sp.gammainc(self.j, self.t * np.asarray(p, dtype=float))

    def coeff_logs(self, n_terms):
        a = _poisson_cdf_coeffs_y(self.j, n_terms)
        ms = self.m0 + np.arange(n_terms, dtype=float)
        return np.sign(a), np.log(np.abs(a)) + ms * math.log(self.t)


class PoissonVarKernel(TailKernel):
    """g(p) = P(j, t p) (1 - P(j, t p))."""

    def __init__(self, j: int, t: float):
        self.j, self.t = j, t
        self.coupling = t
        self.m0 = j
        self.log_lead = j * math.log(t) - sp.gammaln(j + 1)
        self.corr = 2.0 * t

    def eval(self, p):
        y = self.t * np.asarray(p, dtype=float)
        return sp.gammainc(self.j, y) * sp.gammaincc(self.j, y)

    def coeff_logs(self, n_terms):
        # coefficients of P - P^2 in y, then fold in powers of t
        a = _poisson_cdf_coeffs_y(self.j, n_terms + self.j)
        sq = np.convolve(a, a)[: n_terms + self.j]  # coeffs of P^2 at y^{2j+i}
        c = np.zeros(n_terms)
        c[: n_terms] = a[:n_terms]
        # P^2 starts at power 2j = m0 + j: subtract with offset j
        upto = n_terms - self.j
        if upto > 0:
            c[self.j :] -= sq[:upto]
        ms = self.m0 + np.arange(n_terms, dtype=float)
        with np.errstate(divide="ignore"):
            return np.sign(c), np.log(np.abs(c)) + ms * math.log(self.t)


class PoissonStarKernel(TailKernel):
    """g(p) = e^{-t p} (t p)^j / j!  (exactly j balls)."""

    def __init__(self, j: int, t: float):
        self.j, self.t = j, t
        self.coupling = t
        self.m0 = j
        self.log_lead = j * math.log(t) - sp.gammaln(j + 1)
        self.corr = t

    def eval(self, p):
        y = self.t * np.asarray(p, dtype=float)
        out = np.zeros_like(y)
        pos = y > 0
        out[pos] = np.exp(self.j * np.log(y[pos]) - y[pos] - sp.gammaln(self.j + 1))
        return out

    def coeff_logs(self, n_terms):
        ns = np.arange(n_terms, dtype=float)
        ms = self.m0 + ns
        logmag = ms * math.log(self.t) - sp.gammaln(self.j + 1) - sp.gammaln(ns + 1.0)
        return np.where(ns % 2 == 0, 1.0, -1.0), logmag


class BinomMeanKernel(TailKernel):
    """g(p) = P{Binom(n, p) >= j}."""

    def __init__(self, j: int, n: int):
        self.j, self.n = j, n
        self.coupling = float(n)
        self.m0 = j
        self.log_lead = _log_comb(n, j)
        self.corr = float(n)

    def eval(self, p):
        if self.n < self.j:
            return np.zeros_like(np.asarray(p, dtype=float))
        return sp.betainc(self.j, self.n - self.j + 1, np.asarray(p, dtype=float))

    def coeff_logs(self, n_terms):
        if self.j != 1:
            return None
        # 1 - (1-p)^n = sum_{M>=1} (-1)^{M+1} C(n, M) p^M
        ms = np.arange(1, n_terms + 1)
        logmag = np.array([_log_comb(self.n, int(m)) for m in ms])
        signs = np.where((ms + 1) % 2 == 0, 1.0, -1.0)
        return signs, logmag


class BinomVarDiagKernel(TailKernel):
    """g(p) = P{B >= j} P{B < j} for B ~ Binom(n, p)."""

    def __init__(self, j: int, n: int):
        self.j, self.n = j, n
        self.coupling = float(n)
        self.m0 = j
        self.log_lead = _log_comb(n, j)
        self.corr = 2.0 * n

    def eval(self, p):
        if self.n < self.j:
            return np.zeros_like(np.asarray(p, dtype=float))
        p = np.asarray(p, dtype=float)
        hi = sp.betainc(self.j, self.n - self.j + 1, p)
        lo = sp.betaincc(self.j, self.n - self.j + 1, p)
        return hi * lo

    def coeff_logs(self, n_terms):
        if self.j != 1:
            return None
        # u - u^2 with u = 1-(1-p)^n: coefficient (-1)^{M+1} (C(2n,M) - C(n,M))
        ms = np.arange(1, n_terms + 1)
        logmag = np.empty(len(ms))
        for i, m in enumerate(ms):
            lc2 = _log_comb(2 * self.n, int(m))
            lc1 = _log_comb(self.n, int(m))
            logmag[i] = lc2 + math.log1p(-math.exp(min(lc1 - lc2, -1e-18)))
        signs = np.where((ms + 1) % 2 == 0, 1.0, -1.0)
        return signs, logmag


def _log_comb(n: int, m: int) -> float:
    if m < 0 or m > n:
        return -math.inf
    return float(sp.gammaln(n + 1) - sp.gammaln(m + 1) - sp.gammaln(n - m + 1))


# ---------------------------------------------------------------------------
# box-probability families
# ---------------------------------------------------------------------------


class RhoSpec:
    """Abstract box-probability family with certified tail arithmetic."""

    variant: str
    alpha_class: float  # regular-variation index of rho: 0, (0,1), or 1
    mu: float
    q: float

    # -- probabilities ------------------------------------------------------
    def log_pk(self, ks) -> np.ndarray:
        raise NotImplementedError

    def pk(self, ks) -> np.ndarray:
        return np.exp(self.log_pk(ks))

    def inv_pk(self, ks) -> np.ndarray:
        """1/p_k, increasing in k."""
        return np.exp(-self.log_pk(ks))

    def count_horizon(self) -> int:
        """Largest index at which 1/p_k can be evaluated."""
        return 1 << 53

    # -- certified tails ----------------------------------------------------
    def log_tail_power(self, m: int, K: int) -> float:
        """log of a certified upper bound on sum_{k>K} p_k^m."""
        raise NotImplementedError

    def log_tail_weighted(self, m: int, K: int) -> float:
        """log of a certified upper bound on sum_{k>K} k p_k^m."""
        raise NotImplementedError

    def series_tail(self, kernel: TailKernel, K: int) -> tuple[float, float]:
        """(value, certified error) for sum_{k>K} g(p_k).

        Only called once kernel.coupling * p_{K+1} <= 1/2; returns
        (0, inf) otherwise so callers grow K.
        """
        raise NotImplementedError

    def _tail_valid(self, kernel: TailKernel, K: int) -> bool:
        if K >= self.count_horizon():
            return True
        lp = float(self.log_pk(np.array([K + 1]))[0])
        return math.log(kernel.coupling) + lp <= _LOG_HALF

    # -- asymptotic shape ---------------------------------------------------
    def rho_smooth(self, t: float) -> float:
        """Smooth version of the realized counting function."""
        raise NotImplementedError

    def to_text(self) -> str:
        raise NotImplementedError

    def __str__(self):
        return self.to_text()


def _bound_only_tail(spec: RhoSpec, kernel: TailKernel, K: int) -> tuple[float, float]:
    if not spec._tail_valid(kernel, K):
        return 0.0, math.inf
    return 0.0, math.exp(kernel.log_lead + spec.log_tail_power(kernel.m0, K))


def _zeta_series_tail(spec, kernel: TailKernel, K: int, alpha: float, log_z: float):
    """Exact tail via sum_m c_m sum_{k>K} p_k^m with Hurwitz-zeta power sums."""
    if not spec._tail_valid(kernel, K):
        return 0.0, math.inf
    n_terms = 24
    prev = None
    while True:
        coeffs = kernel.coeff_logs(n_terms)
        if coeffs is None:
            return _bound_only_tail(spec, kernel, K)
        signs, logmag = coeffs
        ms = kernel.m0 + np.arange(len(signs), dtype=float)
        logzeta = _log_hurwitz_zeta(ms / alpha, K + 1.0)
        terms = signs * np.exp(logmag - ms * log_z + logzeta)
        total = math.fsum(terms.tolist())
        tail_mag = float(np.max(np.abs(terms[-3:])))
        if tail_mag <= 1e-17 * (abs(total) + 1e-300):
            err = 4.0 * tail_mag + 1e-15 * float(np.sum(np.abs(terms)))
            return total, err
        if prev is not None and n_terms >= 220:
            # conservative: alternating-envelope remainder
            return total, 8.0 * tail_mag + 1e-15 * float(np.sum(np.abs(terms)))
        prev = total
        n_terms *= 2


@dataclass(frozen=True)
class PowerLaw(RhoSpec):
    """p_k = k^{-1/alpha} / zeta(1/alpha); rho(t) = floor((t/Z)^alpha)."""

    alpha: float

    def __post_init__(self):
        if not 0.0 < self.alpha < 1.0:
            raise ValueError("alpha must lie in (0, 1)")

    variant = "powerlaw"
    mu = 1.0
    q = 0.0

    @property
    def alpha_class(self):
        return self.alpha

    @property
    def _log_z(self) -> float:
        return math.log(sp.zeta(1.0 / self.alpha, 1.0))

    def log_pk(self, ks):
        return -np.log(np.asarray(ks, dtype=float)) / self.alpha - self._log_z

    def log_tail_power(self, m, K):
        return float(-m * self._log_z + _log_hurwitz_zeta(m / self.alpha, K + 1.0))

    def log_tail_weighted(self, m, K):
        s = m / self.alpha - 1.0
        if s <= 1.0:
            return math.inf
        return float(-m * self._log_z + _log_hurwitz_zeta(s, K + 1.0))

    def series_tail(self, kernel, K):
        return _zeta_series_tail(self, kernel, K, self.alpha, self._log_z)

    def rho_smooth(self, t):
        return (t / math.exp(self._log_z)) ** self.alpha

    def to_text(self):
        return f"powerlaw alpha={self.alpha:g}"


@dataclass(frozen=True)
class BorderlinePower(RhoSpec):
    """p_k = c / (k log^s(k+2)): rho(t) ~ t L(t) with L(t) = c (log t)^{-s}, s > 1."""

    log_exponent: float

    def __post_init__(self):
        if self.log_exponent <= 1.0:
            raise ValueError("log_exponent must exceed 1")
        object.__setattr__(self, "_z_cache", self._normalization())

    variant = "borderline"
    alpha_class = 1.0
    mu = 1.0
    q = 0.0

    def _raw(self, x):
        x = np.asarray(x, dtype=float)
        return 1.0 / (x * np.log(x + 2.0) ** self.log_exponent)

    def _normalization(self) -> float:
        head_k = 1_000_000
        ks = np.arange(1, head_k + 1, dtype=float)
        head = float(np.sum(self._raw(ks)))
        tail, _ = integrate.quad(
            lambda u: self._raw(math.exp(u)) * math.exp(u),
            math.log(head_k + 0.5),
            math.log(head_k + 0.5) + 60.0,
            limit=200,
        )
        s = self.log_exponent
        # analytic continuation beyond the quad horizon
        u_top = math.log(head_k + 0.5) + 60.0
        tail += (u_top ** (1.0 - s)) / (s - 1.0)
        return head + tail

    @property
    def c_norm(self) -> float:
        """Normalization constant c = 1/Z in p_k = c/(k log^s(k+2))."""
        return 1.0 / self._z_cache

    def log_pk(self, ks):
        ks = np.asarray(ks, dtype=float)
        return (
            -np.log(ks)
            - self.log_exponent * np.log(np.log(ks + 2.0))
            - math.log(self._z_cache)
        )

    def log_tail_power(self, m, K):
        s = self.log_exponent
        c = self.c_norm
        logk = math.log(K)
        if m == 1:
            # sum <= integral of c/(x log^s x) from K
            return math.log(c) + (1.0 - s) * math.log(logk) - math.log(s - 1.0)
        return (
            m * math.log(c)
            - m * s * math.log(math.log(K + 2.0))
            + (1.0 - m) * math.log(K)
            - math.log(m - 1.0)
        )

    def log_tail_weighted(self, m, K):
        s = self.log_exponent
        c = self.c_norm
        if m == 1:
            return math.inf
        if m == 2:
            return 2.0 * math.log(c) + (1.0 - 2.0 * s) * math.log(math.log(K)) - math.log(
                2.0 * s - 1.0
            )
        return (
            m * math.log(c)
            - m * s * math.log(math.log(K + 2.0))
            + (2.0 - m) * math.log(K)
            - math.log(m - 2.0)
        )

    def series_tail(self, kernel, K):
        if not self._tail_valid(kernel, K):
            return 0.0, math.inf
        c = self.c_norm
        s = self.log_exponent

        def p_of_x(x):
            return c / (x * math.log(x + 2.0) ** s)

        x1 = max(4.0 * (K + 1.0), kernel.coupling * c * 1e9, 1e6)
        f = lambda u: float(kernel.eval(np.array([p_of_x(math.exp(u))]))[0]) * math.exp(u)
        a, b = math.log(K + 0.5), math.log(x1)
        val, qerr = integrate.quad(f, a, b, limit=400, epsabs=1e-13, epsrel=1e-11)

        # midpoint Euler-Maclaurin correction bound
        h = max(0.01 * (K + 0.5), 0.5)
        x0 = K + 0.5
        g = lambda x: float(kernel.eval(np.array([p_of_x(x)]))[0])
        fprime = abs(g(x0 + h) - g(x0 - h)) / (2.0 * h)
        em_err = 1.5 * fprime / 24.0

        # remainder beyond x1 from the small-p envelope bracket
        m0 = kernel.m0
        if m0 == 1:
            hi = c * math.log(x1) ** (1.0 - s) / (s - 1.0)
            lo = c * math.log(x1 + 2.0) ** (1.0 - s) / (s - 1.0)
        else:
            hi = (c**m0) * math.log(x1) ** (-m0 * s) * x1 ** (1.0 - m0) / (m0 - 1.0)
            lo = 0.0
        lead = math.exp(kernel.log_lead)
        r_hi = lead * hi
        r_lo = lead * lo * max(0.0, 1.0 - kernel.corr * p_of_x(x1))
        value = val + 0.5 * (r_hi + r_lo)
        err = qerr + em_err + 0.5 * (r_hi - r_lo)
        return value, err

    def rho_smooth(self, t):
        # solve Z k log^s(k+2) = t for k
        if t <= self.inv_pk(np.array([1]))[0]:
            return 0.0
        s = self.log_exponent
        k = max(t * self.c_norm / math.log(t + 2.0) ** s, 1.0)
        for _ in range(80):
            f = math.log(k) + s * math.log(math.log(k + 2.0)) + math.log(self._z_cache) - math.log(t)
            fp = 1.0 / k + s / ((k + 2.0) * math.log(k + 2.0))
            step = f / fp
            k = max(k - step, 0.5 * k)
            if abs(step) < 1e-12 * k:
                break
        return k

    def L_of(self, t: float) -> float:
        """Slowly varying part of rho(t) ~ t L(t)."""
        return self.c_norm / math.log(t) ** self.log_exponent

    def hat_L(self, t: float) -> float:
        """Integrated tail: hat L(t) = int_t^inf L(y)/y dy = c (log t)^{1-s}/(s-1)."""
        s = self.log_exponent
        return self.c_norm * math.log(t) ** (1.0 - s) / (s - 1.0)

    def hat_L_realized(self, t: float) -> float:
        """Probability mass of boxes with 1/p_k > t: the finite-t version of
        hat_L that Var K_1(t) ~ E K_1(t) ~ t * hat_L(t) actually tracks.

        The closed form above agrees only as log t -> infinity (the realized
        L sits at log k rather than log t); this one converges fast.
        """
        k_at = rho_eval(self, t)
        return math.exp(self.log_tail_power(1, max(k_at, 1)))

    def to_text(self):
        return f"borderline log_exponent={self.log_exponent:g}"


_STRETCH_CACHE: dict = {}


class _DeHaanBase(RhoSpec):
    """Shared machinery for the de Haan (slowly varying rho) families."""

    alpha_class = 0.0

    def _u_of_k(self, ks: np.ndarray) -> np.ndarray:
        """log(1/p_k) before normalization; strictly increasing."""
        raise NotImplementedError

    def _log_z(self) -> float:
        raise NotImplementedError

    def log_pk(self, ks):
        return -self._u_of_k(np.asarray(ks, dtype=float)) - self._log_z()

    def series_tail(self, kernel, K):
        return _bound_only_tail(self, kernel, K)

    def log_tail_weighted(self, m, K):
        # k p_k is eventually decreasing for these families
        lead = math.log(K + 1.0) + float(self.log_pk(np.array([K + 1]))[0])
        return math.log(2.0) + lead + self.log_tail_power(m - 1, K) if m >= 2 else math.inf


@dataclass(frozen=True)
class DeHaanPoly(_DeHaanBase):
    """1/p_k ~ exp(((beta+1) k)^{1/(beta+1)}): ell(t) ~ (log t)^beta, mu = 1 + 1/beta."""

    beta: float

    def __post_init__(self):
        if self.beta <= 0:
            raise ValueError("beta must be positive")
        object.__setattr__(self, "_z", self._compute_z())

    variant = "dehaan-poly"
    q = 0.0

    @property
    def mu(self):
        return 1.0 + 1.0 / self.beta

    def _u_of_k(self, ks):
        return ((self.beta + 1.0) * ks) ** (1.0 / (self.beta + 1.0))

    def _compute_z(self) -> float:
        b1 = self.beta + 1.0
        k_stop = int(60.0**b1 / b1) + 8
        ks = np.arange(1, k_stop + 1, dtype=float)
        head = float(np.sum(np.exp(-self._u_of_k(ks))))
        u_stop = self._u_of_k(np.array([float(k_stop)]))[0]
        tail = math.exp(sp.gammaln(b1) + math.log(sp.gammaincc(b1, u_stop)))
        return head + tail

    def _log_z(self):
        return math.log(self._z)

    def log_tail_power(self, m, K):
        b1 = self.beta + 1.0
        u_k = float(self._u_of_k(np.array([float(K)]))[0])
        z = m * u_k
        # integral bound: m^{-(b1)} Gamma(b1) Q(b1, m u_K)
        if z < 600.0:
            q = sp.gammaincc(b1, z)
            log_q = math.log(q) if q > 0 else -z + (b1 - 1.0) * math.log(z) - float(sp.gammaln(b1))
        else:
            log_q = -z + (b1 - 1.0) * math.log(z) - float(sp.gammaln(b1)) + math.log(2.0)
        return -b1 * math.log(m) + float(sp.gammaln(b1)) + log_q - m * self._log_z()

    def rho_smooth(self, t):
        x = math.log(t) - self._log_z()
        if x <= 0:
            return 0.0
        return x ** (self.beta + 1.0) / (self.beta + 1.0)

    def ell_hat(self, t: float) -> float:
        """Realized de Haan auxiliary function (log(t/Z))^beta."""
        return (math.log(t) - self._log_z()) ** self.beta

    def to_text(self):
        return f"dehaan-poly beta={self.beta:g}"


@dataclass(frozen=True)
class DeHaanStretched(_DeHaanBase):
    """ell(t) ~ exp(sigma (log t)^lambda): mu = 1, q = 1/lambda - 1."""

    sigma: float
    lam: float

    def __post_init__(self):
        if self.sigma <= 0:
            raise ValueError("sigma must be positive")
        if not 0.0 < self.lam < 1.0:
            raise ValueError("lambda must lie in (0, 1)")
        object.__setattr__(self, "_u_cache", self._march_u())
        object.__setattr__(self, "_z", self._compute_z())

    variant = "dehaan-stretched"
    mu = 1.0

    @property
    def q(self):
        return 1.0 / self.lam - 1.0

    def _ell(self, u):
        return np.exp(self.sigma * np.asarray(u, dtype=float) ** self.lam)

    def _march_u(self) -> np.ndarray:
        """u_k solving R(u_k) = k with R(u) = int_1^u e^{sigma y^lam} dy.

        Newton steps with the derivative known exactly; the running value of
        R is kept by Gauss-Legendre increments over each step.
        """
        key = (self.sigma, self.lam)
        if key in _STRETCH_CACHE:
            return _STRETCH_CACHE[key]
        nodes, weights = np.polynomial.legendre.leggauss(8)

        def seg(a, b):
            half, mid = 0.5 * (b - a), 0.5 * (a + b)
            return half * float(np.dot(weights, self._ell(mid + half * nodes)))

        us = [0.0]  # index 0 unused
        u, r, k = 1.0, 0.0, 1
        while u < 46.0 and k <= 200_000:
            target = float(k)
            for _ in range(30):
                du = (target - r) / float(self._ell(u))
                r += seg(u, u + du)
                u += du
                if abs(target - r) < 1e-12 * max(1.0, target):
                    break
            us.append(u)
            k += 1
        arr = np.asarray(us)
        _STRETCH_CACHE[key] = arr
        return arr

    def count_horizon(self) -> int:
        return len(self._u_cache) - 1

    def _u_of_k(self, ks):
        ks = np.asarray(ks, dtype=float)
        idx = np.rint(ks).astype(int)
        if np.any(idx < 1) or np.any(idx >= len(self._u_cache)):
            raise HorizonError(
                f"dehaan-stretched built up to k={len(self._u_cache) - 1}; requested {idx.max()}"
            )
        return self._u_cache[idx]

    def _compute_z(self) -> float:
        # tail beyond the march horizon is below e^{-46}
        return float(np.sum(np.exp(-self._u_cache[1:]))) + 1e-19

    def _log_z(self):
        return math.log(self._z)

    def log_tail_power(self, m, K):
        if K >= self.count_horizon():
            u_k = float(self._u_cache[-1])
        else:
            u_k = float(self._u_cache[K])
        slope = self.sigma * self.lam * u_k ** (self.lam - 1.0)
        if m <= slope:
            return math.inf
        return (
            self.sigma * u_k**self.lam
            - m * u_k
            - math.log(m - slope)
            - m * self._log_z()
        )

    def rho_smooth(self, t):
        x = math.log(t) - self._log_z()
        if x <= 1.0:
            return 0.0
        val, _ = integrate.quad(lambda y: float(self._ell(y)), 1.0, x, limit=200)
        return val

    def ell_hat(self, t: float) -> float:
        return float(self._ell(math.log(t) - self._log_z()))

    def to_text(self):
        return f"dehaan-stretched sigma={self.sigma:g} lambda={self.lam:g}"


@dataclass(frozen=True)
class ExplicitBoxes(RhoSpec):
    """Finite explicit probability vector; exact tails (they are finite sums)."""

    probs: tuple

    def __post_init__(self):
        p = np.asarray(self.probs, dtype=float)
        if p.ndim != 1 or p.size == 0 or np.any(p <= 0):
            raise ValueError("probs must be a nonempty positive vector")
        if np.any(np.diff(p) > 0):
            raise ValueError("probs must be nonincreasing")
        if abs(p.sum() - 1.0) > 1e-9:
            raise ValueError("probs must sum to 1")
        object.__setattr__(self, "probs", tuple(float(x) for x in p / p.sum()))

    variant = "explicit"
    alpha_class = 1.0
    mu = 1.0
    q = 0.0

    def count_horizon(self) -> int:
        return len(self.probs)

    def log_pk(self, ks):
        ks = np.asarray(ks, dtype=int)
        p = np.asarray(self.probs)
        out = np.full(ks.shape, -math.inf, dtype=float)
        ok = ks <= len(self.probs)
        out[ok] = np.log(p[ks[ok] - 1])
        return out

    def log_tail_power(self, m, K):
        if K >= len(self.probs):
            return -math.inf
        p = np.asarray(self.probs[K:])
        return float(np.log(np.sum(p**m) + 1e-300))

    def log_tail_weighted(self, m, K):
        if K >= len(self.probs):
            return -math.inf
        p = np.asarray(self.probs[K:])
        ks = np.arange(K + 1, len(self.probs) + 1, dtype=float)
        return float(np.log(np.sum(ks * p**m) + 1e-300))

    def series_tail(self, kernel, K):
        if K >= len(self.probs):
            return 0.0, 0.0
        p = np.asarray(self.probs[K:])
        vals = kernel.eval(p)
        return float(np.sum(vals)), 1e-15 * float(np.sum(np.abs(vals))) + 1e-300

    def _tail_valid(self, kernel, K):
        return True

    def rho_smooth(self, t):
        return float(np.sum(self.inv_pk(np.arange(1, len(self.probs) + 1)) <= t))

    def to_text(self):
        return "explicit " + " ".join(f"{p:g}" for p in self.probs)


def parse_rho_spec(text: str) -> RhoSpec:
    """Parse the plain-text family config, e.g. "powerlaw alpha=0.5"."""
    parts = text.strip().split()
    if not parts:
        raise ValueError("empty rho spec")
    name, kv = parts[0].lower(), {}
    for item in parts[1:]:
        if "=" not in item:
            raise ValueError(f"malformed parameter {item!r}")
        key, val = item.split("=", 1)
        kv[key.strip()] = float(val)
    if name == "powerlaw":
        return PowerLaw(alpha=kv.pop("alpha"))
    if name == "borderline":
        return BorderlinePower(log_exponent=kv.pop("log_exponent"))
    if name == "dehaan-poly":
        return DeHaanPoly(beta=kv.pop("beta"))
    if name == "dehaan-stretched":
        return DeHaanStretched(sigma=kv.pop("sigma"), lam=kv.pop("lambda"))
    if name == "explicit":
        return ExplicitBoxes(probs=tuple(float(x) for x in parts[1:]))
    raise ValueError(f"unknown rho spec variant {name!r}")


# ---------------------------------------------------------------------------
# the occupancy indicator model
# ---------------------------------------------------------------------------


class KarlinModel(IndicatorModel):
    """K_j(t): boxes holding at least j balls at Poisson time t.

    prob(k, t) = P{pi_k(t) >= j} = P{Gamma_j <= p_k t} by Poisson thinning,
    with activation times T_k = Gamma_j^{(k)} / p_k.
    """

    def __init__(self, rho: RhoSpec, j: int = 1):
        if j < 1:
            raise ValueError("j must be a positive integer")
        self.rho = rho
        self.j = int(j)
        self.label = f"karlin[{rho.to_text()}] j={j}"
        self.mu = rho.mu
        self.q = rho.q

    def prob(self, ks, t):
        return sp.gammainc(self.j, t * self.rho.pk(ks))

    def comp_prob(self, ks, t):
        return sp.gammaincc(self.j, t * self.rho.pk(ks))

    def _first_small(self, thresh_log: float) -> int:
        """Smallest k with log p_k <= thresh_log (p nonincreasing)."""
        horizon = self.rho.count_horizon()
        lo, hi = 1, 2
        while float(self.rho.log_pk(np.array([min(hi, horizon)]))[0]) > thresh_log:
            if hi >= horizon:
                return horizon
            lo, hi = hi, min(hi * 2, horizon)
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if float(self.rho.log_pk(np.array([mid]))[0]) <= thresh_log:
                hi = mid
            else:
                lo = mid
        if float(self.rho.log_pk(np.array([lo]))[0]) <= thresh_log:
            return lo
        return hi

    def max_index(self):
        horizon = self.rho.count_horizon()
        return horizon if horizon < (1 << 53) else None

    def min_tail_start(self, t: float) -> int:
        # smallest K with t * p_{K+1} <= 1/2
        return max(1, self._first_small(_LOG_HALF - math.log(t)) - 1)

    def mean_tail(self, K, t):
        return self.rho.series_tail(PoissonMeanKernel(self.j, t), K)

    def var_tail(self, K, t):
        return self.rho.series_tail(PoissonVarKernel(self.j, t), K)

    def sq_tail_bound(self, K, t):
        kern = PoissonMeanKernel(self.j, t)
        if not self.rho._tail_valid(kern, K):
            return math.inf
        return math.exp(2.0 * kern.log_lead + self.rho.log_tail_power(2 * self.j, K))

    def activation_times(self, K, rng):
        gammas = rng.standard_gamma(float(self.j), size=K)
        return gammas * self.rho.inv_pk(np.arange(1, K + 1))


# ---------------------------------------------------------------------------
# exposed operations
# ---------------------------------------------------------------------------


def build_pk(spec: RhoSpec, k_max: int) -> np.ndarray:
    """First k_max normalized box probabilities of the family."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if k_max > spec.count_horizon():
        raise HorizonError(f"{spec.to_text()}: built horizon is {spec.count_horizon()}")
    return spec.pk(np.arange(1, k_max + 1))


def rho_eval(spec: RhoSpec, t: float) -> int:
    """Exact realized counting function #{k : 1/p_k <= t} (0 for t <= 1)."""
    if t <= 0:
        raise ValueError("t must be positive")
    horizon = spec.count_horizon()
    if float(spec.inv_pk(np.array([1]))[0]) > t:
        return 0
    lo, hi = 1, 2
    while hi <= horizon and float(spec.inv_pk(np.array([hi]))[0]) <= t:
        lo, hi = hi, hi * 2
    if hi > horizon:
        if float(spec.inv_pk(np.array([horizon]))[0]) <= t:
            if isinstance(spec, ExplicitBoxes):
                return horizon
            raise HorizonError(f"rho({t:g}) exceeds the built index range")
        hi = horizon
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if float(spec.inv_pk(np.array([mid]))[0]) <= t:
            lo = mid
        else:
            hi = mid
    return lo


def hat_L(spec: RhoSpec, t: float) -> float:
    """Integrated slowly-varying tail for index-1 families."""
    if not isinstance(spec, BorderlinePower):
        raise ValueError("hat_L is defined for the index-1 (borderline) family only")
    if t <= 3.0:
        raise ValueError("t too small for the integrated tail")
    return spec.hat_L(t)


def _karlin_series(model: KarlinModel, t: float, acc: Accuracy, kernel_cls) -> float:
    if t < 0:
        raise ValueError("t must be >= 0")
    if t == 0:
        return 0.0
    kernel = kernel_cls(model.j, t)
    term = lambda ks: kernel.eval(model.rho.pk(ks))
    K = max(1, model.min_tail_start(t))
    horizon = model.rho.count_horizon()
    K = min(K, horizon)
    while True:
        tail_value, tail_err = model.rho.series_tail(kernel, K)
        head = _blocked_sum(term, K)
        value = head + tail_value
        if tail_err <= acc.budget(value):
            return value
        if 2 * K > acc.max_terms:
            raise TruncationError(
                f"{model.label} series at t={t:g}: tail error {tail_err:.3g} "
                f"exceeds budget {acc.budget(value):.3g} at K={K}"
            )
        K = min(2 * K, horizon) if K < horizon else 2 * K


def mean_Kj(model: KarlinModel, t: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """E K_j(t) = sum_k P{pi_k(t) >= j}."""
    return _karlin_series(model, t, acc, PoissonMeanKernel)


def var_Kj(model: KarlinModel, t: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """Var K_j(t) = sum_k P{pi_k(t) >= j} P{pi_k(t) < j}."""
    return _karlin_series(model, t, acc, PoissonVarKernel)


def mean_Kj_star(model: KarlinModel, t: float, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """E K*_j(t) = sum_k P{pi_k(t) = j}."""
    return _karlin_series(model, t, acc, PoissonStarKernel)


# ---------------------------------------------------------------------------
# asymptotic constants
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ConstantSet:
    """Limit constants of the occupancy moments and the a.s. envelope."""

    variant: str
    j: int
    mean_constant: float
    mean_scale: str
    var_constant: float
    var_scale: str
    kstar_constant: float
    kstar_scale: str
    lil_constant: float
    normalization: str  # "log" or "loglog"
    mu: float
    q: float
    flags: tuple = ()


def _cj_power(alpha: float, j: int) -> float:
    total = 0.0
    for i in range(j):
        total += math.gamma(i + j - alpha) / (
            math.factorial(i) * math.factorial(j - 1) * 2.0 ** (i + j - 1 - alpha)
        )
    return total - math.gamma(j - alpha) / math.factorial(j - 1)


def _var0_constant(j: int) -> float:
    total = math.log(2.0)
    for k in range(1, j):
        total -= math.factorial(2 * k - 1) / (math.factorial(k) ** 2 * 2.0 ** (2 * k))
    return total


def asymptotic_constants(spec: RhoSpec, j: int) -> ConstantSet:
    """Limit constants for E K_j, Var K_j, E K*_j and the LIL envelope."""
    if j < 1:
        raise ValueError("j must be a positive integer")
    if isinstance(spec, PowerLaw):
        a = spec.alpha
        return ConstantSet(
            variant=spec.to_text(),
            j=j,
            mean_constant=math.gamma(j - a) / math.factorial(j - 1),
            mean_scale="rho(t)",
            var_constant=_cj_power(a, j),
            var_scale="rho(t)",
            kstar_constant=a * math.gamma(j - a) / math.factorial(j),
            kstar_scale="rho(t)",
            lil_constant=math.sqrt(2.0),
            normalization="loglog",
            mu=spec.mu,
            q=spec.q,
        )
    if isinstance(spec, BorderlinePower):
        if j == 1:
            return ConstantSet(
                variant=spec.to_text(),
                j=1,
                mean_constant=1.0,
                mean_scale="t*hat_L(t)",
                var_constant=1.0,
                var_scale="t*hat_L(t)",
                kstar_constant=1.0,
                kstar_scale="t*hat_L(t)",
                lil_constant=math.sqrt(2.0),
                normalization="loglog",
                mu=spec.mu,
                q=spec.q,
                flags=("upper bound only: integrated-tail ratio condition fails",),
            )
        return ConstantSet(
            variant=spec.to_text(),
            j=j,
            mean_constant=1.0 / (j - 1),
            mean_scale="rho(t)",
            var_constant=math.factorial(2 * j - 3)
            / (math.factorial(j - 1) ** 2 * 2.0 ** (2 * j - 3)),
            var_scale="rho(t)",
            kstar_constant=math.gamma(j - 1) / math.factorial(j),
            kstar_scale="rho(t)",
            lil_constant=math.sqrt(2.0),
            normalization="loglog",
            mu=spec.mu,
            q=spec.q,
        )
    if isinstance(spec, DeHaanPoly):
        return ConstantSet(
            variant=spec.to_text(),
            j=j,
            mean_constant=1.0,
            mean_scale="rho(t)",
            var_constant=_var0_constant(j),
            var_scale="ell(t)",
            kstar_constant=1.0 / j,
            kstar_scale="ell(t)",
            lil_constant=math.sqrt(2.0 / spec.beta),
            normalization="log",
            mu=spec.mu,
            q=spec.q,
        )
    if isinstance(spec, DeHaanStretched):
        return ConstantSet(
            variant=spec.to_text(),
            j=j,
            mean_constant=1.0,
            mean_scale="rho(t)",
            var_constant=_var0_constant(j),
            var_scale="ell(t)",
            kstar_constant=1.0 / j,
            kstar_scale="ell(t)",
            lil_constant=math.sqrt(2.0 / spec.lam),
            normalization="loglog",
            mu=spec.mu,
            q=spec.q,
        )
    raise ValueError(f"no asymptotic constants for variant {spec.variant!r}")


# ---------------------------------------------------------------------------
# deterministic scheme (exactly n balls)
# ---------------------------------------------------------------------------


def _det_series(model: KarlinModel, n: int, acc: Accuracy, kernel_cls) -> float:
    if n < model.j:
        return 0.0
    kernel = kernel_cls(model.j, n)
    term = lambda ks: kernel.eval(model.rho.pk(ks))
    horizon = model.rho.count_horizon()
    K = min(max(1, model._first_small(_LOG_HALF - math.log(n)) - 1), horizon)
    while True:
        tail_value, tail_err = model.rho.series_tail(kernel, K)
        head = _blocked_sum(term, K)
        value = head + tail_value
        if tail_err <= acc.budget(value):
            return value
        if 2 * K > acc.max_terms:
            raise TruncationError(
                f"{model.label} deterministic series at n={n}: tail error "
                f"{tail_err:.3g} exceeds budget {acc.budget(value):.3g} at K={K}"
            )
        K = min(2 * K, horizon) if K < horizon else 2 * K


def det_mean(model: KarlinModel, n: int, acc: Accuracy = DEFAULT_ACCURACY) -> float:
    """E of the number of boxes holding >= j balls out of exactly n."""
    if n < 0:
        raise ValueError("n must be >= 0")
    return _det_series(model, n, acc, BinomMeanKernel)


@dataclass(frozen=True)
class DetVarResult:
    """Deterministic-scheme variance with its certified truncation bookkeeping."""

    value: float
    diagonal: float
    cross: float
    pair_cap: int
    pair_tail_bound: float

    def __float__(self):
        return self.value


def _det_cross_sum(model: KarlinModel, n: int, cap: int) -> float:
    """sum over ordered pairs i != k <= cap of Cov(1{B_i >= j}, 1{B_k >= j})."""
    j = model.j
    ks = np.arange(1, cap + 1)
    p = model.rho.pk(ks)
    logp = np.log(p)
    q_lt = sp.betaincc(j, n - j + 1, p) if n >= j else np.ones_like(p)

    log_cn = {a: _log_comb(n, a) for a in range(j)}
    log_cna = {(a, b): _log_comb(n - a, b) for a in range(j) for b in range(j)}

    total = 0.0
    rows = max(1, (1 << 22) // cap)
    for lo in range(0, cap, rows):
        hi = min(lo + rows, cap)
        pi = p[lo:hi][:, None]
        lpi = logp[lo:hi][:, None]
        psum = pi + p[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            log1m = np.log1p(-np.minimum(psum, 1.0))
        q_pair = np.zeros_like(psum)
        for a in range(j):
            for b in range(j):
                expo = (n - a - b) * log1m
                # (1-p_i-p_k)^0 = 1 even when p_i + p_k = 1
                if n - a - b == 0:
                    expo = np.zeros_like(log1m)
                term = np.exp(
                    log_cn[a] + log_cna[(a, b)] + a * lpi + b * logp[None, :] + expo
                )
                q_pair += np.where(np.isfinite(term), term, 0.0)
        block = q_pair - q_lt[lo:hi][:, None] * q_lt[None, :]
        # remove the i == k diagonal entries
        idx = np.arange(lo, hi)
        block[np.arange(hi - lo), idx] = 0.0
        total += float(np.sum(block))
    return total


def _det_omitted_pairs_bound(model: KarlinModel, n: int, cap: int) -> float:
    """Certified bound on the total omitted |Cov| over pairs beyond the cap."""
    j = model.j
    spec = model.rho
    p1 = float(spec.pk(np.array([1]))[0])
    if j == 1:
        # |Cov| <= c_r n p_i p_k e^{-n p_i} e^{-n p_k}
        c_r = 1.0 / (1.0 - p1) ** 2
        ks = np.arange(1, cap + 1)
        p = spec.pk(ks)
        w_head = float(np.sum(p * np.exp(-n * p)))
        w_all = w_head + math.exp(spec.log_tail_power(1, cap))
        w_tail = math.exp(spec.log_tail_power(1, cap))
        return 2.0 * c_r * n * w_all * w_tail
    # j >= 2: |Cov_{ik}| <= min(P'_i, P'_k) with P' = P{B >= j} <= (n p)^j / j!
    log_nj = j * math.log(n) - float(sp.gammaln(j + 1))
    lw = spec.log_tail_weighted(j, cap)
    lt = spec.log_tail_power(j, cap)
    if not (math.isfinite(lw) and math.isfinite(lt)):
        return math.inf
    # sum_{k>cap} [k P'_k + sum_{i>k} P'_i] <= weighted tail + cascaded tail
    term1 = math.exp(log_nj + lw)
    term2 = math.exp(log_nj + lw)  # sum_{k>cap} M(k) <= same weighted form
    return 2.0 * (term1 + term2)


def det_var(
    model: KarlinModel,
    n: int,
    acc: Accuracy = DEFAULT_ACCURACY,
    pair_cap: int = 20_000,
) -> DetVarResult:
    """Exact (truncated) variance of the n-ball occupancy count.

    Diagonal terms are summed with certified tails; cross covariances are
    summed exactly over the first pair_cap x pair_cap index pairs, with a
    certified bound on everything omitted.  Raises TruncationError when
    that bound exceeds the accuracy budget.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if n < model.j:
        return DetVarResult(0.0, 0.0, 0.0, pair_cap, 0.0)
    diag = _det_series(model, n, acc, BinomVarDiagKernel)
    cap = min(pair_cap, model.rho.count_horizon())
    cross = _det_cross_sum(model, n, cap)
    omitted = _det_omitted_pairs_bound(model, n, cap)
    value = diag + cross
    if omitted > acc.budget(value):
        raise TruncationError(
            f"{model.label} det variance at n={n}: omitted-pair bound "
            f"{omitted:.3g} exceeds budget {acc.budget(value):.3g} "
            f"(pair_cap={cap})"
        )
    return DetVarResult(value=value, diagonal=diag, cross=cross, pair_cap=cap, pair_tail_bound=omitted)


def det_sample(
    model: KarlinModel, n: int, k_cap: int, rng: np.random.Generator
) -> np.ndarray:
    """Multinomial occupancy of n balls over boxes 1..k_cap plus an overflow cell.

    Returns counts of length k_cap + 1; the last cell aggregates all boxes
    beyond k_cap (its balls are excluded from per-box statistics, an
    undercount of expected size <= n * tail mass).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    k_cap = min(k_cap, model.rho.count_horizon())
    cum = np.cumsum(model.rho.pk(np.arange(1, k_cap + 1)))
    if n == 0:
        return np.zeros(k_cap + 1, dtype=np.int64)
    u = rng.random(n)
    idx = np.searchsorted(cum, u, side="right")
    return np.bincount(idx, minlength=k_cap + 1).astype(np.int64)


def occupancy_at_least(counts: np.ndarray, j: int) -> int:
    """Number of explicit boxes holding at least j balls."""
    return int(np.sum(counts[:-1] >= j))


def occupancy_exactly(counts: np.ndarray, j: int) -> int:
    """Number of explicit boxes holding exactly j balls."""
    return int(np.sum(counts[:-1] == j))


def det_occupancy_replicates(
    model: KarlinModel, n: int, k_cap: int, reps: int, rng: np.random.Generator
) -> np.ndarray:
    """reps independent draws of the >=j box count for exactly n balls.

    Same ball-allocation law as det_sample (inverse-CDF over boxes 1..k_cap
    with an overflow cell), but aggregating per-box counts directly so the
    cost per replicate is O(n log n) instead of O(k_cap).
    """
    if n < 0 or reps < 0:
        raise ValueError("n and reps must be >= 0")
    k_cap = min(k_cap, model.rho.count_horizon())
    cum = np.cumsum(model.rho.pk(np.arange(1, k_cap + 1)))
    out = np.empty(reps, dtype=np.int64)
    for i in range(reps):
        idx = np.searchsorted(cum, rng.random(n), side="right")
        boxes, counts = np.unique(idx[idx < k_cap], return_counts=True)
        out[i] = int(np.sum(counts >= model.j))
    return out


# ---------------------------------------------------------------------------
# the integrated-tail ratio probe (alpha = 1, j = 1 dichotomy)
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ExoticReport:
    ns: tuple
    ratios: tuple
    verdict: str  # "ratio-to-zero" | "bounded-away" | "inconclusive"


def exotic_ratio_trend(log_hat_L, gamma: float, ns) -> ExoticReport:
    """Trend of hat_L(exp((n+1)^{1+gamma})) / hat_L(exp(n^{1+gamma})) along ns.

    log_hat_L maps u = log t to log hat_L(t); the checkpoint times
    exp(n^{1+gamma}) overflow doubles almost immediately, so both the
    argument and the value stay on log scale.
    """
    if gamma <= 0:
        raise ValueError("gamma must be positive")
    ns = [int(n) for n in ns]
    if not ns or min(ns) < 1:
        raise ValueError("ns must be positive integers")
    ratios = []
    for n in ns:
        hi = log_hat_L((n + 1.0) ** (1.0 + gamma))
        lo = log_hat_L(n ** (1.0 + gamma))
        ratios.append(math.exp(hi - lo))
    last, first = ratios[-1], ratios[0]
    if last < 0.05 and last < 0.5 * first:
        verdict = "ratio-to-zero"
    elif last > 0.2 and last >= 0.8 * first:
        verdict = "bounded-away"
    else:
        verdict = "inconclusive"
    return ExoticReport(ns=tuple(ns), ratios=tuple(ratios), verdict=verdict)


def exotic_condition_probe(spec: RhoSpec, gamma: float, ns) -> ExoticReport:
    """Evaluate the vanishing-ratio condition for the index-1 family."""
    if not isinstance(spec, BorderlinePower):
        raise ValueError("the probe applies to the index-1 (borderline) family only")
    s = spec.log_exponent
    log_hat = lambda u: math.log(spec.c_norm) + (1.0 - s) * math.log(u) - math.log(s - 1.0)
    return exotic_ratio_trend(log_hat, gamma, ns)
