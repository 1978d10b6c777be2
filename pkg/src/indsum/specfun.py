"""Special functions behind every exact formula in the package.

All functions accept scalars or numpy arrays and are pure/reentrant.  They
are thin, domain-checked wrappers over the mature scipy.special kernels:

    reg_inc_gamma_lower(k, t) = P(k, t) = gamma(k, t) / Gamma(k)
    bessel_i_scaled(nu, t)    = exp(-t) * I_nu(t)
    poisson_pmf_prefix(j, y)  = exp(-y) * sum_{i<j} y^i / i!   (= Q(j, y))

The pair P(j, y) / Q(j, y) is the exact CDF/SF split used everywhere a
probability product p * (1 - p) must survive p -> 1 without cancellation:
each side is evaluated directly rather than as one minus the other.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import special as sp

__all__ = [
    "Accuracy",
    "DEFAULT_ACCURACY",
    "log_gamma",
    "reg_inc_gamma_lower",
    "reg_inc_gamma_upper",
    "bessel_i_scaled",
    "normal_cdf",
    "poisson_pmf_prefix",
]


@dataclass(frozen=True)
class Accuracy:
    """Tolerance budget for truncated series evaluation.

    abs_tol and rel_tol may not both be zero; whichever is nonzero (or the
    looser of the two, scaled by the running value) bounds the certified
    truncation error.  max_terms caps the number of summed indices.
    """

    abs_tol: float = 1e-9
    rel_tol: float = 0.0
    max_terms: int = 10_000_000

    def __post_init__(self):
        if self.abs_tol < 0 or self.rel_tol < 0:
            raise ValueError("tolerances must be nonnegative")
        if self.abs_tol == 0 and self.rel_tol == 0:
            raise ValueError("abs_tol and rel_tol cannot both be zero")
        if self.max_terms < 1:
            raise ValueError("max_terms must be >= 1")

    def budget(self, scale: float) -> float:
        """Absolute error budget for a quantity of magnitude `scale`."""
        budget = self.abs_tol
        if self.rel_tol > 0:
            budget = max(budget, self.rel_tol * abs(scale))
        return budget


DEFAULT_ACCURACY = Accuracy()


def log_gamma(x):
    """ln Gamma(x) for x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise ValueError("log_gamma requires x > 0")
    out = sp.gammaln(x)
    return float(out) if out.ndim == 0 else out


def reg_inc_gamma_lower(k, t):
    """Regularized lower incomplete gamma P(k, t) = P{Gamma(k, 1) <= t}.

    For integer k this equals the Poisson tail 1 - e^{-t} sum_{j<k} t^j/j!.
    """
    k = np.asarray(k, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(k <= 0):
        raise ValueError("reg_inc_gamma_lower requires k > 0")
    if np.any(t < 0):
        raise ValueError("reg_inc_gamma_lower requires t >= 0")
    out = sp.gammainc(k, t)
    return float(out) if out.ndim == 0 else out


def reg_inc_gamma_upper(k, t):
    """Regularized upper incomplete gamma Q(k, t) = 1 - P(k, t), cancellation-free."""
    k = np.asarray(k, dtype=float)
    t = np.asarray(t, dtype=float)
    if np.any(k <= 0):
        raise ValueError("reg_inc_gamma_upper requires k > 0")
    if np.any(t < 0):
        raise ValueError("reg_inc_gamma_upper requires t >= 0")
    out = sp.gammaincc(k, t)
    return float(out) if out.ndim == 0 else out


def bessel_i_scaled(nu, t):
    """exp(-t) * I_nu(t) for nu > -1, t >= 0; overflow-free up to t ~ 1e8+."""
    nu_arr = np.asarray(nu, dtype=float)
    t_arr = np.asarray(t, dtype=float)
    if np.any(nu_arr <= -1):
        raise ValueError("bessel_i_scaled requires nu > -1")
    if np.any(t_arr < 0):
        raise ValueError("bessel_i_scaled requires t >= 0")
    out = sp.ive(nu_arr, t_arr)
    return float(out) if out.ndim == 0 else out


def normal_cdf(x):
    """Standard normal distribution function Phi(x)."""
    out = sp.ndtr(np.asarray(x, dtype=float))
    return float(out) if out.ndim == 0 else out


def poisson_pmf_prefix(j, lam):
    """exp(-lam) * sum_{i<j} lam^i / i! for integer j >= 0.

    Equals 1 - reg_inc_gamma_lower(j, lam) for j >= 1, evaluated directly
    through the upper incomplete gamma so small values keep full precision.
    """
    j_arr = np.asarray(j)
    lam_arr = np.asarray(lam, dtype=float)
    if np.any(j_arr < 0) or not np.issubdtype(j_arr.dtype, np.integer):
        raise ValueError("poisson_pmf_prefix requires integer j >= 0")
    if np.any(lam_arr < 0):
        raise ValueError("poisson_pmf_prefix requires lam >= 0")
    j_f = j_arr.astype(float)
    # empty sum for j = 0; gammaincc(j, lam) otherwise
    out = np.where(j_f > 0, sp.gammaincc(np.maximum(j_f, 1.0), lam_arr), 0.0)
    if out.ndim == 0:
        return float(out)
    return out
