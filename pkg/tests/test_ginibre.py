import math

import numpy as np
import pytest
from scipy.special import gammainc, gammaincc

from indsum import Accuracy, var_a
from indsum.ginibre import (
    DiscreteBessel,
    GinibreModel,
    lil_envelope_ginibre,
    solve_window_x,
    var_exact,
    window_fraction_f,
    window_variance,
)


class TestVarExact:
    def test_small_t_against_series_oracle(self, ginibre):
        # independent derivation: the truncated indicator-variance series
        acc = Accuracy(abs_tol=1e-12)
        for t in [0.5, 1.0, 5.0, 10.0, 50.0, 100.0, 1000.0]:
            assert abs(var_exact(t) - var_a(ginibre, t, acc)) < 1e-10

    def test_value_at_one(self):
        # e^{-2} (I_0(2) + I_1(2))
        assert var_exact(1.0) == pytest.approx(0.5237776118026086, rel=1e-12)

    def test_leading_asymptotics(self):
        for t in [1e4, 1e6, 1e8]:
            assert var_exact(t) / math.sqrt(t / math.pi) == pytest.approx(1.0, abs=2.0 / (16 * t))

    def test_refined_two_term_expansion(self):
        for t in [1e3, 1e4, 1e5]:
            refined = math.sqrt(t / math.pi) - 1.0 / (16.0 * math.sqrt(math.pi * t))
            assert abs(var_exact(t) - refined) < 0.05 / math.sqrt(t)

    def test_domain(self):
        with pytest.raises(ValueError):
            var_exact(0.0)


class TestWindowFraction:
    def test_endpoints(self):
        assert window_fraction_f(0.0) == pytest.approx(0.0, abs=1e-14)
        assert window_fraction_f(8.0) == pytest.approx(1.0, abs=1e-12)
        assert window_fraction_f(40.0) == pytest.approx(1.0, abs=1e-14)

    def test_strictly_increasing(self):
        # strict up to where 1 - f is representable; nondecreasing after
        grid = np.linspace(0.0, 5.5, 300)
        vals = window_fraction_f(grid)
        assert np.all(np.diff(vals) > 0)
        grid = np.linspace(0.0, 8.0, 400)
        assert np.all(np.diff(window_fraction_f(grid)) >= 0)

    def test_derivative_identity(self):
        # f'(x) = 2 sqrt(pi) Phi(x) Phi(-x), via central differences
        from indsum.specfun import normal_cdf

        h = 1e-6
        for x in [0.1, 0.5, 1.0, 2.0, 3.0]:
            fd = (window_fraction_f(x + h) - window_fraction_f(x - h)) / (2 * h)
            exact = 2.0 * math.sqrt(math.pi) * normal_cdf(x) * normal_cdf(-x)
            assert fd == pytest.approx(exact, abs=1e-6)


class TestSolveWindowX:
    def test_root_accuracy(self):
        for varsigma in [0.25, 0.5, 0.75, 0.9]:
            root = solve_window_x(varsigma)
            assert not root.capped
            assert abs(window_fraction_f(root.x) - (1.0 - varsigma)) < 1e-10

    def test_small_varsigma_grows(self):
        assert solve_window_x(0.9).x < solve_window_x(0.2).x

    def test_cap_flag(self):
        root = solve_window_x(1e-16)
        assert root.capped and root.x == 8.0

    def test_domain(self):
        for bad in [0.0, 1.0, -0.2, 1.4]:
            with pytest.raises(ValueError):
                solve_window_x(bad)


class TestWindowVariance:
    def test_brute_force_oracle(self):
        # same formula, independent code path: explicit python loop
        t, x = 1e4, 1.0
        c = math.floor(t - x * math.sqrt(t)) - 1
        d = math.floor(t + x * math.sqrt(t))
        brute = 0.0
        for k in range(c + 1, d + 1):
            brute += gammainc(k, t) * gammaincc(k, t)
        assert window_variance(t, x) == pytest.approx(brute, rel=1e-12)

    def test_fraction_convergence(self):
        t = 1e5
        for varsigma in [0.25, 0.5, 0.75]:
            x = solve_window_x(varsigma).x
            ratio = window_variance(t, x) / var_exact(t)
            assert ratio == pytest.approx(1.0 - varsigma, rel=0.05)

    def test_empty_window_rejected(self):
        with pytest.raises(ValueError):
            window_variance(4.0, 3.0)  # floor(t - x sqrt t) < 1


class TestDiscreteBessel:
    def test_pmf_normalizes(self):
        for nu, t in [(0.0, 2.0), (1.0, 5.0), (0.5, 20.0)]:
            d = DiscreteBessel(nu, t)
            total = float(np.sum(d.pmf(np.arange(0, 400))))
            assert total == pytest.approx(1.0, abs=1e-12)

    def test_pmf_at_zero(self):
        # 1 / I_0(2), frozen from the defining power series
        d = DiscreteBessel(0.0, 2.0)
        assert d.pmf(0) == pytest.approx(0.43867627983704877, rel=1e-12)

    def test_mgf_values(self):
        d = DiscreteBessel(0.0, 2.0)
        assert d.mgf(0.0) == pytest.approx(1.0, rel=1e-14)
        # I_0(2 sqrt e) / I_0(2), frozen from the power series
        assert d.mgf(1.0) == pytest.approx(2.7326881078481047, rel=1e-10)

    def test_mgf_matches_pmf_sum(self):
        n = np.arange(0, 220)
        for nu in [0.0, 1.0]:
            for t in [2.0, 5.0, 20.0]:
                d = DiscreteBessel(nu, t)
                pmf = d.pmf(n)
                for p in [-1.0, 0.0, 1.0]:
                    brute = float(np.sum(np.exp(p * n) * pmf))
                    assert d.mgf(p) == pytest.approx(brute, rel=1e-8)

    def test_moments_against_brute_force(self):
        d = DiscreteBessel(1.0, 5.0)
        mean, var = d.moments()
        assert mean == pytest.approx(1.7983514534107825, rel=1e-10)
        assert var == pytest.approx(1.217580596604545, rel=1e-10)

    def test_moment_asymptotics(self):
        # E Y = t/2 - (nu + 1/2)/2 + o(1), Var Y ~ t/4
        for nu in [0.0, 1.0]:
            d = DiscreteBessel(nu, 1e6)
            mean, var = d.moments()
            assert abs(mean - (5e5 - (nu + 0.5) / 2.0)) < 1e-3
            assert var / 2.5e5 == pytest.approx(1.0, rel=1e-3)

    def test_bessel_ratio_limit(self):
        # t (1 - I_{nu+1}(t)/I_nu(t)) -> nu + 1/2  (and not 2 nu + 1)
        from indsum.specfun import bessel_i_scaled

        t = 1e6
        for nu in [0.0, 1.0, 2.5]:
            r = bessel_i_scaled(nu + 1.0, t) / bessel_i_scaled(nu, t)
            lim = t * (1.0 - r)
            assert lim == pytest.approx(nu + 0.5, abs=1e-3)
            if nu > 0:
                assert abs(lim - (2 * nu + 1.0)) > 0.4

    def test_sampler_mean(self, rng):
        d = DiscreteBessel(0.0, 50.0)
        mean, var = d.moments()
        draws = d.sample(rng, size=100_000)
        stderr = math.sqrt(var / draws.size)
        assert abs(draws.mean() - mean) < 4.0 * stderr

    def test_sampler_tiny_t(self, rng):
        d = DiscreteBessel(0.0, 1e-3)
        draws = d.sample(rng, size=10_000)
        assert np.all(draws >= 0)
        assert np.mean(draws == 0) > 0.999

    def test_sampler_chi_square_gof(self, rng):
        from scipy.stats import chisquare

        d = DiscreteBessel(0.0, 10.0)
        n = 100_000
        draws = d.sample(rng, size=n)
        atoms = np.arange(0, 20)
        expected = d.pmf(atoms) * n
        observed = np.array([(draws == a).sum() for a in atoms], dtype=float)
        # lump the tail so expectations stay comparable
        expected = np.append(expected, n - expected.sum())
        observed = np.append(observed, n - observed.sum())
        stat, pvalue = chisquare(observed, expected)
        assert pvalue > 0.001

    def test_clt_of_normalized_statistic(self, rng):
        # 2 t^{-1/2} (Y - t/2) approaches Normal(0,1); KS with one lattice
        # spacing (2/sqrt t) of allowance
        from scipy.special import ndtr

        from indsum.montecarlo import ks_critical, ks_statistic

        t = 400.0
        d = DiscreteBessel(0.0, t)
        n = 100_000
        z = 2.0 * (d.sample(rng, size=n) - t / 2.0) / math.sqrt(t)
        z.sort()
        ks = ks_statistic(z, ndtr)
        assert ks < ks_critical(n, 0.001) + 2.0 / math.sqrt(t)

    def test_domain(self):
        with pytest.raises(ValueError):
            DiscreteBessel(-1.0, 2.0)
        with pytest.raises(ValueError):
            DiscreteBessel(0.0, 0.0)


class TestWindowDisjointness:
    def test_consecutive_checkpoint_windows_disjoint(self, ginibre):
        # d(tau_n) < c(tau_{n+1}) + 1 for sampled n: the +/- x sqrt(t) index
        # windows at successive variance checkpoints do not overlap
        from indsum import lower_grid

        x = solve_window_x(0.5).x
        taus = lower_grid(ginibre, 0.1, 60).times
        for n in range(4, 59):
            d_n = math.floor(taus[n] + x * math.sqrt(taus[n]))
            c_next = math.floor(taus[n + 1] - x * math.sqrt(taus[n + 1])) - 1
            assert d_n < c_next + 1, n


class TestLilEnvelope:
    def test_constant(self):
        center, scale, constant = lil_envelope_ginibre(100.0)
        assert center == 100.0
        assert constant == pytest.approx(math.pi**-0.25, rel=1e-14)
        assert scale == pytest.approx(100.0**0.25 * math.sqrt(math.log(100.0)), rel=1e-14)

    def test_matches_main_normalization(self):
        # scale * constant vs sqrt(2 Var log Var); the gap decays like
        # log(pi)/(2 log t), about 4.4% at t = 1e6
        t = 1e6
        _, scale, constant = lil_envelope_ginibre(t)
        a = var_exact(t)
        assert scale * constant == pytest.approx(math.sqrt(2.0 * a * math.log(a)), rel=0.05)

    def test_domain(self):
        with pytest.raises(ValueError):
            lil_envelope_ginibre(math.e)


class TestGinibreModelHooks:
    def test_prob_is_gamma_cdf(self, ginibre):
        ks = np.arange(1, 50)
        np.testing.assert_allclose(ginibre.prob(ks, 10.0), gammainc(ks, 10.0), rtol=1e-14)

    def test_mean_tail_exact(self, ginibre):
        # against direct summation over a wide explicit range
        t, K = 50.0, 60
        direct = float(np.sum(gammainc(np.arange(K + 1, K + 400), t)))
        value, err = ginibre.mean_tail(K, t)
        assert value == pytest.approx(direct, rel=1e-12)
        assert err < 1e-10

    def test_activation_times_are_independent_gammas(self, ginibre, rng):
        # marginal means E Gamma_k = k and cross-index independence (a shared
        # renewal stream would give corr(T_1, T_50) close to 1)
        draws = np.stack([ginibre.activation_times(50, rng) for _ in range(4000)])
        means = draws.mean(axis=0)
        np.testing.assert_allclose(means, np.arange(1, 51), rtol=0.1)
        corr = np.corrcoef(draws[:, 0], draws[:, 49])[0, 1]
        assert abs(corr) < 0.1
