"""Kernel tests: log-gamma/beta, density, incomplete beta, quantile, sampling.

scipy.special and scipy.integrate serve as independent oracles throughout;
the package's own implementations never appear on the oracle side.
"""

import math

import numpy as np
import pytest
from scipy import integrate, special as sps

from famrisk.special import (BetaParams, beta_pdf, beta_sample, inv_reg_inc_beta,
                             log_beta, log_gamma, reg_inc_beta)

from helpers import KS_CRIT_1PCT, LOG_BETA_075_74


def _random_shapes(rng, n, lo=0.05, hi=500.0):
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size=(n, 2)))


class TestLogGamma:
    def test_known_values(self):
        assert log_gamma(1.0) == pytest.approx(0.0, abs=1e-15)
        assert log_gamma(0.5) == pytest.approx(0.5 * math.log(math.pi), abs=1e-13)
        assert log_gamma(10.0) == pytest.approx(math.log(math.factorial(9)), rel=1e-14)

    def test_accuracy_across_range(self):
        # absolute 1e-12 up to where ln(Gamma) itself is O(1); relative
        # 1e-12 beyond (float64 cannot carry 1e-12 absolute on 1e7-sized
        # values: one ulp of lnGamma(1e6) is already ~2e-9)
        x = np.exp(np.linspace(np.log(1e-3), np.log(1e6), 4001))
        ours = np.array([log_gamma(v) for v in x])
        ref = sps.gammaln(x)
        err = np.abs(ours - ref)
        assert np.all(err <= 1e-12 * np.maximum(1.0, np.abs(ref)))

    @pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf])
    def test_domain(self, bad):
        with pytest.raises(ValueError):
            log_gamma(bad)


class TestLogBeta:
    def test_trivial(self):
        assert log_beta(BetaParams(1, 1)) == pytest.approx(0.0, abs=1e-15)
        assert log_beta(BetaParams(2, 3)) == pytest.approx(math.log(1 / 12), rel=1e-14)

    def test_parkinson_shape_value(self):
        # frozen from 40-digit mpmath quadrature of the defining integral
        assert log_beta(BetaParams(0.75, 74.0)) == pytest.approx(
            LOG_BETA_075_74, abs=1e-12)

    def test_params_validation(self):
        for alpha, beta in [(0, 1), (1, 0), (-2, 3), (math.nan, 1), (1, math.inf)]:
            with pytest.raises(ValueError):
                BetaParams(alpha, beta)


class TestBetaPdf:
    def test_uniform(self):
        assert beta_pdf(0.5, BetaParams(1, 1)) == 1.0

    def test_quadratic(self):
        assert beta_pdf(0.25, BetaParams(2, 2)) == pytest.approx(1.125, rel=1e-14)

    def test_against_normalized_quadrature(self):
        # numeric normalization: integrate the unnormalized kernel and divide
        p = BetaParams(0.75, 74.0)
        kernel = lambda t: t ** (p.alpha - 1) * (1 - t) ** (p.beta - 1)
        norm, _ = integrate.quad(kernel, 0, 1, epsabs=1e-13)
        assert beta_pdf(0.01, p) == pytest.approx(kernel(0.01) / norm, rel=1e-9)

    def test_endpoint_conventions(self):
        assert beta_pdf(0.0, BetaParams(0.75, 74)) == math.inf
        assert beta_pdf(0.0, BetaParams(1.0, 5)) == 5.0
        assert beta_pdf(0.0, BetaParams(2.0, 5)) == 0.0
        assert beta_pdf(1.0, BetaParams(5, 0.75)) == math.inf
        assert beta_pdf(1.0, BetaParams(5, 1.0)) == 5.0
        assert beta_pdf(1.0, BetaParams(5, 2.0)) == 0.0

    def test_integrates_to_one(self):
        # shape parameters spanning [0.05, 500]
        rng = np.random.default_rng(2024)
        for alpha, beta in _random_shapes(rng, 25):
            p = BetaParams(alpha, beta)
            val, _ = integrate.quad(lambda t: beta_pdf(t, p), 0, 1,
                                    epsabs=1e-10, limit=400)
            assert val == pytest.approx(1.0, abs=1e-8), (alpha, beta)

    def test_domain(self):
        with pytest.raises(ValueError):
            beta_pdf(-0.1, BetaParams(2, 2))
        with pytest.raises(ValueError):
            beta_pdf(1.1, BetaParams(2, 2))


class TestRegIncBeta:
    def test_boundaries_and_uniform(self):
        p = BetaParams(3.2, 0.7)
        assert reg_inc_beta(0.0, p) == 0.0
        assert reg_inc_beta(1.0, p) == 1.0
        assert reg_inc_beta(0.3, BetaParams(1, 1)) == pytest.approx(0.3, abs=1e-14)

    def test_symmetric_shape_midpoint(self):
        for a in (0.05, 0.75, 1.0, 7.0, 300.0):
            assert reg_inc_beta(0.5, BetaParams(a, a)) == pytest.approx(0.5, abs=1e-12)

    def test_accuracy_vs_scipy(self):
        rng = np.random.default_rng(7)
        worst = 0.0
        for alpha, beta in _random_shapes(rng, 300):
            x = rng.uniform(0.0, 1.0, 40)
            ours = reg_inc_beta(x, BetaParams(alpha, beta))
            worst = max(worst, np.abs(ours - sps.betainc(alpha, beta, x)).max())
        assert worst <= 1e-12

    def test_monotone_and_onto(self):
        rng = np.random.default_rng(11)
        grid = np.linspace(0.0, 1.0, 2001)
        for alpha, beta in _random_shapes(rng, 40):
            vals = reg_inc_beta(grid, BetaParams(alpha, beta))
            assert vals[0] == 0.0 and vals[-1] == 1.0
            assert np.all(np.diff(vals) >= 0.0)

    def test_reflection_identity(self):
        rng = np.random.default_rng(13)
        for alpha, beta in _random_shapes(rng, 60):
            x = rng.uniform(0, 1, 20)
            lhs = reg_inc_beta(x, BetaParams(alpha, beta))
            rhs = reg_inc_beta(1.0 - x, BetaParams(beta, alpha))
            assert np.abs(lhs + rhs - 1.0).max() <= 1e-10

    def test_domain(self):
        with pytest.raises(ValueError):
            reg_inc_beta(1.5, BetaParams(2, 2))
        with pytest.raises(ValueError):
            reg_inc_beta(np.array([0.2, -0.3]), BetaParams(2, 2))


class TestInvRegIncBeta:
    def test_boundaries_and_symmetry(self):
        p = BetaParams(0.75, 74.0)
        assert inv_reg_inc_beta(0.0, p) == 0.0
        assert inv_reg_inc_beta(1.0, p) == 1.0
        for a in (0.2, 1.0, 50.0):
            assert inv_reg_inc_beta(0.5, BetaParams(a, a)) == pytest.approx(0.5, abs=1e-10)

    def test_cdf_residual(self):
        # strict contract over shapes whose quantiles stay representable:
        # with min(a, b) >= 0.63 the CDF jump across adjacent doubles at the
        # endpoints is below 1e-10, so the root always exists in float64
        rng = np.random.default_rng(17)
        for alpha, beta in _random_shapes(rng, 120, lo=0.63):
            p = BetaParams(alpha, beta)
            u = rng.uniform(0, 1, 25)
            x = inv_reg_inc_beta(u, p)
            assert np.abs(reg_inc_beta(x, p) - u).max() <= 1e-10

    def test_cdf_residual_extreme_shapes(self):
        # tiny shapes put some quantiles inside the representational gap
        # next to an endpoint; the answer must then be unbeatable by any
        # neighboring double (and by the endpoints themselves)
        rng = np.random.default_rng(23)
        for alpha, beta in _random_shapes(rng, 60):
            p = BetaParams(alpha, beta)
            u = rng.uniform(0, 1, 10)
            x = np.atleast_1d(inv_reg_inc_beta(u, p))
            err = np.abs(np.atleast_1d(reg_inc_beta(x, p)) - u)
            fine = err <= 1e-10
            for i in np.nonzero(~fine)[0]:
                neighbors = [np.nextafter(x[i], 0.0), np.nextafter(x[i], 1.0)]
                rival = min(abs(reg_inc_beta(v, p) - u[i]) for v in neighbors)
                rival = min(rival, u[i], 1.0 - u[i])
                assert err[i] <= rival * (1 + 1e-12) + 1e-15, (alpha, beta, u[i])

    def test_roundtrip_from_x(self):
        rng = np.random.default_rng(19)
        xs = np.concatenate([[1e-9, 1 - 1e-9], rng.uniform(1e-9, 1 - 1e-9, 30)])
        for alpha, beta in _random_shapes(rng, 80, lo=0.05, hi=50.0):
            p = BetaParams(alpha, beta)
            u = reg_inc_beta(xs, p)
            back = inv_reg_inc_beta(u, p)
            assert np.abs(back - xs).max() <= 1e-9

    def test_bisection_oracle(self):
        # independent bracketing oracle to 1e-12
        p = BetaParams(0.75, 74.0)
        lo, hi = 0.0, 1.0
        for _ in range(60):
            mid = 0.5 * (lo + hi)
            if sps.betainc(0.75, 74.0, mid) < 0.9:
                lo = mid
            else:
                hi = mid
        assert inv_reg_inc_beta(0.9, p) == pytest.approx(0.5 * (lo + hi), abs=1e-12)

    def test_domain(self):
        with pytest.raises(ValueError):
            inv_reg_inc_beta(-0.2, BetaParams(2, 2))


class TestBetaSample:
    def test_uniform_ks(self):
        draws = beta_sample(BetaParams(1, 1), 100_000, seed=424242)
        assert draws.min() > 0.0 and draws.max() <= 1.0
        ecdf_hi = np.arange(1, draws.size + 1) / draws.size
        ecdf_lo = np.arange(0, draws.size) / draws.size
        srt = np.sort(draws)
        ks = max(np.abs(srt - ecdf_hi).max(), np.abs(srt - ecdf_lo).max())
        assert ks < KS_CRIT_1PCT / math.sqrt(draws.size)

    def test_mean_parkinson_shape(self):
        p = BetaParams(0.75, 74.0)
        n = 1_000_000
        draws = beta_sample(p, n, seed=99)
        mean = p.alpha / (p.alpha + p.beta)   # 0.010033..., i.e. ~1% risk
        var = mean * (1 - mean) / (p.alpha + p.beta + 1)
        assert abs(draws.mean() - mean) < 3 * math.sqrt(var / n)

    def test_variance_symmetric_shape(self):
        n = 1_000_000
        draws = beta_sample(BetaParams(2, 2), n, seed=5)
        # SE of the sample variance from the exact 4th moment of Beta(2,2)
        se = math.sqrt((3 / 560 - 0.05 ** 2) / n)
        assert abs(draws.var() - 0.05) < 3 * se

    def test_ecdf_matches_cdf(self):
        p = BetaParams(0.75, 74.0)
        draws = np.sort(beta_sample(p, 100_000, seed=3))
        cdf = reg_inc_beta(draws, p)
        ecdf_hi = np.arange(1, draws.size + 1) / draws.size
        ecdf_lo = np.arange(0, draws.size) / draws.size
        ks = max(np.abs(cdf - ecdf_hi).max(), np.abs(cdf - ecdf_lo).max())
        assert ks < KS_CRIT_1PCT / math.sqrt(draws.size)

    def test_determinism(self):
        p = BetaParams(0.7515, 74.4)
        a = beta_sample(p, 4000, seed=12345)
        b = beta_sample(p, 4000, seed=12345)
        c = beta_sample(p, 4000, seed=12346)
        assert np.array_equal(a, b)
        assert not np.array_equal(a, c)

    def test_prefix_stability(self):
        # per-draw substreams: a longer run starts with the shorter one
        p = BetaParams(2.0, 5.0)
        short = beta_sample(p, 100, seed=8)
        long = beta_sample(p, 1000, seed=8)
        assert np.array_equal(long[:100], short)

    def test_n_validation(self):
        with pytest.raises(ValueError):
            beta_sample(BetaParams(1, 1), 0, seed=1)
