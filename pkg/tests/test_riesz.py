import math

import numpy as np
import pytest
from scipy import integrate as sp_integrate
from scipy import special, stats

from riesz_lab.algebra import HermitianPD, cholesky_array, hpd_logdet_array, log_diag, mat_to_complex
from riesz_lab.errors import DomainError, UnsupportedAlgebraError
from riesz_lab.riesz import (
    RieszParams,
    ScalarGammaParams,
    Variant,
    bartlett_factor,
    bartlett_shapes,
    cdf_scalar_gamma,
    generalized_variance_log_moments,
    generalized_variance_mean,
    log_density_generalized_variance,
    log_density_inverse_riesz,
    log_density_riesz,
    log_density_scalar_gamma,
    riesz_from_factor,
    sample_generalized_variance,
    sample_inverse_riesz,
    sample_riesz_bartlett,
    sample_scalar_gamma,
    sample_scalar_normal_beta,
)
from riesz_lab.verify import QuadratureSpec, binned_cdf_report, integrate, ks_2samp_test, ks_test, moment_report

from conftest import random_hpd

SIGMA2 = HermitianPD(np.array([[[2.0], [0.7]], [[0.7], [1.0]]]))


def scalar(x, beta=1):
    out = np.zeros((1, 1, beta))
    out[0, 0, 0] = x
    return out


def numpy_inverse(s):
    beta = s.shape[-1]
    if beta == 1:
        return np.linalg.inv(s[..., 0])[..., None]
    z = np.linalg.inv(mat_to_complex(s))
    return np.stack([z.real, z.imag], axis=-1)


def cone_expectation(params, g, tol=1e-6):
    """``E g(X)`` under the density, by cubature over real 2x2 matrices."""
    return integrate(lambda s: g(s) * np.exp(log_density_riesz(params, s)), QuadratureSpec("spd-cone-2x2", tol, 9))


class TestParams:
    def test_domains(self):
        with pytest.raises(DomainError):
            RieszParams(1, 2, 0.4, [0, 0])
        with pytest.raises(DomainError):
            RieszParams(1, 2, 1.4, [1, 0], variant="II")
        with pytest.raises(DomainError):
            RieszParams(1, 2, 3.0, [0, 1])
        with pytest.raises(UnsupportedAlgebraError):
            RieszParams(8, 1, 3.0, [0])

    def test_variant_coercion(self):
        assert Variant.coerce("type2") is Variant.TYPE_II
        assert Variant.coerce(1) is Variant.TYPE_I
        with pytest.raises(DomainError):
            Variant.coerce("III")

    def test_shapes(self):
        p1 = RieszParams(2, 3, 4.0, [2, 1, 0])
        np.testing.assert_allclose(bartlett_shapes(p1), [6.0, 4.0, 2.0])
        p2 = RieszParams(2, 3, 5.0, [2, 1, 0], variant="II")
        np.testing.assert_allclose(bartlett_shapes(p2), [1.0, 3.0, 5.0])


class TestDensity:
    def test_exponential(self):
        assert log_density_riesz(RieszParams(1, 1, 1.0, [0]), scalar(1.0)) == pytest.approx(-1.0, abs=1e-14)

    def test_scalar_gamma_value(self):
        got = log_density_riesz(RieszParams(1, 1, 1.0, [2]), scalar(2.0))
        assert got == pytest.approx(math.log(2.0 * math.exp(-2.0)), abs=1e-13)

    @pytest.mark.parametrize("beta", [1, 2, 4])
    @pytest.mark.parametrize("variant,k", [("I", 1.5), ("II", 0.5)])
    def test_scalar_law(self, beta, variant, k):
        # at m = 1 the law is a gamma with shape a +- k and rate beta / sigma
        a, sig = 2.5, 1.7
        params = RieszParams(beta, 1, a, [k], HermitianPD(scalar(sig, beta)), variant)
        shape = a + k if variant == "I" else a - k
        for x in (0.3, 1.0, 4.2):
            ref = stats.gamma.logpdf(x, shape, scale=sig / beta)
            assert log_density_riesz(params, scalar(x, beta)) == pytest.approx(ref, abs=1e-12)

    @pytest.mark.parametrize("variant", ["I", "II"])
    def test_wishart_reduction(self, rng, variant):
        # kappa = 0, beta = 1, a = n/2, Sigma = 2 Sigma0 is the Wishart(n, Sigma0) law
        n, m = 7, 3
        s0 = random_hpd(rng, 1, m)
        params = RieszParams(1, m, n / 2, [0] * m, HermitianPD(2.0 * s0), variant)
        x = random_hpd(rng, 1, m, n=5)
        ref = stats.wishart(df=n, scale=s0[..., 0]).logpdf(np.moveaxis(x[..., 0], 0, -1))
        np.testing.assert_allclose(log_density_riesz(params, x), ref, atol=1e-10)

    @pytest.mark.parametrize("beta", [1, 2, 4])
    @pytest.mark.parametrize("variant,a,k", [("I", 5.0, [2, 1, 0.5]), ("II", 9.0, [2, 1, 0.5])])
    def test_inverse_change_of_variables(self, rng, beta, variant, a, k):
        params = RieszParams(beta, 3, a, k, HermitianPD(random_hpd(rng, beta, 3)), variant)
        y = random_hpd(rng, beta, 3)
        if beta <= 2:
            y_inv = numpy_inverse(y)
        else:
            from riesz_lab.algebra import hpd_inverse_array

            y_inv = hpd_inverse_array(y)
        logdet_y = float(hpd_logdet_array(y))
        ref = log_density_riesz(params, y_inv) - (beta * 2 + 2) * logdet_y
        assert log_density_inverse_riesz(params, y) == pytest.approx(ref, abs=1e-10)

    def test_inverse_exponential_at_one(self):
        assert log_density_inverse_riesz(RieszParams(1, 1, 1.0, [0]), scalar(1.0)) == pytest.approx(-1.0)

    @pytest.mark.parametrize("beta", [1, 2, 4])
    @pytest.mark.parametrize("variant,a,k", [("I", 0.8, 0.0), ("I", 2.0, 1.5), ("II", 3.5, 1.0), ("II", 2.2, 0.0)])
    @pytest.mark.parametrize("inverse", [False, True])
    def test_scalar_normalization_independent_quadrature(self, beta, variant, a, k, inverse):
        params = RieszParams(beta, 1, a, [k], variant=variant)
        fn = log_density_inverse_riesz if inverse else log_density_riesz
        val, _ = sp_integrate.quad(lambda x: math.exp(fn(params, scalar(x, beta))), 0, np.inf, epsabs=1e-12, limit=200)
        assert val == pytest.approx(1.0, abs=1e-8)

    @pytest.mark.parametrize("variant,a,k", [("I", 2.5, [2.0, 0.5]), ("II", 3.0, [1.5, 0.5])])
    def test_general_sigma_normalization(self, variant, a, k):
        params = RieszParams(1, 2, a, k, SIGMA2, variant)
        assert cone_expectation(params, lambda s: 1.0) == pytest.approx(1.0, abs=1e-5)

    def test_batched_matches_single(self, rng):
        params = RieszParams(2, 3, 4.0, [1, 0.5, 0])
        x = random_hpd(rng, 2, 3, n=4)
        batched = log_density_riesz(params, x)
        for i in range(4):
            assert batched[i] == pytest.approx(log_density_riesz(params, HermitianPD(x[i])), abs=1e-13)

    def test_shape_mismatch(self):
        with pytest.raises(DomainError):
            log_density_riesz(RieszParams(1, 2, 3.0, [0, 0]), scalar(1.0))


class TestScalarSamplers:
    def test_gamma_mean(self):
        p = ScalarGammaParams(2.0, 1.0, 1)
        x = sample_scalar_gamma(p, np.random.default_rng(1), 100_000)
        assert moment_report(x, 2.0, p.var).passed

    def test_gamma_exponential_rate_two(self):
        x = sample_scalar_gamma(ScalarGammaParams(1.0, 1.0, 2), np.random.default_rng(2), 20_000)
        assert ks_test(x, lambda v: 1.0 - np.exp(-2.0 * v)).passed

    def test_gamma_half_chi_square(self):
        x = sample_scalar_gamma(ScalarGammaParams(0.5, 1.0, 1), np.random.default_rng(3), 20_000)
        assert ks_test(x, lambda v: stats.chi2.cdf(2.0 * v, 1)).passed

    def test_gamma_density_normalized(self):
        p = ScalarGammaParams(1.7, 2.0, 4)
        val, _ = sp_integrate.quad(lambda x: math.exp(log_density_scalar_gamma(p, x)), 0, np.inf)
        assert val == pytest.approx(1.0, abs=1e-10)
        assert cdf_scalar_gamma(p, 1.0) == pytest.approx(stats.gamma.cdf(1.0, 1.7, scale=0.5))

    def test_gamma_validation(self):
        with pytest.raises(DomainError):
            ScalarGammaParams(0.0)

    @pytest.mark.parametrize("beta", [1, 2, 4, 8])
    def test_normal_components(self, beta):
        z = sample_scalar_normal_beta(beta, np.random.default_rng(4), 100_000)
        assert z.shape == (100_000, beta)
        for c in range(beta):
            assert moment_report(z[:, c], 0.0, 1.0 / beta).passed
            assert np.var(z[:, c]) == pytest.approx(1.0 / beta, rel=0.05)

    def test_complex_normal_norm(self):
        z = sample_scalar_normal_beta(2, np.random.default_rng(5), 100_000)
        assert np.mean(np.sum(z**2, axis=-1)) == pytest.approx(1.0, abs=0.02)


class TestBartlett:
    def test_exponential(self):
        x = sample_riesz_bartlett(RieszParams(1, 1, 1.0, [0]), np.random.default_rng(6), 20_000)
        assert ks_test(x[:, 0, 0, 0], lambda v: 1.0 - np.exp(-v)).passed

    def test_single_draw_type(self):
        x = sample_riesz_bartlett(RieszParams(4, 3, 5.0, [1, 0, 0]), 7)
        assert isinstance(x, HermitianPD)

    @pytest.mark.parametrize("beta", [1, 2, 4])
    def test_pivot_means(self, beta):
        params = RieszParams(beta, 3, 5.0, [2.0, 1.0, 0.5])
        x = sample_riesz_bartlett(params, np.random.default_rng(8), 100_000)
        t, ok = cholesky_array(x)
        assert ok.all()
        piv = np.exp(2.0 * log_diag(t))
        shapes = bartlett_shapes(params)
        for i in range(3):
            assert moment_report(piv[:, i], shapes[i] / beta, shapes[i] / beta**2).passed

    @pytest.mark.parametrize("beta", [1, 2, 4])
    @pytest.mark.parametrize("a,k", [(2.0, 0), (4.0, 1), (4.0, 2)])
    def test_scalar_sampler_matches_density_cdf(self, beta, a, k):
        params = RieszParams(beta, 1, a, [k])
        x = sample_riesz_bartlett(params, np.random.default_rng(100 * beta + 10 * k + int(a)), 20_000)[:, 0, 0, 0]
        edges = np.quantile(x, np.linspace(0.05, 0.95, 19))
        cdf = [
            integrate(
                lambda v: np.exp(log_density_riesz(params, _stack(v, beta))),
                QuadratureSpec("half-line", 1e-10),
                upper=e,
                vectorized=True,
            )
            for e in edges
        ]
        assert binned_cdf_report(x, edges, cdf).passed

    @pytest.mark.parametrize("beta", [1, 2, 4])
    def test_type2_reverse_factor_pivots(self, beta):
        params = RieszParams(beta, 3, 8.0, [2.0, 1.0, 0.5], variant="II")
        x = sample_riesz_bartlett(params, np.random.default_rng(9), 20_000)
        from riesz_lab.algebra import reverse_cholesky_array

        r, _ = reverse_cholesky_array(x)
        piv = np.exp(2.0 * log_diag(r))
        for i, s in enumerate(bartlett_shapes(params)):
            assert ks_test(piv[:, i], lambda v, s=s: special.gammainc(s, beta * v)).passed

    def test_factor_structure(self):
        params = RieszParams(2, 4, 5.0, [1, 1, 0, 0])
        t = bartlett_factor(params, np.random.default_rng(10), 3)
        assert np.all(np.tril(np.ones((4, 4)), -1)[..., None] * t == 0)
        assert np.all(t[:, np.arange(4), np.arange(4), 1:] == 0)

    @pytest.mark.parametrize("variant,a,k", [("I", 2.5, [2.0, 0.5]), ("II", 3.0, [1.5, 0.5])])
    def test_general_sigma_moments_match_density(self, variant, a, k):
        params = RieszParams(1, 2, a, k, SIGMA2, variant)
        x = sample_riesz_bartlett(params, np.random.default_rng(11), 100_000)
        for g in (lambda s: s[..., 0, 0, 0], lambda s: s[..., 0, 1, 0], lambda s: s[..., 1, 1, 0]):
            mean = cone_expectation(params, g, 1e-5)
            second = cone_expectation(params, lambda s: g(s) ** 2, 1e-5)
            assert moment_report(g(x), mean, second - mean**2).passed

    def test_wishart_mean(self, rng):
        n, m = 6, 3
        s0 = random_hpd(rng, 1, m)
        params = RieszParams(1, m, n / 2, [0] * m, HermitianPD(2.0 * s0))
        x = sample_riesz_bartlett(params, np.random.default_rng(12), 10_000)[..., 0]
        var = n * (s0[..., 0] ** 2 + np.outer(np.diag(s0[..., 0]), np.diag(s0[..., 0])))
        for i in range(m):
            for j in range(m):
                assert moment_report(x[:, i, j], n * s0[i, j, 0], var[i, j]).passed

    def test_inverse_log_determinant(self):
        params = RieszParams(2, 3, 4.0, [1.0, 0.5, 0.0])
        y = sample_inverse_riesz(params, np.random.default_rng(13), 50_000)
        mean, var = generalized_variance_log_moments(params)
        assert moment_report(hpd_logdet_array(y), -mean, var).passed

    def test_deterministic(self):
        params = RieszParams(4, 3, 5.0, [1, 0.5, 0])
        a = sample_riesz_bartlett(params, np.random.default_rng(14), 50)
        b = sample_riesz_bartlett(params, np.random.default_rng(14), 50)
        assert np.array_equal(a, b)

    def test_from_factor_identity_scale(self):
        params = RieszParams(1, 2, 3.0, [0, 0])
        t = bartlett_factor(params, np.random.default_rng(15), 2)
        x = riesz_from_factor(params, t)
        np.testing.assert_allclose(x[..., 0], np.swapaxes(t[..., 0], -1, -2) @ t[..., 0])


def _stack(v, beta):
    out = np.zeros((np.size(v), 1, 1, beta))
    out[:, 0, 0, 0] = v
    return out


class TestGeneralizedVariance:
    def test_scalar_reduction(self):
        params = RieszParams(2, 1, 2.5, [1.0])
        for v in (0.2, 1.0, 3.0):
            ref = stats.gamma.logpdf(v, 3.5, scale=0.5)
            assert log_density_generalized_variance(params, v) == pytest.approx(ref, abs=1e-10)

    @pytest.mark.parametrize("m,beta", [(2, 1), (2, 4), (3, 2)])
    def test_normalization_and_mean(self, m, beta):
        params = RieszParams(beta, m, 4.0, [1.0] + [0.0] * (m - 1))

        def dens(w):
            # density of log v
            v = math.exp(w)
            return math.exp(log_density_generalized_variance(params, v)) * v

        total, _ = sp_integrate.quad(dens, -20, 8, limit=200)
        mean, _ = sp_integrate.quad(lambda w: math.exp(w) * dens(w), -20, 8, limit=200)
        assert total == pytest.approx(1.0, abs=1e-8)
        assert mean == pytest.approx(generalized_variance_mean(params), rel=1e-7)

    def test_sampler_only_above_three(self):
        with pytest.raises(NotImplementedError):
            log_density_generalized_variance(RieszParams(1, 4, 4.0, [0] * 4), 1.0)

    def test_mean(self):
        params = RieszParams(2, 3, 4.0, [1.0, 0.5, 0.0])
        v = sample_generalized_variance(params, np.random.default_rng(16), 100_000)
        shapes = bartlett_shapes(params) / 2
        var = np.prod(shapes * (shapes + 0.5)) - np.prod(shapes) ** 2
        assert moment_report(v, generalized_variance_mean(params), var).passed

    @pytest.mark.parametrize("variant,a,k", [("I", 3.0, [1.0, 0.5, 0.0]), ("II", 6.0, [1.0, 0.5, 0.0])])
    def test_two_paths(self, variant, a, k):
        params = RieszParams(2, 3, a, k, HermitianPD(random_hpd(np.random.default_rng(17), 2, 3)), variant)
        x = sample_riesz_bartlett(params, np.random.default_rng(18), 20_000)
        v1 = np.exp(hpd_logdet_array(x) - float(hpd_logdet_array(params.sigma.data)))
        v2 = sample_generalized_variance(params, np.random.default_rng(19), 20_000)
        assert ks_2samp_test(v1, v2).passed

    def test_type2_mean_matches_density(self):
        params = RieszParams(1, 2, 3.0, [1.5, 0.5], variant="II")
        ref = cone_expectation(params, lambda s: s[..., 0, 0, 0] * s[..., 1, 1, 0] - s[..., 0, 1, 0] ** 2)
        assert generalized_variance_mean(params) == pytest.approx(ref, rel=1e-4)
