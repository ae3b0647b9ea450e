import math

import numpy as np
import pytest
from scipy import integrate as sp_integrate
from scipy import special, stats

from riesz_lab.algebra import HermitianPD
from riesz_lab.beta_riesz import BetaRieszParams, sample_beta_riesz
from riesz_lab.errors import DomainError
from riesz_lab.spectral import (
    EigenDensityParams,
    empirical_eigenvalues,
    largest_eigenvalue_cdf,
    log_eigen_constant,
    log_eigen_constant_closed,
    log_joint_eigen_density,
    log_vandermonde_beta,
    rho_constant,
)
from riesz_lab.suites import eigen_m2_integral
from riesz_lab.verify import binned_cdf_report


class TestConstants:
    def test_rho(self):
        assert [rho_constant(b, 3) for b in (1, 2, 4, 8)] == [0, -3, -6, -12]
        assert EigenDensityParams.build(2, 2, 3.0, [0, 0], 3.0, [0, 0]).rho == -2

    @pytest.mark.parametrize("beta", [1, 2, 4, 8])
    def test_scalar_constant_is_one(self, beta):
        assert log_eigen_constant(beta, 1) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("beta", [1, 2, 4])
    @pytest.mark.parametrize("m", [1, 2, 3, 5])
    def test_closed_form_agrees_below_octonions(self, beta, m):
        assert log_eigen_constant_closed(beta, m) == pytest.approx(log_eigen_constant(beta, m), abs=1e-12)

    def test_closed_form_fails_for_octonions(self):
        assert log_eigen_constant_closed(8, 1) == pytest.approx(-math.log(6.0), abs=1e-14)

    def test_real_two_by_two(self):
        # ordered-eigenvalue Jacobian of real symmetric 2x2 matrices is pi (l1 - l2)
        assert log_eigen_constant(1, 2) == pytest.approx(math.log(math.pi), abs=1e-14)


class TestVandermonde:
    def test_examples(self):
        assert log_vandermonde_beta([2.5], 1) == 0.0
        assert log_vandermonde_beta([3.0, 1.0], 2) == pytest.approx(2 * math.log(2.0))
        assert log_vandermonde_beta([4.0, 2.0, 1.0], 1) == pytest.approx(math.log(6.0))

    def test_order_enforced(self):
        with pytest.raises(DomainError):
            log_vandermonde_beta([1.0, 3.0], 1)
        with pytest.raises(DomainError):
            log_vandermonde_beta([2.0, 2.0], 1)


class TestJointDensity:
    @pytest.mark.parametrize("beta", [1, 2, 4, 8])
    @pytest.mark.parametrize("family", ["C", "K"])
    def test_scalar_reduction(self, beta, family):
        a, k, b, t = 3.0, 1.0, 2.5, 0.5
        sgn = 1 if family == "C" else -1
        p = BetaRieszParams(beta, 1, a, [k], b, [t], family, "I")
        x = np.array([[0.2], [0.6]])
        np.testing.assert_allclose(
            log_joint_eigen_density(p, x), stats.beta.logpdf(x[:, 0], a + sgn * k, b + sgn * t), atol=1e-12
        )
        p2 = p.with_variant("II")
        r = np.array([[0.3], [5.0]])
        np.testing.assert_allclose(
            log_joint_eigen_density(p2, r), stats.betaprime.logpdf(r[:, 0], a + sgn * k, b + sgn * t), atol=1e-12
        )

    def test_flat_exponents_independent_quadrature(self):
        p = BetaRieszParams(1, 2, 1.0, [0, 0], 1.0, [0, 0])

        def f(l2, l1):
            return math.exp(log_joint_eigen_density(p, [l1, l2]))

        val, _ = sp_integrate.dblquad(f, 0, 1, 0, lambda l1: l1, epsabs=1e-10)
        assert val == pytest.approx(1.0, abs=1e-6)
        assert eigen_m2_integral(p, 1e-9) == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("beta", [1, 2, 4, 8])
    @pytest.mark.parametrize("family", ["C", "K"])
    @pytest.mark.parametrize("variant", ["I", "II"])
    def test_constant_weight_normalization(self, beta, family, variant):
        if family == "C":
            p = BetaRieszParams(beta, 2, beta / 2 + 1.5, [1, 1], beta / 2 + 1.0, [0.5, 0.5], family, variant)
        else:
            p = BetaRieszParams(beta, 2, beta / 2 + 2.5, [1, 1], beta / 2 + 2.0, [0.5, 0.5], family, variant)
        assert eigen_m2_integral(p, 1e-9) == pytest.approx(1.0, abs=1e-6)

    def test_nonconstant_weight_is_not_normalized(self):
        # attaching k_i to the i-th ordered eigenvalue is exact only for constant weights
        p = BetaRieszParams(1, 2, 4.0, [1.5, 0.5], 3.5, [1.0, 0.0])
        assert abs(eigen_m2_integral(p, 1e-9) - 1.0) > 1e-2

    def test_ordering_and_range(self):
        p = BetaRieszParams(1, 2, 2.0, [0, 0], 2.0, [0, 0])
        with pytest.raises(DomainError):
            log_joint_eigen_density(p, [0.2, 0.5])
        with pytest.raises(DomainError):
            log_joint_eigen_density(p, [1.2, 0.5])
        with pytest.raises(DomainError):
            log_joint_eigen_density(p, [0.5, 0.2, 0.1])

    def test_accepts_wrapped_params(self):
        p = BetaRieszParams(2, 2, 3.0, [1, 0], 3.0, [0, 0])
        lam = [0.7, 0.2]
        assert log_joint_eigen_density(EigenDensityParams(p), lam) == log_joint_eigen_density(p, lam)

    def test_classical_real_beta_eigenvalues(self):
        # kappa = tau = 0 at beta = 1 is the classical matrix beta eigenvalue law
        a, b, m = 2.5, 3.0, 2
        p = BetaRieszParams(1, m, a, [0, 0], b, [0, 0])
        lam = np.array([0.8, 0.3])
        log_b = special.multigammaln(a, m) + special.multigammaln(b, m) - special.multigammaln(a + b, m)
        ref = (
            m * m / 2 * math.log(math.pi)
            - special.multigammaln(m / 2, m)
            - log_b
            + math.log(lam[0] - lam[1])
            + np.sum((a - 1.5) * np.log(lam) + (b - 1.5) * np.log1p(-lam))
        )
        assert log_joint_eigen_density(p, lam) == pytest.approx(ref, abs=1e-12)


class TestEmpirical:
    def test_identity(self):
        np.testing.assert_allclose(empirical_eigenvalues(HermitianPD.identity(4, 3)), [1, 1, 1])

    def test_scalar(self):
        assert empirical_eigenvalues(np.array([[[0.25]]]))[0] == 0.25

    @pytest.mark.parametrize("beta", [1, 2, 4])
    @pytest.mark.parametrize("variant", ["I", "II"])
    def test_largest_eigenvalue_matches_joint_density(self, beta, variant):
        p = BetaRieszParams(beta, 2, beta / 2 + 3.0, [1, 1], beta / 2 + 2.5, [0.5, 0.5], "C", variant)
        lam = empirical_eigenvalues(sample_beta_riesz(p, np.random.default_rng(beta), 20_000))[:, 0]
        edges = np.quantile(lam, np.linspace(0.05, 0.95, 10))
        cdf = [largest_eigenvalue_cdf(p.swapped(), e) for e in edges]
        assert binned_cdf_report(lam, edges, cdf).passed

    def test_cdf_requires_two_by_two(self):
        with pytest.raises(DomainError):
            largest_eigenvalue_cdf(BetaRieszParams(1, 3, 3.0, [0] * 3, 3.0, [0] * 3), 0.5)
