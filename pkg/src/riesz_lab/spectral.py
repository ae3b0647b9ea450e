"""Joint eigenvalue densities of the beta-Riesz laws.

For type I (``1 > l_1 > ... > l_m > 0``) the c-family density is

    C(m, beta) / B_c * V(l)^beta * prod l_i^{a+k_i-p-1} (1-l_i)^{b+t_i-p-1}

and for type II (``d_1 > ... > d_m > 0``)

    C(m, beta) / B_c * V(d)^beta * prod d_i^{a+k_i-p-1} (1+d_i)^{-(a+b+k_i+t_i)}.

The k-family replaces ``+k_i, +t_i`` by ``-k_i, -t_i`` and ``B_c`` by
``B_k``.  Weights are attached to the ordered eigenvalues.  This is exact
when the weights are constant; for other weights the formula is a
simplification, because ``q_k`` is not invariant under unitary
conjugation.  ``V`` is the Vandermonde product and

    C(m, beta) = m! pi^{m(m-1) beta/4} prod_{j=1}^m Gamma(1 + beta/2) / Gamma(1 + j beta/2)

is the constant of the eigenvalue change of variables, obtained from the
Selberg integral.  It equals 1 at ``m = 1`` for every ``beta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .algebra import AlgebraTag, HermitianPD, eigvalsh_array
from .beta_riesz import BetaRieszParams, Family, ln_beta_normalizer
from .errors import DomainError
from .riesz import Variant
from .specfun import LOG_PI, ln_mv_gamma


def rho_constant(beta: int, m: int) -> int:
    """Dimension offset ``0, -m, -2m, -4m`` for ``beta = 1, 2, 4, 8``."""
    beta = AlgebraTag.coerce(beta).beta
    return {1: 0, 2: -m, 4: -2 * m, 8: -4 * m}[beta]


def log_eigen_constant(beta: int, m: int) -> float:
    """Log of the eigenvalue-transform constant ``C(m, beta)``."""
    beta = AlgebraTag.coerce(beta).beta
    j = np.arange(1, m + 1)
    return float(
        math.lgamma(m + 1)
        + m * (m - 1) * beta / 4.0 * LOG_PI
        + np.sum(special.gammaln(1.0 + beta / 2.0) - special.gammaln(1.0 + j * beta / 2.0))
    )


def log_eigen_constant_closed(beta: int, m: int) -> float:
    """``pi^{m^2 beta/2 + rho} / Gamma_m[m beta/2]``.

    Agrees with :func:`log_eigen_constant` for ``beta <= 4`` but not for
    octonions (at ``m = 1`` it gives ``1/6``).
    """
    return (m * m * beta / 2.0 + rho_constant(beta, m)) * LOG_PI - ln_mv_gamma(beta, m, m * beta / 2.0).log_abs


@dataclass(frozen=True)
class EigenDensityParams:
    """Beta-Riesz parameters viewed through their eigenvalues.

    Unlike :class:`BetaRieszParams` used for matrices, octonions are allowed.
    """

    law: BetaRieszParams

    @property
    def rho(self) -> int:
        return rho_constant(self.law.beta, self.law.m)

    @classmethod
    def build(cls, beta, m, a, kappa, b, tau, family="C", variant="I") -> "EigenDensityParams":
        return cls(BetaRieszParams(beta, m, a, kappa, b, tau, family, variant))


def _check_descending(lams: np.ndarray) -> None:
    if lams.shape[-1] > 1 and np.any(np.diff(lams, axis=-1) >= 0):
        raise DomainError("eigenvalues must be strictly descending (no ties)")


def log_vandermonde_beta(lams, beta: int):
    """``beta * sum_{i<j} log(l_i - l_j)`` for strictly descending ``l``."""
    lams = np.asarray(lams, dtype=float)
    _check_descending(lams)
    m = lams.shape[-1]
    iu, ju = np.triu_indices(m, 1)
    out = beta * np.sum(np.log(lams[..., iu] - lams[..., ju]), axis=-1)
    return float(out) if lams.ndim == 1 else out


def log_joint_eigen_density(params: EigenDensityParams | BetaRieszParams, lams):
    """Log joint density of the ordered eigenvalues.

    Parameters
    ----------
    params : EigenDensityParams or BetaRieszParams
    lams : array_like, shape (m,) or (n, m)
        Strictly descending; inside ``(0, 1)`` for type I and positive for
        type II.
    """
    law = params.law if isinstance(params, EigenDensityParams) else params
    lams = np.asarray(lams, dtype=float)
    if lams.shape[-1] != law.m:
        raise DomainError(f"expected {law.m} eigenvalues, got {lams.shape[-1]}")
    _check_descending(lams)
    if np.any(lams[..., -1] <= 0):
        raise DomainError("eigenvalues must be positive")
    if law.variant is Variant.TYPE_I and np.any(lams[..., 0] >= 1):
        raise DomainError("type I eigenvalues must lie in (0, 1)")
    sgn = 1.0 if law.family is Family.C else -1.0
    k, t = law.kappa.as_array(), law.tau.as_array()
    p = law.p
    out = log_eigen_constant(law.beta, law.m) - ln_beta_normalizer(law).log_abs
    out = out + log_vandermonde_beta(lams, law.beta)
    out = out + np.sum((law.a + sgn * k - p - 1.0) * np.log(lams), axis=-1)
    if law.variant is Variant.TYPE_I:
        out = out + np.sum((law.b + sgn * t - p - 1.0) * np.log1p(-lams), axis=-1)
    else:
        out = out - np.sum((law.a + law.b + sgn * (k + t)) * np.log1p(lams), axis=-1)
    return float(out) if lams.ndim == 1 else out


def empirical_eigenvalues(draws) -> np.ndarray:
    """Descending eigenvalues of a matrix or a stack of sampled matrices."""
    if isinstance(draws, HermitianPD):
        draws = draws.data
    return eigvalsh_array(np.asarray(draws, dtype=float))


def largest_eigenvalue_cdf(params: EigenDensityParams | BetaRieszParams, x: float, *, abs_tol: float = 1e-9) -> float:
    """``P(l_1 <= x)`` at ``m = 2`` by integrating the joint density."""
    from .verify import QuadratureSpec, integrate

    law = params.law if isinstance(params, EigenDensityParams) else params
    if law.m != 2:
        raise DomainError("largest-eigenvalue CDF is implemented for m = 2")
    domain = "ordered-simplex-2d" if law.variant is Variant.TYPE_I else "ordered-orthant-2d"

    def f(l1, l2):
        return np.exp(log_joint_eigen_density(law, np.stack([l1, l2], axis=-1)))

    return integrate(f, QuadratureSpec(domain, abs_tol=abs_tol, max_subdivisions=12), upper=x)
