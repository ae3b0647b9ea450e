"""Riesz and inverse Riesz matrix distributions.

Densities use the trace kernel ``exp(-beta Re tr(Sigma^{-1} X))``.  With that
kernel the type I density of ``X`` on the cone of ``m x m`` Hermitian
positive definite matrices is

    beta^{am + |k|} |X|^{a - p - 1} q_k(X) etr(-beta Sigma^{-1} X)
    / (Gamma_m[a, k] |Sigma|^a q_k(Sigma)),          p = (m-1) beta / 2,

and type II replaces ``q_k(X)`` by ``q_k(X^{-1})``, ``|k|`` by ``-|k|``,
``Gamma_m[a, k]`` by ``Gamma_m[a, -k]`` and ``q_k(Sigma)`` by
``q_k(Sigma^{-1})``.

Samplers use Bartlett factors.  Type I draws ``X = T* T`` with ``T`` upper
triangular, ``t_ii^2 ~ G(a + k_i - (i-1) beta/2)`` and Gaussian entries
above the diagonal.  Type II is the mirror image: ``X = T T*`` with
``t_ii^2 ~ G(a - k_i - (m-i) beta/2)``.  A general ``Sigma`` enters through
a triangular congruence, which keeps ``q_k`` covariant.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .algebra import (
    AlgebraTag,
    HermitianPD,
    cholesky_array,
    gram_array,
    hermitian_part,
    hpd_inverse_array,
    log_diag,
    mat_ctranspose,
    mat_mul,
    reverse_cholesky_array,
)
from .errors import DomainError, QuadratureError
from .specfun import Weight, half_offset, ln_gamma_weight_neg, ln_gamma_weight_pos, weighted_log_power

LOG_DENSITY_M_MAX = 3


class Variant(str, enum.Enum):
    """Type I carries ``q_k(X)``; type II carries ``q_k(X^{-1})``."""

    TYPE_I = "I"
    TYPE_II = "II"

    @classmethod
    def coerce(cls, value: "Variant | str | int") -> "Variant":
        if isinstance(value, Variant):
            return value
        key = str(value).upper().replace("TYPE", "").replace("_", "").strip()
        key = {"1": "I", "2": "II"}.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise DomainError(f"unknown variant {value!r}; use I or II") from None


def _as_rng(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


# ---------------------------------------------------------------------------
# scalar building blocks


@dataclass(frozen=True)
class ScalarGammaParams:
    """Scalar law ``G(x; a, alpha)`` with density proportional to ``x^{a-1} exp(-beta x / alpha)``."""

    a: float
    alpha: float = 1.0
    beta: int = 1

    def __post_init__(self):
        if not (self.a > 0 and math.isfinite(self.a)):
            raise DomainError(f"gamma shape must be positive, got a = {self.a}")
        if not (self.alpha > 0 and math.isfinite(self.alpha)):
            raise DomainError(f"gamma scale must be positive, got alpha = {self.alpha}")
        AlgebraTag.coerce(self.beta)

    @property
    def scale(self) -> float:
        return self.alpha / self.beta

    @property
    def mean(self) -> float:
        return self.a * self.scale

    @property
    def var(self) -> float:
        return self.a * self.scale**2


def log_density_scalar_gamma(p: ScalarGammaParams, x):
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore"):
        out = (p.a - 1.0) * np.log(x) - x / p.scale - p.a * math.log(p.scale) - special.gammaln(p.a)
    return out


def cdf_scalar_gamma(p: ScalarGammaParams, x):
    return special.gammainc(p.a, np.maximum(np.asarray(x, dtype=float), 0.0) / p.scale)


def sample_scalar_gamma(p: ScalarGammaParams, rng, size=None):
    """Draw from ``G(a, alpha)``: a standard gamma variate times ``alpha / beta``."""
    return _as_rng(rng).standard_gamma(p.a, size=size) * p.scale


def sample_scalar_normal_beta(tag, rng, size=None):
    """Algebra-valued normal with independent components of variance ``1/beta``.

    Returns a component vector of shape ``(beta,)`` or ``size + (beta,)``.
    """
    beta = AlgebraTag.coerce(tag).beta
    shape = (beta,) if size is None else tuple(np.atleast_1d(size)) + (beta,)
    return _as_rng(rng).standard_normal(shape) / math.sqrt(beta)


# ---------------------------------------------------------------------------
# parameters


@dataclass(frozen=True)
class RieszParams:
    """Parameters of a Riesz law.

    Parameters
    ----------
    tag : AlgebraTag or int
    m : int
        Matrix dimension.
    a : float
        Shape; type I needs ``a + k_m > (m-1) beta/2`` and type II needs
        ``a - k_1 > (m-1) beta/2``.
    kappa : Weight or sequence of float
    sigma : HermitianPD, optional
        Scale matrix, identity by default.
    variant : Variant or str
    """

    tag: AlgebraTag
    m: int
    a: float
    kappa: Weight
    sigma: HermitianPD | None = None
    variant: Variant = Variant.TYPE_I
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        tag = AlgebraTag.coerce(self.tag)
        object.__setattr__(self, "tag", tag)
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 1:
            raise DomainError(f"m must be a positive integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "kappa", Weight.coerce(self.kappa, self.m))
        object.__setattr__(self, "variant", Variant.coerce(self.variant))
        tag.require_matrices("Riesz distributions")
        p = half_offset(tag.beta, self.m)
        k = self.kappa.parts
        if self.variant is Variant.TYPE_I and not self.a + k[-1] > p:
            raise DomainError(f"type I requires a + k_m > (m-1)*beta/2 = {p:g}; got a + k_m = {self.a + k[-1]:g}")
        if self.variant is Variant.TYPE_II and not self.a - k[0] > p:
            raise DomainError(f"type II requires a - k_1 > (m-1)*beta/2 = {p:g}; got a - k_1 = {self.a - k[0]:g}")
        sigma = self.sigma if self.sigma is not None else HermitianPD.identity(tag, self.m)
        if not isinstance(sigma, HermitianPD):
            sigma = HermitianPD(sigma)
        if sigma.beta != tag.beta or sigma.m != self.m:
            raise DomainError(f"sigma must be {self.m}x{self.m} over beta = {tag.beta}")
        object.__setattr__(self, "sigma", sigma)

    @property
    def beta(self) -> int:
        return self.tag.beta

    @property
    def p(self) -> float:
        return half_offset(self.beta, self.m)

    def _sigma_parts(self):
        """Cached ``Sigma^{-1}``, ``log|Sigma|`` and the triangular congruence factor."""
        if not self._cache:
            s = self.sigma.data
            self._cache["inv"] = hpd_inverse_array(s)
            self._cache["logdet"] = float(2.0 * log_diag(self.sigma.factor.data).sum())
            if self.variant is Variant.TYPE_I:
                self._cache["factor"] = self.sigma.factor.data
            else:
                self._cache["factor"] = reverse_cholesky_array(s)[0]
        return self._cache


def bartlett_shapes(params: RieszParams) -> np.ndarray:
    """Gamma shapes of the squared diagonal of the Bartlett factor.

    Type I: ``a + k_i - (i-1) beta/2``.  Type II: ``a - k_i - (m-i) beta/2``.
    """
    i = np.arange(1, params.m + 1)
    k = params.kappa.as_array()
    if params.variant is Variant.TYPE_I:
        return params.a + k - (i - 1) * params.beta / 2.0
    return params.a - k - (params.m - i) * params.beta / 2.0


def log_normalizer(params: RieszParams) -> float:
    """Log of the constant multiplying ``|X|^{a-p-1} q(.) etr(-beta Sigma^{-1} X)``."""
    beta, m, a = params.beta, params.m, params.a
    ksum = params.kappa.sum
    parts = params._sigma_parts()
    if params.variant is Variant.TYPE_I:
        log_q_sigma = float(weighted_log_power(2.0 * log_diag(params.sigma.factor.data), params.kappa.parts))
        return (a * m + ksum) * math.log(beta) - ln_gamma_weight_pos(beta, m, a, params.kappa).log_abs - a * parts["logdet"] - log_q_sigma
    # q_k(Sigma^{-1}) from the reverse factor Sigma = A A*: the upper factor of Sigma^{-1} is A^{-1}
    log_q_sigma_inv = -float(weighted_log_power(2.0 * log_diag(parts["factor"]), params.kappa.parts))
    return (a * m - ksum) * math.log(beta) - ln_gamma_weight_neg(beta, m, a, params.kappa).log_abs - a * parts["logdet"] - log_q_sigma_inv


def _as_stack(x, params_beta: int, m: int) -> tuple[np.ndarray, bool]:
    if isinstance(x, HermitianPD):
        x = x.data
    x = np.asarray(x, dtype=float)
    single = x.ndim == 3
    if x.shape[-3:] != (m, m, params_beta):
        raise DomainError(f"expected {m}x{m} matrices over beta = {params_beta}, got shape {x.shape}")
    return x, single


def _re_trace_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``Re tr(A B)`` for Hermitian ``A`` and ``B``."""
    return np.sum(a * b, axis=(-1, -2, -3))


def _log_riesz_kernel(params: RieszParams, x: np.ndarray) -> np.ndarray:
    t, _ = cholesky_array(x)
    log_piv = 2.0 * log_diag(t)
    logdet = log_piv.sum(axis=-1)
    if params.variant is Variant.TYPE_I:
        log_q = weighted_log_power(log_piv, params.kappa.parts)
    else:
        r, _ = reverse_cholesky_array(x)
        log_q = -weighted_log_power(2.0 * log_diag(r), params.kappa.parts)
    trace = _re_trace_product(params._sigma_parts()["inv"], x)
    return (params.a - params.p - 1.0) * logdet + log_q - params.beta * trace


def log_density_riesz(params: RieszParams, x):
    """Log-density of the Riesz law at ``X`` (a matrix or a stack of matrices)."""
    x, single = _as_stack(x, params.beta, params.m)
    out = log_normalizer(params) + _log_riesz_kernel(params, x)
    return float(out) if single else out


def log_inverse_jacobian(beta: int, m: int, logdet_y):
    """Log-Jacobian of ``Y -> Y^{-1}``: ``-(beta (m-1) + 2) log|Y|``."""
    return -(beta * (m - 1) + 2.0) * np.asarray(logdet_y)


def log_density_inverse_riesz(params: RieszParams, y):
    """Log-density of ``Y = X^{-1}`` where ``X`` follows the Riesz law."""
    y, single = _as_stack(y, params.beta, params.m)
    t, _ = cholesky_array(y)
    logdet_y = 2.0 * log_diag(t).sum(axis=-1)
    out = log_density_riesz(params, hpd_inverse_array(y)) + log_inverse_jacobian(params.beta, params.m, logdet_y)
    return float(out) if single else out


# ---------------------------------------------------------------------------
# samplers


def bartlett_factor(params: RieszParams, rng, n: int) -> np.ndarray:
    """Stack of ``n`` Bartlett factors for ``Sigma = I``.

    Squared diagonals are drawn first (one gamma per entry, row-major), then
    all algebra-valued normals for the strict upper triangle.
    """
    rng = _as_rng(rng)
    m, beta = params.m, params.beta
    shapes = bartlett_shapes(params)
    if np.any(shapes <= 0):
        raise DomainError(f"Bartlett gamma shapes must be positive, got {shapes}")
    g = rng.standard_gamma(np.broadcast_to(shapes, (n, m)))
    z = rng.standard_normal((n, m, m, beta)) / math.sqrt(2.0 * beta)
    t = np.triu(np.ones((m, m)), 1)[None, :, :, None] * z
    idx = np.arange(m)
    t[:, idx, idx, :] = 0.0
    t[:, idx, idx, 0] = np.sqrt(g / beta)
    return t


def riesz_from_factor(params: RieszParams, t: np.ndarray) -> np.ndarray:
    """Assemble draws from Bartlett factors, applying the ``Sigma`` congruence."""
    f = params._sigma_parts()["factor"]
    if params.variant is Variant.TYPE_I:
        # Sigma = U* U, X = U* (T* T) U
        w = mat_mul(t, f)
        return gram_array(w)
    # Sigma = A A*, X = A (T T*) A*
    w = mat_mul(f, t)
    return hermitian_part(mat_mul(w, mat_ctranspose(w)))


def sample_riesz_bartlett(params: RieszParams, rng, size: int | None = None):
    """Draw Riesz matrices.

    Parameters
    ----------
    params : RieszParams
    rng : numpy.random.Generator or seed
    size : int, optional
        Number of draws.  If omitted a single :class:`HermitianPD` is
        returned, otherwise an array of shape ``(size, m, m, beta)``.
    """
    n = 1 if size is None else int(size)
    x = riesz_from_factor(params, bartlett_factor(params, rng, n))
    return HermitianPD(x[0]) if size is None else x


def sample_inverse_riesz(params: RieszParams, rng, size: int | None = None):
    """Draw ``X^{-1}`` with ``X`` Riesz distributed."""
    n = 1 if size is None else int(size)
    y = hpd_inverse_array(riesz_from_factor(params, bartlett_factor(params, rng, n)))
    return HermitianPD(y[0]) if size is None else y


# ---------------------------------------------------------------------------
# generalized variance |X| / |Sigma|


def generalized_variance_mean(params: RieszParams) -> float:
    return float(np.prod(bartlett_shapes(params) / params.beta))


def generalized_variance_log_moments(params: RieszParams) -> tuple[float, float]:
    """Mean and variance of ``log(|X| / |Sigma|)``."""
    s = bartlett_shapes(params)
    mean = float(np.sum(special.digamma(s)) - params.m * math.log(params.beta))
    var = float(np.sum(special.polygamma(1, s)))
    return mean, var


def sample_generalized_variance(params: RieszParams, rng, size: int | None = None):
    """Product of independent gammas ``prod_i G(shape_i, 1)``."""
    shapes = bartlett_shapes(params)
    n = 1 if size is None else int(size)
    g = _as_rng(rng).standard_gamma(np.broadcast_to(shapes, (n, params.m))) / params.beta
    v = np.prod(g, axis=-1)
    return float(v[0]) if size is None else v


def _log_gamma_of_log(shape: float, beta: int, u):
    # density of log(G) where G has density prop. to x^{s-1} exp(-beta x)
    return shape * (u + math.log(beta)) - beta * np.exp(u) - special.gammaln(shape)


def log_density_generalized_variance(params: RieszParams, v, *, rel_tol: float = 1e-10, max_halvings: int = 8):
    """Log-density of ``|X| / |Sigma|`` at ``v`` for ``m <= 3``.

    The law of ``log v`` is the convolution of the log-gamma laws of the
    Bartlett pivots.  Each convolution is a one-dimensional integral over the
    half-line, evaluated with a double-exponential trapezoid rule whose step
    is halved until two successive results agree to ``rel_tol``.
    """
    from .verify import de_rule

    v_arr = np.asarray(v, dtype=float)
    if np.any(~(v_arr > 0)):
        raise DomainError("generalized variance density requires v > 0")
    if params.m > LOG_DENSITY_M_MAX:
        raise NotImplementedError(f"generalized variance density is sampler-only for m > {LOG_DENSITY_M_MAX}")
    shapes = bartlett_shapes(params)
    beta = params.beta
    w = np.log(v_arr).reshape(-1)

    def conv(level: int, pts: np.ndarray, h: float) -> np.ndarray:
        # density of sum_{i <= level} log G_i at each point of pts
        if level == 0:
            return np.exp(_log_gamma_of_log(shapes[0], beta, pts))
        x, wt = de_rule(h)
        u = np.log(x)
        inner = conv(level - 1, u, h) * wt / x
        kern = np.exp(_log_gamma_of_log(shapes[level], beta, pts[:, None] - u[None, :]))
        return kern @ inner

    h = 0.25
    prev = None
    with np.errstate(over="ignore", under="ignore"):
        for _ in range(max_halvings + 1):
            dens = conv(params.m - 1, w, h)
            if prev is not None and np.all(np.abs(dens - prev) <= rel_tol * np.abs(dens)):
                break
            prev = dens
            h *= 0.5
        else:
            raise QuadratureError("generalized variance convolution did not converge")
    with np.errstate(divide="ignore"):
        out = np.log(dens) - w
    return float(out[0]) if v_arr.ndim == 0 else out.reshape(v_arr.shape)
