"""Beta-Riesz matrix distributions in the c- and k-families.

With ``p = (m-1) beta / 2`` the type I densities on ``0 < S < I`` are

    c:  |S|^{a-p-1} q_k(S)      |I-S|^{b-p-1} q_t(I-S)          / B_c
    k:  |S|^{a-p-1} q_k(S^{-1}) |I-S|^{b-p-1} q_t((I-S)^{-1})   / B_k

where ``B_c`` and ``B_k`` are the c- and k-beta functions.  The type II
laws on the whole cone are the laws of the ratio constructions

    c:  R = U^{-*} X2 U^{-1},  X1 = U* U  (upper Cholesky factor U)
    k:  R = A^{-1} X2 A^{-*},  X1 = A A*  (upper reverse factor A)

whose densities are

    c:  |R|^{a-p-1} q_k(R)      |I+R|^{-(a+b)} / q_{k+t+r}(I+R)        / B_c
    k:  |R|^{a-p-1} q_k(R^{-1}) |I+R|^{-(a+b)} / q_{k+t+r}((I+R)^{-1}) / B_k

with the fixed shift ``r_i = beta (m + 1 - 2i) / 2``, which vanishes at
``m = 1``.  The shift is what a triangular ratio produces; without it the
type II kernel does not integrate to the beta function once ``m >= 2``.

The constructions follow the usual convention in which the numerator
matrix ``X2`` carries ``(b, tau)``: the sampled matrix therefore has the
law of :meth:`BetaRieszParams.swapped`.  At ``m = 1`` a type I draw is
``Beta(b, a)`` and a type II draw is ``BetaPrime(b, a)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

import numpy as np

from .algebra import (
    AlgebraTag,
    HermitianPD,
    cholesky_array,
    eigvalsh_array,
    hermitian_part,
    log_diag,
    mat_ctranspose,
    mat_identity,
    mat_mul,
    reverse_cholesky_array,
    tri_inverse_array,
)
from .errors import DomainError, RejectedDrawError
from .riesz import RieszParams, Variant, _as_rng, bartlett_factor, riesz_from_factor
from .specfun import LogValue, Weight, half_offset, ln_c_beta, ln_k_beta, weighted_log_power

MAX_RETRIES = 100
MIN_EIGENVALUE = 1e-300


class Family(str, enum.Enum):
    """``C`` uses ``q_k`` of the matrix, ``K`` uses ``q_k`` of its inverse."""

    C = "C"
    K = "K"

    @classmethod
    def coerce(cls, value: "Family | str") -> "Family":
        if isinstance(value, Family):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise DomainError(f"unknown family {value!r}; use C or K") from None


@dataclass(frozen=True)
class BetaRieszParams:
    """Parameters of a beta-Riesz law.

    The c-family requires ``a + k_m > p`` and ``b + t_m > p``; the k-family
    requires ``a - k_1 > p`` and ``b - t_1 > p`` with ``p = (m-1) beta/2``.
    """

    tag: AlgebraTag
    m: int
    a: float
    kappa: Weight
    b: float
    tau: Weight
    family: Family = Family.C
    variant: Variant = Variant.TYPE_I

    def __post_init__(self):
        tag = AlgebraTag.coerce(self.tag)
        object.__setattr__(self, "tag", tag)
        if isinstance(self.m, bool) or int(self.m) != self.m or self.m < 1:
            raise DomainError(f"m must be a positive integer, got {self.m!r}")
        object.__setattr__(self, "m", int(self.m))
        object.__setattr__(self, "a", float(self.a))
        object.__setattr__(self, "b", float(self.b))
        object.__setattr__(self, "kappa", Weight.coerce(self.kappa, self.m))
        object.__setattr__(self, "tau", Weight.coerce(self.tau, self.m))
        object.__setattr__(self, "family", Family.coerce(self.family))
        object.__setattr__(self, "variant", Variant.coerce(self.variant))
        p = half_offset(tag.beta, self.m)
        k, t = self.kappa.parts, self.tau.parts
        if self.family is Family.C:
            if not self.a + k[-1] > p:
                raise DomainError(f"c-family requires a + k_m > (m-1)*beta/2 = {p:g}; got {self.a + k[-1]:g}")
            if not self.b + t[-1] > p:
                raise DomainError(f"c-family requires b + t_m > (m-1)*beta/2 = {p:g}; got {self.b + t[-1]:g}")
        else:
            if not self.a - k[0] > p:
                raise DomainError(f"k-family requires a - k_1 > (m-1)*beta/2 = {p:g}; got {self.a - k[0]:g}")
            if not self.b - t[0] > p:
                raise DomainError(f"k-family requires b - t_1 > (m-1)*beta/2 = {p:g}; got {self.b - t[0]:g}")

    @property
    def beta(self) -> int:
        return self.tag.beta

    @property
    def p(self) -> float:
        return half_offset(self.beta, self.m)

    def swapped(self) -> "BetaRieszParams":
        """Exchange ``(a, kappa)`` and ``(b, tau)``."""
        return replace(self, a=self.b, kappa=self.tau, b=self.a, tau=self.kappa)

    def with_variant(self, variant) -> "BetaRieszParams":
        return replace(self, variant=Variant.coerce(variant))

    def riesz_pair(self) -> tuple[RieszParams, RieszParams]:
        """Identity-scale Riesz laws of the two construction inputs."""
        v = Variant.TYPE_I if self.family is Family.C else Variant.TYPE_II
        return (
            RieszParams(self.tag, self.m, self.a, self.kappa, variant=v),
            RieszParams(self.tag, self.m, self.b, self.tau, variant=v),
        )


def ln_beta_normalizer(params: BetaRieszParams) -> LogValue:
    fn = ln_c_beta if params.family is Family.C else ln_k_beta
    return fn(params.beta, params.m, params.a, params.kappa, params.b, params.tau)


def ratio_shift(beta: int, m: int) -> np.ndarray:
    """Shift ``r_i = beta (m + 1 - 2i) / 2`` picked up by triangular ratios."""
    i = np.arange(1, m + 1)
    return beta * (m + 1 - 2 * i) / 2.0


def _log_pivots(x: np.ndarray) -> np.ndarray:
    t, _ = cholesky_array(x)
    return 2.0 * log_diag(t)


def _log_pivots_inverse(x: np.ndarray) -> np.ndarray:
    # the upper factor of X^{-1} is A^{-1} for X = A A*
    a, _ = reverse_cholesky_array(x)
    return -2.0 * log_diag(a)


def _as_stack(x, beta: int, m: int) -> tuple[np.ndarray, bool]:
    if isinstance(x, HermitianPD):
        x = x.data
    x = np.asarray(x, dtype=float)
    if x.shape[-3:] != (m, m, beta):
        raise DomainError(f"expected {m}x{m} matrices over beta = {beta}, got shape {x.shape}")
    return x, x.ndim == 3


def log_density_beta_riesz(params: BetaRieszParams, x):
    """Log-density at a matrix (or stack) ``S`` (type I) or ``R`` (type II)."""
    params.tag.require_matrices("beta-Riesz densities")
    x, single = _as_stack(x, params.beta, params.m)
    m, p = params.m, params.p
    eye = mat_identity(params.beta, m)
    k, t = params.kappa.as_array(), params.tau.as_array()
    piv = _log_pivots if params.family is Family.C else _log_pivots_inverse
    lp_x = piv(x)
    logdet_x = lp_x.sum(axis=-1) if params.family is Family.C else -lp_x.sum(axis=-1)
    out = (params.a - p - 1.0) * logdet_x + weighted_log_power(lp_x, k)
    if params.variant is Variant.TYPE_I:
        comp = eye - x
        _, ok = cholesky_array(comp, strict=False)
        if not np.all(ok):
            raise DomainError("type I density requires I - S to be positive definite")
        lp_c = piv(comp)
        logdet_c = lp_c.sum(axis=-1) if params.family is Family.C else -lp_c.sum(axis=-1)
        out = out + (params.b - p - 1.0) * logdet_c + weighted_log_power(lp_c, t)
    else:
        lp_c = piv(eye + x)
        logdet_c = lp_c.sum(axis=-1) if params.family is Family.C else -lp_c.sum(axis=-1)
        out = out - (params.a + params.b) * logdet_c - weighted_log_power(lp_c, k + t + ratio_shift(params.beta, m))
    out = out - ln_beta_normalizer(params).log_abs
    return float(out) if single else out


# ---------------------------------------------------------------------------
# constructions


def _ratio(family: Family, denom: np.ndarray, numer: np.ndarray, *, strict: bool = True):
    """``U^{-*} N U^{-1}`` (c) or ``A^{-1} N A^{-*}`` (k) for a factored denominator."""
    if family is Family.C:
        u, ok = cholesky_array(denom, strict=strict)
        w = tri_inverse_array(np.where(ok[..., None, None, None], u, _identity_like(u)))
        out = mat_mul(mat_ctranspose(w), mat_mul(numer, w))
    else:
        a, ok = reverse_cholesky_array(denom, strict=strict)
        w = tri_inverse_array(np.where(ok[..., None, None, None], a, _identity_like(a)))
        out = mat_mul(w, mat_mul(numer, mat_ctranspose(w)))
    return hermitian_part(out), ok


def _identity_like(u: np.ndarray) -> np.ndarray:
    return np.broadcast_to(mat_identity(u.shape[-1], u.shape[-2]), u.shape)


def _interior_ok(s: np.ndarray, variant: Variant) -> np.ndarray:
    """Flag draws strictly inside the support (type I: ``0 < S < I``)."""
    half = 0.5 * _identity_like(s)
    ok = np.all(np.isfinite(s), axis=(-1, -2, -3))
    safe = np.where(ok[..., None, None, None], s, half)
    ok &= cholesky_array(safe, strict=False)[1]
    if variant is Variant.TYPE_I:
        ok &= cholesky_array(mat_identity(s.shape[-1], s.shape[-2]) - safe, strict=False)[1]
    safe = np.where(ok[..., None, None, None], safe, half)
    ok &= eigvalsh_array(safe)[..., -1] >= MIN_EIGENVALUE
    return ok


def _construct(params: BetaRieszParams, rng, n: int, variant: Variant) -> np.ndarray:
    rng = _as_rng(rng)
    r1, r2 = params.riesz_pair()
    p = params.p
    if params.family is Family.C:
        # the pair constructions are stated with the stronger shape condition
        if not (params.a - params.kappa.parts[0] > p and params.b - params.tau.parts[0] > p):
            raise DomainError(
                f"pair construction requires a - k_1 > (m-1)*beta/2 and b - t_1 > (m-1)*beta/2 = {p:g}"
            )
    out = np.empty((n, params.m, params.m, params.beta))
    todo = np.arange(n)
    for attempt in range(MAX_RETRIES + 1):
        k = todo.size
        x1 = riesz_from_factor(r1, bartlett_factor(r1, rng, k))
        x2 = riesz_from_factor(r2, bartlett_factor(r2, rng, k))
        denom = x1 + x2 if variant is Variant.TYPE_I else x1
        with np.errstate(all="ignore"):
            s, ok = _ratio(params.family, denom, x2, strict=False)
            ok &= _interior_ok(s, variant)
        out[todo[ok]] = s[ok]
        todo = todo[~ok]
        if todo.size == 0:
            return out
    raise RejectedDrawError(f"{todo.size} draws stayed on the boundary of the support", MAX_RETRIES)


def sample_beta_riesz_type1(params: BetaRieszParams, rng, size: int | None = None):
    """Draw ``S = U^{-*} X2 U^{-1}`` with ``X1 + X2 = U* U`` (k-family: reverse factor).

    ``X1`` and ``X2`` follow identity-scale Riesz laws with ``(a, kappa)`` and
    ``(b, tau)``; type I inputs for the c-family, type II for the k-family.
    The result follows the type I law of ``params.swapped()``.
    """
    params.tag.require_matrices("beta-Riesz samplers")
    n = 1 if size is None else int(size)
    s = _construct(params, rng, n, Variant.TYPE_I)
    return HermitianPD(s[0]) if size is None else s


def sample_beta_riesz_type2(params: BetaRieszParams, rng, size: int | None = None):
    """Draw ``R = U^{-*} X2 U^{-1}`` with ``X1 = U* U`` (k-family: reverse factor).

    The result follows the type II law of ``params.swapped()``.
    """
    params.tag.require_matrices("beta-Riesz samplers")
    n = 1 if size is None else int(size)
    r = _construct(params, rng, n, Variant.TYPE_II)
    return HermitianPD(r[0]) if size is None else r


def sample_beta_riesz(params: BetaRieszParams, rng, size: int | None = None):
    """Dispatch on ``params.variant``."""
    if params.variant is Variant.TYPE_I:
        return sample_beta_riesz_type1(params, rng, size)
    return sample_beta_riesz_type2(params, rng, size)


def type2_to_type1(family, r):
    """Map ``R`` to ``(I+R)^{-1/2} R (I+R)^{-1/2'}`` using the family's triangular factor.

    Sends the type II law of given parameters to the type I law of the same
    parameters.
    """
    family = Family.coerce(family)
    single = isinstance(r, HermitianPD)
    x = r.data if single else np.asarray(r, dtype=float)
    eye = mat_identity(x.shape[-1], x.shape[-2])
    s, _ = _ratio(family, eye + x, x)
    return HermitianPD(s) if single else s
