"""Log-domain special functions indexed by a weight vector.

All results are :class:`LogValue` pairs ``(log|x|, sign)`` so that large
dimensions and shape parameters never overflow.  The multivariate gamma
function over an algebra of real dimension ``beta`` is

    Gamma_m[a] = pi^{m(m-1)beta/4} prod_i Gamma(a - (i-1) beta/2),

and the two weighted versions shift the i-th argument by ``+k_i`` or by
``-k_i`` (the latter with the reversed offset ``(m-i) beta/2``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from scipy import special

from .algebra import AlgebraTag, HermitianPD, log_diag
from .errors import DomainError

LOG_PI = math.log(math.pi)


@dataclass(frozen=True)
class LogValue:
    """A real number stored as ``sign * exp(log_abs)``.

    ``sign == 0`` marks an exact zero, in which case ``log_abs`` is ``-inf``.
    """

    log_abs: float
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (-1, 0, 1):
            raise DomainError(f"sign must be -1, 0 or +1, got {self.sign}")
        if self.sign == 0:
            object.__setattr__(self, "log_abs", -math.inf)
        else:
            object.__setattr__(self, "log_abs", float(self.log_abs))

    @classmethod
    def of(cls, x: float) -> "LogValue":
        if x == 0:
            return cls(-math.inf, 0)
        return cls(math.log(abs(x)), 1 if x > 0 else -1)

    @property
    def value(self) -> float:
        return self.sign * math.exp(self.log_abs) if self.sign else 0.0

    def __float__(self) -> float:
        return self.value

    def __mul__(self, other: "LogValue") -> "LogValue":
        if self.sign == 0 or other.sign == 0:
            return LogValue(-math.inf, 0)
        return LogValue(self.log_abs + other.log_abs, self.sign * other.sign)

    def __truediv__(self, other: "LogValue") -> "LogValue":
        if other.sign == 0:
            raise ZeroDivisionError("division by an exact zero LogValue")
        if self.sign == 0:
            return self
        return LogValue(self.log_abs - other.log_abs, self.sign * other.sign)

    def to_dict(self) -> dict:
        return {"log_abs": self.log_abs, "sign": self.sign}


@dataclass(frozen=True)
class Weight:
    """Non-increasing, nonnegative weight vector ``(k_1, ..., k_m)``."""

    parts: tuple[float, ...]

    def __post_init__(self):
        parts = tuple(float(k) for k in self.parts)
        if not parts:
            raise DomainError("a weight needs at least one part")
        if any(not math.isfinite(k) or k < 0 for k in parts):
            raise DomainError(f"weight parts must be finite and nonnegative: {parts}")
        if any(parts[i] < parts[i + 1] for i in range(len(parts) - 1)):
            raise DomainError(f"weight parts must be non-increasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def coerce(cls, value: "Weight | Iterable[float]", m: int | None = None) -> "Weight":
        w = value if isinstance(value, Weight) else cls(tuple(value))
        if m is not None and w.m != m:
            raise DomainError(f"weight has {w.m} parts but the dimension is m = {m}")
        return w

    @classmethod
    def zeros(cls, m: int) -> "Weight":
        return cls((0.0,) * m)

    @classmethod
    def constant(cls, m: int, value: float) -> "Weight":
        return cls((float(value),) * m)

    @classmethod
    def parse(cls, text: str) -> "Weight":
        try:
            return cls(tuple(float(x) for x in text.split(",")))
        except ValueError as exc:
            raise DomainError(f"cannot parse weight {text!r}: {exc}") from exc

    @property
    def m(self) -> int:
        return len(self.parts)

    @property
    def sum(self) -> float:
        return float(sum(self.parts))

    @property
    def is_integer(self) -> bool:
        return all(k == int(k) for k in self.parts)

    @property
    def is_constant(self) -> bool:
        return all(k == self.parts[0] for k in self.parts)

    def as_array(self) -> np.ndarray:
        return np.array(self.parts)

    def __add__(self, other: "Weight") -> "Weight":
        if self.m != other.m:
            raise DomainError("cannot add weights of different lengths")
        return Weight(tuple(x + y for x, y in zip(self.parts, other.parts)))

    def __str__(self) -> str:
        return ",".join(f"{k:g}" for k in self.parts)


def _tag(tag) -> AlgebraTag:
    return AlgebraTag.coerce(tag)


def _check_m(m: int) -> int:
    if isinstance(m, bool) or int(m) != m or m < 1:
        raise DomainError(f"dimension m must be a positive integer, got {m!r}")
    return int(m)


def half_offset(beta: int, m: int) -> float:
    """``(m-1) beta / 2``, the lower edge of the gamma-function domain."""
    return (m - 1) * beta / 2.0


def _log_pi_factor(beta: int, m: int) -> float:
    return m * (m - 1) * beta / 4.0 * LOG_PI


def _sum_lgamma(args: np.ndarray) -> float:
    return float(np.sum(special.gammaln(args)))


def ln_mv_gamma(tag, m: int, a: float) -> LogValue:
    """Multivariate gamma function ``Gamma_m[a]``.

    Parameters
    ----------
    tag : AlgebraTag or int
    m : int
    a : float
        Must exceed ``(m-1) beta / 2``.

    Examples
    --------
    >>> round(ln_mv_gamma(1, 1, 0.5).log_abs, 5)
    0.57236
    """
    beta = _tag(tag).beta
    m = _check_m(m)
    if not a > half_offset(beta, m):
        raise DomainError(f"multivariate gamma requires a > (m-1)*beta/2 = {half_offset(beta, m):g}, got a = {a:g}")
    i = np.arange(m)
    return LogValue(_log_pi_factor(beta, m) + _sum_lgamma(a - i * beta / 2.0), 1)


def ln_gamma_weight_pos(tag, m: int, a: float, kappa) -> LogValue:
    """Weighted gamma ``Gamma_m[a, kappa] = pi^{..} prod Gamma(a + k_i - (i-1) beta/2)``."""
    beta = _tag(tag).beta
    m = _check_m(m)
    k = Weight.coerce(kappa, m).as_array()
    if not a + k[-1] > half_offset(beta, m):
        raise DomainError(
            f"requires a + k_m > (m-1)*beta/2: a + k_m = {a + k[-1]:g}, (m-1)*beta/2 = {half_offset(beta, m):g}"
        )
    i = np.arange(m)
    return LogValue(_log_pi_factor(beta, m) + _sum_lgamma(a + k - i * beta / 2.0), 1)


def ln_gamma_weight_neg(tag, m: int, a: float, kappa) -> LogValue:
    """Weighted gamma ``Gamma_m[a, -kappa] = pi^{..} prod Gamma(a - k_i - (m-i) beta/2)``."""
    beta = _tag(tag).beta
    m = _check_m(m)
    k = Weight.coerce(kappa, m).as_array()
    if not a - k[0] > half_offset(beta, m):
        raise DomainError(
            f"requires a - k_1 > (m-1)*beta/2: a - k_1 = {a - k[0]:g}, (m-1)*beta/2 = {half_offset(beta, m):g}"
        )
    i = np.arange(1, m + 1)
    return LogValue(_log_pi_factor(beta, m) + _sum_lgamma(a - k - (m - i) * beta / 2.0), 1)


def _is_nonpositive_integer(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


def gen_pochhammer(tag, m: int, a: float, kappa) -> LogValue:
    """Generalized Pochhammer symbol ``prod_i (a - (i-1) beta/2)_{k_i}``.

    Integer weights use the finite product, so arbitrary real ``a`` is
    allowed and negative factors are tracked in the sign.  Non-integer
    weights use the ratio ``Gamma(x + k) / Gamma(x)``.
    """
    beta = _tag(tag).beta
    m = _check_m(m)
    w = Weight.coerce(kappa, m)
    log_abs = 0.0
    sign = 1
    for i, k in enumerate(w.parts):
        x = a - i * beta / 2.0
        if k == int(k):
            for j in range(int(k)):
                f = x + j
                if f == 0:
                    return LogValue(-math.inf, 0)
                log_abs += math.log(abs(f))
                if f < 0:
                    sign = -sign
        else:
            if _is_nonpositive_integer(x) or _is_nonpositive_integer(x + k):
                raise DomainError(f"Pochhammer ratio hits a gamma pole at argument {x:g} or {x + k:g}")
            num, sn = special.gammaln(x + k), special.gammasgn(x + k)
            den, sd = special.gammaln(x), special.gammasgn(x)
            log_abs += float(num - den)
            sign *= int(sn * sd)
    return LogValue(log_abs, sign)


def ln_mv_beta(tag, m: int, a: float, b: float) -> LogValue:
    """Multivariate beta function ``Gamma_m[a] Gamma_m[b] / Gamma_m[a+b]``."""
    beta = _tag(tag).beta
    m = _check_m(m)
    p = half_offset(beta, m)
    if not (a > p and b > p):
        raise DomainError(f"multivariate beta requires a, b > (m-1)*beta/2 = {p:g}, got a = {a:g}, b = {b:g}")
    return ln_mv_gamma(beta, m, a) * ln_mv_gamma(beta, m, b) / ln_mv_gamma(beta, m, a + b)


def ln_c_beta(tag, m: int, a: float, kappa, b: float, tau) -> LogValue:
    """Beta function built from the ``+kappa`` weighted gammas.

    ``Gamma_m[a, kappa] Gamma_m[b, tau] / Gamma_m[a+b, kappa+tau]``
    """
    beta = _tag(tag).beta
    m = _check_m(m)
    kappa, tau = Weight.coerce(kappa, m), Weight.coerce(tau, m)
    return (
        ln_gamma_weight_pos(beta, m, a, kappa)
        * ln_gamma_weight_pos(beta, m, b, tau)
        / ln_gamma_weight_pos(beta, m, a + b, kappa + tau)
    )


def ln_k_beta(tag, m: int, a: float, kappa, b: float, tau) -> LogValue:
    """Beta function built from the ``-kappa`` weighted gammas.

    ``Gamma_m[a, -kappa] Gamma_m[b, -tau] / Gamma_m[a+b, -kappa-tau]``
    """
    beta = _tag(tag).beta
    m = _check_m(m)
    kappa, tau = Weight.coerce(kappa, m), Weight.coerce(tau, m)
    return (
        ln_gamma_weight_neg(beta, m, a, kappa)
        * ln_gamma_weight_neg(beta, m, b, tau)
        / ln_gamma_weight_neg(beta, m, a + b, kappa + tau)
    )


def ln_stiefel_volume(tag, m: int, n: int) -> LogValue:
    """Volume ``2^m pi^{mn beta/2} / Gamma_m[n beta/2]`` of the Stiefel manifold."""
    beta = _tag(tag).beta
    m = _check_m(m)
    if isinstance(n, bool) or int(n) != n or n < m:
        raise DomainError(f"Stiefel volume requires integers n >= m >= 1, got m = {m}, n = {n}")
    log_v = m * math.log(2.0) + m * n * beta / 2.0 * LOG_PI
    return LogValue(log_v - ln_mv_gamma(beta, m, n * beta / 2.0).log_abs, 1)


def weighted_log_power(log_pivots: np.ndarray, weights: Sequence[float] | np.ndarray) -> np.ndarray:
    """``sum_i w_i * log_pivots_i`` over the last axis.

    ``log_pivots`` are ``log t_ii^2`` of an upper Cholesky factor, i.e. the
    increments of the leading principal log-minors.  The weights may be any
    real vector here; callers are responsible for their meaning.
    """
    return np.tensordot(log_pivots, np.asarray(weights, dtype=float), axes=([-1], [0]))


def log_q_from_factor(t: np.ndarray, weights) -> np.ndarray:
    """Log highest weight vector from a stack of upper factors ``S = T* T``."""
    return weighted_log_power(2.0 * log_diag(t), weights)


def log_q_kappa(s: HermitianPD, kappa) -> float:
    """Log of ``q_kappa(S) = |S_m|^{k_m} prod_{i<m} |S_i|^{k_i - k_{i+1}}``.

    ``S_i`` is the leading ``i x i`` block.  Telescoping the exponents gives
    ``sum_i k_i log(|S_i| / |S_{i-1}|) = sum_i k_i log t_ii^2``.
    """
    if not isinstance(s, HermitianPD):
        s = HermitianPD(s)
    w = Weight.coerce(kappa, s.m)
    return float(log_q_from_factor(s.factor.data, w.parts))
