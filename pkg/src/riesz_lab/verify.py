"""Numerical oracles: quadrature, cubature and goodness-of-fit reports.

One-dimensional integrals use adaptive Simpson with Richardson stopping,
applied after a double-exponential change of variables so that algebraic
endpoint singularities become smooth, rapidly decaying integrands.  The
half-line is first mapped to the unit interval by ``x = t / (1 - t)``.

Two- and three-dimensional domains use tensor trapezoid rules in the same
variables, refined by halving the step until two successive estimates agree
to the requested tolerance.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import expit

from .errors import DomainError, QuadratureError

DOMAINS = (
    "interval",
    "half-line",
    "ordered-simplex-2d",
    "ordered-orthant-2d",
    "spd-unit-2x2",
    "spd-cone-2x2",
)

# truncation of the double-exponential variable; exp(-pi sinh 4.5) ~ 1e-61
DE_CUTOFF = 4.5
INITIAL_PANELS = 32
CHUNK = 250_000
# smallest eigenvalue ratio used on the matrix domains; below it the
# rotated matrix is no longer numerically positive definite
MIN_RATIO = 1e-12


@dataclass(frozen=True)
class QuadratureSpec:
    """Integration domain and stopping rule.

    Parameters
    ----------
    domain : str
        One of ``interval`` (0, 1), ``half-line`` (0, inf),
        ``ordered-simplex-2d`` (1 > x > y > 0), ``ordered-orthant-2d``
        (x > y > 0), ``spd-unit-2x2`` (real 2x2 with 0 < S < I) and
        ``spd-cone-2x2`` (real 2x2 with S > 0).
    abs_tol : float
        Target absolute error.
    max_subdivisions : int
        Panel splits allowed in one dimension; number of step halvings on
        the multi-dimensional domains.
    """

    domain: str
    abs_tol: float = 1e-10
    max_subdivisions: int = 5000

    def __post_init__(self):
        if self.domain not in DOMAINS:
            raise DomainError(f"unknown quadrature domain {self.domain!r}; choose from {DOMAINS}")
        if not self.abs_tol > 0:
            raise DomainError("abs_tol must be positive")
        if self.max_subdivisions < 1:
            raise DomainError("max_subdivisions must be positive")


def _unit_map(s):
    """``x = (1 + tanh(pi/2 sinh s)) / 2`` with its complement and derivative."""
    z = np.pi * np.sinh(s)
    x = expit(z)
    xc = expit(-z)
    dx = np.pi * np.cosh(s) * x * xc
    return x, xc, dx


def _adaptive_simpson(g: Callable[[np.ndarray], np.ndarray], lo: float, hi: float, tol: float, max_sub: int) -> float:
    """Adaptive Simpson with Richardson stopping, refining all open panels at once.

    A panel ``[a, b]`` with local tolerance ``t`` is accepted when the two
    half-panel estimates differ from the whole-panel estimate by at most
    ``15 t``; otherwise it is split and each half gets ``t / 2``.
    """
    edges = np.linspace(lo, hi, INITIAL_PANELS + 1)
    a, b = edges[:-1], edges[1:]
    fe = g(edges)
    fa, fb = fe[:-1], fe[1:]
    fm = g(0.5 * (a + b))
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)
    t = np.full(a.size, tol / INITIAL_PANELS)
    total = 0.0
    splits = 0
    while a.size:
        mid = 0.5 * (a + b)
        f_new = g(np.concatenate([0.5 * (a + mid), 0.5 * (mid + b)]))
        flm, frm = f_new[: a.size], f_new[a.size :]
        left = (mid - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - mid) / 6.0 * (fm + 4.0 * frm + fb)
        delta = left + right - whole
        if not np.all(np.isfinite(delta)):
            bad = mid[~np.isfinite(delta)][0]
            raise QuadratureError(f"integrand is not finite near {bad:g} (transformed variable)")
        done = np.abs(delta) <= 15.0 * t
        total += float(np.sum(left[done] + right[done] + delta[done] / 15.0))
        keep = ~done
        splits += int(np.count_nonzero(keep))
        if splits > max_sub:
            raise QuadratureError(f"adaptive Simpson did not converge within {max_sub} subdivisions")
        a, mid, b = a[keep], mid[keep], b[keep]
        fa, fm, fb, flm, frm = fa[keep], fm[keep], fb[keep], flm[keep], frm[keep]
        left, right, t = left[keep], right[keep], t[keep]
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
        fa, fb = np.concatenate([fa, fm]), np.concatenate([fm, fb])
        fm = np.concatenate([flm, frm])
        whole = np.concatenate([left, right])
        t = np.concatenate([0.5 * t, 0.5 * t])
    return total


def _integrate_1d(f, spec: QuadratureSpec, upper: float | None, vectorized: bool) -> float:
    if vectorized:
        fv = f
    else:

        def fv(x):
            return np.array([float(f(xi)) for xi in x])

    bounded = spec.domain == "interval" or upper is not None
    u = 1.0 if upper is None else float(upper)
    if spec.domain == "interval" and u > 1.0:
        raise DomainError("upper limit of the unit interval must not exceed 1")

    def g(s: np.ndarray) -> np.ndarray:
        x, xc, dx = _unit_map(s)
        # points that round onto an endpoint carry negligible mass
        ok = (x > 0.0) & (xc > 0.0) & (x < 1.0)
        out = np.zeros_like(s)
        if np.any(ok):
            if bounded:
                out[ok] = np.asarray(fv(u * x[ok]), dtype=float) * u * dx[ok]
            else:
                # x = t / (1 - t) with t on the unit map
                xo, xco = x[ok], xc[ok]
                out[ok] = np.asarray(fv(xo / xco), dtype=float) * dx[ok] / (xco * xco)
        return out

    with np.errstate(over="ignore", under="ignore"):
        return _adaptive_simpson(g, -DE_CUTOFF, DE_CUTOFF, spec.abs_tol, spec.max_subdivisions)


def de_rule(h: float, upper: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the trapezoid rule with step ``h`` in the DE variable.

    Covers ``(0, upper)``, or the half-line when ``upper`` is None.
    """
    return _de_nodes(h, upper)


def _de_nodes(h: float, upper: float | None):
    n = int(round(DE_CUTOFF / h))
    s = h * np.arange(-n, n + 1)
    x, xc, dx = _unit_map(s)
    keep = (x > 0.0) & (xc > 0.0) & (x < 1.0)
    x, xc, w = x[keep], xc[keep], h * dx[keep]
    if upper is None:
        return x / xc, w / (xc * xc)
    return upper * x, upper * w


def _sum_chunks(values_fn, arrays, weights) -> float:
    total = 0.0
    n = weights.size
    for start in range(0, n, CHUNK):
        sl = slice(start, start + CHUNK)
        vals = values_fn(*(a[sl] for a in arrays))
        total += float(np.sum(np.asarray(vals, dtype=float) * weights[sl]))
    return total


def _ordered_2d(f, h: float, upper: float | None) -> float:
    l1, w1 = _de_nodes(h, upper)
    u, wu = _de_nodes(h, 1.0)
    L1, U = np.meshgrid(l1, u, indexing="ij")
    W = np.outer(w1, wu) * L1
    L2 = L1 * U
    keep = (L2 > 0) & (L2 < L1)
    return _sum_chunks(f, (L1[keep], L2[keep]), W[keep])


def _spd_2x2(f, h: float, upper: float | None) -> float:
    l1, w1 = _de_nodes(h, upper)
    u, wu = _de_nodes(h, 1.0)
    ok = u >= MIN_RATIO
    u, wu = u[ok], wu[ok]
    if upper is not None:
        ok = (upper - l1) >= MIN_RATIO * upper
        l1, w1 = l1[ok], w1[ok]
    n_theta = max(8, int(math.ceil(2.0 * math.pi / h)))
    theta = math.pi * np.arange(n_theta) / n_theta
    wt = math.pi / n_theta
    c, s = np.cos(theta), np.sin(theta)
    cc, ss, cs = c * c, s * s, c * s

    def values(l1c, uc, thc):
        l2c = l1c * uc
        S = np.empty((l1c.size, 2, 2, 1))
        S[:, 0, 0, 0] = l1c * cc[thc] + l2c * ss[thc]
        S[:, 1, 1, 0] = l1c * ss[thc] + l2c * cc[thc]
        S[:, 0, 1, 0] = S[:, 1, 0, 0] = (l1c - l2c) * cs[thc]
        return f(S)

    # stream over blocks of l1 nodes so the tensor grid is never materialized
    block = max(1, CHUNK // (u.size * n_theta))
    total = 0.0
    for start in range(0, l1.size, block):
        lb, wb = l1[start : start + block], w1[start : start + block]
        L1, U, TH = np.meshgrid(lb, u, np.arange(n_theta), indexing="ij")
        # (dS) = (l1 - l2) dl1 dl2 dtheta with l2 = u l1
        W = (np.outer(wb, wu)[:, :, None] * wt) * L1 * L1 * (1.0 - U)
        total += _sum_chunks(values, (L1.reshape(-1), U.reshape(-1), TH.reshape(-1)), W.reshape(-1))
    return total


def integrate(f: Callable, spec: QuadratureSpec, *, upper: float | None = None, vectorized: bool = False) -> float:
    """Integrate ``f`` over the domain named in ``spec``.

    Parameters
    ----------
    f : callable
        ``f(x) -> float`` on one-dimensional domains (scalar calls unless
        ``vectorized``, in which case ``f`` maps a 1-D array to an array);
        ``f(x, y) -> ndarray`` on the ordered two-dimensional domains
        (vectorized, ``x > y``); ``f(S) -> ndarray`` with ``S`` of shape
        ``(n, 2, 2, 1)`` on the matrix domains.
    spec : QuadratureSpec
    upper : float, optional
        Replace the upper end of the domain (the interval end, or the
        bound on the largest coordinate or eigenvalue).
    vectorized : bool
        One-dimensional domains only; see ``f``.

    Raises
    ------
    QuadratureError
        If the tolerance is not met within ``spec.max_subdivisions``.

    Examples
    --------
    >>> round(integrate(lambda x: math.exp(-x), QuadratureSpec("half-line")), 12)
    1.0
    """
    if upper is not None and not upper > 0:
        raise DomainError("upper limit must be positive")
    if spec.domain in ("interval", "half-line"):
        return _integrate_1d(f, spec, upper, vectorized)
    if spec.domain in ("ordered-simplex-2d", "spd-unit-2x2"):
        upper = 1.0 if upper is None else min(float(upper), 1.0)
    rule = _ordered_2d if spec.domain.startswith("ordered") else _spd_2x2
    prev = None
    h = 0.5
    with np.errstate(over="ignore", under="ignore", divide="ignore"):
        for level in range(spec.max_subdivisions + 1):
            est = rule(f, h, upper)
            if not math.isfinite(est):
                raise QuadratureError("cubature produced a non-finite value")
            if prev is not None and level >= 2 and abs(est - prev) <= spec.abs_tol:
                return est
            prev = est
            h *= 0.5
    raise QuadratureError(
        f"{spec.domain} cubature did not reach {spec.abs_tol:g} after {spec.max_subdivisions} refinements"
    )


# ---------------------------------------------------------------------------
# goodness of fit


@dataclass(frozen=True)
class GofReport:
    """Outcome of a statistical comparison; passes iff ``statistic < critical_value``."""

    statistic: float
    critical_value: float
    n: int
    passed: bool = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "passed", bool(self.statistic < self.critical_value))

    def to_dict(self) -> dict:
        return {
            "statistic": self.statistic,
            "critical_value": self.critical_value,
            "n": self.n,
            "passed": self.passed,
        }


def ks_coefficient(alpha: float) -> float:
    """Asymptotic Kolmogorov quantile ``c(alpha) = sqrt(-log(alpha/2) / 2)``."""
    if alpha not in (0.01, 0.05):
        raise DomainError("alpha must be 0.01 or 0.05")
    return math.sqrt(-math.log(alpha / 2.0) / 2.0)


def ks_statistic(samples, cdf: Callable) -> float:
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    F = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


def ks_test(samples, cdf: Callable, alpha: float = 0.01) -> GofReport:
    """One-sample Kolmogorov-Smirnov test with critical value ``c(alpha) / sqrt(n)``.

    ``cdf`` must accept a sorted array.
    """
    n = np.size(samples)
    if n < 100:
        raise DomainError(f"KS test needs at least 100 samples, got {n}")
    return GofReport(ks_statistic(samples, cdf), ks_coefficient(alpha) / math.sqrt(n), int(n))


def ks_2samp_test(x, y, alpha: float = 0.01) -> GofReport:
    """Two-sample KS test with critical value ``c(alpha) sqrt((n + m) / (n m))``."""
    x = np.sort(np.asarray(x, dtype=float))
    y = np.sort(np.asarray(y, dtype=float))
    n, m = x.size, y.size
    if min(n, m) < 100:
        raise DomainError("two-sample KS test needs at least 100 samples per stream")
    grid = np.concatenate([x, y])
    d = np.abs(np.searchsorted(x, grid, side="right") / n - np.searchsorted(y, grid, side="right") / m)
    crit = ks_coefficient(alpha) * math.sqrt((n + m) / (n * m))
    return GofReport(float(np.max(d)), crit, int(min(n, m)))


def binned_cdf_report(samples, edges, cdf_at_edges, alpha: float = 0.01) -> GofReport:
    """Largest gap between the empirical CDF and reference CDF values at bin edges."""
    x = np.sort(np.asarray(samples, dtype=float))
    n = x.size
    if n < 100:
        raise DomainError("binned CDF comparison needs at least 100 samples")
    emp = np.searchsorted(x, np.asarray(edges, dtype=float), side="right") / n
    stat = float(np.max(np.abs(emp - np.asarray(cdf_at_edges, dtype=float))))
    return GofReport(stat, ks_coefficient(alpha) / math.sqrt(n), int(n))


def moment_report(samples, analytic_mean: float, analytic_var: float, *, sigmas: float = 3.0) -> GofReport:
    """z-score of the sample mean against ``analytic_mean``; passes below ``sigmas``."""
    x = np.asarray(samples, dtype=float)
    n = x.size
    if not (math.isfinite(analytic_var) and analytic_var >= 0):
        raise DomainError("analytic variance must be finite and nonnegative")
    se = math.sqrt(analytic_var / n)
    diff = abs(float(np.mean(x)) - analytic_mean)
    z = diff / se if se > 0 else (0.0 if diff == 0 else math.inf)
    return GofReport(z, sigmas, int(n))
