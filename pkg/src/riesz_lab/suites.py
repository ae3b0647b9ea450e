"""Registered numerical checks shared by the ``verify`` subcommand and the tests.

Every density has a normalization check at ``m = 1`` (one-dimensional
quadrature) and, where a cubature domain exists, at ``m = 2`` with
``beta = 1``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import special, stats

from .beta_riesz import BetaRieszParams, log_density_beta_riesz, sample_beta_riesz
from .riesz import (
    RieszParams,
    Variant,
    bartlett_factor,
    bartlett_shapes,
    generalized_variance_mean,
    log_density_inverse_riesz,
    log_density_riesz,
    riesz_from_factor,
    sample_generalized_variance,
)
from .specfun import (
    Weight,
    gen_pochhammer,
    ln_c_beta,
    ln_gamma_weight_neg,
    ln_gamma_weight_pos,
    ln_k_beta,
    ln_mv_gamma,
    ln_stiefel_volume,
)
from .spectral import log_eigen_constant, log_eigen_constant_closed, log_joint_eigen_density
from .verify import QuadratureSpec, integrate, ks_2samp_test, ks_test, moment_report


def scalar_stack(x: np.ndarray, beta: int) -> np.ndarray:
    """Embed real scalars as a stack of ``1 x 1`` matrices."""
    out = np.zeros((np.size(x), 1, 1, beta))
    out[:, 0, 0, 0] = x
    return out


# ---------------------------------------------------------------------------
# normalization integrals


def riesz_m1_integral(params: RieszParams, inverse: bool = False, tol: float = 1e-11) -> float:
    fn = log_density_inverse_riesz if inverse else log_density_riesz
    return integrate(
        lambda x: np.exp(fn(params, scalar_stack(x, params.beta))),
        QuadratureSpec("half-line", tol),
        vectorized=True,
    )


def beta_m1_integral(params: BetaRieszParams, tol: float = 1e-11) -> float:
    domain = "interval" if params.variant is Variant.TYPE_I else "half-line"
    return integrate(
        lambda x: np.exp(log_density_beta_riesz(params, scalar_stack(x, params.beta))),
        QuadratureSpec(domain, tol),
        vectorized=True,
    )


def eigen_m1_integral(params: BetaRieszParams, tol: float = 1e-11) -> float:
    domain = "interval" if params.variant is Variant.TYPE_I else "half-line"
    return integrate(
        lambda x: np.exp(log_joint_eigen_density(params, x[:, None])),
        QuadratureSpec(domain, tol),
        vectorized=True,
    )


def beta_m2_cubature(params: BetaRieszParams, tol: float = 1e-6, weight: Callable | None = None) -> float:
    """Integral of ``weight(S) * density(S)`` over real ``2 x 2`` matrices."""
    domain = "spd-unit-2x2" if params.variant is Variant.TYPE_I else "spd-cone-2x2"

    def f(s):
        d = np.exp(log_density_beta_riesz(params, s))
        return d if weight is None else weight(s) * d

    return integrate(f, QuadratureSpec(domain, tol, 9))


def riesz_m2_cubature(params: RieszParams, inverse: bool = False, tol: float = 1e-6) -> float:
    fn = log_density_inverse_riesz if inverse else log_density_riesz
    return integrate(lambda s: np.exp(fn(params, s)), QuadratureSpec("spd-cone-2x2", tol, 9))


def eigen_m2_integral(params: BetaRieszParams, tol: float = 1e-8) -> float:
    domain = "ordered-simplex-2d" if params.variant is Variant.TYPE_I else "ordered-orthant-2d"
    return integrate(
        lambda l1, l2: np.exp(log_joint_eigen_density(params, np.stack([l1, l2], axis=-1))),
        QuadratureSpec(domain, tol, 12),
    )


@dataclass(frozen=True)
class NormalizationCheck:
    """A density, a parameter point and the integral that should equal one."""

    density: str
    label: str
    m: int
    tolerance: float
    compute: Callable[[], float]

    def run(self) -> dict:
        value = self.compute()
        err = abs(value - 1.0)
        return {
            "name": f"normalization[{self.density}] {self.label}",
            "integral": value,
            "error": err,
            "tolerance": self.tolerance,
            "passed": bool(err <= self.tolerance),
        }


def _riesz_grid(variant: str) -> list[tuple[int, float, float]]:
    shapes = (0.75, 2.5) if variant == "I" else (2.5, 4.0)
    return [(beta, a, k) for beta, a, k in itertools.product((1, 2, 4), shapes, (0.0, 1.5))]


def _beta_grid(family: str) -> list[tuple[int, float, float, float, float]]:
    # exponents stay >= 0.75 at the unit end of the interval
    if family == "C":
        pts = [(1.5, 0.0, 1.0, 0.0), (3.0, 1.0, 2.5, 0.5), (0.8, 2.0, 1.25, 1.0), (2.0, 0.5, 0.75, 0.0)]
    else:
        pts = [(1.5, 0.0, 1.0, 0.0), (3.0, 1.0, 2.5, 0.5), (3.5, 2.0, 2.25, 1.0), (2.0, 0.5, 1.75, 0.5)]
    return [(beta,) + pt for beta in (1, 2, 4) for pt in pts]


def m1_normalization_checks(tolerance: float = 1e-8) -> list[NormalizationCheck]:
    """At least twelve ``m = 1`` parameter points for each of the twelve densities."""
    checks = []
    for variant in ("I", "II"):
        for beta, a, k in _riesz_grid(variant):
            params = RieszParams(beta, 1, a, [k], variant=variant)
            label = f"beta={beta} a={a} k={k}"
            checks.append(NormalizationCheck(f"riesz{variant}", label, 1, tolerance, lambda p=params: riesz_m1_integral(p)))
            checks.append(
                NormalizationCheck(f"inverse-riesz{variant}", label, 1, tolerance, lambda p=params: riesz_m1_integral(p, True))
            )
    for family in ("C", "K"):
        for variant in ("I", "II"):
            for beta, a, k, b, t in _beta_grid(family):
                params = BetaRieszParams(beta, 1, a, [k], b, [t], family, variant)
                label = f"beta={beta} a={a} k={k} b={b} t={t}"
                name = f"{family.lower()}beta{variant}"
                checks.append(NormalizationCheck(name, label, 1, tolerance, lambda p=params: beta_m1_integral(p)))
            for beta, a, k, b, t in _beta_grid(family) + [(8,) + pt[1:] for pt in _beta_grid(family)[:4]]:
                params = BetaRieszParams(beta, 1, a, [k], b, [t], family, variant)
                label = f"beta={beta} a={a} k={k} b={b} t={t}"
                name = f"eigen-{family.lower()}{variant}"
                checks.append(NormalizationCheck(name, label, 1, tolerance, lambda p=params: eigen_m1_integral(p)))
    return checks


def m2_normalization_checks() -> list[NormalizationCheck]:
    """Full-matrix cubature at ``m = 2``, ``beta = 1``."""
    from .algebra import HermitianPD

    sigma = HermitianPD(np.array([[[2.0], [0.7]], [[0.7], [1.0]]]))
    out = []
    riesz_pts = [("I", 2.5, [2.0, 0.5]), ("II", 3.0, [1.5, 0.5])]
    for variant, a, k in riesz_pts:
        for sig, slabel in ((None, "identity"), (sigma, "general")):
            params = RieszParams(1, 2, a, k, sig, variant)
            label = f"a={a} k={k} sigma={slabel}"
            out.append(NormalizationCheck(f"riesz{variant}", label, 2, 1e-4, lambda p=params: riesz_m2_cubature(p)))
            out.append(
                NormalizationCheck(f"inverse-riesz{variant}", label, 2, 1e-4, lambda p=params: riesz_m2_cubature(p, True, 1e-5))
            )
    beta_pts = {
        "C": [(3.5, [1.5, 0.5], 3.0, [1.0, 0.0]), (2.0, [0.0, 0.0], 2.0, [0.0, 0.0])],
        "K": [(3.5, [1.0, 0.5], 3.0, [0.5, 0.0]), (2.0, [0.0, 0.0], 2.0, [0.0, 0.0])],
    }
    for family, pts in beta_pts.items():
        for variant in ("I", "II"):
            for a, k, b, t in pts:
                params = BetaRieszParams(1, 2, a, k, b, t, family, variant)
                label = f"a={a} k={k} b={b} t={t}"
                out.append(
                    NormalizationCheck(f"{family.lower()}beta{variant}", label, 2, 1e-4, lambda p=params: beta_m2_cubature(p))
                )
    eigen_pts = [(2.0, 0.0, 2.0, 0.0), (3.0, 1.0, 2.5, 0.5), (1.0, 0.0, 1.0, 0.0)]
    for family in ("C", "K"):
        for variant in ("I", "II"):
            for beta in (1, 2):
                for a, k, b, t in eigen_pts:
                    if family == "K" and (a - k <= (beta / 2) or b - t <= beta / 2):
                        continue
                    if family == "C" and (a + k <= beta / 2 or b + t <= beta / 2):
                        continue
                    params = BetaRieszParams(beta, 2, a, [k, k], b, [t, t], family, variant)
                    label = f"beta={beta} a={a} k={k} b={b} t={t}"
                    out.append(
                        NormalizationCheck(f"eigen-{family.lower()}{variant}", label, 2, 1e-4, lambda p=params: eigen_m2_integral(p))
                    )
    return out


# ---------------------------------------------------------------------------
# suites


def _rel_close(x: float, y: float, tol: float) -> bool:
    return abs(x - y) <= tol * max(1.0, abs(x), abs(y))


def _random_weight(rng: np.random.Generator, m: int, top: int = 4) -> Weight:
    return Weight(tuple(sorted(rng.integers(0, top + 1, size=m).tolist(), reverse=True)))


def specfun_checks(rng: np.random.Generator, points: int = 50) -> list[dict]:
    out = []
    worst = 0.0
    for _ in range(points):
        beta = int(rng.choice([1, 2, 4, 8]))
        m = int(rng.integers(1, 7))
        kappa = _random_weight(rng, m)
        a = (m - 1) * beta / 2.0 + rng.uniform(0.1, 6.0)
        lhs = ln_gamma_weight_pos(beta, m, a, kappa)
        rhs = gen_pochhammer(beta, m, a, kappa) * ln_mv_gamma(beta, m, a)
        worst = max(worst, abs(lhs.log_abs - rhs.log_abs) / max(1.0, abs(lhs.log_abs)))
    out.append({"name": "weighted gamma factorization", "max_rel_error": worst, "passed": worst < 1e-10})

    worst, signs_ok = 0.0, True
    for _ in range(points):
        beta = int(rng.choice([1, 2, 4, 8]))
        m = int(rng.integers(1, 7))
        kappa = _random_weight(rng, m)
        a = (m - 1) * beta / 2.0 + kappa.parts[0] + rng.uniform(0.1, 6.0)
        lhs = ln_gamma_weight_neg(beta, m, a, kappa)
        poch = gen_pochhammer(beta, m, -a + (m - 1) * beta / 2.0 + 1.0, kappa)
        sign = -1 if int(kappa.sum) % 2 else 1
        rhs_log = ln_mv_gamma(beta, m, a).log_abs - poch.log_abs
        signs_ok &= lhs.sign == sign * poch.sign
        worst = max(worst, abs(lhs.log_abs - rhs_log) / max(1.0, abs(lhs.log_abs)))
    out.append({"name": "reflected weighted gamma identity", "max_rel_error": worst, "passed": bool(worst < 1e-10 and signs_ok)})

    examples = [
        ("ln_mv_gamma(1,1,0.5)", ln_mv_gamma(1, 1, 0.5).log_abs, 0.5 * math.log(math.pi)),
        ("ln_mv_gamma(1,2,1.5)", ln_mv_gamma(1, 2, 1.5).log_abs, math.log(math.sqrt(math.pi) * math.sqrt(math.pi) / 2)),
        ("ln_mv_gamma(2,2,2)", ln_mv_gamma(2, 2, 2.0).log_abs, math.log(math.pi)),
        ("stiefel(1,1,2)", ln_stiefel_volume(1, 1, 2).log_abs, math.log(2 * math.pi)),
        ("stiefel(1,1,3)", ln_stiefel_volume(1, 1, 3).log_abs, math.log(4 * math.pi)),
        ("stiefel(2,1,1)", ln_stiefel_volume(2, 1, 1).log_abs, math.log(2 * math.pi)),
        ("c-beta(1,1,[1],1,[0])", ln_c_beta(1, 1, 1, [1], 1, [0]).log_abs, math.log(0.5)),
        ("k-beta(1,1,3,[1],2,[0])", ln_k_beta(1, 1, 3, [1], 2, [0]).log_abs, math.log(1 / 6)),
    ]
    for name, got, want in examples:
        out.append({"name": name, "value": got, "expected": want, "passed": _rel_close(got, want, 1e-12)})

    for fn, name in ((ln_c_beta, "c"), (ln_k_beta, "k")):
        for a, k, b, t in ((2.5, 1.0, 1.5, 0.0), (4.0, 2.0, 3.0, 0.5)):
            integrand_shift = 1.0 if name == "c" else -1.0
            val = integrate(
                lambda s: s ** (a + integrand_shift * k - 1) * (1 - s) ** (b + integrand_shift * t - 1),
                QuadratureSpec("interval", 1e-12),
                vectorized=True,
            )
            want = fn(1, 1, a, [k], b, [t]).value
            out.append({"name": f"{name}-beta quadrature a={a} k={k} b={b} t={t}", "value": val, "expected": want, "passed": abs(val - want) < 1e-8})
    return out


def riesz_checks(rng: np.random.Generator, n: int = 5000) -> list[dict]:
    out = [c.run() for c in m1_normalization_checks() if c.density.startswith(("riesz", "inverse")) and "beta=2" in c.label]
    for variant, a, k in (("I", 2.5, [1.0, 0.5, 0.0]), ("II", 4.0, [1.0, 0.5, 0.0])):
        params = RieszParams(2, 3, a, k, variant=variant)
        x = riesz_from_factor(params, bartlett_factor(params, rng, n))
        from .algebra import cholesky_array, reverse_cholesky_array

        fac = cholesky_array(x)[0] if variant == "I" else reverse_cholesky_array(x)[0]
        for i, shape in enumerate(bartlett_shapes(params)):
            t2 = fac[:, i, i, 0] ** 2
            rep = ks_test(t2, lambda v, s=shape: special.gammainc(s, 2 * v), 0.01)
            out.append({"name": f"bartlett pivot {i + 1} type {variant}", **rep.to_dict()})
        v1 = np.exp(2 * np.sum(np.log(fac[:, np.arange(3), np.arange(3), 0]), axis=-1))
        v2 = sample_generalized_variance(params, rng, n)
        out.append({"name": f"generalized variance two-path type {variant}", **ks_2samp_test(v1, v2).to_dict()})
        out.append(
            {
                "name": f"generalized variance mean type {variant}",
                **moment_report(v2, generalized_variance_mean(params), float(np.var(v2))).to_dict(),
            }
        )
    return out


def beta_checks(rng: np.random.Generator, n: int = 5000) -> list[dict]:
    out = [c.run() for c in m1_normalization_checks() if "beta" in c.density and not c.density.startswith("eigen") and "beta=1 " in c.label]
    out += [c.run() for c in m2_normalization_checks() if "beta" in c.density and c.density.endswith("I") and not c.density.endswith("II")]
    for family in ("C", "K"):
        params = BetaRieszParams(1, 1, 3.0, [0.0], 2.0, [0.0], family, "I")
        s = sample_beta_riesz(params, rng, n)[:, 0, 0, 0]
        out.append({"name": f"{family} type I m=1 vs Beta(b,a)", **ks_test(s, stats.beta(2.0, 3.0).cdf).to_dict()})
        r = sample_beta_riesz(params.with_variant("II"), rng, n)[:, 0, 0, 0]
        out.append({"name": f"{family} type II m=1 vs BetaPrime(b,a)", **ks_test(r, stats.betaprime(2.0, 3.0).cdf).to_dict()})
    return out


def eigen_checks(rng: np.random.Generator) -> list[dict]:
    out = []
    for beta in (1, 2, 4, 8):
        got = log_eigen_constant(beta, 1)
        out.append({"name": f"eigen constant m=1 beta={beta}", "value": got, "expected": 0.0, "passed": abs(got) < 1e-12})
    for beta in (1, 2, 4):
        for m in (2, 3, 4):
            a, b = log_eigen_constant(beta, m), log_eigen_constant_closed(beta, m)
            out.append({"name": f"eigen constant closed form beta={beta} m={m}", "value": a, "expected": b, "passed": _rel_close(a, b, 1e-12)})
    out += [c.run() for c in m1_normalization_checks() if c.density.startswith("eigen") and "beta=1 " in c.label]
    out += [c.run() for c in m2_normalization_checks() if c.density.startswith("eigen") and "beta=1 " in c.label]
    return out


SUITES: dict[str, Callable[[np.random.Generator], list[dict]]] = {
    "specfun": specfun_checks,
    "riesz": riesz_checks,
    "beta": beta_checks,
    "eigen": eigen_checks,
}


def run_suite(name: str, seed: int) -> dict:
    """Run a named suite with a seeded generator and collect a JSON-ready report."""
    rng = np.random.Generator(np.random.PCG64(seed))
    checks = SUITES[name](rng)
    for c in checks:
        for key, val in list(c.items()):
            if isinstance(val, (np.floating, np.integer, np.bool_)):
                c[key] = val.item()
    return {"suite": name, "seed": seed, "passed": all(c["passed"] for c in checks), "checks": checks}
