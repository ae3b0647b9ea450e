"""Command-line interface.

Subcommands::

    riesz-lab sample   --dist riesz1 --beta 1 --m 2 --a 3 --kappa 1,0 --n 5 --seed 7
    riesz-lab pdf      --dist cbeta1 ... --matrix S.json
    riesz-lab eig-pdf  --family C --variant I ... --lams 0.7,0.2
    riesz-lab specfun  --fn ln-mv-gamma --beta 1 --m 1 --a 0.5
    riesz-lab verify   --suite specfun --seed 0

Exit status is 0 on success, 1 when a verification check fails, 2 for
invalid input and 3 for numerical failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Sequence

import numpy as np

from .algebra import (
    DivisionMatrix,
    HermitianPD,
    cholesky_array,
    eigvalsh_array,
    hpd_inverse_array,
    load_matrix,
    log_diag,
)
from .beta_riesz import BetaRieszParams, log_density_beta_riesz, sample_beta_riesz
from .errors import DomainError, NumericalError
from .riesz import (
    RieszParams,
    bartlett_factor,
    log_density_inverse_riesz,
    log_density_riesz,
    riesz_from_factor,
)
from .specfun import (
    LogValue,
    Weight,
    gen_pochhammer,
    ln_c_beta,
    ln_gamma_weight_neg,
    ln_gamma_weight_pos,
    ln_k_beta,
    ln_mv_beta,
    ln_mv_gamma,
    ln_stiefel_volume,
    log_q_kappa,
)
from .spectral import EigenDensityParams, log_joint_eigen_density

EXIT_OK, EXIT_CHECK_FAILED, EXIT_VALIDATION, EXIT_NUMERICAL = 0, 1, 2, 3

RIESZ_DISTS = {"riesz1": "I", "riesz2": "II", "inv-riesz1": "I", "inv-riesz2": "II"}
BETA_DISTS = {"cbeta1": ("C", "I"), "cbeta2": ("C", "II"), "kbeta1": ("K", "I"), "kbeta2": ("K", "II")}
DISTS = tuple(RIESZ_DISTS) + tuple(BETA_DISTS)

SPECFUNS = (
    "ln-mv-gamma",
    "ln-gamma-weight-pos",
    "ln-gamma-weight-neg",
    "gen-pochhammer",
    "ln-mv-beta",
    "ln-c-beta",
    "ln-k-beta",
    "ln-stiefel-volume",
    "log-q-kappa",
)

# draws per independent RNG stream; fixed so output never depends on threads
CHUNK_DRAWS = 2048
THREADS_ENV = "RIESZ_LAB_THREADS"


@dataclass
class RunConfig:
    """Validated settings of one CLI invocation."""

    subcommand: str
    target: str | None = None
    numeric: dict[str, Any] = field(default_factory=dict)
    sigma_path: str | None = None
    matrix_path: str | None = None
    seed: int | None = None
    n: int | None = None
    out: str | None = None
    fmt: str = "csv"
    emit_eigenvalues: bool = False


def _parse_weight(text: str | None, m: int, name: str) -> Weight:
    if text is None:
        return Weight.zeros(m)
    w = Weight.parse(text)
    if w.m != m:
        raise DomainError(f"--{name} has {w.m} parts but --m is {m}")
    return w


def _parse_seed(text: str) -> int:
    try:
        seed = int(text, 0)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= seed < 2**64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return seed


def _positive_int(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {v}")
    return v


def _add_law_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--beta", type=int, required=True, choices=(1, 2, 4, 8))
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--kappa", help="comma-separated weight k1,...,km (default zeros)")
    p.add_argument("--b", type=float)
    p.add_argument("--tau", help="comma-separated weight t1,...,tm (default zeros)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="riesz-lab", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("sample", help="draw matrices from a Riesz or beta-Riesz law")
    p.add_argument("--dist", required=True, choices=DISTS)
    _add_law_flags(p)
    p.add_argument("--sigma", help="scale matrix in JSON (Riesz laws only)")
    p.add_argument("--n", type=_positive_int, required=True)
    p.add_argument("--seed", type=_parse_seed, required=True)
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--emit", choices=("eigenvalues",), action="append", default=[])

    p = sub.add_parser("pdf", help="log-density of a law at a matrix")
    p.add_argument("--dist", required=True, choices=DISTS)
    _add_law_flags(p)
    p.add_argument("--sigma")
    p.add_argument("--matrix", required=True, help="matrix in JSON")

    p = sub.add_parser("eig-pdf", help="joint log-density of ordered eigenvalues")
    p.add_argument("--family", choices=("C", "K", "c", "k"), required=True)
    p.add_argument("--variant", choices=("I", "II"), required=True)
    _add_law_flags(p)
    p.add_argument("--lams", required=True, help="comma-separated descending eigenvalues")

    p = sub.add_parser("specfun", help="evaluate a special function in log form")
    p.add_argument("--fn", required=True, choices=SPECFUNS)
    p.add_argument("--beta", type=int, required=True, choices=(1, 2, 4, 8))
    p.add_argument("--m", type=_positive_int, required=True)
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--n", type=_positive_int)
    p.add_argument("--kappa")
    p.add_argument("--tau")
    p.add_argument("--matrix", help="matrix in JSON (log-q-kappa)")

    p = sub.add_parser("verify", help="run a built-in verification suite")
    p.add_argument("--suite", required=True, choices=("specfun", "riesz", "beta", "eigen"))
    p.add_argument("--seed", type=_parse_seed, default=0)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    numeric = {k: getattr(args, k) for k in ("beta", "m", "a", "b", "kappa", "tau", "lams", "family", "variant", "n") if hasattr(args, k)}
    return RunConfig(
        subcommand=args.subcommand,
        target=getattr(args, "dist", None) or getattr(args, "fn", None) or getattr(args, "suite", None),
        numeric=numeric,
        sigma_path=getattr(args, "sigma", None),
        matrix_path=getattr(args, "matrix", None),
        seed=getattr(args, "seed", None),
        n=getattr(args, "n", None) if args.subcommand == "sample" else None,
        out=getattr(args, "out", None),
        fmt=getattr(args, "format", "csv"),
        emit_eigenvalues="eigenvalues" in (getattr(args, "emit", None) or []),
    )


# ---------------------------------------------------------------------------
# law construction


def _law(cfg: RunConfig):
    v = cfg.numeric
    m = v["m"]
    kappa = _parse_weight(v.get("kappa"), m, "kappa")
    if cfg.target in RIESZ_DISTS:
        sigma = None
        if cfg.sigma_path:
            sigma = HermitianPD(load_matrix(cfg.sigma_path))
        return RieszParams(v["beta"], m, v["a"], kappa, sigma, RIESZ_DISTS[cfg.target])
    if v.get("b") is None:
        raise DomainError(f"--b is required for {cfg.target}")
    if cfg.sigma_path:
        raise DomainError("--sigma applies to Riesz laws only")
    family, variant = BETA_DISTS[cfg.target]
    tau = _parse_weight(v.get("tau"), m, "tau")
    return BetaRieszParams(v["beta"], m, v["a"], kappa, v["b"], tau, family, variant)


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw is None:
        return min(4, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError:
        raise DomainError(f"{THREADS_ENV} must be a positive integer, got {raw!r}") from None
    if n < 1:
        raise DomainError(f"{THREADS_ENV} must be a positive integer, got {n}")
    return n


def draw_matrices(law, dist: str, n: int, seed: int, threads: int = 1) -> np.ndarray:
    """Draw ``n`` matrices in fixed-size chunks, one spawned RNG stream per chunk.

    The result depends only on ``(law, dist, n, seed)``, never on ``threads``.
    """
    n_chunks = -(-n // CHUNK_DRAWS)
    streams = np.random.SeedSequence(seed).spawn(n_chunks)
    sizes = [min(CHUNK_DRAWS, n - i * CHUNK_DRAWS) for i in range(n_chunks)]

    def work(i: int) -> np.ndarray:
        rng = np.random.Generator(np.random.PCG64(streams[i]))
        if isinstance(law, RieszParams):
            x = riesz_from_factor(law, bartlett_factor(law, rng, sizes[i]))
            return hpd_inverse_array(x) if dist.startswith("inv-") else x
        return sample_beta_riesz(law, rng, sizes[i])

    if threads > 1 and n_chunks > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, range(n_chunks)))
    else:
        parts = [work(i) for i in range(n_chunks)]
    return np.concatenate(parts, axis=0)


def sample_columns(m: int, beta: int) -> list[str]:
    """CSV column names: diagonal entries carry only the real component."""
    cols = ["draw_index"]
    for i in range(m):
        for j in range(i + 1):
            comps = range(1) if i == j else range(beta)
            cols += [f"x_{i + 1}_{j + 1}_{c}" for c in comps]
    return cols + ["logdet"]


def _fmt(x: float) -> str:
    return repr(float(x))


def render_samples(draws: np.ndarray, fmt: str, emit_eigenvalues: bool) -> str:
    n, m, _, beta = draws.shape
    t, _ = cholesky_array(draws)
    logdet = 2.0 * log_diag(t).sum(axis=-1)
    eig = eigvalsh_array(draws) if emit_eigenvalues else None
    if fmt == "json":
        rows = []
        for d in range(n):
            row = {"draw_index": d, "matrix": DivisionMatrix(draws[d]).to_dict(), "logdet": float(logdet[d])}
            if eig is not None:
                row["eigenvalues"] = eig[d].tolist()
            rows.append(row)
        return json.dumps(rows, indent=None) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = sample_columns(m, beta) + ([f"eig_{i + 1}" for i in range(m)] if eig is not None else [])
    writer.writerow(header)
    for d in range(n):
        row = [str(d)]
        for i in range(m):
            for j in range(i + 1):
                comps = draws[d, i, j, :1] if i == j else draws[d, i, j]
                row += [_fmt(c) for c in comps]
        row.append(_fmt(logdet[d]))
        if eig is not None:
            row += [_fmt(e) for e in eig[d]]
        writer.writerow(row)
    return buf.getvalue()


def _emit(text: str, path: str | None, stdout) -> None:
    if path is None:
        stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


# ---------------------------------------------------------------------------
# subcommands


def _run_sample(cfg: RunConfig, stdout) -> int:
    law = _law(cfg)
    law.tag.require_matrices("sampling")
    draws = draw_matrices(law, cfg.target, cfg.n, cfg.seed, _threads())
    _emit(render_samples(draws, cfg.fmt, cfg.emit_eigenvalues), cfg.out, stdout)
    return EXIT_OK


def _run_pdf(cfg: RunConfig, stdout) -> int:
    law = _law(cfg)
    x = HermitianPD(load_matrix(cfg.matrix_path))
    if cfg.target in RIESZ_DISTS:
        fn = log_density_inverse_riesz if cfg.target.startswith("inv-") else log_density_riesz
        val = fn(law, x)
    else:
        val = log_density_beta_riesz(law, x)
    stdout.write(json.dumps({"log_density": val}) + "\n")
    return EXIT_OK


def _run_eig_pdf(cfg: RunConfig, stdout) -> int:
    v = cfg.numeric
    m = v["m"]
    if v.get("b") is None:
        raise DomainError("--b is required for eig-pdf")
    try:
        lams = [float(x) for x in v["lams"].split(",")]
    except ValueError as exc:
        raise DomainError(f"cannot parse --lams: {exc}") from exc
    params = EigenDensityParams.build(
        v["beta"], m, v["a"], _parse_weight(v.get("kappa"), m, "kappa"), v["b"],
        _parse_weight(v.get("tau"), m, "tau"), v["family"].upper(), v["variant"],
    )
    stdout.write(json.dumps({"log_density": log_joint_eigen_density(params, lams)}) + "\n")
    return EXIT_OK


def _need(v: dict, *names: str) -> None:
    missing = [n for n in names if v.get(n) is None]
    if missing:
        raise DomainError("missing required flag(s): " + ", ".join("--" + n for n in missing))


def evaluate_specfun(cfg: RunConfig) -> LogValue:
    v = cfg.numeric
    beta, m, fn = v["beta"], v["m"], cfg.target
    kappa = lambda: _parse_weight(v.get("kappa"), m, "kappa")  # noqa: E731
    tau = lambda: _parse_weight(v.get("tau"), m, "tau")  # noqa: E731
    if fn == "ln-stiefel-volume":
        _need(v, "n")
        return ln_stiefel_volume(beta, m, v["n"])
    if fn == "log-q-kappa":
        if not cfg.matrix_path:
            raise DomainError("missing required flag: --matrix")
        s = HermitianPD(load_matrix(cfg.matrix_path))
        if s.m != m or s.beta != beta:
            raise DomainError(f"--matrix is {s.m}x{s.m} over beta = {s.beta}, expected {m}x{m} over beta = {beta}")
        val = log_q_kappa(s, kappa())
        return LogValue(val, 1)
    _need(v, "a")
    a = v["a"]
    if fn == "ln-mv-gamma":
        return ln_mv_gamma(beta, m, a)
    if fn == "ln-gamma-weight-pos":
        return ln_gamma_weight_pos(beta, m, a, kappa())
    if fn == "ln-gamma-weight-neg":
        return ln_gamma_weight_neg(beta, m, a, kappa())
    if fn == "gen-pochhammer":
        return gen_pochhammer(beta, m, a, kappa())
    _need(v, "b")
    if fn == "ln-mv-beta":
        return ln_mv_beta(beta, m, a, v["b"])
    if fn == "ln-c-beta":
        return ln_c_beta(beta, m, a, kappa(), v["b"], tau())
    return ln_k_beta(beta, m, a, kappa(), v["b"], tau())


def _run_specfun(cfg: RunConfig, stdout) -> int:
    stdout.write(json.dumps(evaluate_specfun(cfg).to_dict()) + "\n")
    return EXIT_OK


def _run_verify(cfg: RunConfig, stdout) -> int:
    from .suites import run_suite

    report = run_suite(cfg.target, cfg.seed)
    stdout.write(json.dumps(report, indent=2) + "\n")
    return EXIT_OK if report["passed"] else EXIT_CHECK_FAILED


_HANDLERS = {
    "sample": _run_sample,
    "pdf": _run_pdf,
    "eig-pdf": _run_eig_pdf,
    "specfun": _run_specfun,
    "verify": _run_verify,
}


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Execute a validated configuration and return the exit status."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        return _HANDLERS[cfg.subcommand](cfg, stdout)
    except DomainError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    except NumericalError as exc:
        stderr.write(f"numerical failure: {exc}\n")
        return EXIT_NUMERICAL
    except NotImplementedError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION
    except OSError as exc:
        stderr.write(f"error: {exc}\n")
        return EXIT_VALIDATION


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_VALIDATION if exc.code else EXIT_OK
    return run(config_from_args(args))


if __name__ == "__main__":
    raise SystemExit(main())
