"""Scalars and dense matrices over the real normed division algebras.

An element of the algebra with real dimension ``beta`` is stored as a real
vector of ``beta`` components (``1, i, j, k, ...``).  Matrices are real
arrays of shape ``(rows, cols, beta)``; every array-level routine in this
module also accepts leading batch axes, so a stack of ``n`` matrices has
shape ``(n, rows, cols, beta)``.

Multiplication follows the Cayley-Dickson doubling rule
``(a, b)(c, d) = (ac - conj(d) b, d a + b conj(c))``, which gives the usual
quaternion table ``ij = k``.  Octonions (``beta = 8``) are supported for
scalars only: their matrix product is not associative, so every matrix
routine rejects them.
"""

from __future__ import annotations

import functools
import json
from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from .errors import DomainError, NotPositiveDefiniteError, NumericalError, UnsupportedAlgebraError

BETAS = (1, 2, 4, 8)
MATRIX_BETAS = (1, 2, 4)

_NAMES = {1: "real", 2: "complex", 4: "quaternion", 8: "octonion"}

# imaginary parts of a Hermitian diagonal must vanish to this absolute level
DIAG_IMAG_TOL = 1e-12
# relative tolerance for S = S* at construction
HERMITIAN_RTOL = 1e-10
# relative tolerance when pairing the doubled spectrum of the complex adjoint
PAIRING_RTOL = 1e-8


@dataclass(frozen=True)
class AlgebraTag:
    """Identifies one of the four real normed division algebras.

    Parameters
    ----------
    beta : int
        Real dimension of the algebra, one of 1, 2, 4, 8.
    """

    beta: int

    def __post_init__(self):
        if isinstance(self.beta, bool) or self.beta not in BETAS:
            raise DomainError(f"beta must be one of {BETAS}, got {self.beta!r}")
        object.__setattr__(self, "beta", int(self.beta))

    @property
    def name(self) -> str:
        return _NAMES[self.beta]

    @property
    def supports_matrices(self) -> bool:
        return self.beta in MATRIX_BETAS

    def require_matrices(self, what: str = "matrix operations") -> None:
        if not self.supports_matrices:
            raise UnsupportedAlgebraError(
                f"{what} require an associative algebra (beta <= 4); "
                f"octonion matrices are analytic-only"
            )

    @classmethod
    def coerce(cls, value: "AlgebraTag | int") -> "AlgebraTag":
        if isinstance(value, AlgebraTag):
            return value
        if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
            return cls(int(value))
        raise DomainError(f"cannot interpret {value!r} as an algebra tag")

    def __str__(self) -> str:
        return f"{self.name}(beta={self.beta})"


# ---------------------------------------------------------------------------
# scalar arithmetic on component vectors


def scalar_conj(x: np.ndarray) -> np.ndarray:
    """Conjugate along the last (component) axis."""
    x = np.asarray(x, dtype=float)
    out = -x
    out[..., 0] = x[..., 0]
    return out


def scalar_mul(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Cayley-Dickson product of component vectors, broadcasting over leading axes."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = x.shape[-1]
    if y.shape[-1] != n:
        raise DomainError("scalar operands belong to different algebras")
    if n == 1:
        return x * y
    h = n // 2
    a, b = x[..., :h], x[..., h:]
    c, d = y[..., :h], y[..., h:]
    first = scalar_mul(a, c) - scalar_mul(scalar_conj(d), b)
    second = scalar_mul(d, a) + scalar_mul(b, scalar_conj(c))
    return np.concatenate(np.broadcast_arrays(first, second), axis=-1)


def scalar_norm2(x: np.ndarray) -> np.ndarray:
    """Squared Euclidean norm of component vectors."""
    x = np.asarray(x, dtype=float)
    return np.sum(x * x, axis=-1)


@functools.lru_cache(maxsize=None)
def multiplication_table(beta: int) -> np.ndarray:
    """Structure constants ``T[p, q, r]`` with ``e_p e_q = sum_r T[p, q, r] e_r``."""
    beta = AlgebraTag.coerce(beta).beta
    basis = np.eye(beta)
    table = scalar_mul(basis[:, None, :], basis[None, :, :])
    table.setflags(write=False)
    return table


class DivisionScalar:
    """A single element of a division algebra.

    Parameters
    ----------
    components : array_like
        Real components, length equal to the algebra dimension.
    """

    __slots__ = ("_c",)

    def __init__(self, components):
        c = np.array(components, dtype=float).reshape(-1)
        AlgebraTag.coerce(c.size)
        c.setflags(write=False)
        self._c = c

    @property
    def components(self) -> np.ndarray:
        return self._c

    @property
    def tag(self) -> AlgebraTag:
        return AlgebraTag(self._c.size)

    @property
    def real(self) -> float:
        return float(self._c[0])

    @classmethod
    def unit(cls, beta: int, index: int = 0) -> "DivisionScalar":
        c = np.zeros(beta)
        c[index] = 1.0
        return cls(c)

    def conj(self) -> "DivisionScalar":
        return DivisionScalar(scalar_conj(self._c))

    def norm(self) -> float:
        return float(np.sqrt(scalar_norm2(self._c)))

    def __mul__(self, other: "DivisionScalar") -> "DivisionScalar":
        if not isinstance(other, DivisionScalar):
            return DivisionScalar(self._c * float(other))
        return DivisionScalar(scalar_mul(self._c, other._c))

    def __rmul__(self, other) -> "DivisionScalar":
        return DivisionScalar(self._c * float(other))

    def __add__(self, other: "DivisionScalar") -> "DivisionScalar":
        return DivisionScalar(self._c + other._c)

    def __sub__(self, other: "DivisionScalar") -> "DivisionScalar":
        return DivisionScalar(self._c - other._c)

    def __neg__(self) -> "DivisionScalar":
        return DivisionScalar(-self._c)

    def __eq__(self, other) -> bool:
        return isinstance(other, DivisionScalar) and np.array_equal(self._c, other._c)

    def __hash__(self) -> int:
        return hash(self._c.tobytes())

    def __repr__(self) -> str:
        return f"DivisionScalar({self._c.tolist()})"


# ---------------------------------------------------------------------------
# array-level matrix routines (leading batch axes allowed)


def _beta_of(a: np.ndarray) -> int:
    beta = a.shape[-1]
    AlgebraTag.coerce(beta).require_matrices()
    return beta


def mat_ctranspose(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose of a stack of matrices."""
    return scalar_conj(np.swapaxes(np.asarray(a, dtype=float), -3, -2))


def mat_to_complex(a: np.ndarray) -> np.ndarray:
    """View a complex (``beta = 2``) stack as a numpy complex array."""
    a = np.asarray(a, dtype=float)
    if a.shape[-1] != 2:
        raise UnsupportedAlgebraError("complex view requires beta = 2")
    return a[..., 0] + 1j * a[..., 1]


def mat_from_complex(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return np.stack([z.real, z.imag], axis=-1)


def _quaternion_halves(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # q = z1 + z2 j with z1 = c0 + i c1, z2 = c2 + i c3
    return a[..., 0] + 1j * a[..., 1], a[..., 2] + 1j * a[..., 3]


def _quaternion_join(z1: np.ndarray, z2: np.ndarray) -> np.ndarray:
    return np.stack([z1.real, z1.imag, z2.real, z2.imag], axis=-1)


def mat_mul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Matrix product of stacks over an associative division algebra."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    beta = _beta_of(a)
    if b.shape[-1] != beta:
        raise DomainError("matrix operands belong to different algebras")
    if a.shape[-2] != b.shape[-3]:
        raise DomainError(f"inner dimensions disagree: {a.shape[-3:-1]} and {b.shape[-3:-1]}")
    if beta == 1:
        return np.matmul(a[..., 0], b[..., 0])[..., None]
    if beta == 2:
        return mat_from_complex(np.matmul(mat_to_complex(a), mat_to_complex(b)))
    a1, a2 = _quaternion_halves(a)
    b1, b2 = _quaternion_halves(b)
    c1 = a1 @ b1 - a2 @ np.conj(b2)
    c2 = a1 @ b2 + a2 @ np.conj(b1)
    return _quaternion_join(c1, c2)


def mat_identity(beta: int, m: int) -> np.ndarray:
    out = np.zeros((m, m, beta))
    out[np.arange(m), np.arange(m), 0] = 1.0
    return out


def quaternion_adjoint_array(a: np.ndarray) -> np.ndarray:
    """Complex adjoint ``[[Z1, Z2], [-conj(Z2), conj(Z1)]]`` of a quaternion stack."""
    a = np.asarray(a, dtype=float)
    if a.shape[-1] != 4:
        raise UnsupportedAlgebraError("the complex adjoint is defined for quaternion matrices")
    z1, z2 = _quaternion_halves(a)
    top = np.concatenate([z1, z2], axis=-1)
    bottom = np.concatenate([-np.conj(z2), np.conj(z1)], axis=-1)
    return np.concatenate([top, bottom], axis=-2)


def _pivot_failure(d: np.ndarray) -> np.ndarray:
    return ~(np.isfinite(d) & (d > 0.0))


def cholesky_array(s: np.ndarray, *, strict: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Upper-triangular factor ``T`` with ``S = T* T`` for a stack of HPD matrices.

    Parameters
    ----------
    s : ndarray, shape (..., m, m, beta)
    strict : bool
        If True a failing pivot in any matrix raises; otherwise the failing
        matrices are flagged and their factor entries are left as NaN.

    Returns
    -------
    T : ndarray, shape (..., m, m, beta)
    ok : ndarray of bool, shape (...)
    """
    s = np.asarray(s, dtype=float)
    _beta_of(s)
    m = s.shape[-2]
    if s.shape[-3] != m:
        raise DomainError(f"Cholesky requires a square matrix, got {s.shape[-3:-1]}")
    t = np.zeros_like(s)
    ok = np.ones(s.shape[:-3], dtype=bool)
    for i in range(m):
        col = t[..., :i, i, :]
        d = s[..., i, i, 0] - np.sum(col * col, axis=(-1, -2))
        bad = _pivot_failure(d)
        if np.any(bad):
            if strict:
                raise NotPositiveDefiniteError(
                    f"matrix is not positive definite (pivot {i + 1} is {np.min(d):.3e})"
                )
            ok &= ~bad
            d = np.where(bad, np.nan, d)
        tii = np.sqrt(d)
        t[..., i, i, 0] = tii
        if i + 1 < m:
            acc = s[..., i, i + 1 :, :]
            if i > 0:
                prod = scalar_mul(scalar_conj(col)[..., :, None, :], t[..., :i, i + 1 :, :])
                acc = acc - prod.sum(axis=-3)
            t[..., i, i + 1 :, :] = acc / tii[..., None, None]
    return t, ok


def reversal(a: np.ndarray) -> np.ndarray:
    """Conjugation ``P A P`` by the anti-diagonal permutation."""
    return np.asarray(a)[..., ::-1, ::-1, :]


def reverse_cholesky_array(s: np.ndarray, *, strict: bool = True) -> tuple[np.ndarray, np.ndarray]:
    """Upper-triangular ``A`` with positive diagonal and ``S = A A*``.

    With ``P`` the reversal permutation and ``P S P = U* U`` the ordinary
    factorization, ``A = P U* P``.
    """
    u, ok = cholesky_array(reversal(s), strict=strict)
    return reversal(mat_ctranspose(u)), ok


def tri_inverse_array(t: np.ndarray) -> np.ndarray:
    """Inverse of a stack of upper-triangular matrices with real nonzero diagonal."""
    t = np.asarray(t, dtype=float)
    m = t.shape[-2]
    u = np.zeros_like(t)
    diag = t[..., np.arange(m), np.arange(m), 0]
    for j in range(m):
        u[..., j, j, 0] = 1.0 / diag[..., j]
        if j > 0:
            prod = scalar_mul(u[..., :j, :j, :], t[..., None, :j, j, :])
            u[..., :j, j, :] = -prod.sum(axis=-2) / diag[..., j, None, None]
    return u


def log_diag(t: np.ndarray) -> np.ndarray:
    """``log t_ii`` for a stack of triangular factors with positive diagonal."""
    m = t.shape[-2]
    return np.log(t[..., np.arange(m), np.arange(m), 0])


def gram_array(t: np.ndarray) -> np.ndarray:
    """``T* T`` with an exactly Hermitian result."""
    g = mat_mul(mat_ctranspose(t), t)
    return hermitian_part(g)


def hermitian_part(a: np.ndarray) -> np.ndarray:
    return 0.5 * (a + mat_ctranspose(a))


def hpd_inverse_array(s: np.ndarray) -> np.ndarray:
    t, _ = cholesky_array(s)
    u = tri_inverse_array(t)
    return hermitian_part(mat_mul(u, mat_ctranspose(u)))


def hpd_logdet_array(s: np.ndarray) -> np.ndarray:
    t, _ = cholesky_array(s)
    return 2.0 * log_diag(t).sum(axis=-1)


def leading_logminors_array(s: np.ndarray) -> np.ndarray:
    """Log-determinants of the leading ``p x p`` blocks, ``p = 1..m``."""
    t, _ = cholesky_array(s)
    return np.cumsum(2.0 * log_diag(t), axis=-1)


def eigvalsh_array(s: np.ndarray) -> np.ndarray:
    """Eigenvalues of a stack of Hermitian matrices, sorted descending."""
    s = np.asarray(s, dtype=float)
    beta = _beta_of(s)
    if beta == 1:
        w = np.linalg.eigvalsh(s[..., 0])
    elif beta == 2:
        w = np.linalg.eigvalsh(mat_to_complex(s))
    else:
        w2 = np.linalg.eigvalsh(quaternion_adjoint_array(s))
        lo, hi = w2[..., 0::2], w2[..., 1::2]
        scale = np.maximum(np.max(np.abs(w2), axis=-1, keepdims=True), np.finfo(float).tiny)
        if np.any(np.abs(hi - lo) > PAIRING_RTOL * scale):
            raise NumericalError("complex adjoint spectrum does not split into equal pairs")
        w = 0.5 * (lo + hi)
    return w[..., ::-1]


# ---------------------------------------------------------------------------
# matrix types


class DivisionMatrix:
    """Dense ``rows x cols`` matrix over a division algebra.

    Parameters
    ----------
    data : array_like, shape (rows, cols, beta)
        Row-major array of scalar components.
    """

    __slots__ = ("_data",)

    def __init__(self, data):
        d = np.array(data, dtype=float)
        if d.ndim != 3 or d.shape[0] < 1 or d.shape[1] < 1:
            raise DomainError(f"matrix data must have shape (rows, cols, beta), got {d.shape}")
        AlgebraTag.coerce(d.shape[2])
        d.setflags(write=False)
        self._data = d

    @property
    def data(self) -> np.ndarray:
        return self._data

    @property
    def tag(self) -> AlgebraTag:
        return AlgebraTag(self._data.shape[2])

    @property
    def beta(self) -> int:
        return self._data.shape[2]

    @property
    def rows(self) -> int:
        return self._data.shape[0]

    @property
    def cols(self) -> int:
        return self._data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def entry(self, i: int, j: int) -> DivisionScalar:
        return DivisionScalar(self._data[i, j])

    def conj_transpose(self) -> "DivisionMatrix":
        return DivisionMatrix(mat_ctranspose(self._data))

    @property
    def H(self) -> "DivisionMatrix":
        return self.conj_transpose()

    def __matmul__(self, other: "DivisionMatrix") -> "DivisionMatrix":
        return matmul(self, other)

    def __add__(self, other: "DivisionMatrix") -> "DivisionMatrix":
        _check_same(self, other)
        return DivisionMatrix(self._data + other._data)

    def __sub__(self, other: "DivisionMatrix") -> "DivisionMatrix":
        _check_same(self, other)
        return DivisionMatrix(self._data - other._data)

    def __mul__(self, scalar: float) -> "DivisionMatrix":
        return DivisionMatrix(self._data * float(scalar))

    __rmul__ = __mul__

    def allclose(self, other: "DivisionMatrix", atol: float = 1e-12) -> bool:
        return self._data.shape == other._data.shape and bool(
            np.allclose(self._data, other._data, rtol=0.0, atol=atol)
        )

    def norm(self) -> float:
        """Frobenius norm."""
        return float(np.sqrt(np.sum(self._data**2)))

    @classmethod
    def identity(cls, tag: "AlgebraTag | int", m: int) -> "DivisionMatrix":
        return cls(mat_identity(AlgebraTag.coerce(tag).beta, m))

    @classmethod
    def from_real(cls, a, beta: int = 1) -> "DivisionMatrix":
        a = np.asarray(a, dtype=float)
        out = np.zeros(a.shape + (beta,))
        out[..., 0] = a
        return cls(out)

    @classmethod
    def from_complex(cls, z) -> "DivisionMatrix":
        return cls(mat_from_complex(z))

    def to_complex(self) -> np.ndarray:
        return mat_to_complex(self._data)

    def to_dict(self) -> dict:
        return {
            "beta": self.beta,
            "rows": self.rows,
            "cols": self.cols,
            "entries": self._data.reshape(-1, self.beta).tolist(),
        }

    @classmethod
    def from_dict(cls, obj: Mapping[str, Any]) -> "DivisionMatrix":
        try:
            beta, rows, cols = int(obj["beta"]), int(obj["rows"]), int(obj["cols"])
            entries = np.asarray(obj["entries"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed matrix JSON: {exc}") from exc
        AlgebraTag.coerce(beta)
        if entries.shape != (rows * cols, beta):
            raise DomainError(
                f"matrix JSON declares {rows}x{cols} entries of {beta} components, "
                f"found array of shape {entries.shape}"
            )
        return cls(entries.reshape(rows, cols, beta))

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "DivisionMatrix":
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise DomainError(f"matrix JSON does not parse: {exc}") from exc
        return cls.from_dict(obj)

    def __eq__(self, other) -> bool:
        return isinstance(other, DivisionMatrix) and np.array_equal(self._data, other._data)

    def __hash__(self) -> int:
        return hash((self._data.shape, self._data.tobytes()))

    def __repr__(self) -> str:
        return f"DivisionMatrix(beta={self.beta}, shape={self.shape})"


def _check_same(a: DivisionMatrix, b: DivisionMatrix) -> None:
    if a.data.shape != b.data.shape:
        raise DomainError(f"shape mismatch: {a.data.shape} vs {b.data.shape}")


def _as_matrix(x) -> DivisionMatrix:
    if isinstance(x, DivisionMatrix):
        return x
    if isinstance(x, (HermitianPD, UpperTriangularPosDiag)):
        return x.matrix
    return DivisionMatrix(x)


class UpperTriangularPosDiag:
    """Upper-triangular matrix with real, strictly positive diagonal."""

    __slots__ = ("_m",)

    def __init__(self, matrix):
        mat = _as_matrix(matrix)
        mat.tag.require_matrices()
        d = mat.data
        m = mat.rows
        if mat.cols != m:
            raise DomainError("triangular factor must be square")
        if np.any(d[np.tril_indices(m, -1)] != 0.0):
            raise DomainError("matrix has nonzero entries below the diagonal")
        diag = d[np.arange(m), np.arange(m)]
        if np.any(np.abs(diag[:, 1:]) > DIAG_IMAG_TOL) or np.any(~(diag[:, 0] > 0)):
            raise DomainError("diagonal must be real and strictly positive")
        self._m = mat

    @property
    def matrix(self) -> DivisionMatrix:
        return self._m

    @property
    def data(self) -> np.ndarray:
        return self._m.data

    @property
    def tag(self) -> AlgebraTag:
        return self._m.tag

    @property
    def m(self) -> int:
        return self._m.rows

    def diagonal(self) -> np.ndarray:
        return self._m.data[np.arange(self.m), np.arange(self.m), 0].copy()

    def inverse(self) -> "UpperTriangularPosDiag":
        return UpperTriangularPosDiag(tri_inverse_array(self._m.data))

    def gram(self) -> "HermitianPD":
        """``T* T``."""
        return HermitianPD(gram_array(self._m.data))

    def __repr__(self) -> str:
        return f"UpperTriangularPosDiag(beta={self.tag.beta}, m={self.m})"


class HermitianPD:
    """Hermitian positive definite matrix, validated by a Cholesky attempt.

    Parameters
    ----------
    matrix : DivisionMatrix or array_like of shape (m, m, beta)
        Must equal its conjugate transpose and have a real diagonal.  The
        stored matrix is the exact Hermitian part of the input.

    Raises
    ------
    DomainError
        If the input is not square or not Hermitian.
    NotPositiveDefiniteError
        If a Cholesky pivot is not strictly positive.
    """

    __slots__ = ("_m", "_t")

    def __init__(self, matrix):
        mat = _as_matrix(matrix)
        mat.tag.require_matrices("Hermitian positive definite matrices")
        if mat.rows != mat.cols:
            raise DomainError(f"HPD matrix must be square, got {mat.shape}")
        d = mat.data
        m = mat.rows
        if np.any(np.abs(d[np.arange(m), np.arange(m), 1:]) > DIAG_IMAG_TOL):
            raise DomainError("diagonal entries of a Hermitian matrix must be real")
        scale = max(1.0, float(np.max(np.abs(d))))
        if np.max(np.abs(d - mat_ctranspose(d))) > HERMITIAN_RTOL * scale:
            raise DomainError("matrix is not Hermitian")
        h = hermitian_part(d)
        t, _ = cholesky_array(h)
        self._m = DivisionMatrix(h)
        tri = DivisionMatrix(t)
        self._t = UpperTriangularPosDiag(tri)

    @classmethod
    def identity(cls, tag: "AlgebraTag | int", m: int) -> "HermitianPD":
        return cls(DivisionMatrix.identity(tag, m))

    @classmethod
    def from_factor(cls, t) -> "HermitianPD":
        """Build ``T* T`` from an upper-triangular factor."""
        if isinstance(t, UpperTriangularPosDiag):
            t = t.data
        return cls(gram_array(np.asarray(t, dtype=float)))

    @classmethod
    def diagonal(cls, values, beta: int = 1) -> "HermitianPD":
        return cls(DivisionMatrix.from_real(np.diag(np.asarray(values, dtype=float)), beta))

    @property
    def matrix(self) -> DivisionMatrix:
        return self._m

    @property
    def data(self) -> np.ndarray:
        return self._m.data

    @property
    def tag(self) -> AlgebraTag:
        return self._m.tag

    @property
    def beta(self) -> int:
        return self._m.beta

    @property
    def m(self) -> int:
        return self._m.rows

    @property
    def factor(self) -> UpperTriangularPosDiag:
        """Upper Cholesky factor ``T`` with ``S = T* T``."""
        return self._t

    def __repr__(self) -> str:
        return f"HermitianPD(beta={self.beta}, m={self.m})"


def _as_hpd(s) -> HermitianPD:
    return s if isinstance(s, HermitianPD) else HermitianPD(s)


# ---------------------------------------------------------------------------
# public operations on typed matrices


def matmul(a: DivisionMatrix, b: DivisionMatrix) -> DivisionMatrix:
    """Product of two matrices over the same associative algebra."""
    a, b = _as_matrix(a), _as_matrix(b)
    if a.beta != b.beta:
        raise DomainError(f"algebra mismatch: beta {a.beta} vs {b.beta}")
    a.tag.require_matrices("matrix multiplication")
    if a.cols != b.rows:
        raise DomainError(f"inner dimensions disagree: {a.shape} @ {b.shape}")
    return DivisionMatrix(mat_mul(a.data, b.data))


def cholesky_upper(s: HermitianPD) -> UpperTriangularPosDiag:
    """Upper-triangular ``T`` with positive diagonal and ``S = T* T``."""
    return _as_hpd(s).factor


def reverse_cholesky(s: HermitianPD) -> UpperTriangularPosDiag:
    """Upper-triangular ``A`` with positive diagonal and ``S = A A*``."""
    a, _ = reverse_cholesky_array(_as_hpd(s).data)
    return UpperTriangularPosDiag(a)


def logdet_hpd(s: HermitianPD) -> float:
    """Log-determinant ``2 sum log t_ii`` from the Cholesky factor."""
    return float(2.0 * np.sum(np.log(_as_hpd(s).factor.diagonal())))


def inverse_hpd(s: HermitianPD) -> HermitianPD:
    """Inverse through the triangular factor, ``S^{-1} = T^{-1} T^{-*}``."""
    s = _as_hpd(s)
    u = tri_inverse_array(s.factor.data)
    return HermitianPD(mat_mul(u, mat_ctranspose(u)))


def leading_principal_logminors(s: HermitianPD) -> np.ndarray:
    """Log-determinants of the leading principal blocks, ``p = 1..m``."""
    return np.cumsum(2.0 * np.log(_as_hpd(s).factor.diagonal()))


def eigenvalues_hermitian(s: HermitianPD) -> np.ndarray:
    """Eigenvalues in descending order.

    Quaternion matrices go through the complex adjoint, whose spectrum holds
    each eigenvalue twice; the pairs are checked and merged.
    """
    return eigvalsh_array(_as_hpd(s).data)


def quaternion_complex_adjoint(a: DivisionMatrix) -> DivisionMatrix:
    """Embed an ``m x n`` quaternion matrix as a ``2m x 2n`` complex matrix."""
    a = _as_matrix(a)
    if a.beta != 4:
        raise UnsupportedAlgebraError(f"complex adjoint requires beta = 4, got {a.beta}")
    return DivisionMatrix.from_complex(quaternion_adjoint_array(a.data))


def load_matrix(path) -> DivisionMatrix:
    """Read a matrix stored in the JSON exchange format."""
    with open(path, encoding="utf-8") as fh:
        return DivisionMatrix.from_json(fh.read())
