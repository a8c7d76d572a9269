"""
Quaternionic matrices and vectors.

A quaternionic matrix ``A`` is stored through its unique split
``A = A1 + A2 j`` with complex ``A1, A2`` (entries in C_i).  The complex
adjoint

    chi(A) = [[ A1,        A2      ],
              [-conj(A2),  conj(A1)]]

is an injective real-algebra homomorphism H^{n x n} -> C^{2n x 2n}, and
all decompositions in the package go through it.

Vectors are column vectors of the right H-module H^n with inner product
``<x, y> = sum_k conj(y_k) x_k`` (right linear in ``x``).
"""

from __future__ import annotations

from numbers import Real

import numpy as np

from .errors import DimensionError, NotInImageError, SingularMatrixError
from .quat import Quaternion

EPS_SYM = 1e-10
EPS_SING = 1e-12
MAX_DIM = 64


def _hprod(a1, a2, b1, b2, op=np.matmul):
    """Product of ``a1 + a2 j`` and ``b1 + b2 j`` using ``j z = conj(z) j``."""
    return op(a1, b1) - op(a2, np.conj(b2)), op(a1, b2) + op(a2, np.conj(b1))


def _split(entries):
    e = np.asarray(entries, dtype=float)
    return e[..., 0] + 1j * e[..., 1], e[..., 2] + 1j * e[..., 3]


def _join(a, b):
    return np.stack([a.real, a.imag, b.real, b.imag], axis=-1)


class QVector:
    """Column vector in H^n, stored as ``x = a + b j``."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=None):
        a = np.array(a, dtype=complex).reshape(-1)
        b = np.zeros_like(a) if b is None else np.array(b, dtype=complex).reshape(-1)
        if a.shape != b.shape:
            raise DimensionError("complex parts must have equal length")
        self.a = a
        self.b = b

    @classmethod
    def from_entries(cls, entries):
        e = np.asarray(entries, dtype=float)
        if e.ndim != 2 or e.shape[1] != 4:
            raise DimensionError(f"vector entries must have shape (n, 4), got {e.shape}")
        return cls(*_split(e))

    @classmethod
    def from_quaternions(cls, qs):
        return cls.from_entries([Quaternion.coerce(q).to_array() for q in qs])

    @classmethod
    def zeros(cls, n):
        return cls(np.zeros(n, dtype=complex))

    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return _join(self.a, self.b)

    def __getitem__(self, k) -> Quaternion:
        return Quaternion.from_complex(self.a[k], self.b[k])

    def __len__(self):
        return self.n

    def _check(self, other):
        if not isinstance(other, QVector):
            raise TypeError("expected QVector")
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        self._check(other)
        return QVector(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        self._check(other)
        return QVector(self.a - other.a, self.b - other.b)

    def __neg__(self):
        return QVector(-self.a, -self.b)

    def __mul__(self, q):
        """Right scalar action ``x q``."""
        if isinstance(q, Real):
            return QVector(self.a * q, self.b * q)
        q = Quaternion.coerce(q)
        return QVector(*_hprod(self.a, self.b, q.c1, q.c2, op=np.multiply))

    def __rmul__(self, q):
        """Left scalar action ``q x`` (entrywise)."""
        if isinstance(q, Real):
            return QVector(self.a * q, self.b * q)
        q = Quaternion.coerce(q)
        return QVector(*_hprod(q.c1, q.c2, self.a, self.b, op=np.multiply))

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.a) ** 2 + np.abs(self.b) ** 2)))

    def allclose(self, other, tol=1e-12) -> bool:
        self._check(other)
        return (self - other).norm() <= tol

    def to_json(self) -> dict:
        return {"n": self.n, "entries": self.entries.tolist()}

    def __repr__(self):
        return f"QVector(n={self.n}, entries={self.entries.tolist()})"


class QMatrix:
    """Square quaternionic matrix ``A = a + b j`` with complex ``a, b``."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=None):
        a = np.array(a, dtype=complex)
        if a.ndim == 0:
            a = a.reshape(1, 1)
        b = np.zeros_like(a) if b is None else np.array(b, dtype=complex).reshape(a.shape)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise DimensionError(f"QMatrix must be square, got shape {a.shape}")
        if a.shape[0] > MAX_DIM:
            raise DimensionError(f"dimension {a.shape[0]} exceeds the cap {MAX_DIM}")
        self.a = a
        self.b = b

    # -- construction -----------------------------------------------------
    @classmethod
    def from_entries(cls, entries):
        e = np.asarray(entries, dtype=float)
        if e.ndim != 3 or e.shape[2] != 4:
            raise DimensionError(f"matrix entries must have shape (n, n, 4), got {e.shape}")
        return cls(*_split(e))

    @classmethod
    def from_quaternions(cls, rows):
        return cls.from_entries([[Quaternion.coerce(q).to_array() for q in row] for row in rows])

    @classmethod
    def identity(cls, n):
        return cls(np.eye(n, dtype=complex))

    @classmethod
    def zeros(cls, n):
        return cls(np.zeros((n, n), dtype=complex))

    @classmethod
    def scalar(cls, q, n):
        """The scalar matrix ``q I``."""
        q = Quaternion.coerce(q)
        eye = np.eye(n)
        return cls(q.c1 * eye, q.c2 * eye)

    @classmethod
    def diag(cls, qs):
        qs = [Quaternion.coerce(q) for q in qs]
        return cls(np.diag([q.c1 for q in qs]), np.diag([q.c2 for q in qs]))

    @classmethod
    def random(cls, n, rng):
        """Four independent standard Gaussian components per entry."""
        return cls.from_entries(rng.standard_normal((n, n, 4)))

    # -- views ------------------------------------------------------------
    @property
    def n(self) -> int:
        return self.a.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return _join(self.a, self.b)

    def __getitem__(self, idx) -> Quaternion:
        r, c = idx
        return Quaternion.from_complex(self.a[r, c], self.b[r, c])

    def column(self, k) -> QVector:
        return QVector(self.a[:, k], self.b[:, k])

    @classmethod
    def from_columns(cls, cols):
        return cls(np.stack([c.a for c in cols], axis=1), np.stack([c.b for c in cols], axis=1))

    # -- algebra ----------------------------------------------------------
    def _check(self, other):
        if other.n != self.n:
            raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        self._check(other)
        return QMatrix(self.a + other.a, self.b + other.b)

    def __sub__(self, other):
        if not isinstance(other, QMatrix):
            return NotImplemented
        self._check(other)
        return QMatrix(self.a - other.a, self.b - other.b)

    def __neg__(self):
        return QMatrix(-self.a, -self.b)

    def __matmul__(self, other):
        if isinstance(other, QMatrix):
            self._check(other)
            return QMatrix(*_hprod(self.a, self.b, other.a, other.b))
        if isinstance(other, QVector):
            if other.n != self.n:
                raise DimensionError(f"dimension mismatch: {self.n} vs {other.n}")
            return QVector(*_hprod(self.a, self.b, other.a, other.b))
        return NotImplemented

    def __mul__(self, q):
        """Entrywise right multiplication ``A q`` (equal to ``A (q I)``)."""
        if isinstance(q, Real):
            return QMatrix(self.a * q, self.b * q)
        q = Quaternion.coerce(q)
        return QMatrix(*_hprod(self.a, self.b, q.c1, q.c2, op=np.multiply))

    def __rmul__(self, q):
        """Entrywise left multiplication ``q A``."""
        if isinstance(q, Real):
            return QMatrix(self.a * q, self.b * q)
        q = Quaternion.coerce(q)
        return QMatrix(*_hprod(q.c1, q.c2, self.a, self.b, op=np.multiply))

    def adjoint(self) -> "QMatrix":
        return adjoint(self)

    @property
    def H(self) -> "QMatrix":
        return adjoint(self)

    def frobenius(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.a) ** 2 + np.abs(self.b) ** 2)))

    def opnorm(self) -> float:
        """Operator 2-norm (equal to the spectral norm of ``chi(A)``)."""
        return float(np.linalg.norm(chi(self), 2))

    def allclose(self, other, tol=1e-12) -> bool:
        return (self - other).frobenius() <= tol

    def is_complex(self, tol=0.0) -> bool:
        """True when every entry lies in C_i (no j, k parts)."""
        return bool(np.max(np.abs(self.b), initial=0.0) <= tol)

    def to_json(self) -> dict:
        return {"n": self.n, "entries": self.entries.tolist()}

    def __repr__(self):
        return f"QMatrix(n={self.n}, entries={np.round(self.entries, 6).tolist()})"


def chi(A: QMatrix) -> np.ndarray:
    """Complex adjoint ``[[A1, A2], [-conj A2, conj A1]]``."""
    return np.block([[A.a, A.b], [-np.conj(A.b), np.conj(A.a)]])


def chi_residual(M) -> float:
    """Relative Frobenius distance of ``M`` from the image of chi."""
    M = np.asarray(M)
    n = M.shape[0] // 2
    p1, p2 = M[:n, :n], M[:n, n:]
    r = np.sqrt(
        np.linalg.norm(M[n:, :n] + np.conj(p2)) ** 2 + np.linalg.norm(M[n:, n:] - np.conj(p1)) ** 2
    )
    return float(r / max(1.0, np.linalg.norm(M)))


def chi_inv(M, eps_sym: float = EPS_SYM) -> QMatrix:
    """Inverse of :func:`chi`; reads the top block row after a symmetry check."""
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] % 2:
        raise DimensionError(f"expected a 2n x 2n matrix, got {M.shape}")
    res = chi_residual(M)
    if res > eps_sym:
        raise NotInImageError(res, eps_sym)
    n = M.shape[0] // 2
    return QMatrix(M[:n, :n].copy(), M[:n, n:].copy())


def vec_chi(x: QVector) -> np.ndarray:
    """Stack ``(x1; -conj x2)`` so that ``vec_chi(A x) = chi(A) vec_chi(x)``."""
    return np.concatenate([x.a, -np.conj(x.b)])


def vec_chi_inv(v) -> QVector:
    v = np.asarray(v, dtype=complex)
    n = v.shape[0] // 2
    return QVector(v[:n].copy(), -np.conj(v[n:]))


def inner(x: QVector, y: QVector) -> Quaternion:
    """``<x, y> = sum_k conj(y_k) x_k``."""
    if x.n != y.n:
        raise DimensionError(f"dimension mismatch: {x.n} vs {y.n}")
    c1 = np.sum(np.conj(y.a) * x.a + y.b * np.conj(x.b))
    c2 = np.sum(np.conj(y.a) * x.b - y.b * np.conj(x.a))
    return Quaternion.from_complex(c1, c2)


def adjoint(A: QMatrix) -> QMatrix:
    """Quaternionic conjugate transpose."""
    return QMatrix(A.a.conj().T, -A.b.T)


def invert(A: QMatrix, eps_sing: float = EPS_SING) -> QMatrix:
    M = chi(A)
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[-1] <= eps_sing * max(A.frobenius(), np.finfo(float).tiny):
        cond = np.inf if sv[-1] == 0 else sv[0] / sv[-1]
        raise SingularMatrixError(cond)
    return chi_inv(np.linalg.inv(M), eps_sym=max(EPS_SYM, 1e-14 * sv[0] / sv[-1]))


def is_unitary(U: QMatrix, tol: float = 1e-10) -> bool:
    return (adjoint(U) @ U - QMatrix.identity(U.n)).frobenius() <= tol
