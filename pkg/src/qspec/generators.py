"""
Seeded random instances: quaternions, vectors, unitary and diagonalizable
matrices.  Every generator is deterministic given its seed.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError
from .qmatrix import QMatrix, QVector, chi, inner, invert
from .quat import Quaternion

MAX_DIM = 64


def _check_n(n: int):
    if not 1 <= n <= MAX_DIM:
        raise DimensionError(f"dimension must be in 1..{MAX_DIM}, got {n}")


def random_vector(n: int, rng: np.random.Generator) -> QVector:
    return QVector.from_entries(rng.standard_normal((n, 4)))


def random_unit_vector(n: int, rng: np.random.Generator) -> QVector:
    x = random_vector(n, rng)
    return x * (1.0 / x.norm())


def gram_schmidt(cols: list[QVector]) -> list[QVector]:
    """Orthonormalize under ``<x, y> = sum conj(y_k) x_k``.

    The projection of ``v`` on a unit ``u`` is ``u <v, u>`` (scalar on the
    right, as the module is a right H-module).  Two passes keep the result
    orthonormal to machine precision.
    """
    out: list[QVector] = []
    for v in cols:
        for _ in range(2):
            for u in out:
                v = v - u * inner(v, u)
        nv = v.norm()
        if nv < 1e-10:
            raise np.linalg.LinAlgError("columns are linearly dependent")
        out.append(v * (1.0 / nv))
    return out


def random_unitary(n: int, seed: int) -> QMatrix:
    """Gram-Schmidt of a seeded Gaussian quaternion matrix."""
    _check_n(n)
    rng = np.random.default_rng(seed)
    A = QMatrix.random(n, rng)
    return QMatrix.from_columns(gram_schmidt([A.column(k) for k in range(n)]))


def random_complex_unitary(n: int, seed: int) -> QMatrix:
    """A unitary with entries in C_i (maps C_i^n into itself)."""
    _check_n(n)
    rng = np.random.default_rng(seed)
    Z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    Q, R = np.linalg.qr(Z)
    Q = Q * (np.diag(R) / np.abs(np.diag(R)))
    return QMatrix(Q, np.zeros((n, n), complex))


def random_diagonalizable(n: int, seed: int, cond_max: float = 1e3) -> QMatrix:
    """``S D S^-1`` with a random quaternionic ``S`` and diagonal ``D``.

    ``D`` carries complex entries ``u + v i`` with ``(u, v)`` drawn from a
    box; draws whose ``S`` is worse conditioned than ``cond_max`` are
    replaced.
    """
    _check_n(n)
    rng = np.random.default_rng(seed)
    while True:
        S = QMatrix.random(n, rng)
        if np.linalg.cond(chi(S)) <= cond_max:
            break
    lam = rng.uniform(-2.0, 2.0, n) + 1j * rng.uniform(0.0, 2.0, n)
    D = QMatrix.diag([Quaternion.from_complex(z) for z in lam])
    return S @ D @ invert(S)


def random_quaternion_seeded(seed: int) -> Quaternion:
    return Quaternion.from_array(np.random.default_rng(seed).standard_normal(4))
