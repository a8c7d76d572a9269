"""
Spectral decomposition of quaternionic unitary matrices and the atomic
quaternion-valued measures attached to it.

``chi(U)`` is a normal (indeed unitary) complex matrix, so a complex Schur
form diagonalizes it with orthonormal Schur vectors.  Grouping its
eigen-angles gives orthogonal eigenprojectors ``P_k`` with

    chi(U) = sum_k exp(i t_k) P_k,

and the quaternion-valued measure of a pair ``(x, y)`` has one atom per
distinct angle, with weight

    w_k = <P_k xi(x), xi(y)> - <P_k xi(x j), xi(y)> j,

where ``xi = vec_chi``.  These atoms reproduce every moment:
``<U^n x, y> = sum_k exp(i n t_k) w_k`` for all integers ``n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
import scipy.linalg
from scipy.spatial.transform import Rotation

from .errors import EigensolverError, NotHermitianError, NotUnitaryError, SelectionError
from .qmatrix import QMatrix, QVector, adjoint, chi, chi_inv, inner, is_unitary, vec_chi
from .quat import (
    ONE,
    QI,
    QJ,
    QK,
    UNIT_I,
    UNIT_J,
    EigenSphere,
    Quaternion,
    UnitImaginary,
    exp_unit,
)

EPS_CLUSTER = 1e-8
EPS_PSD = 1e-10
TWO_PI = 2.0 * math.pi


def _circ_dist(a, b):
    d = np.abs(np.mod(np.asarray(a) - np.asarray(b), TWO_PI))
    return np.minimum(d, TWO_PI - d)


def _wrap(t: float, tol: float) -> float:
    t = float(np.mod(t, TWO_PI))
    return 0.0 if TWO_PI - t <= tol else t


def frame_rotation(I: UnitImaginary, J: UnitImaginary) -> Quaternion:
    """Unit quaternion ``r`` with ``r i r^-1 = I`` and ``r j r^-1 = J``."""
    a, b = I.vector, J.vector
    if abs(a @ b) > 1e-9:
        raise ValueError("the units I and J must be orthogonal")
    R = np.column_stack([a, b, np.cross(a, b)])
    x, y, z, w = Rotation.from_matrix(R).as_quat()
    return Quaternion(w, x, y, z)


def _conj_vector(r: Quaternion, x: QVector) -> QVector:
    """Entrywise ``r x r^-1`` for a unit quaternion ``r``."""
    return (r * x) * r.conj()


def _conj_matrix(r: Quaternion, A: QMatrix) -> QMatrix:
    return (r * A) * r.conj()


@dataclass(frozen=True, eq=False)
class SpectralDecomposition:
    """Eigen-angles and eigenprojectors of ``chi(U)``.

    ``angles`` are the distinct angles in ``[0, 2 pi)``, ascending, with
    ``multiplicities`` counting eigenvalues of ``chi(U)``; ``projectors``
    has shape ``(K, 2n, 2n)``.  ``mirror[k]`` is the index of the angle
    ``2 pi - angles[k]``.  When a frame ``(I, J)`` other than ``(i, j)`` is
    requested, everything is computed for ``r^-1 U r`` and mapped back
    through ``q -> r q r^-1``.
    """

    U: QMatrix
    angles: np.ndarray
    multiplicities: np.ndarray
    projectors: np.ndarray
    mirror: np.ndarray
    plane: tuple = (UNIT_I, UNIT_J)
    frame: Quaternion = ONE
    eps_cluster: float = EPS_CLUSTER

    @property
    def n(self) -> int:
        return self.U.n

    @property
    def units(self) -> tuple:
        """The images of ``i, j, k`` in the working frame."""
        r = self.frame
        return tuple(r * u * r.conj() for u in (QI, QJ, QK))

    def reconstruct(self) -> np.ndarray:
        """``sum_k exp(i t_k) P_k`` (equals ``chi`` of the frame-rotated ``U``)."""
        return np.einsum("k,kij->ij", np.exp(1j * self.angles), self.projectors)

    def working_matrix(self) -> QMatrix:
        return _conj_matrix(self.frame.conj(), self.U)

    def to_json(self) -> dict:
        return {"angles": self.angles.tolist(), "multiplicities": self.multiplicities.tolist()}

    def sphere_indices(self, sphere: EigenSphere, tol: float | None = None) -> list[int]:
        """Indices of the angles where the unit circle meets ``sphere``."""
        tol = 1e-6 if tol is None else tol
        theta = math.atan2(sphere.v, sphere.u)
        d = np.minimum(_circ_dist(self.angles, theta), _circ_dist(self.angles, -theta))
        return [int(k) for k in np.flatnonzero(d <= tol)]


def decompose(
    U: QMatrix,
    eps_cluster: float = EPS_CLUSTER,
    plane: tuple | None = None,
    unitary_tol: float = 1e-10,
) -> SpectralDecomposition:
    if not is_unitary(U, unitary_tol):
        raise NotUnitaryError(f"U is not unitary to {unitary_tol:g}")
    if plane is None:
        plane, r = (UNIT_I, UNIT_J), ONE
    else:
        r = frame_rotation(*plane)
    W = _conj_matrix(r.conj(), U)
    M = chi(W)
    try:
        T, Z = scipy.linalg.schur(M, output="complex")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigensolverError(f"Schur decomposition failed: {exc}") from exc
    raw = np.mod(np.angle(np.diag(T)), TWO_PI)
    order = np.argsort(raw)
    groups: list[list[int]] = []
    for idx in order:
        if groups and _circ_dist(raw[idx], raw[groups[-1][-1]]) <= eps_cluster:
            groups[-1].append(int(idx))
        else:
            groups.append([int(idx)])
    # wrap-around: last group may join the first across 2 pi
    if len(groups) > 1 and _circ_dist(raw[groups[-1][-1]], raw[groups[0][0]]) <= eps_cluster:
        groups[0] = groups.pop() + groups[0]
    angles, mults, projs = [], [], []
    for g in groups:
        mean = np.angle(np.mean(np.exp(1j * raw[g])))
        angles.append(_wrap(mean, eps_cluster))
        mults.append(len(g))
        Zg = Z[:, g]
        projs.append(Zg @ Zg.conj().T)
    order = np.argsort(angles)
    angles = np.array(angles)[order]
    mults = np.array(mults)[order]
    projs = np.array(projs)[order]
    mirror = np.array(
        [int(np.argmin(_circ_dist(angles, TWO_PI - t))) for t in angles], dtype=int
    )
    return SpectralDecomposition(U, angles, mults, projs, mirror, tuple(plane), r, eps_cluster)


@dataclass(frozen=True, eq=False)
class AtomicQMeasure:
    """Finitely many atoms ``(t_k, w_k)`` with quaternion weights.

    ``weights`` has shape ``(K, 4)``.  ``frame`` is the rotation ``r`` of the
    working units ``(I, J) = (r i r^-1, r j r^-1)``; moments use
    ``exp(I n t)`` and :meth:`split` returns ``w = w1 + w2 J`` with
    ``w1, w2`` in C_I (read as complex numbers).
    """

    angles: np.ndarray
    weights: np.ndarray
    frame: Quaternion = ONE

    def __len__(self):
        return len(self.angles)

    @property
    def unit(self) -> UnitImaginary:
        q = self.frame * QI * self.frame.conj()
        return UnitImaginary.normalized([q.x, q.y, q.z])

    def weight(self, k: int) -> Quaternion:
        return Quaternion.from_array(self.weights[k])

    def atoms(self):
        return [(float(t), self.weight(k)) for k, t in enumerate(self.angles)]

    def moment(self, n: int) -> Quaternion:
        I = self.unit
        acc = Quaternion()
        for k, t in enumerate(self.angles):
            acc = acc + exp_unit(I, n * t) * self.weight(k)
        return acc

    def total(self) -> Quaternion:
        return Quaternion.from_array(self.weights.sum(axis=0)) if len(self) else Quaternion()

    def mass(self, selection: Sequence[int]) -> Quaternion:
        sel = list(selection)
        for k in sel:
            if not 0 <= k < len(self):
                raise SelectionError(f"atom index {k} out of range")
        return Quaternion.from_array(self.weights[sel].sum(axis=0)) if sel else Quaternion()

    def split(self):
        """Complex arrays ``(w1, w2)`` with ``w = w1 + w2 J``."""
        r = self.frame
        rc = r.conj()
        c1, c2 = [], []
        for k in range(len(self)):
            q = rc * self.weight(k) * r
            c1.append(q.c1)
            c2.append(q.c2)
        return np.array(c1, dtype=complex), np.array(c2, dtype=complex)

    def _map(self, fn) -> "AtomicQMeasure":
        w = np.array([fn(self.weight(k)).to_array() for k in range(len(self))]).reshape(-1, 4)
        return AtomicQMeasure(self.angles, w, self.frame)

    def _same_support(self, other):
        if len(self) != len(other) or not np.allclose(self.angles, other.angles, atol=1e-12):
            raise ValueError("measures have different atoms")

    def __add__(self, other):
        self._same_support(other)
        return AtomicQMeasure(self.angles, self.weights + other.weights, self.frame)

    def __sub__(self, other):
        self._same_support(other)
        return AtomicQMeasure(self.angles, self.weights - other.weights, self.frame)

    def __mul__(self, q):
        """Right multiplication of every weight by ``q``."""
        q = Quaternion.coerce(q)
        return self._map(lambda w: w * q)

    def __rmul__(self, q):
        q = Quaternion.coerce(q)
        return self._map(lambda w: q * w)

    def max_abs_diff(self, other) -> float:
        self._same_support(other)
        return float(np.max(np.linalg.norm(self.weights - other.weights, axis=1), initial=0.0))

    def to_json(self) -> dict:
        return {"atoms": [{"t": float(t), "w": self.weights[k].tolist()} for k, t in enumerate(self.angles)]}


def _check_dims(D: SpectralDecomposition, *vs: QVector):
    for v in vs:
        if v.n != D.n:
            from .errors import DimensionError

            raise DimensionError(f"vector dimension {v.n} does not match U ({D.n})")


def pair_measure(D: SpectralDecomposition, x: QVector, y: QVector) -> AtomicQMeasure:
    _check_dims(D, x, y)
    rc = D.frame.conj()
    xw, yw = _conj_vector(rc, x), _conj_vector(rc, y)
    xi_x, xi_xj, xi_y = vec_chi(xw), vec_chi(xw * QJ), vec_chi(yw)
    c1 = np.einsum("i,kij,j->k", xi_y.conj(), D.projectors, xi_x)
    c2 = -np.einsum("i,kij,j->k", xi_y.conj(), D.projectors, xi_xj)
    r = D.frame
    w = np.array(
        [(r * Quaternion.from_complex(a, b) * r.conj()).to_array() for a, b in zip(c1, c2)]
    ).reshape(-1, 4)
    return AtomicQMeasure(D.angles.copy(), w, r)


def diag_measure(D: SpectralDecomposition, x: QVector) -> AtomicQMeasure:
    return pair_measure(D, x, x)


def polarize(D: SpectralDecomposition, x: QVector, y: QVector) -> AtomicQMeasure:
    """Pair measure assembled from eight diagonal measures.

    4 nu_{x,y} = nu_{x+y} - nu_{x-y} + i nu_{x+yi} - i nu_{x-yi}
                 + i nu_{x-yj} k - i nu_{x+yj} k + nu_{x+yk} k - nu_{x-yk} k
    """
    _check_dims(D, x, y)
    i, j, k = D.units
    nu = lambda z: diag_measure(D, z)  # noqa: E731
    acc = (
        nu(x + y)
        - nu(x - y)
        + i * nu(x + y * i)
        - i * nu(x - y * i)
        + (i * nu(x - y * j)) * k
        - (i * nu(x + y * j)) * k
        + nu(x + y * k) * k
        - nu(x - y * k) * k
    )
    return AtomicQMeasure(acc.angles, acc.weights / 4.0, acc.frame)


def herglotz_sequence(U: QMatrix, x: QVector, N: int, tol: float = 1e-10) -> list[Quaternion]:
    """``r(n) = <U^n x, x>`` for ``n = -N..N``."""
    if not is_unitary(U, tol):
        raise NotUnitaryError("herglotz_sequence requires a unitary matrix")
    Ustar = adjoint(U)
    pos, neg = [x], [x]
    for _ in range(N):
        pos.append(U @ pos[-1])
        neg.append(Ustar @ neg[-1])
    return [inner(v, x) for v in reversed(neg[1:])] + [inner(v, x) for v in pos]


def toeplitz_matrix(r: Sequence, N: int | None = None) -> QMatrix:
    """Quaternionic Toeplitz matrix ``T[m, n] = r(n - m)``, ``m, n = 0..N``.

    ``r`` lists ``r(-M), ..., r(M)``; ``N`` defaults to ``M``.
    """
    r = [Quaternion.coerce(q) for q in r]
    if len(r) % 2 != 1:
        raise ValueError("sequence must have odd length (indices -M..M)")
    M = len(r) // 2
    N = M if N is None else N
    if N > M:
        raise ValueError(f"N = {N} exceeds the available lags {M}")
    return QMatrix.from_quaternions([[r[M + (n - m)] for n in range(N + 1)] for m in range(N + 1)])


def positive_definite_check(r: Sequence, N: int | None = None, tol: float = 1e-12) -> float:
    """Smallest eigenvalue of ``chi`` of the Toeplitz matrix of ``r``."""
    qs = [Quaternion.coerce(q) for q in r]
    M = len(qs) // 2
    scale = max([abs(q) for q in qs], default=1.0)
    for n in range(1, M + 1):
        if abs(qs[M - n] - qs[M + n].conj()) > tol * max(1.0, scale):
            raise NotHermitianError(f"r(-{n}) != conj(r({n}))")
    if abs(qs[M].x) + abs(qs[M].y) + abs(qs[M].z) > tol * max(1.0, scale):
        raise NotHermitianError("r(0) is not real")
    T = chi(toeplitz_matrix(qs, N))
    return float(np.linalg.eigvalsh(0.5 * (T + T.conj().T))[0])


@dataclass(frozen=True)
class QPositivityReport:
    """Outcome of the q-positivity test.

    ``paired_blocks`` holds ``((t, 2pi - t), block, min_eigenvalue)`` for
    every atom ``t``.
    """

    paired_blocks: list
    antisymmetry_residual: float
    hermitian_residual: float = 0.0
    verdict: bool = field(default=False)

    @property
    def min_eigenvalue(self) -> float:
        return min((b[2] for b in self.paired_blocks), default=0.0)


def q_positivity(
    nu: AtomicQMeasure, eps_cluster: float = EPS_CLUSTER, eps_psd: float = EPS_PSD
) -> QPositivityReport:
    w1, w2 = nu.split()
    t = nu.angles
    K = len(t)

    def partner(k):
        if K == 0:
            return None
        d = _circ_dist(t, TWO_PI - t[k])
        m = int(np.argmin(d))
        return m if d[m] <= eps_cluster else None

    blocks, anti, herm = [], 0.0, 0.0
    for k in range(K):
        m = partner(k)
        nu3 = w1[m] if m is not None else 0.0
        mirror_nu2 = w2[m] if m is not None else 0.0
        B = np.array([[w1[k], w2[k]], [np.conj(w2[k]), nu3]], dtype=complex)
        herm = max(herm, float(np.linalg.norm(B - B.conj().T)))
        lam = float(np.linalg.eigvalsh(0.5 * (B + B.conj().T))[0])
        blocks.append(((float(t[k]), float(_wrap(TWO_PI - t[k], eps_cluster))), B, lam))
        anti = max(anti, float(abs(w2[k] + mirror_nu2)))
    verdict = all(b[2] >= -eps_psd for b in blocks) and anti <= eps_psd and herm <= eps_psd
    return QPositivityReport(blocks, anti, herm, verdict)


def _check_selection(D: SpectralDecomposition, sigma) -> list[int]:
    sel = sorted(set(int(k) for k in sigma))
    for k in sel:
        if not 0 <= k < len(D.angles):
            raise SelectionError(f"angle index {k} out of range 0..{len(D.angles) - 1}")
    return sel


def spectral_pairing(D: SpectralDecomposition, sigma, x: QVector, y: QVector) -> Quaternion:
    """``<E(sigma) x, y>`` as the sum of the selected atoms."""
    sel = _check_selection(D, sigma)
    return pair_measure(D, x, y).mass(sel)


def distribution_pairing(D: SpectralDecomposition, t: float, x: QVector, y: QVector) -> Quaternion:
    """``<E(t) x, y>``: the pairing over atoms with angle in ``[0, t]``."""
    sel = [k for k, a in enumerate(D.angles) if a <= t + D.eps_cluster]
    return pair_measure(D, x, y).mass(sel)


def sphere_projector_from_E(D: SpectralDecomposition, sigma) -> QMatrix:
    """``sum_{k in sigma} P_k`` pulled back to a quaternionic matrix.

    Only selections closed under ``t -> 2 pi - t`` give H-linear operators.
    """
    sel = _check_selection(D, sigma)
    if any(int(D.mirror[k]) not in sel for k in sel):
        raise SelectionError("selection not axially symmetric (not closed under t -> 2pi - t)")
    M = D.projectors[sel].sum(axis=0) if sel else np.zeros((2 * D.n, 2 * D.n), complex)
    return _conj_matrix(D.frame, chi_inv(M))


def complex_preserving_check(U: QMatrix, tol: float = 1e-12, unitary_tol: float = 1e-10) -> bool:
    """True iff ``U`` maps the complex subspace ``C_i^n`` into itself."""
    if not is_unitary(U, unitary_tol):
        raise NotUnitaryError("complex_preserving_check requires a unitary matrix")
    return U.is_complex(tol)


def nu2_magnitude(D: SpectralDecomposition, x: QVector) -> float:
    """Largest ``|nu_2|`` over the atoms of the diagonal measure of ``x``."""
    _, w2 = diag_measure(D, x).split()
    return float(np.max(np.abs(w2), initial=0.0))
