"""
Contour quadrature over ``d(Omega ∩ C_I)`` for axially symmetric domains.

A contour is a conjugation-symmetric set of counterclockwise circles in
the slice C_I.  On a circle ``s = c + r e^{I phi}`` the measure
``ds_I = -ds I`` equals ``r e^{I phi} dphi``; the composite trapezoid
rule with ``N`` equispaced nodes then gives the weights
``r e^{I phi_m} / N`` for ``(1 / 2 pi) ∮ ... ds_I``.  The trapezoid rule
converges geometrically for integrands analytic in an annulus around the
circle, so no adaptivity is used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ContourError, GeometryError, SelectionError
from .qmatrix import QMatrix, chi, chi_inv
from .quat import UNIT_I, Quaternion, UnitImaginary, inverse, slice_embedding, sphere_of
from .sspectrum import EPS_SPEC, SSpectrum, characteristic_chi, s_spectrum, cauchy_kernel_left

DEFAULT_NODES = 256
MIN_NODES = 16
EPS_Q = 1e-7
R_MAX = 0.25
MIN_GAP = 1e-3


@dataclass(frozen=True)
class ContourSpec:
    """Counterclockwise circles ``(center, radius)`` in C_I.

    Centers are complex numbers ``a + b i`` standing for ``a + b I``.
    """

    plane: UnitImaginary
    loops: tuple
    nodes_per_loop: int = DEFAULT_NODES

    def __post_init__(self):
        loops = tuple((complex(c), float(r)) for c, r in self.loops)
        object.__setattr__(self, "loops", loops)
        if self.nodes_per_loop < MIN_NODES:
            raise ValueError(f"nodes_per_loop must be at least {MIN_NODES}")
        for c, r in loops:
            if not r > 0:
                raise ValueError(f"loop radius must be positive, got {r}")
        scale = max([abs(c) + r for c, r in loops], default=1.0)
        for c, r in loops:
            if abs(c.imag) <= 1e-14 * scale:
                continue
            if not any(abs(c2 - c.conjugate()) <= 1e-12 * scale and abs(r2 - r) <= 1e-12 * scale for c2, r2 in loops):
                raise ValueError(f"loop set is not conjugation symmetric: no mirror of center {c}")
        for a in range(len(loops)):
            for b in range(a + 1, len(loops)):
                (c1, r1), (c2, r2) = loops[a], loops[b]
                if abs(c1 - c2) <= r1 + r2:
                    raise ValueError(f"loops {a} and {b} intersect")

    def nodes(self):
        """Complex nodes ``z_m`` and weights ``w_m`` (already divided by 2 pi)."""
        n = self.nodes_per_loop
        e = np.exp(2j * np.pi * np.arange(n) / n)
        z = np.concatenate([c + r * e for c, r in self.loops]) if self.loops else np.zeros(0, complex)
        w = np.concatenate([r * e / n for _, r in self.loops]) if self.loops else np.zeros(0, complex)
        return z, w

    def winding(self, z: complex) -> int:
        """Number of loops enclosing the complex point ``z``."""
        return sum(1 for c, r in self.loops if abs(z - c) < r)

    def margin(self, z: complex) -> float:
        """Distance from ``z`` to the nearest loop."""
        return min((abs(abs(z - c) - r) for c, r in self.loops), default=math.inf)

    def with_plane(self, plane: UnitImaginary) -> "ContourSpec":
        return ContourSpec(plane, self.loops, self.nodes_per_loop)

    def with_nodes(self, nodes: int) -> "ContourSpec":
        return ContourSpec(self.plane, self.loops, nodes)


def _embed(plane: UnitImaginary, z: np.ndarray):
    """Complex parts ``(c1, c2)`` of ``Re z + Im z I`` for an array ``z``."""
    return z.real + 1j * plane.x * z.imag, z.imag * (plane.y + 1j * plane.z)


def _scalar_block(c1, c2, n):
    """Batched ``chi(q I_n)`` for scalars ``q = c1 + c2 j``."""
    c1 = np.asarray(c1)[..., None, None]
    c2 = np.asarray(c2)[..., None, None]
    eye = np.eye(n)
    top = np.concatenate([c1 * eye, c2 * eye], axis=-1)
    bot = np.concatenate([-np.conj(c2) * eye, np.conj(c1) * eye], axis=-1)
    return np.concatenate([top, bot], axis=-2)


def _hmul(a1, a2, b1, b2):
    return a1 * b1 - a2 * np.conj(b2), a1 * b2 + a2 * np.conj(b1)


def _guard_nodes(c: ContourSpec, spectrum: SSpectrum, eps_spec: float, z: np.ndarray):
    for zm in z:
        sq = sphere_of(slice_embedding(c.plane, zm), 0.0)
        for sp in spectrum:
            if sp.distance(sq.u, sq.v) <= eps_spec:
                raise ContourError(
                    f"contour node {zm:.6g} touches spectral sphere (u={sp.u:.6g}, v={sp.v:.6g})",
                    node=complex(zm),
                )


def _resolvent_stack(c: ContourSpec, A: QMatrix, spectrum, eps_spec, side: str):
    spectrum = s_spectrum(A) if spectrum is None else spectrum
    z, w = c.nodes()
    _guard_nodes(c, spectrum, eps_spec, z)
    M = chi(A)
    n = A.n
    s1, s2 = _embed(c.plane, z)
    Q = characteristic_chi(M, z.real, np.abs(z) ** 2)
    # chi(A - conj(s) I); conj(s1 + s2 j) = conj(s1) - s2 j
    R = M[None] - _scalar_block(np.conj(s1), -s2, n)
    if side == "left":
        S = -np.linalg.solve(Q, R)
    else:
        S = -np.swapaxes(np.linalg.solve(np.swapaxes(Q, -1, -2), np.swapaxes(R, -1, -2)), -1, -2)
    return z, w, S


def _f_values(c: ContourSpec, z, f):
    if f is None:
        return np.ones_like(z), np.zeros_like(z)
    vals = [Quaternion.coerce(f(slice_embedding(c.plane, zm))) for zm in z]
    return np.array([q.c1 for q in vals]), np.array([q.c2 for q in vals])


def integrate_left(
    c: ContourSpec,
    A: QMatrix,
    f: Callable | None = None,
    spectrum: SSpectrum | None = None,
    eps_spec: float = EPS_SPEC,
) -> QMatrix:
    """``(1/2pi) ∮ S_L^{-1}(s, A) ds_I f(s)`` (``f = 1`` when omitted)."""
    z, w, S = _resolvent_stack(c, A, spectrum, eps_spec, "left")
    w1, w2 = _embed(c.plane, w)
    f1, f2 = _f_values(c, z, f)
    g1, g2 = _hmul(w1, w2, f1, f2)
    total = np.einsum("kij,kjl->il", S, _scalar_block(g1, g2, A.n))
    return chi_inv(total, eps_sym=1e-8)


def integrate_right(
    c: ContourSpec,
    A: QMatrix,
    f: Callable | None = None,
    spectrum: SSpectrum | None = None,
    eps_spec: float = EPS_SPEC,
) -> QMatrix:
    """``(1/2pi) ∮ f(s) ds_I S_R^{-1}(s, A)``."""
    z, w, S = _resolvent_stack(c, A, spectrum, eps_spec, "right")
    w1, w2 = _embed(c.plane, w)
    f1, f2 = _f_values(c, z, f)
    g1, g2 = _hmul(f1, f2, w1, w2)
    total = np.einsum("kij,kjl->il", _scalar_block(g1, g2, A.n), S)
    return chi_inv(total, eps_sym=1e-8)


def sphere_contour(
    spectrum: SSpectrum,
    k: int,
    plane: UnitImaginary = UNIT_I,
    nodes: int = DEFAULT_NODES,
    r_max: float = R_MAX,
    min_gap: float = MIN_GAP,
) -> ContourSpec:
    """Loops isolating sphere ``k`` from the rest of the spectrum.

    With ``r = min(r_max, gap / 2)``: two mirrored circles about
    ``u +- v I`` of radius ``r`` when ``v > r``, of radius ``2v/3`` when
    ``r/2 < v <= r``, and otherwise one real-centered circle of radius
    ``r``.  Every singularity then sits at least a factor 1.5 away from
    each circle, radially, which keeps the trapezoid error geometric.
    """
    sp = spectrum[k]
    gap, nearest = math.inf, None
    for i, o in enumerate(spectrum):
        if i != k:
            d = o.distance(sp.u, sp.v)
            if d < gap:
                gap, nearest = d, o
    if gap < min_gap:
        raise GeometryError(
            f"spheres (u={sp.u:.6g}, v={sp.v:.6g}) and (u={nearest.u:.6g}, v={nearest.v:.6g}) "
            f"are {gap:.3e} apart; cannot isolate them with a contour",
            spheres=(sp, nearest),
        )
    r = min(r_max, gap / 2.0)
    if sp.v > r:
        loops = ((complex(sp.u, sp.v), r), (complex(sp.u, -sp.v), r))
    elif sp.v > r / 2.0:
        rho = 2.0 * sp.v / 3.0
        loops = ((complex(sp.u, sp.v), rho), (complex(sp.u, -sp.v), rho))
    else:
        loops = ((complex(sp.u, 0.0), r),)
    return ContourSpec(plane, loops, nodes)


def enclosing_contour(
    spectrum: SSpectrum, plane: UnitImaginary = UNIT_I, nodes: int = DEFAULT_NODES, margin: float = 0.5
) -> ContourSpec:
    """One real-centered circle enclosing the whole spectrum with ``margin`` to spare."""
    if len(spectrum) == 0:
        return ContourSpec(plane, ((0j, margin),), nodes)
    us = [sp.u for sp in spectrum]
    center = 0.5 * (min(us) + max(us))
    radius = max(math.hypot(sp.u - center, sp.v) for sp in spectrum) + margin
    return ContourSpec(plane, ((complex(center, 0.0), radius),), nodes)


def riesz_projector(
    A: QMatrix,
    selection: Sequence[int],
    nodes: int = DEFAULT_NODES,
    plane: UnitImaginary = UNIT_I,
    spectrum: SSpectrum | None = None,
    side: str = "left",
) -> QMatrix:
    """Riesz projector of the spheres indexed by ``selection``.

    Each selected sphere gets its own contour from :func:`sphere_contour`;
    the integrals are added, which is additivity over disjoint spectral
    sets.  ``side="right"`` integrates ``ds_I S_R^{-1}(s, A)`` instead.
    """
    spectrum = s_spectrum(A) if spectrum is None else spectrum
    sel = sorted(set(int(k) for k in selection))
    for k in sel:
        if not 0 <= k < len(spectrum):
            raise SelectionError(f"sphere index {k} out of range 0..{len(spectrum) - 1}")
    integrate = integrate_left if side == "left" else integrate_right
    P = QMatrix.zeros(A.n)
    for k in sel:
        P = P + integrate(sphere_contour(spectrum, k, plane, nodes), A, spectrum=spectrum)
    return P


def projector_residuals(A: QMatrix, P: QMatrix) -> dict:
    """Frobenius residuals of idempotency and commutation with ``A``."""
    return {"idem": (P @ P - P).frobenius(), "comm": (A @ P - P @ A).frobenius()}


def check_lemma_identity(B: QMatrix, p, c: ContourSpec, eps: float = 1e-12) -> QMatrix:
    """``(1/2pi) ∮ ds_I (conj(s) B - B p)(p^2 - 2 s0 p + |s|^2)^{-1}``.

    Equals ``B`` when ``[p] ∩ C_I`` lies inside the loops and vanishes
    when it lies outside.
    """
    p = Quaternion.coerce(p)
    sp = sphere_of(p, 0.0)
    z, w = c.nodes()
    total = QMatrix.zeros(B.n)
    for zm, wm in zip(z, w):
        s = slice_embedding(c.plane, zm)
        ss = sphere_of(s, 0.0)
        if ss.distance(sp.u, sp.v) <= eps:
            raise ContourError(f"node {zm:.6g} collides with the sphere [p]", node=complex(zm))
        den = p * p - p * (2.0 * s.w) + s.norm2()
        term = (s.conj() * B - B * p) * inverse(den)
        total = total + slice_embedding(c.plane, wm) * term
    return total


def poly_eval(coeffs: Sequence, q) -> Quaternion:
    """Horner evaluation of ``sum_m q^m a_m`` (coefficients on the right)."""
    q = Quaternion.coerce(q)
    acc = Quaternion()
    for a in reversed(list(coeffs)):
        acc = q * acc + Quaternion.coerce(a)
    return acc


def poly_matrix(coeffs: Sequence, A: QMatrix) -> QMatrix:
    """``sum_m A^m a_m`` with each ``a_m`` acting entrywise on the right."""
    acc = QMatrix.zeros(A.n)
    for a in reversed(list(coeffs)):
        acc = A @ acc + QMatrix.scalar(a, A.n)
    return acc


def _check_enclosed(c: ContourSpec, q: Quaternion, tol: float = 1e-10):
    sq = sphere_of(q, 0.0)
    for z in (complex(sq.u, sq.v), complex(sq.u, -sq.v)):
        if c.margin(z) <= tol:
            raise ContourError(f"[q] touches the contour at {z:.6g}", node=z)
        if c.winding(z) != 1:
            raise ContourError(f"[q] is not enclosed by the contour (point {z:.6g})", node=z)


def cauchy_eval(coeffs: Sequence, q, c: ContourSpec) -> Quaternion:
    """``(1/2pi) ∮ S_L^{-1}(s, q) ds_I f(s)`` for ``f(s) = sum s^m a_m``."""
    if len(coeffs) > 33:
        raise ValueError("polynomial degree is capped at 32")
    q = Quaternion.coerce(q)
    _check_enclosed(c, q)
    z, w = c.nodes()
    acc = Quaternion()
    for zm, wm in zip(z, w):
        s = slice_embedding(c.plane, zm)
        acc = acc + cauchy_kernel_left(s, q) * slice_embedding(c.plane, wm) * poly_eval(coeffs, s)
    return acc


def funcalc_contour(
    coeffs: Sequence, A: QMatrix, c: ContourSpec, spectrum: SSpectrum | None = None
) -> QMatrix:
    """``(1/2pi) ∮ S_L^{-1}(s, A) ds_I f(s)`` for a right-coefficient polynomial."""
    spectrum = s_spectrum(A) if spectrum is None else spectrum
    for sp in spectrum:
        _check_enclosed(c, sp.point(c.plane))
    return integrate_left(c, A, lambda s: poly_eval(coeffs, s), spectrum=spectrum)
