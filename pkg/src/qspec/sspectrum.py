"""
S-spectrum, S-resolvent operators and the scalar Cauchy kernels.

For a quaternionic matrix the S-spectrum is the set of right eigenvalues,
a finite union of 2-spheres ``[u + v S]``.  It is read off the eigenvalues
of the complex adjoint: the 2n eigenvalues of ``chi(A)`` come in
conjugate pairs, and each pair ``u +- v i`` is one sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import EigensolverError, KernelSingularityError, ResolventSingularityError
from .qmatrix import EPS_SYM, QMatrix, chi, chi_inv
from .quat import EigenSphere, Quaternion, inverse, sphere_of

EPS_SPEC = 1e-8


def default_eps_cluster(A: QMatrix) -> float:
    return 1e-8 * (1.0 + A.frobenius())


@dataclass(frozen=True)
class SSpectrum:
    """Spheres of the S-spectrum, sorted by ``(u, v)``.

    ``audit`` holds, per sphere, the smallest singular value of
    ``chi(A^2 - 2u A + (u^2 + v^2) I)``; it vanishes on exact spectrum.
    """

    spheres: tuple
    source_dim: int
    audit: tuple = field(default=(), compare=False)

    def __len__(self):
        return len(self.spheres)

    def __iter__(self):
        return iter(self.spheres)

    def __getitem__(self, k) -> EigenSphere:
        return self.spheres[k]

    def distance(self, q: Quaternion):
        """Half-plane distance from ``[q]`` to the nearest sphere, and that sphere."""
        sq = sphere_of(q, eps_real=0.0)
        best, arg = math.inf, None
        for sp in self.spheres:
            d = sp.distance(sq.u, sq.v)
            if d < best:
                best, arg = d, sp
        return best, arg

    def to_json(self) -> dict:
        return {"spheres": [sp.to_json() for sp in self.spheres]}


def _cluster(points: np.ndarray, tol: float) -> list[list[int]]:
    """Single-linkage clusters of planar points."""
    n = len(points)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for k in range(i + 1, n):
            if np.hypot(*(points[i] - points[k])) <= tol:
                parent[find(i)] = find(k)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def characteristic_chi(chiA: np.ndarray, u, norm2) -> np.ndarray:
    """``chi(A^2 - 2u A + norm2 I)``; batched over leading axes of ``u``, ``norm2``."""
    m = chiA.shape[0]
    u = np.asarray(u, dtype=float)[..., None, None]
    norm2 = np.asarray(norm2, dtype=float)[..., None, None]
    return chiA @ chiA - 2.0 * u * chiA + norm2 * np.eye(m)


def s_spectrum(A: QMatrix, eps_cluster: float | None = None) -> SSpectrum:
    """S-spectrum of ``A`` via the right-eigenvalue characterization."""
    tol = default_eps_cluster(A) if eps_cluster is None else eps_cluster
    M = chi(A)
    try:
        lam = np.linalg.eigvals(M)
    except np.linalg.LinAlgError as exc:
        raise EigensolverError(f"eigensolver failed on chi(A): {exc}") from exc
    if not np.all(np.isfinite(lam)):
        raise EigensolverError("eigensolver returned non-finite eigenvalues")
    pts = np.column_stack([lam.real, np.abs(lam.imag)])
    spheres = []
    for grp in _cluster(pts, tol):
        u, v = pts[grp].mean(axis=0)
        if v <= tol:
            v = 0.0
        spheres.append(EigenSphere(float(u), float(v), int(math.ceil(len(grp) / 2))))
    spheres.sort(key=lambda s: (s.u, s.v))
    audit = tuple(
        float(np.linalg.svd(characteristic_chi(M, sp.u, sp.u**2 + sp.v**2), compute_uv=False)[-1])
        for sp in spheres
    )
    return SSpectrum(tuple(spheres), A.n, audit)


def _guard(s: Quaternion, A: QMatrix, spectrum: SSpectrum | None, eps_spec: float):
    spectrum = s_spectrum(A) if spectrum is None else spectrum
    d, sp = spectrum.distance(s)
    if d <= eps_spec:
        raise ResolventSingularityError(s, sp, d)


def _scalar_chi(q: Quaternion, n: int) -> np.ndarray:
    return chi(QMatrix.scalar(q, n))


def s_resolvent_left(
    s, A: QMatrix, spectrum: SSpectrum | None = None, eps_spec: float = EPS_SPEC
) -> QMatrix:
    """``-(A^2 - 2 Re(s) A + |s|^2 I)^{-1} (A - conj(s) I)``."""
    s = Quaternion.coerce(s)
    _guard(s, A, spectrum, eps_spec)
    M = chi(A)
    Q = characteristic_chi(M, s.w, s.norm2())
    R = M - _scalar_chi(s.conj(), A.n)
    out = -np.linalg.solve(Q, R)
    return chi_inv(out, eps_sym=max(EPS_SYM, 1e-14 * np.linalg.cond(Q)))


def s_resolvent_right(
    s, A: QMatrix, spectrum: SSpectrum | None = None, eps_spec: float = EPS_SPEC
) -> QMatrix:
    """``-(A - conj(s) I)(A^2 - 2 Re(s) A + |s|^2 I)^{-1}``."""
    s = Quaternion.coerce(s)
    _guard(s, A, spectrum, eps_spec)
    M = chi(A)
    Q = characteristic_chi(M, s.w, s.norm2())
    R = M - _scalar_chi(s.conj(), A.n)
    out = -np.linalg.solve(Q.T, R.T).T
    return chi_inv(out, eps_sym=max(EPS_SYM, 1e-14 * np.linalg.cond(Q)))


def _kernel_guard(s: Quaternion, q: Quaternion, eps: float):
    ss, sq = sphere_of(s, 0.0), sphere_of(q, 0.0)
    if ss.distance(sq.u, sq.v) <= eps:
        raise KernelSingularityError(f"q = {q} lies on the sphere [s] of s = {s}")


def cauchy_kernel_left(s, q, eps: float = 1e-12) -> Quaternion:
    """``-(q^2 - 2 q Re(s) + |s|^2)^{-1} (q - conj(s))``."""
    s, q = Quaternion.coerce(s), Quaternion.coerce(q)
    _kernel_guard(s, q, eps)
    den = q * q - q * (2.0 * s.w) + s.norm2()
    return -(inverse(den) * (q - s.conj()))


def cauchy_kernel_right(s, q, eps: float = 1e-12) -> Quaternion:
    """``-(q - conj(s)) (q^2 - 2 Re(s) q + |s|^2)^{-1}``."""
    s, q = Quaternion.coerce(s), Quaternion.coerce(q)
    _kernel_guard(s, q, eps)
    den = q * q - q * (2.0 * s.w) + s.norm2()
    return -((q - s.conj()) * inverse(den))


def check_resolvent_equation(
    s, p, A: QMatrix, spectrum: SSpectrum | None = None, relative: bool = False
) -> tuple[float, float]:
    """Residuals of both forms of the S-resolvent equation.

    With ``D = S_R^{-1}(s, A) - S_L^{-1}(p, A)`` the product
    ``S_R^{-1}(s, A) S_L^{-1}(p, A)`` is compared against

        (D p - conj(s) D) (p^2 - 2 s0 p + |s|^2)^{-1}
        (s^2 - 2 p0 s + |p|^2)^{-1} (D conj(p) - s D)

    Frobenius norms of the two differences are returned, divided by
    the norm of the product when ``relative`` is set.
    """
    s, p = Quaternion.coerce(s), Quaternion.coerce(p)
    ss, sp = sphere_of(s, 0.0), sphere_of(p, 0.0)
    if ss.distance(sp.u, sp.v) <= 1e-12:
        raise KernelSingularityError("p lies on the sphere [s]; the resolvent equation is undefined")
    spectrum = s_spectrum(A) if spectrum is None else spectrum
    SR = s_resolvent_right(s, A, spectrum)
    SL = s_resolvent_left(p, A, spectrum)
    lhs = SR @ SL
    D = SR - SL
    q1 = p * p - p * (2.0 * s.w) + s.norm2()
    rhs1 = (D * p - s.conj() * D) * inverse(q1)
    q2 = s * s - s * (2.0 * p.w) + p.norm2()
    rhs2 = inverse(q2) * (D * p.conj() - s * D)
    r1, r2 = (lhs - rhs1).frobenius(), (lhs - rhs2).frobenius()
    if relative:
        scale = max(lhs.frobenius(), np.finfo(float).tiny)
        r1, r2 = r1 / scale, r2 / scale
    return r1, r2


def spectral_gap(spectrum: SSpectrum, k: int) -> float:
    """Half-plane distance from sphere ``k`` to the nearest other sphere."""
    sp = spectrum[k]
    others = [o.distance(sp.u, sp.v) for i, o in enumerate(spectrum) if i != k]
    return min(others, default=math.inf)


__all__ = [
    "SSpectrum",
    "s_spectrum",
    "s_resolvent_left",
    "s_resolvent_right",
    "cauchy_kernel_left",
    "cauchy_kernel_right",
    "check_resolvent_equation",
    "characteristic_chi",
    "spectral_gap",
]
