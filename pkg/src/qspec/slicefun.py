"""
Slice functions on the unit circle, trigonometric polynomials, Fejer
approximation and the functional calculus ``f(U)`` of a unitary matrix.

A slice function is ``f(u + I v) = alpha(u, v) + I beta(u, v)`` with
``alpha`` even and ``beta`` odd in ``v``.  It is intrinsic when ``alpha`` and
``beta`` are real; intrinsic functions commute with the choice of ``I`` and
are the ones whose calculus yields H-linear operators directly.  A general
``f`` splits as ``f0 + f1 i + f2 j + f3 k`` with intrinsic ``f_l``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import CalculusInconsistencyError, NotInImageError, NotSliceContinuousError, NotUnitaryError
from .qmatrix import QMatrix, adjoint, chi_inv, is_unitary
from .quat import BASIS, Quaternion, UNIT_I, UnitImaginary, mul
from .spectral import SpectralDecomposition, decompose

EPS_SLICE = 1e-9
GRID = 257
SUP_GRID = 1024


def _qvals(val, shape) -> np.ndarray:
    """Normalize a callable's output to a ``shape + (4,)`` array."""
    arr = np.asarray(val, dtype=float)
    if arr.shape == tuple(shape) + (4,):
        return arr
    if arr.ndim >= 1 and arr.shape[-1] == 4 and arr.shape != tuple(shape):
        return np.broadcast_to(arr, tuple(shape) + (4,)).copy()
    out = np.zeros(tuple(shape) + (4,))
    out[..., 0] = np.broadcast_to(arr, shape)
    return out


def _circle(n: int = GRID):
    t = np.linspace(0.0, 2.0 * math.pi, n, endpoint=False)
    return t, np.cos(t), np.sin(t)


@dataclass(frozen=True)
class SliceFunction:
    """``f(u + I v) = alpha(u, v) + I beta(u, v)``.

    ``alpha`` and ``beta`` take arrays ``u, v`` and return either real
    arrays of the same shape or quaternion arrays with a trailing axis of
    length 4.
    """

    alpha: Callable
    beta: Callable
    declared_intrinsic: bool = False
    name: str = ""

    def components(self, u, v):
        u, v = np.asarray(u, float), np.asarray(v, float)
        shape = np.broadcast(u, v).shape
        return _qvals(self.alpha(u, v), shape), _qvals(self.beta(u, v), shape)

    def __call__(self, q) -> Quaternion:
        q = Quaternion.coerce(q)
        v = q.abs_imag()
        a, b = self.components(q.w, v)
        if v == 0.0:
            return Quaternion.from_array(a)
        I = Quaternion(0.0, q.x / v, q.y / v, q.z / v)
        return Quaternion.from_array(a) + mul(I, Quaternion.from_array(b))

    def complex_values(self, angles) -> np.ndarray:
        """``alpha + i beta`` at ``e^{i t}``; only meaningful when intrinsic."""
        t = np.asarray(angles, float)
        a, b = self.components(np.cos(t), np.sin(t))
        return a[..., 0] + 1j * b[..., 0]

    def is_intrinsic(self, tol: float = EPS_SLICE, n: int = GRID) -> bool:
        _, u, v = _circle(n)
        a, b = self.components(u, v)
        return float(max(np.abs(a[..., 1:]).max(), np.abs(b[..., 1:]).max())) <= tol

    def product(self, other: "SliceFunction") -> "SliceFunction":
        """Pointwise product; both factors must be intrinsic."""
        f, g = self, other

        def alpha(u, v):
            fa, fb = f.components(u, v)
            ga, gb = g.components(u, v)
            return fa[..., 0] * ga[..., 0] - fb[..., 0] * gb[..., 0]

        def beta(u, v):
            fa, fb = f.components(u, v)
            ga, gb = g.components(u, v)
            return fa[..., 0] * gb[..., 0] + fb[..., 0] * ga[..., 0]

        return SliceFunction(alpha, beta, True, f"({f.name})*({g.name})")


def check_slice(f: SliceFunction, eps: float = EPS_SLICE, n: int = GRID) -> float:
    """Largest parity violation on the circle grid; raises beyond ``eps``."""
    t, u, v = _circle(n)
    a, b = f.components(u, v)
    am, bm = f.components(u, -v)
    ra = np.linalg.norm(a - am, axis=-1)
    rb = np.linalg.norm(b + bm, axis=-1)
    r = np.maximum(ra, rb)
    k = int(np.argmax(r))
    if r[k] > eps:
        raise NotSliceContinuousError(float(r[k]), (float(u[k]), float(v[k])))
    if f.declared_intrinsic and not f.is_intrinsic(eps, n):
        raise NotSliceContinuousError(float("nan"), "declared intrinsic but alpha/beta are not real")
    return float(r[k])


def intrinsic_split(f: SliceFunction, eps: float = EPS_SLICE) -> list[SliceFunction]:
    """``[f0, f1, f2, f3]`` with ``f = f0 + f1 i + f2 j + f3 k``."""
    check_slice(f, eps)

    def part(l):
        return SliceFunction(
            lambda u, v: f.components(u, v)[0][..., l],
            lambda u, v: f.components(u, v)[1][..., l],
            True,
            f"{f.name}[{l}]",
        )

    return [part(l) for l in range(4)]


def symmetrize(a_tilde: Callable, b_tilde: Callable):
    """Even part of ``a_tilde`` and the reflected odd part of ``b_tilde``.

    ``a(u, v) = (a~(u, v) + a~(u, -v)) / 2`` and
    ``b(u, v) = (b~(u, -v) - b~(u, v)) / 2``.
    """

    def a(u, v):
        return 0.5 * (np.asarray(a_tilde(u, v)) + np.asarray(a_tilde(u, -np.asarray(v))))

    def b(u, v):
        return 0.5 * (np.asarray(b_tilde(u, -np.asarray(v))) - np.asarray(b_tilde(u, v)))

    return a, b


@dataclass(frozen=True)
class TrigPoly:
    """``P(e^{I t}) = sum_{m=-n..n} e^{I m t} a_m`` with ``a_m`` in H.

    ``coeffs`` has shape ``(2n + 1, 4)``; row ``m + n`` holds ``a_m``.
    """

    coeffs: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coeffs, float)
        if c.ndim != 2 or c.shape[1] != 4 or c.shape[0] % 2 != 1:
            raise ValueError(f"coefficients must have shape (2n+1, 4), got {c.shape}")
        object.__setattr__(self, "coeffs", c)

    @classmethod
    def from_pairs(cls, pairs) -> "TrigPoly":
        """Build from ``[(m, a_m), ...]``; missing indices are zero."""
        pairs = [(int(m), Quaternion.coerce(a)) for m, a in pairs]
        n = max((abs(m) for m, _ in pairs), default=0)
        c = np.zeros((2 * n + 1, 4))
        for m, a in pairs:
            c[m + n] += a.to_array()
        return cls(c)

    @classmethod
    def real(cls, c) -> "TrigPoly":
        """From real coefficients ``c[m + n]``."""
        c = np.asarray(c, float)
        out = np.zeros((len(c), 4))
        out[:, 0] = c
        return cls(out)

    @property
    def degree(self) -> int:
        return self.coeffs.shape[0] // 2

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-self.degree, self.degree + 1)

    def is_real(self, tol: float = 0.0) -> bool:
        return bool(np.abs(self.coeffs[:, 1:]).max(initial=0.0) <= tol)

    def alpha_beta(self, t):
        """``(sum cos(m t) a_m, sum sin(m t) a_m)`` as quaternion arrays."""
        mt = np.multiply.outer(np.asarray(t, float), self.orders)
        return np.cos(mt) @ self.coeffs, np.sin(mt) @ self.coeffs

    def evaluate(self, t, unit: UnitImaginary = UNIT_I) -> np.ndarray:
        """Values ``P(e^{I t})`` with shape ``t.shape + (4,)``."""
        a, b = self.alpha_beta(t)
        I = unit.as_quaternion()
        Ib = np.stack(
            [
                -(I.x * b[..., 1] + I.y * b[..., 2] + I.z * b[..., 3]),
                I.x * b[..., 0] + I.y * b[..., 3] - I.z * b[..., 2],
                I.y * b[..., 0] - I.x * b[..., 3] + I.z * b[..., 1],
                I.z * b[..., 0] + I.x * b[..., 2] - I.y * b[..., 1],
            ],
            axis=-1,
        )
        return a + Ib

    def complex_values(self, t) -> np.ndarray:
        """``P(e^{i t})`` in C_i; exact for real coefficients."""
        t = np.asarray(t, float)
        return np.exp(1j * np.multiply.outer(t, self.orders)) @ self.coeffs[:, 0]

    def as_slice_function(self) -> SliceFunction:
        """Radial extension ``t = atan2(v, u)`` of the circle values."""

        def alpha(u, v):
            return self.alpha_beta(np.arctan2(v, u))[0]

        def beta(u, v):
            return self.alpha_beta(np.arctan2(v, u))[1]

        return SliceFunction(alpha, beta, self.is_real(), f"trig(n={self.degree})")


def weierstrass_approx(f: SliceFunction, degree: int, samples: int | None = None) -> TrigPoly:
    """Fejer mean of order ``degree`` of ``t -> f(e^{i t})``, intrinsic part kept.

    Fourier coefficients come from an FFT on ``samples`` equispaced points.
    For intrinsic ``f`` the coefficients are real (``g(-t) = conj g(t)``);
    keeping the real part is the even/odd symmetrization that restores
    ``alpha`` even and ``beta`` odd after rounding.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    M = samples or max(SUP_GRID, 8 * (degree + 1))
    t = 2.0 * math.pi * np.arange(M) / M
    F = np.fft.fft(f.complex_values(t)) / M
    m = np.arange(-degree, degree + 1)
    c = F[np.mod(m, M)] * (1.0 - np.abs(m) / (degree + 1.0))
    return TrigPoly.real(c.real)


def sup_error(P: TrigPoly, f: SliceFunction, grid: int = SUP_GRID) -> float:
    t = 2.0 * math.pi * np.arange(grid) / grid
    return float(np.abs(P.complex_values(t) - f.complex_values(t)).max())


def funcalc_spectral(
    f: SliceFunction, D: SpectralDecomposition | QMatrix, eps_sym: float = 1e-10
) -> QMatrix:
    """``f(U)`` from the eigenprojectors of ``chi(U)``.

    Each intrinsic part ``f_l`` gives the complex matrix
    ``sum_k f_l(e^{i t_k}) P_k``, pulled back to ``F_l``; the result is
    ``F0 + F1 i + F2 j + F3 k`` with the units multiplied on the right.
    """
    if isinstance(D, QMatrix):
        D = decompose(D)
    parts = intrinsic_split(f)
    r = D.frame
    out = QMatrix.zeros(D.n)
    for l, g in enumerate(parts):
        vals = g.complex_values(D.angles)
        if not np.any(vals):
            continue
        M = np.einsum("k,kij->ij", vals, D.projectors)
        try:
            F = chi_inv(M, eps_sym=eps_sym)
        except NotInImageError as exc:
            raise CalculusInconsistencyError(
                f"intrinsic part {l} fails the chi-symmetry test (residual {exc.residual:.3g})"
            ) from exc
        F = (r * F) * r.conj()
        out = out + (F if l == 0 else F * BASIS[l])
    return out


def _powers(U: QMatrix, n: int):
    pos, neg = [QMatrix.identity(U.n)], [QMatrix.identity(U.n)]
    Ustar = adjoint(U)
    for _ in range(n):
        pos.append(U @ pos[-1])
        neg.append(Ustar @ neg[-1])
    return pos, neg


def funcalc_trigpoly(P: TrigPoly, U: QMatrix, tol: float = 1e-10) -> QMatrix:
    """``sum_m U^m a_m`` with ``U^{-m} = (U*)^m``."""
    if not is_unitary(U, tol):
        raise NotUnitaryError("funcalc_trigpoly requires a unitary matrix")
    pos, neg = _powers(U, P.degree)
    out = QMatrix.zeros(U.n)
    for m, a in zip(P.orders, P.coeffs):
        if not np.any(a):
            continue
        Um = pos[m] if m >= 0 else neg[-m]
        out = out + Um * Quaternion.from_array(a)
    return out


@dataclass(frozen=True)
class ConvergenceRow:
    degree: int
    operator_error: float
    angle_sup_error: float
    grid_sup_error: float

    @property
    def bounded(self) -> bool:
        return self.operator_error <= self.angle_sup_error + 1e-9

    def to_json(self) -> dict:
        return {
            "degree": self.degree,
            "operator_error": self.operator_error,
            "angle_sup_error": self.angle_sup_error,
            "grid_sup_error": self.grid_sup_error,
        }


def funcalc_converge(
    f: SliceFunction, U: QMatrix, degrees: Sequence[int], D: SpectralDecomposition | None = None
) -> list[ConvergenceRow]:
    """Fejer approximants ``R_n(U)`` against ``f(U)`` at each degree.

    ``operator_error`` is the operator 2-norm of ``R_n(U) - f(U)``; for a
    normal ``chi(U)`` it equals ``angle_sup_error``, the largest scalar
    error at the eigen-angles.
    """
    D = decompose(U) if D is None else D
    fU = funcalc_spectral(f, D)
    fvals = f.complex_values(D.angles)
    rows = []
    for n in degrees:
        R = weierstrass_approx(f, n)
        err = (funcalc_trigpoly(R, U) - fU).opnorm()
        ang = float(np.abs(R.complex_values(D.angles) - fvals).max())
        rows.append(ConvergenceRow(int(n), float(err), ang, sup_error(R, f)))
    return rows


def _intrinsic(alpha, beta, name):
    return SliceFunction(alpha, beta, True, name)


def _exp_alpha(u, v):
    return np.exp(u / 2) * np.cos(v / 2)


def _exp_beta(u, v):
    return np.exp(u / 2) * np.sin(v / 2)


def _times(unit: Quaternion, g):
    vec = unit.to_array()
    return lambda u, v: np.multiply.outer(np.asarray(g(u, v), float), vec)


BUILTINS: dict[str, SliceFunction] = {
    "identity": _intrinsic(lambda u, v: u, lambda u, v: v, "identity"),
    "inverse": _intrinsic(lambda u, v: u / (u * u + v * v), lambda u, v: -v / (u * u + v * v), "inverse"),
    "square": _intrinsic(lambda u, v: u * u - v * v, lambda u, v: 2 * u * v, "square"),
    "cosine_part": _intrinsic(lambda u, v: u, lambda u, v: 0 * v, "cosine_part"),
    "abs_cos": _intrinsic(lambda u, v: np.abs(u), lambda u, v: 0 * v, "abs_cos"),
    "exp_scaled": _intrinsic(_exp_alpha, _exp_beta, "exp_scaled"),
    "times_j": SliceFunction(
        _times(BASIS[2], lambda u, v: u), _times(BASIS[2], lambda u, v: v), False, "times_j"
    ),
}


def builtin(name: str) -> SliceFunction:
    try:
        return BUILTINS[name]
    except KeyError:
        raise KeyError(f"unknown function {name!r}; choose from {sorted(BUILTINS)}") from None
