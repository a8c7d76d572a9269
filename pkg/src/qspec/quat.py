"""
Quaternion scalars, imaginary units and the slice geometry of H.

A quaternion ``s = w + x i + y j + z k`` is stored by its four real
components.  Every quaternion also splits uniquely as ``s = c1 + c2 j``
with ``c1 = w + x i`` and ``c2 = y + z i`` in the distinguished complex
plane C_i; matrix code elsewhere in the package works with that split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Real

import numpy as np

from .errors import ZeroDivisorError

EPS_SCALAR = 1e-12
EPS_REAL = 1e-12


@dataclass(frozen=True)
class Quaternion:
    """Immutable quaternion ``w + x i + y j + z k``."""

    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    # -- construction -----------------------------------------------------
    @classmethod
    def from_complex(cls, c1: complex, c2: complex = 0j) -> "Quaternion":
        """Build ``c1 + c2 j`` from two numbers of C_i."""
        c1, c2 = complex(c1), complex(c2)
        return cls(c1.real, c1.imag, c2.real, c2.imag)

    @classmethod
    def from_array(cls, a) -> "Quaternion":
        arr = np.asarray(a, dtype=float)
        if arr.shape != (4,):
            raise TypeError(f"expected 4 components, got shape {arr.shape}")
        w, x, y, z = arr.tolist()
        return cls(w, x, y, z)

    @classmethod
    def coerce(cls, value) -> "Quaternion":
        """Accept a Quaternion, a real or complex number, or a length-4 sequence."""
        if isinstance(value, Quaternion):
            return value
        if isinstance(value, Real):
            return cls(float(value))
        if isinstance(value, complex):
            return cls.from_complex(value)
        if not isinstance(value, (list, tuple, np.ndarray)):
            raise TypeError(f"cannot interpret {type(value).__name__} as a quaternion")
        return cls.from_array(value)

    # -- views ------------------------------------------------------------
    @property
    def c1(self) -> complex:
        return complex(self.w, self.x)

    @property
    def c2(self) -> complex:
        return complex(self.y, self.z)

    @property
    def real(self) -> float:
        return self.w

    @property
    def imag(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def to_array(self) -> np.ndarray:
        return np.array([self.w, self.x, self.y, self.z])

    def to_json(self) -> list:
        return [self.w, self.x, self.y, self.z]

    # -- algebra ----------------------------------------------------------
    def conj(self) -> "Quaternion":
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm2(self) -> float:
        return self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z

    def __abs__(self) -> float:
        return math.sqrt(self.norm2())

    def abs_imag(self) -> float:
        return math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __add__(self, other):
        try:
            o = Quaternion.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return Quaternion(self.w + o.w, self.x + o.x, self.y + o.y, self.z + o.z)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = Quaternion.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return Quaternion(self.w - o.w, self.x - o.x, self.y - o.y, self.z - o.z)

    def __rsub__(self, other):
        return Quaternion.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, Real):
            t = float(other)
            return Quaternion(self.w * t, self.x * t, self.y * t, self.z * t)
        try:
            o = Quaternion.coerce(other)
        except (TypeError, ValueError):
            return NotImplemented
        return mul(self, o)

    def __rmul__(self, other):
        if isinstance(other, Real):
            return self * other
        return mul(Quaternion.coerce(other), self)

    def __truediv__(self, other):
        if isinstance(other, Real):
            if other == 0:
                raise ZeroDivisorError("division by zero")
            return self * (1.0 / float(other))
        return NotImplemented

    def inverse(self) -> "Quaternion":
        return inverse(self)

    def isclose(self, other, tol: float = EPS_SCALAR) -> bool:
        return abs(self - Quaternion.coerce(other)) <= tol

    def __repr__(self):
        return f"Quaternion({self.w:.6g}, {self.x:.6g}, {self.y:.6g}, {self.z:.6g})"


ONE = Quaternion(1.0)
QI = Quaternion(0.0, 1.0)
QJ = Quaternion(0.0, 0.0, 1.0)
QK = Quaternion(0.0, 0.0, 0.0, 1.0)
BASIS = (ONE, QI, QJ, QK)


def mul(a: Quaternion, b: Quaternion) -> Quaternion:
    """Hamilton product ``a b``."""
    return Quaternion(
        a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
        a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
        a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
        a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
    )


def inverse(a: Quaternion) -> Quaternion:
    n2 = a.norm2()
    if n2 == 0.0:
        raise ZeroDivisorError("the zero quaternion has no inverse")
    return a.conj() * (1.0 / n2)


@dataclass(frozen=True)
class UnitImaginary:
    """A point ``I = x i + y j + z k`` of the sphere of imaginary units."""

    x: float
    y: float
    z: float

    def __post_init__(self):
        n = math.sqrt(self.x * self.x + self.y * self.y + self.z * self.z)
        if abs(n - 1.0) > 1e-9:
            raise ValueError(f"imaginary unit must have norm 1, got {n}")

    @classmethod
    def normalized(cls, v) -> "UnitImaginary":
        v = np.asarray(v, dtype=float)
        n = np.linalg.norm(v)
        if n == 0.0:
            raise ZeroDivisorError("cannot normalize the zero vector")
        x, y, z = v / n
        return cls(float(x), float(y), float(z))

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def as_quaternion(self) -> Quaternion:
        return Quaternion(0.0, self.x, self.y, self.z)

    def to_json(self) -> list:
        return [self.x, self.y, self.z]


UNIT_I = UnitImaginary(1.0, 0.0, 0.0)
UNIT_J = UnitImaginary(0.0, 1.0, 0.0)
UNIT_K = UnitImaginary(0.0, 0.0, 1.0)


@dataclass(frozen=True)
class SlicePoint:
    """The point ``u + I v`` of the slice C_I."""

    u: float
    v: float
    unit: UnitImaginary = UNIT_I

    def as_quaternion(self) -> Quaternion:
        return Quaternion(self.u) + self.unit.as_quaternion() * self.v


@dataclass(frozen=True)
class EigenSphere:
    """The 2-sphere ``[u + v S]``; ``v == 0`` is the real point ``u``."""

    u: float
    v: float
    multiplicity: int = 1

    def distance(self, u: float, v: float) -> float:
        return math.hypot(self.u - u, self.v - v)

    def point(self, unit: UnitImaginary = UNIT_I) -> Quaternion:
        return SlicePoint(self.u, self.v, unit).as_quaternion()

    def to_json(self) -> dict:
        return {"u": self.u, "v": self.v, "mult": self.multiplicity}


def sphere_of(q: Quaternion, eps_real: float = EPS_REAL) -> EigenSphere:
    """Return the sphere ``[q]`` as ``(Re q, |Im q|)``."""
    v = q.abs_imag()
    if v < eps_real:
        v = 0.0
    return EigenSphere(q.w, v, 1)


def exp_unit(unit: UnitImaginary, t: float) -> Quaternion:
    """``cos t + I sin t``."""
    s = math.sin(t)
    return Quaternion(math.cos(t), unit.x * s, unit.y * s, unit.z * s)


def orthogonal_unit(unit: UnitImaginary, seed: int = 0) -> UnitImaginary:
    """A unit ``J`` orthogonal to ``unit`` (hence ``I J = -J I``).

    Gram-Schmidt of a seeded Gaussian 3-vector against ``unit``; redraws
    in the measure-zero event that the draw is parallel.
    """
    rng = np.random.default_rng(seed)
    n = unit.vector
    while True:
        r = rng.standard_normal(3)
        r = r - n * (n @ r)
        if np.linalg.norm(r) > 1e-8:
            return UnitImaginary.normalized(r)


def random_quaternion(rng: np.random.Generator) -> Quaternion:
    return Quaternion.from_array(rng.standard_normal(4))


def random_unit_imaginary(rng: np.random.Generator) -> UnitImaginary:
    return UnitImaginary.normalized(rng.standard_normal(3))


def slice_embedding(unit: UnitImaginary, z) -> Quaternion:
    """Map the complex number ``z = a + b i`` to ``a + b I`` in C_I."""
    z = complex(z)
    return Quaternion(z.real) + unit.as_quaternion() * z.imag
