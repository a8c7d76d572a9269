"""Exception hierarchy shared by every module."""

import numpy as np


class QSpecError(Exception):
    """Base class for all errors raised by :mod:`qspec`."""


class ZeroDivisorError(QSpecError, ZeroDivisionError):
    pass


class DimensionError(QSpecError, ValueError):
    pass


class NotInImageError(QSpecError, ValueError):
    """A complex matrix lacks the block symmetry of the complex adjoint."""

    def __init__(self, residual, tol):
        self.residual = float(residual)
        self.tol = float(tol)
        super().__init__(
            f"not in image of chi: symmetry residual {self.residual:.3e} > {self.tol:.1e}"
        )


class SingularMatrixError(QSpecError, np.linalg.LinAlgError):
    def __init__(self, condition):
        self.condition = float(condition)
        super().__init__(f"matrix is numerically singular (condition estimate {self.condition:.3e})")


class EigensolverError(QSpecError, np.linalg.LinAlgError):
    pass


class ResolventSingularityError(QSpecError, ValueError):
    """The resolvent was requested at (or too near) a point of the S-spectrum."""

    def __init__(self, s, sphere, distance):
        self.s = s
        self.sphere = sphere
        self.distance = float(distance)
        super().__init__(
            f"s = {s} lies within {self.distance:.3e} of spectral sphere "
            f"(u={sphere.u:.6g}, v={sphere.v:.6g})"
        )


class KernelSingularityError(QSpecError, ValueError):
    pass


class ContourError(QSpecError, ValueError):
    """A quadrature node touches the spectrum or a kernel singularity."""

    def __init__(self, message, node=None):
        self.node = node
        super().__init__(message)


class GeometryError(QSpecError, ValueError):
    def __init__(self, message, spheres=()):
        self.spheres = tuple(spheres)
        super().__init__(message)


class NotUnitaryError(QSpecError, ValueError):
    pass


class SelectionError(QSpecError, ValueError):
    pass


class NotSliceContinuousError(QSpecError, ValueError):
    def __init__(self, residual, point):
        self.residual = float(residual)
        self.point = point
        super().__init__(
            f"not slice continuous: parity residual {self.residual:.3e} at (u, v) = {point}"
        )


class CalculusInconsistencyError(QSpecError, ValueError):
    pass


class NotHermitianError(QSpecError, ValueError):
    pass


class ConfigError(QSpecError, ValueError):
    """Invalid configuration or unreadable input file."""
