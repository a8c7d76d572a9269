"""Riesz projectors by trapezoid quadrature on circles in a complex slice."""

import numpy as np

from qspec import QMatrix, random_diagonalizable, riesz_projector, s_spectrum
from qspec.contour import projector_residuals, sphere_contour
from qspec.quat import UnitImaginary

A = random_diagonalizable(4, seed=3, cond_max=50)
spec = s_spectrum(A)
print("spheres:", [(round(s.u, 3), round(s.v, 3)) for s in spec])

# each sphere gets two mirrored circles (or one real-centered circle near the axis)
for k in range(len(spec)):
    print(k, sphere_contour(spec, k).loops)

# projector of the first sphere: idempotent and commuting with A
P0 = riesz_projector(A, [0], spectrum=spec)
print("residuals:", projector_residuals(A, P0))

# projectors of disjoint spheres sum to the identity
total = QMatrix.zeros(4)
for k in range(len(spec)):
    total = total + riesz_projector(A, [k], spectrum=spec)
print("||sum P_k - I|| =", (total - QMatrix.identity(4)).frobenius())

# the slice used for the quadrature does not matter
I = UnitImaginary.normalized([1.0, -2.0, 0.5])
print("plane change:", (riesz_projector(A, [0], plane=I, spectrum=spec) - P0).frobenius())

# convergence in the node count is geometric
for nodes in (16, 32, 64, 128):
    err = (riesz_projector(A, [0], nodes=nodes, spectrum=spec) - P0).frobenius()
    print(f"nodes={nodes:4d}  diff from 256 nodes = {err:.2e}")

print("trace of P0 (complex adjoint):", np.trace(np.real(P0.a)))
