"""Eigen-angles of a unitary matrix and its quaternion-valued measures."""

import numpy as np

from qspec import decompose, diag_measure, pair_measure, polarize, q_positivity, random_unitary
from qspec.generators import random_unit_vector
from qspec.qmatrix import QVector, inner
from qspec.quat import QJ, Quaternion
from qspec.spectral import herglotz_sequence, positive_definite_check

U = random_unitary(3, seed=11)
D = decompose(U)
print("angles:", np.round(D.angles, 4), "mult:", D.multiplicities)

# every angle t comes with 2 pi - t
print("mirror map:", D.mirror)

rng = np.random.default_rng(0)
x, y = random_unit_vector(3, rng), random_unit_vector(3, rng)
nu = pair_measure(D, x, y)
for t, w in nu.atoms():
    print(f"t={t:.4f}  w={np.round(w.to_array(), 4)}")

# the atoms reproduce every moment <U^n x, y>
v = x
for n in range(4):
    print(n, abs(nu.moment(n) - inner(v, y)))
    v = U @ v

# the same measure from eight diagonal measures
print("polarization gap:", polarize(D, x, y).max_abs_diff(nu))

# diagonal measures are q-positive; paired 2x2 blocks are PSD
rep = q_positivity(diag_measure(D, x))
print("q-positive:", rep.verdict, "min block eigenvalue:", rep.min_eigenvalue)

# Toeplitz matrix of the moment sequence is PSD
r = herglotz_sequence(U, x, 12)
print("Toeplitz min eigenvalue:", positive_definite_check(r, 12, tol=1e-10))

# swapping x and y does not conjugate the measure: a scalar example
S = decompose(random_unitary(1, 0))
one, j = QVector.from_quaternions([Quaternion(1.0)]), QVector.from_quaternions([QJ])
a, b = pair_measure(S, one, j), pair_measure(S, j, one)
print("nu_{1,j} vs conj nu_{j,1}:", [abs(a.weight(k) - b.weight(k).conj()) for k in range(len(a))])
