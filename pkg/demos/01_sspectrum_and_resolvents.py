"""S-spectrum and S-resolvents of small quaternionic matrices."""

import numpy as np

from qspec import QMatrix, Quaternion, s_resolvent_left, s_resolvent_right, s_spectrum
from qspec.quat import QI, QJ
from qspec.sspectrum import check_resolvent_equation

# i and j are conjugate quaternions, so diag(i, j) has one eigensphere of multiplicity 2
A = QMatrix.from_quaternions([[QI, 0], [0, QJ]])
for sp in s_spectrum(A):
    print(f"sphere u={sp.u:+.3f} v={sp.v:.3f} mult={sp.multiplicity}")

# a random 4x4 matrix: spheres come from the eigenvalues of its complex adjoint
rng = np.random.default_rng(1)
B = QMatrix.random(4, rng) * 0.5
spec = s_spectrum(B)
print("spheres of B:", [(round(s.u, 4), round(s.v, 4)) for s in spec])

# resolvents at a point off the spectrum; left and right forms differ for quaternionic s
s = Quaternion(1.5, 0.3, -0.8, 0.4)
L, R = s_resolvent_left(s, B), s_resolvent_right(s, B)
print("||S_L - S_R||_F =", (L - R).frobenius())

# both forms of the resolvent equation, relative residuals
p = Quaternion(-1.2, 0.1, 1.0, 0.0)
r1, r2 = check_resolvent_equation(s, p, B, relative=True)
print(f"resolvent equation residuals: {r1:.2e}, {r2:.2e}")

# a real s makes both resolvents the ordinary inverse of (s - B)
print("real s agrees:", (s_resolvent_left(2.5, B) - s_resolvent_right(2.5, B)).frobenius())
