"""f(U) for slice functions, and Fejer approximation of continuous ones."""

from qspec import decompose, funcalc_spectral, funcalc_trigpoly, random_unitary
from qspec.qmatrix import adjoint
from qspec.quat import QJ
from qspec.slicefun import TrigPoly, builtin, funcalc_converge, sup_error, weierstrass_approx

U = random_unitary(3, seed=5)
D = decompose(U)

# the inverse as a slice function gives the adjoint
print("||f(U) - U*|| =", (funcalc_spectral(builtin("inverse"), D) - adjoint(U)).frobenius())

# non-intrinsic functions: the unit multiplies on the right
print("||(q j)(U) - U j|| =", (funcalc_spectral(builtin("times_j"), D) - U * QJ).frobenius())

# a real trigonometric polynomial by eigenprojectors and by matrix powers
P = TrigPoly.real([0.2, -1.0, 0.5, 3.0, 0.5])
gap = (funcalc_spectral(P.as_slice_function(), D) - funcalc_trigpoly(P, U)).frobenius()
print("spectral vs powers:", gap)

# Fejer means of |cos t|: the error at the kink t = pi/2 decays like log(n)/n
f = builtin("abs_cos")
for n in (4, 16, 64, 256):
    print(f"n={n:4d}  sup error {sup_error(weierstrass_approx(f, n), f):.5f}")

# operator error never exceeds the scalar error at the eigen-angles
for row in funcalc_converge(f, U, (4, 16, 64), D):
    print(row.to_json(), "bounded:", row.bounded)
