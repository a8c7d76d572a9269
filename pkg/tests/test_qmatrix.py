import numpy as np
import pytest
from hypothesis import given, strategies as st

from conftest import dist, qmat, quaternions, qvec, seeds
from qspec.errors import DimensionError, NotInImageError, SingularMatrixError
from qspec.qmatrix import (
    QMatrix,
    QVector,
    adjoint,
    chi,
    chi_inv,
    chi_residual,
    inner,
    invert,
    is_unitary,
    vec_chi,
    vec_chi_inv,
)
from qspec.quat import ONE, QI, QJ, QK, UNIT_I, Quaternion, exp_unit


def _pair(seed, n=None):
    rng = np.random.default_rng(seed)
    n = n or int(rng.integers(1, 9))
    return QMatrix.random(n, rng), QMatrix.random(n, rng), rng


@pytest.mark.parametrize(
    "q, expected",
    [(QJ, [[0, 1], [-1, 0]]), (QI, [[1j, 0], [0, -1j]]), (QK, [[0, 1j], [1j, 0]])],
)
def test_chi_of_units(q, expected):
    assert np.array_equal(chi(qmat([[q]])), np.array(expected, dtype=complex))


def test_chi_units_multiply():
    assert np.allclose(chi(qmat([[QI]])) @ chi(qmat([[QJ]])), chi(qmat([[QK]])), atol=0)


def test_chi_inv_examples():
    assert chi_inv(np.array([[0, 1], [-1, 0]])).allclose(qmat([[QJ]]), 0.0)
    assert chi_inv(2 * np.eye(2)).allclose(qmat([[2.0]]), 0.0)
    with pytest.raises(NotInImageError) as err:
        chi_inv(np.diag([1j, 1j]))
    assert err.value.residual > 1.0


def test_chi_inv_shape_errors():
    with pytest.raises(DimensionError):
        chi_inv(np.eye(3))


def test_round_trip_is_exact():
    A, _, _ = _pair(1, 5)
    B = chi_inv(chi(A))
    assert np.array_equal(B.entries, A.entries)


def test_homomorphism_on_thousand_pairs():
    worst = 0.0
    for seed in range(1000):
        A, B, _ = _pair(seed)
        worst = max(worst, float(np.linalg.norm(chi(A @ B) - chi(A) @ chi(B))) / (A.frobenius() * B.frobenius()))
    assert worst <= 1e-13


@given(seeds())
def test_chi_linear_and_adjoint(seed):
    A, B, _ = _pair(seed)
    assert np.allclose(chi(A + B), chi(A) + chi(B), atol=1e-14)
    assert np.allclose(chi(adjoint(A)), chi(A).conj().T, atol=0)


@given(seeds())
def test_matrix_product_associative(seed):
    A, B, rng = _pair(seed)
    C = QMatrix.random(A.n, rng)
    assert dist((A @ B) @ C, A @ (B @ C)) <= 1e-12 * A.frobenius() * B.frobenius() * C.frobenius()


@pytest.mark.parametrize(
    "x, y, expected",
    [([ONE, 0], [ONE, 0], ONE), ([QJ], [ONE], QJ), ([ONE], [QJ], -QJ)],
)
def test_inner_examples(x, y, expected):
    assert inner(qvec(x), qvec(y)) == expected


def test_inner_dimension_mismatch():
    with pytest.raises(DimensionError):
        inner(qvec([ONE]), qvec([ONE, ONE]))


@given(seeds(), quaternions(), quaternions())
def test_inner_right_linear_and_hermitian(seed, a, b):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    x, y, z = (QVector.from_entries(rng.standard_normal((n, 4))) for _ in range(3))
    lhs = inner(x * a + y * b, z)
    rhs = inner(x, z) * a + inner(y, z) * b
    assert abs(lhs - rhs) <= 1e-12 * (1 + abs(a) + abs(b)) * x.norm() * z.norm() * 4
    assert abs(inner(x, y) - inner(y, x).conj()) <= 1e-13 * x.norm() * y.norm()
    xx = inner(x, x)
    assert abs(xx.x) + abs(xx.y) + abs(xx.z) <= 1e-13 * x.norm() ** 2
    assert xx.w >= 0


def test_right_scalar_linearity_tight(rng):
    for _ in range(100):
        x, y = (QVector.from_entries(rng.standard_normal((4, 4))) for _ in range(2))
        a = Quaternion.from_array(rng.standard_normal(4))
        assert abs(inner(x * a, y) - inner(x, y) * a) <= 1e-13 * x.norm() * y.norm() * abs(a)


def test_adjoint_examples():
    assert adjoint(qmat([[QI]])).allclose(qmat([[-QI]]), 0.0)
    assert adjoint(qmat([[0, QJ], [0, 0]])).allclose(qmat([[0, 0], [-QJ, 0]]), 0.0)


def test_adjoint_duality_thousand_triples():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(1000):
        n = int(rng.integers(1, 6))
        A = QMatrix.random(n, rng)
        x, y = (QVector.from_entries(rng.standard_normal((n, 4))) for _ in range(2))
        worst = max(worst, abs(inner(A @ x, y) - inner(x, adjoint(A) @ y)))
    assert worst <= 1e-12


@given(seeds())
def test_adjoint_reverses_products(seed):
    A, B, _ = _pair(seed)
    assert dist(adjoint(A @ B), adjoint(B) @ adjoint(A)) <= 1e-12 * A.frobenius() * B.frobenius()


def test_invert_examples():
    assert invert(qmat([[2.0]])).allclose(qmat([[0.5]]), 1e-15)
    assert invert(qmat([[QI]])).allclose(qmat([[-QI]]), 1e-15)
    A = qmat([[ONE, QJ], [0, ONE]])
    Ainv = invert(A)
    assert Ainv.allclose(qmat([[ONE, -QJ], [0, ONE]]), 1e-15)
    assert (A @ Ainv).allclose(QMatrix.identity(2), 1e-15)


def test_invert_singular_reports_condition():
    with pytest.raises(SingularMatrixError) as err:
        invert(qmat([[ONE, QJ], [QJ, -ONE]]))
    assert err.value.condition > 1e12


@given(seeds())
def test_invert_random(seed):
    A, _, _ = _pair(seed)
    if np.linalg.cond(chi(A)) > 1e6:
        return
    assert dist(A @ invert(A), QMatrix.identity(A.n)) <= 1e-10


@pytest.mark.parametrize(
    "U, expected",
    [
        (qmat([[exp_unit(UNIT_I, np.pi / 4)]]), True),
        (qmat([[0, 1], [1, 0]]), True),
        (qmat([[2.0]]), False),
    ],
)
def test_is_unitary_examples(U, expected):
    assert is_unitary(U) is expected


def test_unitary_implies_chi_unitary():
    from qspec.generators import random_unitary

    U = random_unitary(5, 3)
    tol = 1e-10
    assert is_unitary(U, tol)
    M = chi(U)
    assert np.linalg.norm(M.conj().T @ M - np.eye(10)) <= 2 * tol


@pytest.mark.parametrize(
    "x, expected",
    [([ONE + QJ], [1, -1]), ([QI], [1j, 0]), ([QK], [0, 1j])],
)
def test_vec_chi_examples(x, expected):
    assert np.allclose(vec_chi(qvec(x)), expected, atol=0)


@given(seeds())
def test_vec_chi_intertwines(seed):
    A, _, rng = _pair(seed)
    x = QVector.from_entries(rng.standard_normal((A.n, 4)))
    assert np.linalg.norm(vec_chi(A @ x) - chi(A) @ vec_chi(x)) <= 1e-12 * A.frobenius() * x.norm()
    assert vec_chi_inv(vec_chi(x)).allclose(x, 0.0)


def test_vec_chi_intertwines_units():
    for q in (QI, QJ, QK):
        x = qvec([QK])
        assert np.allclose(vec_chi(qmat([[q]]) @ x), chi(qmat([[q]])) @ vec_chi(x), atol=0)


def test_scalar_multiplication_sides():
    A = qmat([[QI]])
    assert (A * QJ).allclose(qmat([[QK]]), 0.0)
    assert (QJ * A).allclose(qmat([[-QK]]), 0.0)
    x = qvec([QI])
    assert (x * QJ).allclose(qvec([QK]), 0.0)
    assert (QJ * x).allclose(qvec([-QK]), 0.0)


def test_dimension_cap_and_shape_errors():
    with pytest.raises(DimensionError):
        QMatrix.zeros(65)
    with pytest.raises(DimensionError):
        QMatrix(np.zeros((2, 3)))
    with pytest.raises(DimensionError):
        QMatrix.zeros(2) @ QMatrix.zeros(3)


def test_chi_residual_zero_on_image():
    A, _, _ = _pair(4, 3)
    assert chi_residual(chi(A)) == 0.0


def test_json_shape():
    A = qmat([[ONE, QI], [QJ, QK]])
    d = A.to_json()
    assert d["n"] == 2 and np.array(d["entries"]).shape == (2, 2, 4)
    assert QMatrix.from_entries(d["entries"]).allclose(A, 0.0)


@given(st.integers(min_value=1, max_value=6), seeds())
def test_entries_view_round_trip(n, seed):
    rng = np.random.default_rng(seed)
    e = rng.standard_normal((n, n, 4))
    assert np.array_equal(QMatrix.from_entries(e).entries, e)
