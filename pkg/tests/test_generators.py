import numpy as np
import pytest
from hypothesis import given, strategies as st

from qspec.errors import DimensionError
from qspec.generators import (
    gram_schmidt,
    random_complex_unitary,
    random_diagonalizable,
    random_unitary,
    random_vector,
)
from qspec.qmatrix import QMatrix, chi, inner, is_unitary
from qspec.sspectrum import s_spectrum


def test_scalar_unitary_has_unit_entry():
    for seed in range(5):
        assert abs(abs(random_unitary(1, seed)[0, 0]) - 1) <= 1e-12


def test_unitary_is_deterministic():
    a, b = random_unitary(3, 42), random_unitary(3, 42)
    assert np.array_equal(a.entries, b.entries)
    assert not np.array_equal(a.entries, random_unitary(3, 43).entries)


@given(st.integers(1, 8), st.integers(0, 10**6))
def test_unitary_passes_check_and_unit_spectrum(n, seed):
    U = random_unitary(n, seed)
    assert is_unitary(U, 1e-10)
    for s in s_spectrum(U):
        assert abs(s.u**2 + s.v**2 - 1) <= 1e-10


def test_dimension_bounds():
    with pytest.raises(DimensionError):
        random_unitary(0, 0)
    with pytest.raises(DimensionError):
        random_unitary(65, 0)
    assert random_unitary(64, 0).n == 64


def test_gram_schmidt_orthonormal(rng):
    cols = gram_schmidt([random_vector(4, rng) for _ in range(4)])
    for a in range(4):
        for b in range(4):
            expected = 1.0 if a == b else 0.0
            assert abs(inner(cols[a], cols[b]) - expected) <= 1e-13


def test_gram_schmidt_rejects_dependent(rng):
    v = random_vector(3, rng)
    with pytest.raises(np.linalg.LinAlgError):
        gram_schmidt([v, v * 2.0])


def test_complex_unitary_stays_complex():
    U = random_complex_unitary(4, 3)
    assert is_unitary(U, 1e-12) and U.is_complex(0.0)


@given(st.integers(1, 6), st.integers(0, 10**6))
def test_diagonalizable_conditioning(n, seed):
    A = random_diagonalizable(n, seed, cond_max=50)
    assert isinstance(A, QMatrix)
    w = np.linalg.eigvals(chi(A))
    assert np.all(np.abs(w.real) <= 2 + 1e-6) and np.all(np.abs(w.imag) <= 2 + 1e-6)
