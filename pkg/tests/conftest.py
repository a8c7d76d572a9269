import sys

import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from qspec.qmatrix import QMatrix, QVector
from qspec.quat import Quaternion, UnitImaginary

settings.register_profile(
    "qspec", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("qspec")

finite = st.floats(min_value=-10.0, max_value=10.0, allow_nan=False, allow_infinity=False)


@st.composite
def quaternions(draw, nonzero=False):
    q = Quaternion(draw(finite), draw(finite), draw(finite), draw(finite))
    if nonzero and abs(q) < 1e-3:
        q = q + 1.0
    return q


@st.composite
def units(draw):
    v = np.array([draw(finite), draw(finite), draw(finite)])
    if np.linalg.norm(v) < 1e-3:
        v = np.array([0.0, 0.0, 1.0])
    return UnitImaginary.normalized(v)


def seeds():
    return st.integers(min_value=0, max_value=2**31 - 1)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def qmat(rows) -> QMatrix:
    return QMatrix.from_quaternions(rows)


def qvec(vals) -> QVector:
    return QVector.from_quaternions(vals)


def dist(A: QMatrix, B: QMatrix) -> float:
    return (A - B).frobenius()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "LINES", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
