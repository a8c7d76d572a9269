"""Spectral theory for quaternionic matrices: S-spectrum, S-resolvents, Riesz
projectors, quaternion-valued spectral measures and the functional calculus
of unitary matrices."""

from .contour import (
    ContourSpec,
    cauchy_eval,
    enclosing_contour,
    funcalc_contour,
    integrate_left,
    integrate_right,
    riesz_projector,
    sphere_contour,
)
from .errors import QSpecError
from .generators import random_complex_unitary, random_diagonalizable, random_unitary
from .qmatrix import QMatrix, QVector, adjoint, chi, chi_inv, inner, invert, is_unitary, vec_chi, vec_chi_inv
from .quat import EigenSphere, Quaternion, SlicePoint, UnitImaginary
from .slicefun import (
    SliceFunction,
    TrigPoly,
    funcalc_converge,
    funcalc_spectral,
    funcalc_trigpoly,
    intrinsic_split,
    symmetrize,
    weierstrass_approx,
)
from .spectral import (
    AtomicQMeasure,
    SpectralDecomposition,
    complex_preserving_check,
    decompose,
    diag_measure,
    herglotz_sequence,
    pair_measure,
    polarize,
    positive_definite_check,
    q_positivity,
    spectral_pairing,
    sphere_projector_from_E,
)
from .sspectrum import (
    SSpectrum,
    cauchy_kernel_left,
    cauchy_kernel_right,
    check_resolvent_equation,
    s_resolvent_left,
    s_resolvent_right,
    s_spectrum,
)
from .verify import RunConfig, VerificationRecord, report, verify_all

__version__ = "0.1.0"
