"""
The verification suite: every theorem-level invariant of the package as a
seeded, repeatable residual check.

Checks are grouped so that expensive objects (spectra, decompositions,
projectors) are built once per instance; each group returns one residual
per theorem id.  A group that raises records ``inf`` for all of its ids,
so failures surface as records rather than exceptions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, asdict
from typing import Callable

import numpy as np

from .contour import (
    check_lemma_identity,
    enclosing_contour,
    funcalc_contour,
    integrate_left,
    riesz_projector,
    ContourSpec,
)
from .errors import ConfigError, GeometryError
from .generators import (
    random_complex_unitary,
    random_diagonalizable,
    random_unitary,
    random_unit_vector,
)
from .qmatrix import QMatrix, QVector, adjoint, chi, inner
from .quat import QJ, UNIT_I, Quaternion, UnitImaginary, exp_unit, random_unit_imaginary
from .slicefun import TrigPoly, builtin, funcalc_converge, funcalc_spectral, funcalc_trigpoly
from .spectral import (
    decompose,
    diag_measure,
    herglotz_sequence,
    pair_measure,
    polarize,
    positive_definite_check,
    q_positivity,
    sphere_projector_from_E,
    complex_preserving_check,
)
from .sspectrum import (
    cauchy_kernel_left,
    characteristic_chi,
    check_resolvent_equation,
    s_resolvent_left,
    s_spectrum,
    spectral_gap,
)

MIN_GAP = 1e-3


@dataclass(frozen=True)
class RunConfig:
    seed: int = 0
    nodes_per_loop: int = 256
    eps_q: float = 1e-7
    eps_psd: float = 1e-10
    eps_sym: float = 1e-10
    eps_cluster: float = 1e-8
    eps_spec: float = 1e-8
    eps_slice: float = 1e-9
    plane: UnitImaginary = UNIT_I
    dim_cap: int = 4
    instances: int = 2

    def __post_init__(self):
        for name in ("eps_q", "eps_psd", "eps_sym", "eps_cluster", "eps_spec", "eps_slice"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if not 1 <= self.dim_cap <= 64:
            raise ConfigError(f"dim_cap must be in 1..64, got {self.dim_cap}")
        if self.nodes_per_loop < 16:
            raise ConfigError("nodes_per_loop must be at least 16")
        if self.instances < 1:
            raise ConfigError("instances must be at least 1")


@dataclass(frozen=True)
class VerificationRecord:
    theorem_id: str
    instance_seed: int
    residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return bool(self.residual <= self.tolerance)

    def to_json(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        return d


# -- instance builders ----------------------------------------------------
def _rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)


def _dim(rng, cfg: RunConfig) -> int:
    return int(rng.integers(1, cfg.dim_cap + 1))


def _min_gap(spectrum) -> float:
    return min((spectral_gap(spectrum, k) for k in range(len(spectrum))), default=math.inf)


def gapped(make: Callable[[int], QMatrix], seed: int, min_gap: float = MIN_GAP, tries: int = 100):
    """First matrix ``make(seed + t * 7919)`` whose spheres are ``min_gap`` apart."""
    for t in range(tries):
        A = make(seed + t * 7919)
        sp = s_spectrum(A)
        if _min_gap(sp) >= min_gap:
            return A, sp
    raise GeometryError(f"no well-separated instance found from seed {seed}")


def random_scalar(rng, lo: float, hi: float) -> Quaternion:
    q = rng.standard_normal(4)
    return Quaternion.from_array(q / np.linalg.norm(q) * rng.uniform(lo, hi))


def resolvent_instance(seed: int, n: int, min_dist: float = 0.05):
    """``(A, s, p, spectrum)`` with ``A`` of spectral radius about 1 and
    ``|s|, |p|`` in ``[1.2, 3]`` at least ``min_dist`` from the spectrum."""
    rng = _rng(seed)
    A = QMatrix.random(n, rng) * (1.0 / (2.0 * math.sqrt(n)))
    sp = s_spectrum(A)
    while True:
        s, p = random_scalar(rng, 1.2, 3.0), random_scalar(rng, 1.2, 3.0)
        ds, dp = sp.distance(s)[0], sp.distance(p)[0]
        sq = (s.w - p.w) ** 2 + (s.abs_imag() - p.abs_imag()) ** 2
        if min(ds, dp) >= min_dist and sq >= min_dist**2:
            return A, s, p, sp


# -- groups ---------------------------------------------------------------
def _g_resolvent(seed, cfg):
    rng = _rng(seed)
    n = int(rng.integers(1, min(cfg.dim_cap, 6) + 1))
    A, s, p, sp = resolvent_instance(seed, n)
    r1, r2 = check_resolvent_equation(s, p, A, sp, relative=True)
    SL = s_resolvent_left(s, A, sp)
    M = chi(A)
    Q = characteristic_chi(M, s.w, s.norm2())
    lhs = Q @ (-chi(SL))
    rhs = chi(A - QMatrix.scalar(s.conj(), n))
    prod = float(np.linalg.norm(lhs - rhs) / max(np.linalg.norm(rhs), 1e-300))
    q = random_scalar(rng, 0.2, 2.0)
    s1 = random_scalar(rng, 2.5, 3.5)
    kern = abs(s_resolvent_left(s1, QMatrix.scalar(q, 1))[0, 0] - cauchy_kernel_left(s1, q))
    return {
        "resolvent.equation.first_form": (r1, 1e-9),
        "resolvent.equation.second_form": (r2, 1e-9),
        "resolvent.defining_product": (prod, 1e-10),
        "resolvent.kernel_consistency": (kern, 1e-13),
    }


def _g_unit_sphere(seed, cfg):
    rng = _rng(seed)
    U = random_unitary(_dim(rng, cfg), seed)
    r = max(abs(sp.u**2 + sp.v**2 - 1.0) for sp in s_spectrum(U))
    return {"spectrum.unit_sphere": (r, 1e-10)}


def _g_lemma(seed, cfg):
    rng = _rng(seed)
    n = _dim(rng, cfg)
    B = QMatrix.random(n, rng)
    u, v = rng.uniform(-1, 1), rng.uniform(0.5, 1.5)
    I = cfg.plane
    p = Quaternion(u) + random_unit_imaginary(rng).as_quaternion() * v
    c = ContourSpec(I, ((complex(u, v), 0.25), (complex(u, -v), 0.25)), cfg.nodes_per_loop)
    scale = B.frobenius()
    inside = (check_lemma_identity(B, p, c) - B).frobenius() / scale
    outside = check_lemma_identity(B, p + 3.0, c).frobenius() / scale
    return {"lemma.inside": (inside, cfg.eps_q), "lemma.outside": (outside, cfg.eps_q)}


def _riesz_matrix(seed, cfg):
    rng = _rng(seed)
    n = _dim(rng, cfg)
    if seed % 2 == 0:
        return gapped(lambda s: random_unitary(n, s), seed)
    return gapped(lambda s: random_diagonalizable(n, s, cond_max=50.0), seed)


def _g_riesz(seed, cfg):
    A, sp = _riesz_matrix(seed, cfg)
    rng = _rng(seed + 1)
    n, K, N = A.n, len(sp), cfg.nodes_per_loop
    P = {k: riesz_projector(A, [k], N, cfg.plane, sp) for k in range(K)}

    def proj(sel):
        out = QMatrix.zeros(n)
        for k in sel:
            out = out + P[k]
        return out

    sigma = [k for k in range(K) if rng.random() < 0.5] or [0]
    delta = [k for k in range(K) if rng.random() < 0.5] or [K - 1]
    comp = [k for k in range(K) if k not in sigma]
    Ps, Pd = proj(sigma), proj(delta)
    full = proj(range(K))
    enclosing = integrate_left(enclosing_contour(sp, cfg.plane, N), A, spectrum=sp)
    inter = proj(sorted(set(sigma) & set(delta)))
    I = QMatrix.identity(n)
    right = riesz_projector(A, sigma, N, cfg.plane, sp, side="right")
    J = random_unit_imaginary(rng)
    rotated = riesz_projector(A, sigma, N, J, sp)
    return {
        "riesz.idempotent": ((Ps @ Ps - Ps).opnorm(), cfg.eps_q),
        "riesz.commutes": ((A @ Ps - Ps @ A).opnorm(), cfg.eps_q),
        "riesz.full_identity": ((full - I).opnorm(), cfg.eps_q),
        "riesz.empty_zero": (proj([]).opnorm(), cfg.eps_q),
        "riesz.additive": ((enclosing - (Ps + proj(comp))).opnorm(), cfg.eps_q),
        "riesz.multiplicative": ((inter - Ps @ Pd).opnorm(), cfg.eps_q),
        "riesz.right_variant": ((right - Ps).opnorm(), 2 * cfg.eps_q),
        "riesz.plane_independence": ((rotated - Ps).opnorm(), 2 * cfg.eps_q),
    }


def _g_measure(seed, cfg):
    rng = _rng(seed)
    n = _dim(rng, cfg)
    U = random_unitary(n, seed)
    D = decompose(U, cfg.eps_cluster)
    x, y, z = (random_unit_vector(n, rng) for _ in range(3))
    nu = pair_measure(D, x, y)
    recon = max(
        float(np.abs(D.reconstruct() - chi(U)).max()),
        float(np.abs(D.projectors.sum(axis=0) - np.eye(2 * n)).max()),
    )
    Ustar = adjoint(U)
    mom, pos, neg = 0.0, x, x
    for m in range(13):
        mom = max(mom, abs(inner(pos, y) - nu.moment(m)), abs(inner(neg, y) - nu.moment(-m)))
        pos, neg = U @ pos, Ustar @ neg
    pol = polarize(D, x, y).max_abs_diff(nu)
    rep = q_positivity(diag_measure(D, x), cfg.eps_cluster, cfg.eps_psd)
    qpos = max(0.0, -rep.min_eigenvalue, rep.antisymmetry_residual, rep.hermitian_residual)
    a, b = random_scalar(rng, 0.5, 2), random_scalar(rng, 0.5, 2)
    lin = pair_measure(D, x * a + z * b, y).max_abs_diff(pair_measure(D, x, y) * a + pair_measure(D, z, y) * b)
    c = complex(*rng.standard_normal(2))
    cq = Quaternion.from_complex(c)
    conj_lin = pair_measure(D, x, y * cq).max_abs_diff(cq.conj() * nu)
    mass = max(0.0, abs(nu.total()) - x.norm() * y.norm())
    total = abs(nu.total() - inner(x, y))
    r = herglotz_sequence(U, x, 12)
    herm = max(abs(r[12 - k] - r[12 + k].conj()) for k in range(13))
    psd = max(0.0, -positive_definite_check(r, 12, tol=1e-10))
    return {
        "decomposition.reconstruction": (recon, 1e-10),
        "measure.moments": (mom, 1e-9),
        "measure.polarization": (pol, 1e-9),
        "measure.q_positivity": (qpos, cfg.eps_psd),
        "measure.right_linearity": (lin, 1e-9),
        "measure.conjugate_linearity": (conj_lin, 1e-9),
        "measure.mass_bound": (mass, 1e-12),
        "measure.total_pairing": (total, 1e-10),
        "herglotz.hermitian": (herm, 1e-12),
        "herglotz.toeplitz_psd": (psd, cfg.eps_psd),
    }


def _sphere_groups(D, sp):
    return [D.sphere_indices(s) for s in sp]


def _g_pairing(seed, cfg):
    rng = _rng(seed)
    n = _dim(rng, cfg)
    U, sp = gapped(lambda s: random_unitary(n, s), seed)
    D = decompose(U, cfg.eps_cluster)
    groups = _sphere_groups(D, sp)
    pick = lambda: sorted({k for g in groups if rng.random() < 0.5 for k in g})  # noqa: E731
    sigma, tau = pick(), pick()
    Es, Et = sphere_projector_from_E(D, sigma), sphere_projector_from_E(D, tau)
    Ei = sphere_projector_from_E(D, sorted(set(sigma) & set(tau)))
    bridge = max(
        (
            (riesz_projector(U, [k], cfg.nodes_per_loop, cfg.plane, sp) - sphere_projector_from_E(D, g)).opnorm()
            for k, g in enumerate(groups)
        ),
        default=0.0,
    )
    return {
        "pairing.multiplicative": ((Ei - Es @ Et).opnorm(), 1e-9),
        "pairing.commutes": ((Es @ U - U @ Es).opnorm(), 1e-9),
        "bridge.riesz_equals_E": (bridge, 2 * cfg.eps_q),
    }


def _g_selfadjoint(seed, cfg):
    rng = _rng(seed)
    n = _dim(rng, cfg)
    Uc = random_complex_unitary(n, seed)
    Dc = decompose(Uc, cfg.eps_cluster)
    xm = QVector(rng.standard_normal(n) + 1j * rng.standard_normal(n))
    _, w2 = diag_measure(Dc, xm).split()
    complex_case = float(np.abs(w2).max(initial=0.0)) if complex_preserving_check(Uc) else math.inf
    Uq = random_unitary(n, seed)
    _, w2q = diag_measure(decompose(Uq, cfg.eps_cluster), QVector(np.eye(n)[0])).split()
    witness = float(np.abs(w2q).max(initial=0.0))
    ok = (not complex_preserving_check(Uq)) and witness > 1e-6
    th = 0.9
    D1 = decompose(QMatrix.scalar(exp_unit(UNIT_I, th), 1))
    one, jv = QVector.from_quaternions([1.0]), QVector.from_quaternions([QJ])
    nxy, nyx = pair_measure(D1, one, jv), pair_measure(D1, jv, one)
    gap = max(abs(nxy.weight(k) - nyx.weight(k).conj()) for k in range(len(nxy)))
    return {
        "selfadjoint.complex_case": (complex_case, 1e-10),
        "selfadjoint.quaternionic_case": (0.0 if ok else 1.0, 0.0),
        "measure.conjugate_asymmetry_witness": (0.0 if gap > 1e-6 else 1.0, 0.0),
    }


def _g_calculus(seed, cfg):
    rng = _rng(seed)
    n = _dim(rng, cfg)
    U = random_unitary(n, seed)
    D = decompose(U, cfg.eps_cluster)
    deg = int(rng.integers(0, 9))
    P = TrigPoly.real(rng.standard_normal(2 * deg + 1))
    horner = (funcalc_spectral(P.as_slice_function(), D) - funcalc_trigpoly(P, U)).opnorm()
    inv = (funcalc_spectral(builtin("inverse"), D) - adjoint(U)).opnorm()
    rows = funcalc_converge(builtin("abs_cos"), U, [4, 16, 64], D)
    bound = max(r.operator_error - r.angle_sup_error for r in rows)
    grid = [r.grid_sup_error for r in rows]
    mono = max(max(b - a for a, b in zip(grid, grid[1:])), 0.0)
    m = int(rng.integers(0, 5))
    coeffs = [0.0] * m + [1.0]
    Um = QMatrix.identity(n)
    for _ in range(m):
        Um = U @ Um
    spec = funcalc_spectral(TrigPoly.from_pairs([(m, 1.0)]).as_slice_function(), D)
    cont = funcalc_contour(coeffs, U, enclosing_contour(s_spectrum(U), cfg.plane, cfg.nodes_per_loop))
    svc = max((spec - Um).opnorm(), (cont - Um).opnorm())
    f, g = builtin("exp_scaled"), builtin("square")
    mult = (funcalc_spectral(f, D) @ funcalc_spectral(g, D) - funcalc_spectral(f.product(g), D)).opnorm()
    return {
        "calculus.spectral_vs_horner": (horner, 1e-10),
        "calculus.inverse_adjoint": (inv, 1e-10),
        "calculus.weierstrass_bound": (max(bound, 0.0), 1e-9),
        "calculus.weierstrass_monotone": (mono, 1e-9),
        "calculus.spectral_vs_contour": (svc, 1e-9),
        "calculus.multiplicative": (mult, 1e-9),
    }


GROUPS: tuple = (
    (_g_resolvent, (
        "resolvent.equation.first_form",
        "resolvent.equation.second_form",
        "resolvent.defining_product",
        "resolvent.kernel_consistency",
    )),
    (_g_unit_sphere, ("spectrum.unit_sphere",)),
    (_g_lemma, ("lemma.inside", "lemma.outside")),
    (_g_riesz, (
        "riesz.idempotent",
        "riesz.commutes",
        "riesz.full_identity",
        "riesz.empty_zero",
        "riesz.additive",
        "riesz.multiplicative",
        "riesz.right_variant",
        "riesz.plane_independence",
    )),
    (_g_measure, (
        "decomposition.reconstruction",
        "measure.moments",
        "measure.polarization",
        "measure.q_positivity",
        "measure.right_linearity",
        "measure.conjugate_linearity",
        "measure.mass_bound",
        "measure.total_pairing",
        "herglotz.hermitian",
        "herglotz.toeplitz_psd",
    )),
    (_g_pairing, ("pairing.multiplicative", "pairing.commutes", "bridge.riesz_equals_E")),
    (_g_selfadjoint, (
        "selfadjoint.complex_case",
        "selfadjoint.quaternionic_case",
        "measure.conjugate_asymmetry_witness",
    )),
    (_g_calculus, (
        "calculus.spectral_vs_horner",
        "calculus.inverse_adjoint",
        "calculus.weierstrass_bound",
        "calculus.weierstrass_monotone",
        "calculus.spectral_vs_contour",
        "calculus.multiplicative",
    )),
)

THEOREM_IDS: tuple = tuple(t for _, ids in GROUPS for t in ids)


def instance_seed(cfg: RunConfig, group: int, i: int) -> int:
    return cfg.seed * 100003 + group * 1009 + i


def verify_all(cfg: RunConfig | None = None) -> list[VerificationRecord]:
    """Run every group ``cfg.instances`` times; one record per (id, instance).

    Instances run serially in a fixed order, so output is reproducible.
    """
    cfg = RunConfig() if cfg is None else cfg
    records = []
    for g, (fn, ids) in enumerate(GROUPS):
        for i in range(cfg.instances):
            seed = instance_seed(cfg, g, i)
            try:
                res = fn(seed, cfg)
            except Exception:  # failures become records
                res = {t: (math.inf, 0.0) for t in ids}
            for tid, (r, tol) in res.items():
                records.append(VerificationRecord(tid, seed, float(r), float(tol)))
    return records


@dataclass
class Report:
    groups: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(g["pass"] for g in self.groups)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def to_json(self) -> list:
        return self.groups

    def text(self) -> str:
        lines = []
        for g in self.groups:
            flag = "PASS" if g["pass"] else "FAIL"
            lines.append(
                f"{flag}  {g['theorem']:<40} n={g['instances']:<3} "
                f"max_residual={g['max_residual']:.3e}  tol={g['tolerance']:.1e}"
            )
        total = len(self.groups)
        bad = sum(not g["pass"] for g in self.groups)
        lines.append(f"{total - bad}/{total} theorem groups pass")
        return "\n".join(lines)


def report(records) -> Report:
    """Group by theorem id (sorted) and keep the worst residual per group."""
    by: dict[str, list[VerificationRecord]] = {}
    for r in records:
        by.setdefault(r.theorem_id, []).append(r)
    groups = []
    for tid in sorted(by):
        rs = by[tid]
        groups.append(
            {
                "theorem": tid,
                "instances": len(rs),
                "max_residual": max(r.residual for r in rs),
                "tolerance": min(r.tolerance for r in rs),
                "pass": all(r.passed for r in rs),
            }
        )
    return Report(groups)
