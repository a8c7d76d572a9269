"""
Command-line interface.

    qspec [global flags] <command> [args]

Exit codes: 0 success (and, for ``verify``, every record passes), 1 some
verification record failed, 2 configuration, input or numerical error.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import io
from .contour import projector_residuals, riesz_projector
from .errors import QSpecError
from .slicefun import BUILTINS, TrigPoly, builtin, funcalc_spectral, funcalc_trigpoly
from .spectral import decompose, herglotz_sequence, pair_measure, positive_definite_check, q_positivity
from .sspectrum import check_resolvent_equation, s_resolvent_left, s_resolvent_right, s_spectrum
from .verify import RunConfig, report, verify_all

_TOLS = ("q", "psd", "sym", "cluster", "spec", "slice")
_DEFAULTS = {"q": 1e-7, "psd": 1e-10, "sym": 1e-10, "cluster": 1e-8, "spec": 1e-8, "slice": 1e-9}


def _add_common(p: argparse.ArgumentParser, sub: bool):
    # on subcommands, absent flags must not overwrite values given before the command
    d = (lambda v: argparse.SUPPRESS) if sub else (lambda v: v)
    p.add_argument("--seed", type=int, default=d(0))
    p.add_argument("--nodes", type=int, default=d(256), help="quadrature nodes per loop")
    p.add_argument("--plane", default=d("1,0,0"), help="imaginary unit x,y,z of the slice")
    for t in _TOLS:
        p.add_argument(f"--tol-{t}", type=float, default=d(_DEFAULTS[t]), dest=f"tol_{t}")
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", default=d(False), help="compact JSON output")
    fmt.add_argument("--pretty", action="store_true", default=d(False), help="indented JSON output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qspec", description="Quaternionic spectral toolkit", allow_abbrev=False
    )
    _add_common(parser, sub=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def cmd(name, help_):
        p = sub.add_parser(name, help=help_, allow_abbrev=False)
        _add_common(p, sub=True)
        return p

    p = cmd("sspec", "S-spectrum as eigenspheres")
    p.add_argument("matrix")
    p = cmd("resolvent", "left or right S-resolvent operator at s")
    p.add_argument("matrix")
    p.add_argument("--side", choices=("left", "right"), default="left")
    p.add_argument("--s", required=True, help="w,x,y,z")
    p = cmd("resolvent-check", "residuals of both forms of the S-resolvent equation")
    p.add_argument("matrix")
    p.add_argument("--s", required=True)
    p.add_argument("--p", required=True)
    p = cmd("riesz", "Riesz projector of selected spheres")
    p.add_argument("matrix")
    p.add_argument("--select", required=True, help="comma-separated sphere indices")
    p = cmd("decompose", "eigen-angles of a unitary matrix")
    p.add_argument("matrix")
    p = cmd("measure", "atomic quaternion measure of (x, y)")
    p.add_argument("matrix")
    p.add_argument("--x", required=True)
    p.add_argument("--y")
    p = cmd("herglotz", "moment sequence and Toeplitz positivity")
    p.add_argument("matrix")
    p.add_argument("--x", required=True)
    p.add_argument("--N", type=int, default=12)
    p = cmd("funcalc", "f(U) by the spectral theorem")
    p.add_argument("matrix")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--fn", choices=sorted(BUILTINS))
    g.add_argument("--trig", help="JSON file [[m, [w,x,y,z]], ...]")
    p = cmd("verify", "run the verification suite")
    p.add_argument("--instances", type=int, default=2)
    p.add_argument("--dim-cap", type=int, default=4)
    return parser


def _config(args) -> RunConfig:
    return RunConfig(
        seed=args.seed,
        nodes_per_loop=args.nodes,
        eps_q=args.tol_q,
        eps_psd=args.tol_psd,
        eps_sym=args.tol_sym,
        eps_cluster=args.tol_cluster,
        eps_spec=args.tol_spec,
        eps_slice=args.tol_slice,
        plane=io.parse_unit(args.plane),
        dim_cap=getattr(args, "dim_cap", 4),
        instances=getattr(args, "instances", 2),
    )


def _run(args, cfg: RunConfig):
    """Return ``(payload, exit_code)``."""
    c = args.command
    if c == "verify":
        rep = report(verify_all(cfg))
        return rep, rep.exit_code
    A = io.load_matrix(args.matrix)
    if c == "sspec":
        return s_spectrum(A, cfg.eps_cluster * (1.0 + A.frobenius())).to_json(), 0
    if c == "resolvent":
        fn = s_resolvent_left if args.side == "left" else s_resolvent_right
        return fn(io.parse_quaternion(args.s), A, eps_spec=cfg.eps_spec).to_json(), 0
    if c == "resolvent-check":
        r1, r2 = check_resolvent_equation(io.parse_quaternion(args.s), io.parse_quaternion(args.p), A, relative=True)
        return {"first_form": r1, "second_form": r2}, 0
    if c == "riesz":
        P = riesz_projector(A, io.parse_selection(args.select), cfg.nodes_per_loop, cfg.plane)
        return {**P.to_json(), "residuals": projector_residuals(A, P)}, 0
    if c == "decompose":
        return decompose(A, cfg.eps_cluster).to_json(), 0
    if c == "measure":
        D = decompose(A, cfg.eps_cluster)
        x = io.load_vector(args.x)
        y = io.load_vector(args.y) if args.y else x
        nu = pair_measure(D, x, y)
        out = nu.to_json()
        out["q_positive"] = q_positivity(nu, cfg.eps_cluster, cfg.eps_psd).verdict
        return out, 0
    if c == "herglotz":
        r = herglotz_sequence(A, io.load_vector(args.x), args.N)
        lam = positive_definite_check(r, args.N, tol=1e-10)
        return {
            "n": list(range(-args.N, args.N + 1)),
            "sequence": [q.to_json() for q in r],
            "min_eigenvalue": lam,
            "psd": lam >= -cfg.eps_psd,
        }, 0
    if c == "funcalc":
        if args.fn:
            return funcalc_spectral(builtin(args.fn), decompose(A, cfg.eps_cluster), cfg.eps_sym).to_json(), 0
        pairs = io.read_json(args.trig)
        try:
            P = TrigPoly.from_pairs([(m, a) for m, a in pairs])
        except (TypeError, ValueError) as exc:
            raise QSpecError(f"malformed trig coefficients: {exc}") from None
        return funcalc_trigpoly(P, A).to_json(), 0
    raise QSpecError(f"unknown command {c}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
        payload, code = _run(args, cfg)
    except (QSpecError, ValueError, KeyError, np.linalg.LinAlgError) as exc:
        print(f"qspec: error: {exc}", file=sys.stderr)
        return 2
    if args.command == "verify" and not (args.json or args.pretty):
        print(payload.text())
    else:
        data = payload.to_json() if hasattr(payload, "to_json") else payload
        print(io.dumps(data, pretty=args.pretty))
    return code


if __name__ == "__main__":
    sys.exit(main())
