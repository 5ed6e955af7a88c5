"""Command-line entry point: ``s3flat gen|verify|ode|reconstruct``.

Exit codes: 0 success, 1 a verification check failed (the report is still
written), 2 invalid parameters or input data, 3 no usable projection pole.
"""
import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .construct import (bianchi_spivak, check_radius, constant_phi_profile, helicoidal_patch,
                        hopf_cylinder_patch, orbit_profile, reconstruct, theorem1_patch)
from .curves import curve_ca, curve_cb
from .errors import DomainError, PoleFailure, S3FlatError
from .forms import Grid, grid_values, hopf_angle
from .mesh import WRITERS, grid_mesh
from .profile_ode import DEFAULT_DELTA, ProfileSolution, integrate
from .s3core import ONE
from .verify import SCHEMA, SUITES, ode_grid

EXIT_OK, EXIT_CHECK, EXIT_PARAM, EXIT_POLE = 0, 1, 2, 3
KINDS = ("theorem1", "bianchi-spivak", "hopf-cylinder", "helicoidal", "ode")
RECONSTRUCT_TOL = 1e-6


class ParameterError(DomainError):
    pass


def parse_grid(text):
    try:
        m, n = (int(x) for x in text.lower().split("x"))
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like MxN, got {text!r}") from None
    if m < 2 or n < 2:
        raise argparse.ArgumentTypeError("grid needs at least 2 nodes per direction")
    return m, n


def parse_pole(text):
    try:
        q = np.array([float(x) for x in text.split(",")])
    except ValueError:
        raise argparse.ArgumentTypeError(f"pole must be w,x,y,z, got {text!r}") from None
    if q.shape != (4,) or not np.linalg.norm(q) > 0:
        raise argparse.ArgumentTypeError("pole needs four components, not all zero")
    return q / np.linalg.norm(q)


def _surface_args(p, default_grid):
    p.add_argument("--kind", choices=KINDS, default="theorem1")
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=float)
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--phi0", type=float, default=math.pi / 4)
    p.add_argument("--dphi0", type=float, default=0.1)
    p.add_argument("--theta-scale", type=float, default=1.0,
                   help="helicoidal kind: scale of theta'(s); 1 keeps arc length")
    p.add_argument("--s-max", type=float, default=1.0)
    p.add_argument("--h", type=float, default=1e-3)
    p.add_argument("--grid", type=parse_grid, default=default_grid)
    for name in ("umin", "umax", "vmin", "vmax"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(prog="s3flat", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"s3flat {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a stereographically projected mesh")
    _surface_args(gen, (64, 64))
    gen.add_argument("--pole", type=parse_pole, default=-ONE)
    gen.add_argument("--out", required=True)
    gen.add_argument("--format", choices=sorted(WRITERS))

    ver = sub.add_parser("verify", help="run the verification suite")
    _surface_args(ver, None)
    ver.add_argument("--report")
    ver.add_argument("--timestamp", action="store_true", help="add a timestamp to the report")

    ode = sub.add_parser("ode", help="integrate the flatness equation of a helicoidal profile")
    ode.add_argument("--alpha", type=float, required=True)
    ode.add_argument("--beta", type=float, required=True)
    ode.add_argument("--phi0", type=float, required=True)
    ode.add_argument("--dphi0", type=float, required=True)
    ode.add_argument("--s-max", type=float, default=1.0)
    ode.add_argument("--h", type=float, default=1e-3)
    ode.add_argument("--delta", type=float, default=DEFAULT_DELTA)
    ode.add_argument("--theta-sign", type=float, choices=(-1.0, 1.0), default=1.0)
    ode.add_argument("--out", help="CSV dump with columns s,phi,dphi,theta")

    rec = sub.add_parser("reconstruct", help="recover (a, b, nu) from a flat helicoidal profile")
    rec.add_argument("--alpha", type=float)
    rec.add_argument("--beta", type=float, required=True)
    src = rec.add_mutually_exclusive_group(required=True)
    src.add_argument("--profile", help="CSV written by 's3flat ode'")
    src.add_argument("--orbit", type=float, nargs=2, metavar=("A", "B"),
                     help="profile read off the orbits of the family member (A, B)")
    src.add_argument("--phi0", type=float, help="integrate from phi0 (with --dphi0)")
    rec.add_argument("--dphi0", type=float)
    rec.add_argument("--s-max", type=float, default=1.0)
    rec.add_argument("--h", type=float, default=1e-3)
    rec.add_argument("--report")
    return parser


def _require(args, *names):
    for name in names:
        if getattr(args, name) is None:
            raise ParameterError(f"--kind {args.kind} needs --{name.replace('_', '-')}")


def _box(args, default):
    m, n = args.grid or (default.m, default.n)
    vals = [getattr(args, k) for k in ("umin", "umax", "vmin", "vmax")]
    base = (default.umin, default.umax, default.vmin, default.vmax)
    umin, umax, vmin, vmax = (b if v is None else v for v, b in zip(vals, base))
    if not (umin < umax and vmin < vmax):
        raise ParameterError("grid bounds need umin < umax and vmin < vmax")
    return Grid(umin, umax, vmin, vmax, m, n)


def surface(args, default_n=21):
    """(patch, grid, params) for the surface options of gen and verify."""
    square = Grid.square(math.pi, default_n)
    kind = args.kind
    if kind in ("theorem1", "bianchi-spivak"):
        _require(args, "a", "b")
        check_radius("a", args.a)
        check_radius("b", args.b)
        if kind == "theorem1":
            patch = theorem1_patch(args.a, args.b)
        else:
            patch = bianchi_spivak(curve_ca(args.a), curve_cb(args.b))
        return patch, _box(args, square), {"a": args.a, "b": args.b}
    if kind == "hopf-cylinder":
        _require(args, "b")
        check_radius("b", args.b)
        return hopf_cylinder_patch(args.b)[0], _box(args, square), {"b": args.b}
    _require(args, "alpha", "beta")
    if kind == "helicoidal":
        grid = _box(args, square)
        curve = constant_phi_profile(args.phi0, args.theta_scale, (grid.vmin, grid.vmax))
        patch = helicoidal_patch(args.alpha, args.beta, curve, (grid.vmin, grid.vmax))
        return patch, grid, {"alpha": args.alpha, "beta": args.beta, "phi0": args.phi0,
                             "theta_scale": args.theta_scale}
    sol = integrate(args.alpha, args.beta, args.phi0, args.dphi0, args.s_max, args.h)
    grid = ode_grid(sol, _box(args, Grid(-math.pi, math.pi, -math.inf, math.inf,
                                         default_n, default_n)), margin=0.0)
    return helicoidal_patch(args.alpha, args.beta, sol), grid, {
        "alpha": args.alpha, "beta": args.beta, "phi0": args.phi0, "dphi0": args.dphi0,
        "s_max": args.s_max, "h": args.h, "s_range": list(sol.s_range)}


def cmd_gen(args):
    patch, grid, params = surface(args, default_n=64)
    fmt = args.format or ("ply" if args.out.lower().endswith(".ply") else "obj")
    mesh = grid_mesh(patch, grid, args.pole, {"kind": args.kind, **params})
    WRITERS[fmt](mesh, args.out)
    cosines = grid_values(lambda u, v: hopf_angle(patch, u, v), grid)
    summary = {"kind": args.kind, "out": args.out, "format": fmt,
               "vertices": int(len(mesh.vertices)), "faces": int(len(mesh.faces)),
               "pole": mesh.provenance["pole"], "params": params,
               "hopf_angle": {"mean": float(np.mean(cosines)), "std": float(np.std(cosines)),
                              "min": float(np.min(cosines)), "max": float(np.max(cosines))}}
    print(json.dumps(summary, sort_keys=True))
    return EXIT_OK


def cmd_verify(args):
    kind = args.kind
    _, grid, _ = surface(args, default_n=21 if kind in ("theorem1", "bianchi-spivak",
                                                         "hopf-cylinder") else 15)
    if kind in ("theorem1", "bianchi-spivak"):
        rep = SUITES[kind](args.a, args.b, grid, beta=args.beta or 1.0, seed=args.seed)
    elif kind == "hopf-cylinder":
        rep = SUITES[kind](args.b, grid, beta=args.beta or 1.0, seed=args.seed)
    elif kind == "helicoidal":
        rep = SUITES[kind](args.alpha, args.beta, args.phi0, args.theta_scale, grid, seed=args.seed)
    else:
        rep = SUITES[kind](args.alpha, args.beta, args.phi0, args.dphi0, args.s_max, args.h,
                           grid, seed=args.seed)
    for line in rep.lines():
        print(line)
    print(f"{'PASS' if rep.passed else 'FAIL'} overall ({kind})")
    if args.report:
        rep.write(args.report, timestamp=args.timestamp)
    return EXIT_OK if rep.passed else EXIT_CHECK


def cmd_ode(args):
    sol = integrate(args.alpha, args.beta, args.phi0, args.dphi0, args.s_max, args.h,
                    delta=args.delta, theta_sign=args.theta_sign)
    if args.out:
        sol.to_csv(args.out)
    print(json.dumps({"alpha": args.alpha, "beta": args.beta, "samples": len(sol),
                      "s_range": list(sol.s_range), "truncated": sol.truncated,
                      "arc_length_residual": sol.arc_length_residual(), "out": args.out},
                     sort_keys=True))
    return EXIT_OK


def _profile(args):
    if args.orbit is not None:
        a, b = args.orbit
        sol = orbit_profile(a, b, args.beta, args.s_max, args.h)
        if args.alpha is not None and not math.isclose(args.alpha, sol.alpha, rel_tol=1e-12,
                                                       abs_tol=1e-12):
            raise ParameterError(f"--alpha {args.alpha} disagrees with the orbit rate {sol.alpha}")
        return sol
    if args.alpha is None:
        raise ParameterError("--alpha is required with --profile and --phi0")
    if args.profile is not None:
        return ProfileSolution.from_csv(args.profile, args.alpha, args.beta)
    if args.dphi0 is None:
        raise ParameterError("--phi0 needs --dphi0")
    return integrate(args.alpha, args.beta, args.phi0, args.dphi0, args.s_max, args.h)


def cmd_reconstruct(args):
    sol = _profile(args)
    res = reconstruct(sol.alpha, sol.beta, sol)
    residuals = {k: float(v) for k, v in res.residual_report.items() if k != "nu_stddev"}
    ok = all(v <= RECONSTRUCT_TOL for v in residuals.values())
    out = {"schema": SCHEMA, "tool": "s3flat", "version": __version__,
           "inputs": {"alpha": sol.alpha, "beta": sol.beta, "s_range": list(sol.s_range)},
           "a": res.a, "b": res.b, "nu": res.nu, "cos_nu": math.cos(res.nu),
           "nu_stddev": res.nu_stddev, "relabeled": res.swapped,
           "residuals": residuals, "tolerance": RECONSTRUCT_TOL, "pass": ok}
    print(f"a = {res.a:.12g}")
    print(f"b = {res.b:.12g}")
    print(f"nu = {res.nu:.12g} (cos nu = {math.cos(res.nu):.12g})")
    print(f"cos nu stddev along the profile = {res.nu_stddev:.3e}")
    for k, v in residuals.items():
        print(f"{'PASS' if v <= RECONSTRUCT_TOL else 'FAIL'} {k}: {v:.3e}")
    if args.report:
        with open(args.report, "w") as fh:
            fh.write(json.dumps(out, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if ok else EXIT_CHECK


COMMANDS = {"gen": cmd_gen, "verify": cmd_verify, "ode": cmd_ode, "reconstruct": cmd_reconstruct}


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except PoleFailure as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_POLE
    except (S3FlatError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PARAM


if __name__ == "__main__":
    sys.exit(main())
