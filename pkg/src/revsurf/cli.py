"""Command-line interface.

Subcommands: validate, check, curvature, embed, presets. Exit codes are a
stable contract: 0 = success / embeddable, 1 = negative mathematical
verdict (validation failure, not embeddable), 2 = usage, parse, or I/O
error. JSON mode prints only JSON to stdout; diagnostics go to stderr.
"""

import argparse
import json
import math
import sys

from . import __version__
from .embeddability import EMBEDDABLE, full_report
from .embedding import generate_mesh, verify_induced_metric
from .errors import NotEmbeddableError, RevsurfError
from .curvature import write_curvature_csv
from .mesh import write_obj, write_stl
from .profile import Profile, preset, preset_catalog, read_samples_csv

__all__ = ["main", "build_parser"]


class _UsageError(RevsurfError):
    pass


def parse_length_literal(text):
    """Length/basepoint values accept "pi", "<k>pi", or plain decimals."""
    t = text.strip().lower()
    try:
        if t.endswith("pi"):
            head = t[:-2].strip()
            factor = 1.0 if head == "" else float(head)
            return factor * math.pi
        return float(t)
    except ValueError:
        raise _UsageError(f"cannot parse length value {text!r}") from None


def _add_source_args(sp):
    group = sp.add_argument_group("profile source (exactly one)")
    group.add_argument("--preset", metavar="NAME",
                       help="built-in profile, e.g. sphere, bump:0.5, dumbbell:0.25")
    group.add_argument("--profile", metavar="EXPR",
                       help="closed-form expression in s, e.g. 'sin(s)'")
    group.add_argument("--length", metavar="L",
                       help="domain length for --profile (accepts 'pi', '2pi', decimals)")
    group.add_argument("--samples-file", metavar="PATH",
                       help="CSV file with header 's,a', one knot per row")


def _resolve_profile(args):
    sources = [args.preset is not None, args.profile is not None,
               args.samples_file is not None]
    if sum(sources) != 1:
        raise _UsageError("specify exactly one of --preset, --profile, --samples-file")
    if args.preset is not None:
        return preset(args.preset)
    if args.profile is not None:
        if args.length is None:
            raise _UsageError("--profile requires --length")
        return Profile.from_expression(args.profile, parse_length_literal(args.length))
    knots, values = read_samples_csv(args.samples_file)
    return Profile.from_samples(knots, values)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="revsurf",
        description="Decide and construct isometric embeddings of rotationally "
                    "symmetric metrics on the 2-sphere.")
    parser.add_argument("--version", action="version", version=f"revsurf {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", help="check the smooth-closure boundary conditions")
    _add_source_args(sp)
    sp.add_argument("--tol", type=float, default=1e-8)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("check", help="decide embeddability and report all criteria")
    _add_source_args(sp)
    sp.add_argument("--grid", type=int, default=4096)
    sp.add_argument("--tol", type=float, default=1e-9)
    sp.add_argument("--json", action="store_true")

    sp = sub.add_parser("curvature", help="dump s, a, a', K samples as CSV")
    _add_source_args(sp)
    sp.add_argument("--samples", type=int, default=256, metavar="N")
    sp.add_argument("--out", metavar="PATH", help="output file (default stdout)")

    sp = sub.add_parser("embed", help="export the embedded surface as a mesh")
    _add_source_args(sp)
    sp.add_argument("--ns", type=int, default=128)
    sp.add_argument("--ntheta", type=int, default=64)
    sp.add_argument("--c", default="0", metavar="C",
                    help="basepoint of the height integral (accepts 'pi' literals)")
    sp.add_argument("--out", metavar="PATH", required=True,
                    help="output mesh, format from extension (.obj or .stl)")

    sub.add_parser("presets", help="list built-in profiles")
    return parser


def _cmd_validate(args):
    p = _resolve_profile(args)
    report = p.validate(args.tol)
    if args.json:
        print(json.dumps({
            "ok": report.ok,
            "tol": report.tol,
            "residuals": {
                "a0": report.residual_a0,
                "aL": report.residual_aL,
                "slope0": report.residual_slope0,
                "slopeL": report.residual_slopeL,
            },
            "interior_min": {"value": report.interior_min, "at_s": report.interior_min_s},
            "grid_n": report.grid_n,
        }, indent=2))
    else:
        def line(name, ok, detail):
            print(f"{'PASS' if ok else 'FAIL'}  {name}: {detail}")
        line("a(0) = 0", report.residual_a0 <= report.tol, f"residual {report.residual_a0:.3e}")
        line("a(L) = 0", report.residual_aL <= report.tol, f"residual {report.residual_aL:.3e}")
        line("a'(0) = 1", report.residual_slope0 <= report.tol, f"residual {report.residual_slope0:.3e}")
        line("a'(L) = -1", report.residual_slopeL <= report.tol, f"residual {report.residual_slopeL:.3e}")
        line("a > 0 on (0, L)", report.interior_positive_ok,
             f"min {report.interior_min:.6e} at s = {report.interior_min_s:.6g} "
             f"(grid {report.grid_n})")
    return 0 if report.ok else 1


def _cmd_check(args):
    p = _resolve_profile(args)
    vreport = p.validate()
    if not vreport.ok:
        raise _UsageError("profile fails validation; run 'revsurf validate' for details")
    report = full_report(p, grid_n=args.grid, tol=args.tol)
    if args.json:
        print(report.to_json())
    else:
        for ln in report.summary_lines():
            print(ln)
    return 0 if report.verdict == EMBEDDABLE else 1


def _cmd_curvature(args):
    p = _resolve_profile(args)
    if args.samples < 2:
        raise _UsageError("--samples must be at least 2")
    if args.out is None:
        write_curvature_csv(p, args.samples, sys.stdout)
    else:
        write_curvature_csv(p, args.samples, args.out)
    return 0


def _cmd_embed(args):
    p = _resolve_profile(args)
    out = args.out
    lowered = out.lower()
    if lowered.endswith(".obj"):
        writer = write_obj
    elif lowered.endswith(".stl"):
        writer = write_stl
    else:
        raise _UsageError(f"unsupported mesh format for {out!r} (use .obj or .stl)")
    c = parse_length_literal(args.c)
    if not 0.0 <= c <= p.length:
        raise _UsageError(f"--c must lie in [0, L] = [0, {p.length:.6g}]")

    report = full_report(p)
    if report.verdict != EMBEDDABLE:
        print(f"not embeddable: sup |a'| = {report.sup_a_prime:.6g} > 1 "
              f"at s = {report.sup_a_prime_s:.6g}", file=sys.stderr)
        return 1
    mesh = generate_mesh(p, args.ns, args.ntheta, c)
    writer(mesh, out)
    metric = verify_induced_metric(p, c)
    print(f"wrote {out}: {mesh.n_vertices} vertices, {mesh.n_triangles} triangles")
    print(f"induced metric check (h = {metric.h:g}, pole band {metric.pole_band:.3g}, "
          f"radicand guard {metric.radicand_guard:g}):")
    print(f"  max |E - 1|   = {metric.max_e_error:.3e}")
    print(f"  max |F|       = {metric.max_f_error:.3e}")
    print(f"  max |G - a^2| = {metric.max_g_error:.3e}")
    return 0


def _cmd_presets(_args):
    for name, description in preset_catalog():
        print(f"{name:<18s} {description}")
    return 0


_COMMANDS = {
    "validate": _cmd_validate,
    "check": _cmd_check,
    "curvature": _cmd_curvature,
    "embed": _cmd_embed,
    "presets": _cmd_presets,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:        # argparse exits 2 on usage errors, 0 on --help
        return exc.code
    try:
        return _COMMANDS[args.command](args)
    except NotEmbeddableError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except RevsurfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
