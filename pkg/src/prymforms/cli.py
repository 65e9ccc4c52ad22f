"""Command-line entry point.

Every command prints JSON on stdout (``svg`` prints SVG) and exits 0.  Domain
errors exit 2 with ``{"error": ..., "message": ...}``; usage errors exit 64.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import degeneration as dg
from . import dynamics as dyn
from . import prototypes as pr
from .periods import check_eigenform
from .quadfield import QF, parse_qf
from .surface import CylSurface, from_json_text, to_json, validate
from .svg import render_svg

EXIT_OK, EXIT_DOMAIN, EXIT_USAGE = 0, 2, 64
FAMILIES = ("three-tori", "h2")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


# argument helpers -------------------------------------------------------------------

def _load(path: str) -> CylSurface:
    try:
        text = Path(path).read_text() if path != "-" else sys.stdin.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return from_json_text(text)


def _proto(text: str, family: str):
    try:
        return pr.parse_proto(text, family)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _vec(text: str, D: int) -> tuple[QF, QF]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"expected 'x,y', got {text!r}")
    return parse_qf(parts[0], D), parse_qf(parts[1], D)


def _pair(text: str | None):
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"expected 'P,Q', got {text!r}")
    return tuple(parts)


def _lattices_json(lattices):
    return [[[str(x) for x in vec] for vec in lat] for lat in lattices]


# commands -----------------------------------------------------------------------------

def cmd_enum_proto(args):
    fn = pr.enumerate_three_tori if args.family == "three-tori" else pr.enumerate_h2_splitting
    return [{"proto": list(p.astuple()), "disc": p.disc, "lambda": str(p.lam)} for p in fn(args.D)]


def cmd_build(args):
    p = _proto(args.proto, args.family)
    if args.family == "three-tori":
        if args.mark is not None:
            raise UsageError("--mark applies to the h2 family only")
        x = parse_qf(args.slit, p.disc)
        X = pr.build_three_tori(p, (x, 0))
        if isinstance(X, pr.TorusTriple):
            return {"tag": X.tag, "disc": X.disc, "proto": list(p.astuple()),
                    "lattices": _lattices_json(X.lattices)}
        return to_json(X)
    X = pr.build_h2_surface(p)
    if args.mark is not None:
        kind, _, where = args.mark.partition(":")
        if (kind, where) not in pr.weierstrass_sites(X):
            raise UsageError(f"unknown Weierstrass site {args.mark!r}; "
                             f"choose from {[':'.join(s) for s in pr.weierstrass_sites(X)]}")
        X = pr.mark_weierstrass_point(X, (kind, where))
    return to_json(X)


def cmd_decompose(args):
    X = _load(args.surface)
    dx, dy = _vec(args.direction, X.disc)
    return to_json(dyn.redecompose(X, dyn.Direction(dx, dy), args.bound))


def cmd_deform(args):
    X = _load(args.surface)
    v = (parse_qf(args.x, X.disc), parse_qf(args.y, X.disc))
    return to_json(dyn.kernel_deform(X, v, _pair(args.pair)))


def cmd_horocycle(args):
    X = _load(args.surface)
    return to_json(dyn.horocycle(X, parse_qf(args.s, X.disc)))


def cmd_interval(args):
    X = _load(args.surface)
    lo, hi = dg.kernel_interval(X, _pair(args.pair))
    return {"min": str(lo), "max": str(hi)}


def cmd_collapse(args):
    X = _load(args.surface)
    lim = dg.classify_limit(X, args.endpoint, _pair(args.pair))
    out = {"kind": lim.kind.value, "parameter": str(lim.parameter), "vanishing": list(lim.vanishing)}
    if lim.surface is not None:
        out["surface"] = to_json(lim.surface)
    if lim.lattices is not None:
        out["lattices"] = _lattices_json(lim.lattices)
        out["proto"] = list(lim.proto.astuple()) if lim.proto is not None else None
    if lim.disc is not None:
        out["disc"] = lim.disc
        out["source_disc"] = lim.source_disc
    return out


def cmd_cover(args):
    p = _proto(args.proto, "h2")
    X, d = pr.build_double_cover(p, args.model)
    return {"disc": d, "surface": to_json(X)}


def cmd_obstruct(args):
    p = _proto(args.proto, "three-tori")
    o = dg.veech_obstruction(p)
    out = {
        "proto": list(p.astuple()),
        "disc": p.disc,
        "beta": str(o.beta),
        "beta_prime": str(o.beta_prime),
        "R": str(o.R),
        "R_prime": str(o.R_prime),
        "s2": str(o.s2),
        "s1_bound": str(o.s1_bound),
        "threshold": str(o.threshold),
        "approx": {"s2": o.s2.approx(), "s1_bound": o.s1_bound.approx()},
    }
    if args.s is not None:
        out["verdict"] = o.verdict(parse_qf(args.s, p.disc))
    return out


def cmd_check(args):
    X = _load(args.surface)
    errors = validate(X)
    out = {"valid": not errors, "errors": errors, "tag": X.tag}
    p = X.periods
    if p is None or p.endo is None:
        out["eigenform"] = None
        return out
    lam = check_eigenform(p.endo, p)
    out["eigenform"] = lam is not None
    if lam is not None:
        out["lambda"] = str(lam)
    return out


def cmd_svg(args):
    X = _load(args.surface)
    text = render_svg(X, Fraction(args.scale))
    if args.out:
        Path(args.out).write_text(text)
        return None
    return text


# parser --------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="prymforms", description="Exact computations with Prym eigenform surfaces.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("enum-proto", help="list prototypes of a discriminant")
    s.add_argument("family", choices=FAMILIES)
    s.add_argument("D", type=int)
    s.set_defaults(fn=cmd_enum_proto)

    s = sub.add_parser("build", help="surface of a prototype")
    s.add_argument("family", choices=FAMILIES)
    s.add_argument("proto", help="w,h,t,e (optionally followed by :D)")
    s.add_argument("--slit", default="0", help="horizontal slit length for three-tori (0 gives the torus triple)")
    s.add_argument("--mark", help="Weierstrass site kind:name for h2, e.g. sc:c or cyl:C1/0")
    s.set_defaults(fn=cmd_build)

    s = sub.add_parser("decompose", help="cylinder diagram in another direction")
    s.add_argument("surface")
    s.add_argument("--direction", required=True, help="x,y")
    s.add_argument("--bound", type=int, default=None, help="step bound (default: PRYM_STEP_BOUND or built-in)")
    s.set_defaults(fn=cmd_decompose)

    s = sub.add_parser("deform", help="kernel deformation by (x, y)")
    s.add_argument("surface")
    s.add_argument("x")
    s.add_argument("y")
    s.add_argument("--pair", help="P,Q zero ids when the surface carries no involution")
    s.set_defaults(fn=cmd_deform)

    s = sub.add_parser("horocycle", help="apply the horocycle flow for time s")
    s.add_argument("surface")
    s.add_argument("s")
    s.set_defaults(fn=cmd_horocycle)

    s = sub.add_parser("interval", help="horizontal kernel interval")
    s.add_argument("surface")
    s.add_argument("--pair")
    s.set_defaults(fn=cmd_interval)

    s = sub.add_parser("collapse", help="limit surface at an end of the kernel interval")
    s.add_argument("surface")
    s.add_argument("endpoint", choices=("min", "max"))
    s.add_argument("--pair")
    s.set_defaults(fn=cmd_collapse)

    s = sub.add_parser("cover", help="double cover of an L-shaped prototype")
    s.add_argument("proto")
    s.add_argument("model", choices=[m.value for m in pr.CoverModel])
    s.set_defaults(fn=cmd_cover)

    s = sub.add_parser("obstruct", help="slit-ratio obstruction data of a three-tori prototype")
    s.add_argument("proto")
    s.add_argument("--s", help="slit ratio to classify")
    s.set_defaults(fn=cmd_obstruct)

    s = sub.add_parser("check", help="validate a surface and its eigenform data")
    s.add_argument("surface")
    s.set_defaults(fn=cmd_check)

    s = sub.add_parser("svg", help="render a surface as SVG")
    s.add_argument("surface")
    s.add_argument("--out")
    s.add_argument("--scale", default="100")
    s.set_defaults(fn=cmd_svg)
    return ap


def run(argv=None, out=None) -> int:
    out = out if out is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        result = args.fn(args)
    except UsageError as exc:
        print(json.dumps({"error": "usage", "message": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    except (ValueError, ArithmeticError, KeyError, json.JSONDecodeError) as exc:
        out.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return EXIT_DOMAIN
    if isinstance(result, str):
        out.write(result)
    elif result is not None:
        out.write(json.dumps(result, indent=2) + "\n")
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
