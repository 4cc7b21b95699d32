"""``coxcoh`` command-line entry point.

Every command prints one JSON document on stdout.  Reports carry a
``version`` field and are byte-identical for identical inputs unless
``--timings`` is given.

Exit codes: 0 success, 2 parse error, 3 validation error, 4 verification
failure, 5 resource limit, 6 request outside the trust radius.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

from . import __version__, buildings, equivariant, hecke, verify
from .complexes import davis_chamber, interval, load_mirrored_complex, point, simplex_chamber, torsion_chamber
from .corpus import corpus, get
from .coxeter import CoxeterSystem
from .errors import (
    OutOfTrustRadius,
    ParseError,
    ResourceLimit,
    ValidationError,
    VerificationFailure,
)
from .groupring import GroupRing

SCHEMA = 1

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_VERIFICATION = 4
EXIT_RESOURCE = 5
EXIT_TRUST = 6


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ParseError(message)


# -- inputs -----------------------------------------------------------------------------


def _read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: invalid JSON: {exc}") from None
    except OSError as exc:
        raise ParseError(f"{path}: {exc.strerror}") from None


def load_system(source):
    """A Coxeter system from a JSON file, or the name of a built-in corpus entry."""
    if os.path.exists(source):
        return CoxeterSystem.from_json(_read_json(source))
    names = [entry.name for entry in corpus()]
    if source in names:
        return get(source).system()
    raise ParseError(f"{source!r} is neither a file nor a corpus entry ({', '.join(names)})")


NAMED_COMPLEXES = ("K", "point", "simplex", "torsion", "interval")


def load_complex(W, source):
    """A mirrored complex from a JSON file or one of the named constructions."""
    if source is None or source == "K":
        return davis_chamber(W)
    if source == "point":
        return point(W.generators)
    if source == "simplex":
        return simplex_chamber(W.generators)
    if source == "torsion":
        return torsion_chamber(W.generators)
    if source == "interval":
        half = len(W.generators) // 2
        return interval(W.generators, W.generators[:half], W.generators[half:])
    if not os.path.exists(source):
        raise ParseError(f"{source!r} is neither a file nor one of {', '.join(NAMED_COMPLEXES)}")
    return load_mirrored_complex(_read_json(source), W.generators)


def _radius(W, radius):
    if radius is not None:
        if radius < 0:
            raise ValidationError("radius must be nonnegative")
        return radius
    if not W.is_finite():
        raise ValidationError("W is infinite; pass --radius")
    return len(W.longest_element(W.S))


def _subset(W, text):
    names = [x.strip() for x in (text or "").split(",") if x.strip()]
    return W.subset(names)


def _variant(text):
    return {"h": "homology", "hc": "cohomology", "homology": "homology", "cohomology": "cohomology"}[text]


def _word(W, w):
    return W.names(w)


def _fraction(x):
    return str(x)


# -- commands -------------------------------------------------------------------------


def cmd_spherical(args):
    W = load_system(args.coxfile)
    return {"spherical": [W.subset_names(T) for T in W.spherical_poset()]}


def cmd_ball(args):
    W = load_system(args.coxfile)
    ball = W.ball(_radius(W, args.radius))
    return {
        "radius": ball.radius,
        "size": len(ball),
        "stabilized": ball.stabilized,
        "elements": [
            {
                "word": _word(W, w),
                "length": len(w),
                "in": W.subset_names(W.right_descents(w)),
                "in_left": W.subset_names(W.left_descents(w)),
            }
            for w in ball
        ],
    }


def cmd_chamber(args):
    W = load_system(args.coxfile)
    return davis_chamber(W).to_json()


def cmd_basis(args):
    W = load_system(args.coxfile)
    N = _radius(W, args.radius)
    ball, rows = GroupRing(W).change_of_basis(args.side, N)
    return {
        "side": args.side,
        "radius": N,
        "elements": [_word(W, w) for w in ball],
        "descent_sets": [
            W.subset_names(W.left_descents(w) if args.side == "left" else W.right_descents(w)) for w in ball
        ],
        "matrix": [list(r) for r in rows],
    }


def cmd_graded_action(args):
    W = load_system(args.coxfile)
    N = _radius(W, args.radius)
    T = _subset(W, args.T)
    s = W.gen(args.s)
    q = GroupRing(W).quotient_action(T, s, args.side, N)
    if not all(q.valid):
        bad = [_word(W, w) for w, ok in zip(q.basis, q.valid) if not ok]
        raise OutOfTrustRadius(f"images of {bad[0]} leave the ball of radius {N}")
    return {
        "T": W.subset_names(T),
        "generator": W.generators[s],
        "side": args.side,
        "radius": N,
        "basis": [_word(W, w) for w in q.basis],
        "matrix": [list(r) for r in q.matrix],
        "trace": q.trace(),
    }


def cmd_homology(args):
    W = load_system(args.coxfile)
    X = load_complex(W, args.chamber)
    N = _radius(W, args.radius)
    variant = _variant(args.variant)
    rep = equivariant.homology_formula(W, X, N, variant)
    out = {
        "variant": variant,
        "radius": N,
        "cells": rep["cells"],
        "lhs": rep["lhs"].to_dict(),
        "lhs_text": str(rep["lhs"]),
        "rhs": rep["rhs"].to_dict(),
        "terms": [
            {"T": W.subset_names(t["T"]), "relative": t["relative"].to_dict(), "slice_rank": t["slice_rank"]}
            for t in rep["terms"]
        ],
        "equal": rep["equal"],
    }
    if not rep["equal"]:
        raise VerificationFailure("direct computation differs from the assembled formula", witness=out)
    return out


def cmd_graded(args):
    W = load_system(args.coxfile)
    X = load_complex(W, args.chamber)
    N = _radius(W, args.radius)
    variant = _variant(args.variant)
    traces = args.traces and W.is_finite()
    rep = equivariant.graded_term(W, X, N, args.p, variant, traces=traces)
    out = rep.to_dict()
    if not rep.ok:
        raise VerificationFailure("graded term differs from its assembled form", witness=out)
    return out


def cmd_demo(args):
    if args.name != "tripod":
        raise ValidationError(f"unknown demo {args.name!r}")
    rep = equivariant.tripod_cocycle_demo(args.radius)
    if rep["pair_x_line"] != 1 or rep["pair_xs_line"] != 0:
        raise VerificationFailure("unexpected pairings", witness=rep)
    return rep


def _choice(text):
    return "least" if text == "least" else int(text)


def cmd_building(args):
    W = load_system(args.coxfile)
    Phi = buildings.building_for(W, args.thickness, args.radius)
    choice = _choice(args.choice)
    out = {
        "thickness": list(Phi.q),
        "radius": Phi.radius,
        "chambers": len(Phi.chambers),
        "residues": {
            ",".join(W.subset_names(T)) or "{}": len(Phi.residues(T)) for T in W.spherical_poset()
        },
    }
    if args.basis is not None:
        rep = buildings.basis_BT(Phi, _subset(W, args.basis), choice=choice)
        out["basis"] = rep.to_dict(Phi)
        if not rep.ok:
            raise VerificationFailure("B^T is not a basis of the truncated invariants", witness=out)
    if args.realize is not None:
        real = buildings.realize(Phi, load_complex(W, args.realize), choice=choice)
        out["realization"] = real.to_dict(Phi)
        if not real.ok:
            raise VerificationFailure("realization differs from the slice decomposition", witness=out)
    return out


def cmd_hecke(args):
    W = load_system(args.coxfile)
    q = hecke.hecke_parameters(W, args.q)
    N = _radius(W, args.radius)
    out = {"q": [_fraction(x) for x in q], "radius": N}
    if args.graded is None:
        rows = []
        for T in W.spherical_poset():
            sp = hecke.hecke_specials(W, T, q)
            rows.append(
                {
                    "T": W.subset_names(T),
                    "poincare": _fraction(sp.poincare),
                    "a_idempotent": sp.a_idempotent,
                    "h_idempotent": sp.h_idempotent,
                }
            )
        out["specials"] = rows
        tri = hecke.HeckeAlgebra(W, q).triangularity_check(N)
        out["triangularity"] = {
            side: {"size": tri[side]["size"], "determinant": _fraction(tri[side]["determinant"])}
            for side in ("left", "right")
        }
        if not (tri["ok"] and all(r["a_idempotent"] and r["h_idempotent"] for r in rows)):
            raise VerificationFailure("Hecke identities failed", witness=out)
        return out
    X = load_complex(W, args.chamber)
    variant = _variant(args.variant)
    rep = hecke.hecke_graded_term(W, args.graded, X, N, q, variant, traces=args.traces and W.is_finite())
    out["graded"] = rep.to_dict()
    if not rep.ok:
        raise VerificationFailure("deformed graded term differs from its assembled form", witness=out)
    return out


def cmd_verify(args):
    if args.corpus != "builtin":
        raise ValidationError("only the builtin corpus is available")
    results = verify.run_suite(args.suite)
    for r in results:
        print(r.line(), file=sys.stderr)
    out = {
        "suite": args.suite,
        "corpus": args.corpus,
        "passed": all(r.passed for r in results),
        "criteria": [r.to_dict() if args.details else _brief(r) for r in results],
    }
    if args.timings:
        out["seconds"] = {str(r.number): round(r.seconds, 3) for r in results}
    if not out["passed"]:
        raise VerificationFailure("acceptance suite failed", witness=out)
    return out


def _brief(r):
    d = r.to_dict()
    d.pop("details")
    return d


# -- parser ------------------------------------------------------------------------------


def build_parser():
    parser = _Parser(prog="coxcoh", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"coxcoh {__version__}")
    parser.add_argument("--timings", action="store_true", help="include wall-clock time in the report")
    parser.add_argument("-o", "--output", help="write the report to a file instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, fn, help_, radius=True):
        p = sub.add_parser(name, help=help_)
        if name != "demo" and name != "verify":
            p.add_argument("coxfile", help="Coxeter matrix JSON file or corpus entry name")
        if radius:
            p.add_argument("--radius", "-N", type=int, help="word-length radius (default: all of a finite W)")
        p.set_defaults(func=fn)
        return p

    command("spherical", cmd_spherical, "list the spherical subsets", radius=False)
    command("ball", cmd_ball, "elements of the ball with their descent sets")
    command("chamber", cmd_chamber, "emit the Davis chamber K as a complex document", radius=False)

    p = command("basis", cmd_basis, "matrix of the descent basis over the standard basis")
    p.add_argument("--side", choices=("left", "right"), default="left")

    p = command("graded-action", cmd_graded_action, "a generator on the quotient A^T/A^{>T}")
    p.add_argument("-T", required=True, help="comma separated subset, e.g. s,t")
    p.add_argument("-s", required=True, help="generator")
    p.add_argument("--side", choices=("left", "right"), default="left")

    for name, fn, help_ in (
        ("homology", cmd_homology, "(co)homology of U(W, X) against the slice formula"),
        ("graded", cmd_graded, "one graded term of the filtration"),
    ):
        p = command(name, fn, help_)
        p.add_argument("--chamber", help=f"complex JSON file or one of {', '.join(NAMED_COMPLEXES)}")
        p.add_argument("--variant", choices=("h", "hc", "homology", "cohomology"), default="hc")
        if name == "graded":
            p.add_argument("-p", type=int, required=True)
            p.add_argument("--traces", action="store_true", help="compare traces (finite W only)")

    p = sub.add_parser("demo", help="worked examples")
    p.add_argument("name", choices=("tripod",))
    p.add_argument("--radius", "-N", type=int, default=4)
    p.set_defaults(func=cmd_demo)

    p = command("building", cmd_building, "thick right-angled building over a ball")
    p.add_argument("--thickness", required=True, help="e.g. s=2,t=2")
    p.add_argument("--basis", help="subset T whose basis B^T is checked")
    p.add_argument("--realize", help="complex JSON file or named complex")
    p.add_argument("--choice", default="least", help="folding choice: least or an integer seed")

    p = command("hecke", cmd_hecke, "Hecke algebra identities and graded terms")
    p.add_argument("--q", required=True, help="e.g. s=2,t=2 or a single value")
    p.add_argument("--graded", type=int, metavar="P")
    p.add_argument("--chamber")
    p.add_argument("--variant", choices=("h", "hc", "homology", "cohomology"), default="hc")
    p.add_argument("--traces", action="store_true")

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--suite", default="all", help="all or a comma separated list of criteria")
    p.add_argument("--corpus", default="builtin")
    p.add_argument("--details", action="store_true")
    p.set_defaults(func=cmd_verify)
    return parser


def _emit(report, path=None):
    text = json.dumps(report, indent=2, sort_keys=True, default=str) + "\n"
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _error(exc, code):
    doc = {"error": type(exc).__name__, "message": str(exc), "exit_code": code}
    witness = getattr(exc, "witness", None)
    if witness is not None:
        doc["witness"] = witness
    sys.stderr.write(json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n")
    return code


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
    except ParseError as exc:
        return _error(exc, EXIT_PARSE)
    start = time.perf_counter()
    try:
        report = args.func(args)
    except ParseError as exc:
        return _error(exc, EXIT_PARSE)
    except (ValidationError, KeyError, ValueError) as exc:
        return _error(exc, EXIT_VALIDATION)
    except VerificationFailure as exc:
        return _error(exc, EXIT_VERIFICATION)
    except ResourceLimit as exc:
        return _error(exc, EXIT_RESOURCE)
    except OutOfTrustRadius as exc:
        return _error(exc, EXIT_TRUST)
    report = {"version": __version__, "schema": SCHEMA, "command": args.command, **report}
    if args.timings:
        report["elapsed_seconds"] = round(time.perf_counter() - start, 3)
    _emit(report, args.output)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
