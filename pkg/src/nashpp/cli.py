"""Command line interface.

    nashpp verdict        problem.txt --n 1 [--point 0] [--format json|text]
    nashpp fiber          problem.txt --n 1 [--point 0]
    nashpp tangent-cone   problem.txt [--point 0]
    nashpp hn-check       problem.txt --n 2
    nashpp compare-graded problem.txt --n 1 [--point 0]
    nashpp report         problem.txt [--format json|text] [--out FILE]
                                      [--figures DIR]

Exit codes: 0 completed, 2 input error, 3 budget exceeded,
4 internal consistency failure.  The Groebner budget is configurable
through the NASHPP_GB_BUDGET environment variable ("maxbasis[,maxdeg]").
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .errors import BudgetExceededError, ConsistencyError, InputError
from .jets import hn_test
from .nobile import (
    emit_report,
    graded_comparison,
    parse_problem,
    run_report,
    run_verdict,
)
from .pparts import build_module, cross_check_fibers, fiber_dim_doubled_at


def _load(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    name = os.path.splitext(os.path.basename(path))[0]
    return parse_problem(text, name=name)


def _point_indices(spec, arg):
    if arg is None:
        return list(range(len(spec.points)))
    if not (0 <= arg < len(spec.points)):
        raise InputError(f"point index {arg} out of range (0..{len(spec.points) - 1})")
    return [arg]


def _cmd_verdict(args):
    spec = _load(args.problem)
    verdicts = [run_verdict(spec, i, args.n) for i in _point_indices(spec, args.point)]
    if args.format == "json":
        print(json.dumps(verdicts, indent=2))
    else:
        for v in verdicts:
            trivial = "trivial" if v["nash_trivial_at_point"] else "NONTRIVIAL"
            jac = "smooth" if v["jacobian_smooth"] else "singular"
            line = (
                f"point ({', '.join(v['point'])}) n={v['n']}: "
                f"torsion-free fiber {v['fiber_dim_torsion_free']} vs D-1="
                f"{v['expected_rank_D'] - 1} -> Nash_{v['n']} {trivial} here; "
                f"Jacobian {jac}"
            )
            if v["sampled_points"]:
                line += (
                    f"; trivial on all sampled points: "
                    f"{str(v['nash_trivial_locally']).lower()}"
                )
            print(line)
    return 0


def _cmd_fiber(args):
    spec = _load(args.problem)
    for i in _point_indices(spec, args.point):
        point = spec.points[i]
        doubled = fiber_dim_doubled_at(spec.ideal, args.n, point)
        M = build_module(spec.ideal, args.n, point)
        check = cross_check_fibers(spec.ideal, args.n, point, module=M)
        print(
            f"point ({', '.join(spec.point_strs(point))}) n={args.n}: "
            f"fiber(P^n) = {doubled} = 1 + {check.module_plus_dim} (cross-check ok)"
        )
    return 0


def _cmd_tangent_cone(args):
    spec = _load(args.problem)
    for i in _point_indices(spec, args.point):
        point = spec.points[i]
        I0 = spec.ideal.translate(point)
        cone = I0.tangent_cone()
        gens = "; ".join(str(g) for g in cone.gens) or "0"
        sb = True if I0.is_zero() else I0.is_standard_basis(list(I0.gens))
        print(f"point ({', '.join(spec.point_strs(point))}): In = <{gens}>")
        print(f"  generators form a standard basis: {str(sb).lower()}")
    return 0


def _cmd_hn_check(args):
    spec = _load(args.problem)
    if not spec.has_arc():
        raise InputError("problem declares neither a parametrization nor an arc")
    arc = spec.arc()
    res = hn_test(spec.ideal, arc, args.n, spec.dimension())
    if res.injective:
        print(f"HN_{args.n}: injective (contact a={arc.a}, certified at T={res.T_used})")
    else:
        parts = [
            f"{spec.ring.field.to_str(v)}*{a}" for a, v in sorted(res.witness.items())
        ]
        print(f"HN_{args.n}: kernel witness found: {', '.join(parts)}")
    return 0


def _cmd_compare_graded(args):
    spec = _load(args.problem)
    for i in _point_indices(spec, args.point):
        point = spec.points[i]
        I0 = spec.ideal.translate(point)
        result = graded_comparison(I0, args.n)
        label = f"point ({', '.join(spec.point_strs(point))}) n={args.n}"
        if result["standard_basis"]:
            print(
                f"{label}: fibers {result['fiber_initial_forms']} = "
                f"{result['fiber_initial_ideal']} (standard basis ok)"
            )
        else:
            print(f"{label}: {result['note']}")
    return 0


def _cmd_report(args):
    spec = _load(args.problem)
    report = run_report(spec)
    document = emit_report(report, format=args.format)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(document)
        print(f"report written to {args.out}")
    else:
        sys.stdout.write(document)
    if args.figures:
        from .figures import render_report_figures

        for path in render_report_figures(report, args.figures):
            print(f"figure written to {path}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="nashpp",
        description="Order-n Nash blow-up singularity detection via principal parts",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, needs_n, **extra):
        p = sub.add_parser(name, help=extra.pop("help", None))
        p.add_argument("problem", help="problem description file")
        if needs_n:
            p.add_argument("--n", type=int, required=True, help="blow-up order n")
        if extra.pop("point", True):
            p.add_argument("--point", type=int, default=None, help="point index")
        p.set_defaults(fn=fn)
        return p

    pv = add("verdict", _cmd_verdict, True, help="full Nash_n verdict per point")
    pv.add_argument("--format", choices=("json", "text"), default="text")
    add("fiber", _cmd_fiber, True, help="principal-parts fiber dimensions")
    add("tangent-cone", _cmd_tangent_cone, False, help="initial ideal at a point")
    add("hn-check", _cmd_hn_check, True, point=False, help="arc-based HN_n injectivity")
    add("compare-graded", _cmd_compare_graded, True, help="tangent-cone fiber comparison")
    pr = add("report", _cmd_report, False, point=False, help="full machine-readable report")
    pr.add_argument("--format", choices=("json", "text"), default="json")
    pr.add_argument("--out", default=None, help="write the report to this file")
    pr.add_argument("--figures", default=None, help="render figures into this directory")
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except InputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return 3
    except ConsistencyError as exc:
        print(f"internal consistency failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
