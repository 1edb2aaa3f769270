"""Command-line front end.

Exit codes: 0 success, 1 usage or validation error, 2 evaluation error,
3 sweep finished but found corrected-variant violations with every
hypothesis satisfied.
"""
from __future__ import annotations

import argparse
import sys

from .bounds import THEOREMS, VARIANTS, TheoremParams
from .expr import ExprError, FuncSpec, ParseError, evaluate_array
from .fracint import FracParams, QuadratureNotConverged, j_minus, j_plus, lemma1_rhs, signed_gap
from .harness import ConfigError, SweepConfig, contradictions, format_report, run_sweep, verify_theorem, write_report
from .hypotheses import HypothesisSampleError, check_convex, check_range_unit, check_slog_first, check_slog_second

EXIT_OK, EXIT_USAGE, EXIT_EVAL, EXIT_CONTRADICTION = 0, 1, 2, 3


def _fmt(x: float) -> str:
    return format(x, ".17g")


def cmd_eval(args) -> int:
    f = FuncSpec.from_text(args.f, args.a, args.b)
    p = FracParams(args.a, args.b, args.alpha)
    op = j_plus if args.op == "jplus" else j_minus
    print(_fmt(op(f, p, args.x)))
    return EXIT_OK


def cmd_identity(args) -> int:
    f = FuncSpec.from_text(args.f, args.a, args.b)
    p = FracParams(args.a, args.b, args.alpha)
    lhs, rhs = signed_gap(f, p), lemma1_rhs(f, p)
    print(f"lhs      {_fmt(lhs)}")
    print(f"rhs      {_fmt(rhs)}")
    print(f"residual {_fmt(lhs - rhs)}")
    return EXIT_OK


def cmd_classify(args) -> int:
    f = FuncSpec.from_text(args.f, args.lo, args.hi)
    g = f.abs_derivative if args.of == "abs-derivative" else (lambda x: evaluate_array(f, x))
    interval = (args.lo, args.hi)
    if args.kind == "convex":
        report = check_convex(g, interval)
    elif args.kind == "slog1":
        report = check_slog_first(g, args.s, interval)
    elif args.kind == "slog2":
        report = check_slog_second(g, args.s, interval)
    else:
        report = check_range_unit(g, interval)
    print(report)
    return EXIT_OK


def cmd_verify(args) -> int:
    f = FuncSpec.from_text(args.f, args.a, args.b)
    p = FracParams(args.a, args.b, args.alpha)
    tp = TheoremParams.make(args.s, args.mu, p=args.p, q=args.q, variant=args.variant)
    rec = verify_theorem(f, p, tp, args.theorem)
    print(f"theorem  {rec.theorem} ({rec.variant})")
    if rec.error:
        print(f"error    {rec.error}")
        return EXIT_EVAL
    print(f"lhs      {_fmt(rec.lhs)}")
    print(f"rhs      {_fmt(rec.rhs)}")
    print(f"margin   {_fmt(rec.margin)}")
    for name, ok in rec.flags.items():
        print(f"{name:<17}{'true' if ok else 'false'}")
    print(f"hypotheses {'hold' if rec.hypotheses_hold else 'not all satisfied'}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = SweepConfig.from_json(args.config)
    if args.format:
        cfg.format = args.format
    if args.out:
        cfg.output = args.out
    cfg.validate()
    rows = run_sweep(cfg)
    if cfg.output:
        write_report(rows, cfg.format, cfg.output)
    else:
        sys.stdout.write(format_report(rows, cfg.format))
    bad = contradictions(rows)
    failed = sum(1 for r in rows if r.error)
    print(f"{len(rows)} rows, {failed} failed, {len(bad)} corrected-variant violations "
          f"with all hypotheses true", file=sys.stderr)
    return EXIT_CONTRADICTION if bad else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fracineq", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("eval", help="one Riemann-Liouville integral")
    sp.add_argument("--f", required=True)
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.add_argument("--op", choices=("jplus", "jminus"), required=True)
    sp.add_argument("--x", type=float, required=True)
    sp.set_defaults(run=cmd_eval)

    sp = sub.add_parser("identity", help="residual of the fractional gap identity")
    sp.add_argument("--f", required=True)
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--alpha", type=float, required=True)
    sp.set_defaults(run=cmd_identity)

    sp = sub.add_parser("classify", help="hypothesis report for one function")
    sp.add_argument("--f", required=True)
    sp.add_argument("--lo", type=float, required=True)
    sp.add_argument("--hi", type=float, required=True)
    sp.add_argument("--s", type=float, default=1.0)
    sp.add_argument("--kind", choices=("convex", "slog1", "slog2", "unit"), required=True)
    sp.add_argument("--of", choices=("value", "abs-derivative"), default="value",
                    help="classify f itself (default) or |f'|")
    sp.set_defaults(run=cmd_classify)

    sp = sub.add_parser("verify", help="one theorem check")
    sp.add_argument("--theorem", choices=THEOREMS, required=True)
    sp.add_argument("--variant", choices=VARIANTS, default="corrected")
    sp.add_argument("--f", required=True)
    sp.add_argument("--a", type=float, required=True)
    sp.add_argument("--b", type=float, required=True)
    sp.add_argument("--alpha", type=float, default=1.0)
    sp.add_argument("--s", type=float, default=1.0)
    sp.add_argument("--mu", type=float, default=0.5)
    sp.add_argument("--p", type=float)
    sp.add_argument("--q", type=float)
    sp.set_defaults(run=cmd_verify)

    sp = sub.add_parser("sweep", help="config-driven parameter sweep")
    sp.add_argument("--config", required=True)
    sp.add_argument("--out")
    sp.add_argument("--format", choices=("csv", "json"))
    sp.set_defaults(run=cmd_sweep)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return args.run(args)
    except (ConfigError, ParseError, FileNotFoundError, IsADirectoryError, PermissionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ExprError, HypothesisSampleError, QuadratureNotConverged, ArithmeticError) as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return EXIT_EVAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
