"""Command-line front end: ``fracmeas <command> --n N --l L ...``.

Exit codes: 0 all checks pass, 1 a check failed, 2 the precision cap was
exhausted, 64 usage error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

from .clusters import enumerate_gaps
from .exact import UndecidedAtMaxPrecision, decimal_digits_to_bits, format_bracket
from .ifs import ConsecutiveUnion, ResourceLimitError
from .measure import cdf, density_of
from .report import (RunConfig, emit_json, emit_text, rational, run_verification,
                     theorem_targets)

EXIT_OK, EXIT_FAIL, EXIT_PRECISION, EXIT_USAGE = 0, 1, 2, 64


class UsageError(Exception):
    pass


class Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def build_parser(environ=None) -> Parser:
    env = RunConfig.env_defaults(environ)
    base = RunConfig()

    def default(name):
        return env.get(name, getattr(base, name))

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=default("n"))
    common.add_argument("--l", type=int, default=default("l"))
    common.add_argument("--precision-cap", type=int, default=default("precision_cap"),
                        help="largest working precision in bits")
    common.add_argument("--seed", type=int, default=default("seed"))
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="output_format", action="store_const", const="json")
    fmt.add_argument("--csv", dest="output_format", action="store_const", const="csv")
    common.set_defaults(output_format=default("output_format"))
    common.add_argument("--out", help="write output here instead of stdout")

    run = argparse.ArgumentParser(add_help=False)
    run.add_argument("--max-level", type=int, default=default("max_level"))
    run.add_argument("--center-level", type=int, default=default("center_level"))
    run.add_argument("--radius-grid", type=int, default=default("radius_grid"))

    parser = Parser(prog="fracmeas",
                    description="Exact density checks for the Cantor sets C(n, l).")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=Parser)
    dims = sub.add_parser("dims", parents=[common], help="s, r and the two measures")
    dims.add_argument("--digits", type=int, default=50)
    sub.add_parser("verify", parents=[common, run], help="run every check")
    sub.add_parser("report", parents=[common, run], help="write the verification report")
    gaps = sub.add_parser("gaps", parents=[common], help="list the gaps of O_k")
    gaps.add_argument("--level", type=int, required=True)
    c = sub.add_parser("cdf", parents=[common], help="F(x) = mu([0, x])")
    c.add_argument("--x", type=_fraction, required=True)
    dens = sub.add_parser("density", parents=[common],
                          help="density of consecutive basic intervals or of [a, b]")
    dens.add_argument("--level", type=int)
    dens.add_argument("--left", type=int)
    dens.add_argument("--right", type=int)
    dens.add_argument("--a", type=_fraction)
    dens.add_argument("--b", type=_fraction)
    dens.add_argument("--digits", type=int, default=20)
    return parser


def _config(args) -> RunConfig:
    extra = {}
    for name in ("max_level", "center_level", "radius_grid"):
        if hasattr(args, name):
            extra[name] = getattr(args, name)
    try:
        return RunConfig(n=args.n, l=args.l, precision_cap=args.precision_cap,
                         output_format=args.output_format, seed=args.seed, **extra)
    except ValueError as exc:
        raise UsageError(str(exc))


def _csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def cmd_dims(args, config):
    p = config.params
    digits = args.digits
    t = theorem_targets(p, digits)
    rows = [("s", *t["s"]["decimal_bracket"]),
            ("r", rational(p.r), rational(p.r)),
            ("H", *t["hausdorff_measure"]["decimal_bracket"]),
            ("P", *t["packing_measure"]["decimal_bracket"])]
    if config.output_format == "json":
        return json.dumps({"n": p.n, "l": p.l, **t}, indent=2, sort_keys=True) + "\n", EXIT_OK
    if config.output_format == "csv":
        return _csv(["quantity", "lower", "upper"], rows), EXIT_OK
    lines = [f"n = {p.n}, l = {p.l}",
             f"s   in [{rows[0][1]}, {rows[0][2]}]",
             f"r   = {rational(p.r)}",
             f"H^s = r^s in [{rows[2][1]}, {rows[2][2]}]",
             f"P^s = 2^s in [{rows[3][1]}, {rows[3][2]}]"]
    return "\n".join(lines) + "\n", EXIT_OK


def cmd_verify(args, config):
    report = run_verification(config)
    if config.output_format == "json":
        text = emit_json(report)
    elif config.output_format == "csv":
        text = _csv(["check", "passed"], [(k, int(v)) for k, v in report.checks.items()])
    else:
        text = emit_text(report)
    return text, report.exit_code


def cmd_report(args, config):
    report = run_verification(config)
    return emit_json(report), report.exit_code


def cmd_gaps(args, config):
    if args.level < 1:
        raise UsageError("--level must be >= 1")
    gaps = enumerate_gaps(config.params, args.level)
    rows = [(str(g.left), str(g.right), str(g.length), g.type_i, g.level) for g in gaps]
    header = ["left", "right", "length", "type_i", "level"]
    if config.output_format == "json":
        return json.dumps([dict(zip(header, r)) for r in rows], indent=2) + "\n", EXIT_OK
    if config.output_format == "csv":
        return _csv(header, rows), EXIT_OK
    return "".join(f"({r[0]}, {r[1]})  length {r[2]}  type ({r[3]}, {r[4]})\n"
                   for r in rows), EXIT_OK


def cmd_cdf(args, config):
    try:
        value = cdf(config.params, args.x)
    except ValueError as exc:
        raise UsageError(str(exc))
    if config.output_format == "json":
        return json.dumps({"x": str(args.x), "F": str(value)}) + "\n", EXIT_OK
    if config.output_format == "csv":
        return _csv(["x", "F"], [(str(args.x), str(value))]), EXIT_OK
    return f"{value}\n", EXIT_OK


def cmd_density(args, config):
    p = config.params
    if args.level is not None:
        if args.left is None or args.right is None:
            raise UsageError("--level needs --left and --right")
        try:
            query = ConsecutiveUnion(p, args.level, args.left, args.right)
        except ValueError as exc:
            raise UsageError(str(exc))
    elif args.a is not None and args.b is not None:
        query = (args.a, args.b)
    else:
        raise UsageError("give --level/--left/--right or --a/--b")
    try:
        res = density_of(p, query, decimal_digits_to_bits(args.digits))
    except ValueError as exc:
        raise UsageError(str(exc))
    lo, hi = format_bracket(*res.bracket, args.digits)
    out = {"measure": str(res.measure), "length": str(res.length),
           "p": None if res.density is None else res.density.p,
           "L": None if res.density is None else res.density.L,
           "lower": lo, "upper": hi}
    if config.output_format == "json":
        return json.dumps(out, indent=2) + "\n", EXIT_OK
    if config.output_format == "csv":
        return _csv(list(out), [["" if v is None else v for v in out.values()]]), EXIT_OK
    lines = [f"mass   = {res.measure}", f"length = {res.length}"]
    if res.density is not None:
        lines.append(f"density = {res.density.p} / {res.density.L}^s")
    lines.append(f"density in [{lo}, {hi}]")
    return "\n".join(lines) + "\n", EXIT_OK


COMMANDS = {"dims": cmd_dims, "verify": cmd_verify, "report": cmd_report,
            "gaps": cmd_gaps, "cdf": cmd_cdf, "density": cmd_density}


def main(argv=None, environ=None) -> int:
    try:
        parser = build_parser(environ)
    except ValueError as exc:
        print(f"fracmeas: error: bad environment override: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        config = _config(args)
        text, code = COMMANDS[args.command](args, config)
    except (UsageError, ResourceLimitError) as exc:
        print(f"fracmeas: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except UndecidedAtMaxPrecision as exc:
        print(f"fracmeas: precision exhausted: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if code == EXIT_PRECISION:
        print("fracmeas: precision exhausted; raise --precision-cap", file=sys.stderr)
    elif code == EXIT_FAIL:
        print("fracmeas: at least one check failed", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
