"""Command-line front end: ``fedosphere verify | eval | comm | report``.

Exit codes: 0 all checks pass, 1 a check failed (or output could not be
written), 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .report import VerificationReport, emit_report

__all__ = ["main", "run", "cache_path"]

SUITE_CHOICES = (
    "connection",
    "omega",
    "r",
    "gauge",
    "flat-sections",
    "commutators",
    "identities",
    "moyal",
    "hamiltonian",
    "all",
)


class UsageError(Exception):
    pass


def cache_path() -> Path:
    return Path.home() / ".cache" / "fedosphere" / "last_report.json"


def _env_int(name: str, default: int) -> int:
    v = os.environ.get(name)
    if v is None or v == "":
        return default
    try:
        return int(v)
    except ValueError:
        raise UsageError(f"{name} must be an integer, got {v!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fedosphere", description="Exact verification of the Fedosov quantization of T*S^2.")
    sub = p.add_subparsers(dest="cmd", required=True, parser_class=_Parser)

    v = sub.add_parser("verify", help="run verification suites")
    v.add_argument("--suite", choices=SUITE_CHOICES, default="all")
    v.add_argument("--mode", choices=("symbolic", "points"), default="symbolic")
    v.add_argument("--points", type=int, default=None)
    v.add_argument("--seed", type=int, default=None)
    v.add_argument("--jet", type=int, default=3)
    v.add_argument("--format", choices=("text", "json", "md"), default="text")
    v.add_argument("--out", default=None)
    v.add_argument("--inject-failure", action="store_true", help=argparse.SUPPRESS)

    e = sub.add_parser("eval", help="evaluate an expression")
    e.add_argument("expr")
    e.add_argument("--jet", type=int, default=3)

    c = sub.add_parser("comm", help="graded commutator of two expressions")
    c.add_argument("a")
    c.add_argument("b")
    c.add_argument("--jet", type=int, default=3)

    r = sub.add_parser("report", help="re-emit the last verification report")
    r.add_argument("--format", choices=("text", "json", "md"), default="text")
    r.add_argument("--out", default=None)
    return p


def _write(data: bytes, out: str | None, stdout) -> None:
    if out is None:
        stdout.write(data.decode("utf-8"))
        stdout.flush()
    else:
        Path(out).write_bytes(data)


def _verify(args, stdout) -> int:
    from .suites import SUITES, Context, broken_probe, run_suites

    seed = args.seed if args.seed is not None else _env_int("FEDOSPHERE_SEED", 0)
    points = args.points if args.points is not None else _env_int("FEDOSPHERE_POINTS", 20)
    if points < 1:
        raise UsageError("--points must be positive")
    if args.jet < 2:
        raise UsageError("--jet must be at least 2")
    names = list(SUITES) if args.suite == "all" else [args.suite]
    ctx = Context(jet_order=args.jet, seed=seed, points=points, mode=args.mode)
    extra = {"r": [broken_probe()]} if args.inject_failure else None
    report = run_suites(names, ctx, extra)
    try:
        path = cache_path()
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(report.to_json())
    except OSError:
        pass  # caching is best effort
    try:
        _write(emit_report(report, args.format), args.out, stdout)
    except OSError as exc:
        print(f"fedosphere: cannot write report: {exc}", file=sys.stderr)
        return 1
    return 0 if report.passed else 1


def _show(value, env, stdout) -> None:
    from .lang import recognize

    stdout.write(recognize(value, env) + "\n")


def run(argv=None, stdout=None) -> int:
    from .lang import Ast, Env, ParseError, SortError, evaluate, parse

    stdout = stdout if stdout is not None else sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.cmd == "verify":
            return _verify(args, stdout)
        if args.cmd == "report":
            path = cache_path()
            if not path.exists():
                print("fedosphere: no previous run to report", file=sys.stderr)
                return 2
            report = VerificationReport.from_dict(json.loads(path.read_text()))
            try:
                _write(emit_report(report, args.format), args.out, stdout)
            except OSError as exc:
                print(f"fedosphere: cannot write report: {exc}", file=sys.stderr)
                return 1
            return 0 if report.passed else 1
        if args.cmd == "eval":
            ast = parse(args.expr)
            env = Env(jet_order=args.jet)
            _show(evaluate(ast, env), env, stdout)
            return 0
        if args.cmd == "comm":
            a, b = parse(args.a), parse(args.b)
            node = Ast("call", (0, 0), "comm", [a, b])
            env = Env(jet_order=args.jet)
            _show(evaluate(node, env), env, stdout)
            return 0
    except UsageError as exc:
        print(f"fedosphere: {exc}", file=sys.stderr)
        return 2
    except (ParseError, SortError) as exc:
        print(f"fedosphere: {exc}", file=sys.stderr)
        return 2
    except ArithmeticError as exc:
        print(f"fedosphere: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
