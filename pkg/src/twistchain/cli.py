"""Command-line front end.

    twistchain algebra --n N [--json out]
    twistchain verify --spec chain.json --suite S [--rep defining|adjoint] [--seed k]
                      --out report.json [--dump-ops ops.json]
    twistchain example sl3|sl4|sl7 --out dir [--seed k]

Exit codes: 0 every check passed, 1 some check failed, 2 bad input.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .liealg import build_sl
from .report import dumps
from .tensorexpr import eval_expr
from .twistlib import BadParameters, CarrierViolation, ChainSpec, TooManyLinks

OK, FAILED, USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def max_n():
    raw = os.environ.get("TWIST_MAX_N", "8")
    try:
        cap = int(raw)
    except ValueError:
        raise UsageError(f"TWIST_MAX_N must be an integer, got {raw!r}") from None
    if cap < 2:
        raise UsageError("TWIST_MAX_N must be at least 2")
    return cap


def _check_n(N):
    if not isinstance(N, int) or isinstance(N, bool) or N < 2:
        raise UsageError(f"N must be an integer >= 2, got {N!r}")
    cap = max_n()
    if N > cap:
        raise UsageError(f"N = {N} exceeds TWIST_MAX_N = {cap}")


def _write(path, text):
    try:
        p = Path(path)
        if p.parent and not p.parent.exists():
            p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc}") from None


def cmd_algebra(args):
    _check_n(args.n)
    text = json.dumps(build_sl(args.n).to_json(), indent=2, sort_keys=True) + "\n"
    if args.json:
        _write(args.json, text)
    else:
        sys.stdout.write(text)
    return OK


def load_spec(path):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    try:
        spec = ChainSpec.from_json(text)
    except (BadParameters, TooManyLinks, CarrierViolation) as exc:
        raise UsageError(str(exc)) from None
    except (KeyError, TypeError, ValueError, IndexError, AttributeError) as exc:
        raise UsageError(f"malformed chain spec: {exc}") from None
    _check_n(spec.N)
    return spec


def _dump_ops(path, runner):
    from .hopfverify import r_matrix
    ops = {
        "schema": "1",
        "rep": runner.rep.name,
        "F": eval_expr(runner.F, runner.rep, 2).matrix.to_triplets(),
        "R": r_matrix(runner.F, runner.rep).matrix.to_triplets(),
    }
    _write(path, json.dumps(ops, indent=1, sort_keys=True) + "\n")


def cmd_verify(args):
    from .suites import SuiteRunner
    spec = load_spec(args.spec)
    try:
        runner = SuiteRunner(spec, args.rep, args.seed)
    except (BadParameters, TooManyLinks, CarrierViolation) as exc:
        raise UsageError(str(exc)) from None
    reports = runner.run(args.suite)
    header = {"command": "verify", "suite": args.suite, "spec": spec.to_dict(),
              "skipped": sorted(set(runner.skipped))}
    _write(args.out, dumps(reports, header))
    if args.dump_ops:
        _dump_ops(args.dump_ops, runner)
    for r in reports:
        print(r.line())
    return OK if all(reports) else FAILED


def cmd_example(args):
    from .suites import EXAMPLES
    reports = EXAMPLES[args.section](args.seed)
    out = Path(args.out) / f"{args.section}.json"
    _write(out, dumps(reports, {"command": "example", "section": args.section}))
    for r in reports:
        print(r.line())
    return OK if all(reports) else FAILED


def build_parser():
    from .suites import EXAMPLES, SUITES
    p = _Parser(prog="twistchain", description="Exact checks for chains of twists on U(sl(N)).")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    a = sub.add_parser("algebra", help="dump the basis and structure constants of sl(N)")
    a.add_argument("--n", type=int, required=True)
    a.add_argument("--json", help="output file (default: stdout)")
    a.set_defaults(func=cmd_algebra)

    v = sub.add_parser("verify", help="run a verification suite on a chain spec")
    v.add_argument("--spec", required=True)
    v.add_argument("--suite", required=True, choices=SUITES)
    v.add_argument("--rep", default="defining", choices=("defining", "adjoint"))
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--out", required=True)
    v.add_argument("--dump-ops", help="write F and R in the chosen rep as sparse triplets")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("example", help="reproduce one worked example")
    e.add_argument("section", choices=sorted(EXAMPLES))
    e.add_argument("--out", required=True)
    e.add_argument("--seed", type=int, default=0)
    e.set_defaults(func=cmd_example)
    return p


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(f"twistchain: error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
