"""Command-line entry point: ``cyclolog {constants,table,verify}``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from . import hiprec, verify
from .errors import DomainError, UsageError
from .exponents import ExponentReport, exponent_report

PRECISION_ENV = "CYCLOLOG_PRECISION"
TABLE_SKIP = (6,)


@dataclass(frozen=True)
class RunConfig:
    precision_bits: int = hiprec.DEFAULT_PRECISION
    output_format: str = "json"
    parallelism: int = 1

    def __post_init__(self):
        if self.precision_bits < hiprec.MIN_PRECISION:
            raise UsageError(f"precision must be >= {hiprec.MIN_PRECISION} bits, got {self.precision_bits}")
        if self.parallelism < 1:
            raise UsageError(f"workers must be >= 1, got {self.parallelism}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def parse_int_list(text: str) -> tuple[int, ...]:
    """'5,7' or '3..33' or a mix such as '3..5,8'; order kept, duplicates dropped."""
    out: list[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = (int(x) for x in part.split("..", 1))
                if hi < lo:
                    raise UsageError(f"empty range {part!r}")
                out.extend(range(lo, hi + 1))
            elif part:
                out.append(int(part))
    except ValueError:
        raise UsageError(f"cannot parse integer list {text!r}") from None
    if not out:
        raise UsageError(f"empty integer list {text!r}")
    return tuple(dict.fromkeys(out))


def resolve_precision(flag: int | None, environ=os.environ) -> int:
    if flag is not None:
        return flag
    env = environ.get(PRECISION_ENV)
    if env is None or env == "":
        return hiprec.DEFAULT_PRECISION
    try:
        return int(env)
    except ValueError:
        raise UsageError(f"{PRECISION_ENV}={env!r} is not an integer") from None


def _pmap(fn, items, workers: int) -> list:
    if workers > 1 and len(items) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            return list(ex.map(fn, items))
    return [fn(x) for x in items]


# -- constants --------------------------------------------------------------

def report_to_dict(rep: ExponentReport) -> dict:
    d: dict = {"m": rep.m, "delta": rep.delta}
    for name in ExponentReport.FIELDS[2:]:
        d[name] = hiprec.fixed(getattr(rep, name), 12)
    d["outside_theorem_range"] = rep.outside_theorem_range
    d["h_nonpositive"] = rep.h_nonpositive
    return d


def cmd_constants(args, cfg: RunConfig, out) -> int:
    if args.delta < 2:
        raise UsageError(f"--delta must be >= 2, got {args.delta}")
    if args.m < 3:
        raise UsageError(f"--m must be >= 3, got {args.m}")
    rep = exponent_report(args.delta, args.m, cfg.precision_bits)
    out.write(json.dumps(report_to_dict(rep), indent=2) + "\n")
    return 0


# -- table ------------------------------------------------------------------

def _table_row(job) -> tuple[int, int, str, str]:
    m, delta, precision = job
    rep = exponent_report(delta, m, precision)
    return m, delta, hiprec.quantize(rep.beta, 6), hiprec.quantize(rep.alpha, 6)


def cmd_table(args, cfg: RunConfig, out) -> int:
    deltas = parse_int_list(args.delta)
    ms = parse_int_list(args.m)
    if min(deltas) < 2:
        raise UsageError("deltas must be >= 2")
    if min(ms) < 3:
        raise UsageError("m values must be >= 3")
    jobs = sorted((m, d, cfg.precision_bits) for m in ms if m not in TABLE_SKIP for d in deltas)
    rows = _pmap(_table_row, jobs, cfg.parallelism)
    fmt = cfg.output_format
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["m", "delta", "beta", "alpha"])
        w.writerows(rows)
        out.write(buf.getvalue())
    elif fmt == "json":
        out.write(json.dumps([dict(m=m, delta=d, beta=b, alpha=a) for m, d, b, a in rows], indent=2) + "\n")
    else:
        out.write(f"{'m':>4} {'delta':>5} {'beta':>14} {'alpha':>14}\n")
        for m, d, b, a in rows:
            out.write(f"{m:>4} {d:>5} {b:>14} {a:>14}\n")
    return 0


# -- verify -----------------------------------------------------------------

def cmd_verify(args, cfg: RunConfig, out) -> int:
    kw = dict(precision=cfg.precision_bits, pmax=args.pmax)
    if args.nu is not None:
        kw["nus"] = parse_int_list(args.nu)
    if args.delta is not None:
        kw["deltas"] = parse_int_list(args.delta)
    if args.m is not None:
        kw["ms"] = parse_int_list(args.m)
    if args.delta is not None or args.m is not None:
        kw["growth_pairs"] = tuple((d, m) for d in kw.get("deltas", (5, 7)) for m in kw.get("ms", (3,)))
    if args.growth_nu is not None:
        lo, hi = args.growth_nu
        kw["growth_nu"] = (lo, hi)
    if args.pmax < 3:
        raise UsageError("--pmax must be >= 3")
    opts = verify.Options(**kw)
    cases = verify.cases(args.suite, opts)
    results = _pmap(verify.run_case, cases, cfg.parallelism)
    failures = [f.to_dict() for r in results for f in r]
    if failures:
        out.write(json.dumps(failures, indent=2) + "\n")
        return 1
    out.write(json.dumps({"suite": args.suite, "cases": len(cases), "status": "pass"}) + "\n")
    return 0


# -- entry ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--precision-bits", type=int, default=None, help=f"working precision (default ${PRECISION_ENV} or 128)")
    common.add_argument("--workers", type=int, default=1, help="worker processes")

    p = _Parser(prog="cyclolog", description="Irrationality exponents for logarithms at cyclotomic points.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    c = sub.add_parser("constants", parents=[common], help="all constants for one (delta, m) as JSON")
    c.add_argument("--delta", type=int, required=True)
    c.add_argument("--m", type=int, required=True)
    c.set_defaults(func=cmd_constants, format="json")

    t = sub.add_parser("table", parents=[common], help="beta and alpha over a grid")
    t.add_argument("--delta", default="5,7")
    t.add_argument("--m", default="3..33")
    t.add_argument("--format", choices=("csv", "json", "text"), default="csv")
    t.set_defaults(func=cmd_table)

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", choices=verify.SUITES + ("all",), default="all")
    v.add_argument("--pmax", type=int, default=13)
    v.add_argument("--nu", default=None, help="nu values, e.g. 1..3")
    v.add_argument("--delta", default=None)
    v.add_argument("--m", default=None)
    v.add_argument("--growth-nu", type=int, nargs=2, metavar=("LO", "HI"), default=None)
    v.set_defaults(func=cmd_verify, format="json")
    return p


def main(argv: list[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        cfg = RunConfig(resolve_precision(args.precision_bits), args.format, args.workers)
        return args.func(args, cfg, out)
    except (UsageError, DomainError) as exc:
        print(f"cyclolog: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
