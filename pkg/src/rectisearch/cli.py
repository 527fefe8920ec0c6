"""``rectisearch`` command line: run, bench, render, verify.

Exit codes: 0 success, 1 error (bad flags, unsupported configuration,
failed localization, I/O), 2 a proven per-run bound was exceeded.
"""

from __future__ import annotations

import argparse
import json
import math
import re
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from . import __version__
from .geometry import Metric, ceil_log2
from .render import render_svg
from .simulator import TrialPlan, build_trial, check_bounds, run_trials, write_results
from .strategies import STRATEGIES, UnsupportedConfiguration, check_supported, run_strategy
from .trace import dump_trace, export_trace, load_trace
from .verify import run_suites
from .world import ProblemConfig, delta_min, make_session, sealed_oracle

EXIT_OK, EXIT_ERROR, EXIT_BOUND = 0, 1, 2

_POWER = re.compile(r"^\s*(\d+(?:\.\d*)?)\s*(?:\^|\*\*)\s*(\d+)\s*$")


class CliError(Exception):
    pass


def parse_number(text: str) -> float:
    """``'1048576'``, ``'2^20'``, ``'2**20'`` or ``'1e6'``."""
    m = _POWER.match(text)
    try:
        value = float(m.group(1)) ** int(m.group(2)) if m else float(text)
    except (ValueError, OverflowError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"not a finite number: {text!r}")
    return value


def parse_int(text: str) -> int:
    value = parse_number(text)
    if not value.is_integer():
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    return int(value)


def parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise argparse.ArgumentTypeError(f"expected a boolean, got {text!r}")


def resolve_n(n: float, exact: bool) -> float:
    if n < 2:
        raise CliError(f"--n must be at least 2, got {n:g}")
    if exact:
        return n
    up = 2.0 ** ceil_log2(math.ceil(n))
    if up != n:
        print(f"warning: rounding n={n:g} up to {up:g} (pass --exact-n to keep it)", file=sys.stderr)
    return up


def parse_pois(text: str) -> tuple:
    """``'7'`` -> count 7; ``'5.3,2.1;-4,8'`` -> two explicit points."""
    text = text.strip()
    if re.fullmatch(r"\d+", text):
        return int(text), None
    points = []
    for chunk in text.split(";"):
        if chunk.strip():
            try:
                points.append(tuple(float(c) for c in chunk.split(",")))
            except ValueError:
                raise CliError(f"cannot parse POI {chunk!r}; use 'x,y;x,y'") from None
    if not points:
        raise CliError("--pois is empty")
    return None, points


def _algo(args) -> str:
    return ("exp+" + args.algo) if args.exp and not args.algo.startswith("exp+") else args.algo


def cmd_run(args) -> int:
    n = resolve_n(args.n, args.exact_n)
    metric = Metric.parse(args.metric)
    algo = _algo(args)
    count, points = parse_pois(args.pois)
    if points is not None:
        k = len(points[0])
        if args.dim is not None and args.dim != k:
            raise CliError(f"--dim {args.dim} does not match {k}-dimensional POIs")
        # explicit POIs are given relative to the start, and n is the search radius
        cfg = ProblemConfig(k, n, metric, args.relaxed)
        pois = points
    else:
        k = args.dim if args.dim is not None else 2
        plan = TrialPlan(ProblemConfig(k, n, metric, args.relaxed), algo, 1, count, args.seed)
        cfg = plan.session_config()
        pois = build_trial(plan, 0)
    check_supported(algo, cfg.k, cfg.metric)
    session = make_session(pois, cfg)
    metrics = run_strategy(algo, session, cfg)
    dmin = delta_min(sealed_oracle(session))
    violations = check_bounds(metrics, cfg, algo, dmin)
    out = metrics.to_dict()
    out.update(algo=algo, k=cfg.k, n=cfg.n, metric=cfg.metric.value, delta_min=dmin, violations=violations)
    print(json.dumps(out))
    if args.trace:
        try:
            dump_trace(export_trace(metrics, algo=algo, cfg=cfg, pois=pois, seed=args.seed), args.trace)
        except OSError as e:
            raise CliError(f"cannot write trace: {e}") from None
    if not metrics.success:
        print("error: the run ended more than 1 away from every POI", file=sys.stderr)
        return EXIT_ERROR
    return EXIT_BOUND if violations else EXIT_OK


def cmd_bench(args) -> int:
    n = resolve_n(args.n, args.exact_n)
    metric = Metric.parse(args.metric)
    algos = args.algo or ["gcbs"]
    dims = args.dim or [2]
    if args.exp:
        algos = [a if a.startswith("exp+") else "exp+" + a for a in algos]
    plans = []
    for algo in algos:
        for k in dims:
            check_supported(algo, k, metric)
            plans.append(TrialPlan(ProblemConfig(k, n, metric, args.relaxed), algo, args.trials, args.pois, args.seed))
    if args.out and not Path(args.out).parent.is_dir():
        raise CliError(f"cannot write {args.out}: directory does not exist")
    stats = [run_trials(p) for p in plans]
    text = write_results(stats, args.format)
    violations = [
        {"algo": s.plan.algo, "k": s.plan.cfg.k, "trial": i, "bound": name}
        for s in stats
        for i, name in s.violations
    ]
    try:
        if args.out:
            Path(args.out).write_text(text)
        else:
            sys.stdout.write(text)
        if args.violations:
            Path(args.violations).write_text(json.dumps(violations, indent=2) + "\n")
    except OSError as e:
        raise CliError(f"cannot write output: {e}") from None
    for v in violations:
        print(f"violation: {v['algo']} k={v['k']} trial {v['trial']}: {v['bound']}", file=sys.stderr)
    return EXIT_BOUND if violations else EXIT_OK


def cmd_render(args) -> int:
    try:
        trace = load_trace(args.trace)
    except (OSError, ValueError) as e:
        raise CliError(f"cannot read trace: {e}") from None
    try:
        svg = render_svg(trace)
    except ValueError as e:
        raise CliError(str(e)) from None
    try:
        Path(args.out).write_text(svg)
    except OSError as e:
        raise CliError(f"cannot write {args.out}: {e}") from None
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_suites(quick=args.quick)
    for r in results:
        print(r.line())
    ok = all(r.ok for r in results)
    print("all suites passed" if ok else "some suites failed")
    return EXIT_OK if ok else EXIT_ERROR


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rectisearch",
        description="Probe-based search for hidden points under L1 / L-infinity metrics.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    algos = sorted(STRATEGIES) + ["exp+" + a for a in sorted(STRATEGIES)]

    def common(p, repeat: bool):
        if repeat:
            p.add_argument("--algo", action="append", choices=algos, help="strategy id (repeatable)")
            p.add_argument("--dim", action="append", type=parse_int, help="dimension k (repeatable)")
        else:
            p.add_argument("--algo", required=True, choices=algos)
            p.add_argument("--dim", type=parse_int, help="dimension k (default 2, or taken from --pois)")
        p.add_argument("--n", type=parse_number, default=2.0**20, help="size bound, e.g. 2^20 (default)")
        p.add_argument("--exact-n", action="store_true", help="do not round n up to a power of two")
        p.add_argument("--metric", choices=[m.value for m in Metric], default="linf")
        p.add_argument("--seed", type=parse_int, default=0)
        p.add_argument("--relaxed", type=parse_bool, default=True, help="stop searches at width 2 (default true)")
        p.add_argument("--exp", action="store_true", help="prepend the doubling search for an upper bound")

    run = sub.add_parser("run", help="run one trial and print its metrics as JSON")
    common(run, repeat=False)
    run.add_argument("--pois", default="1", help="POI count, or explicit points 'x,y;x,y' relative to the start")
    run.add_argument("--trace", help="write the JSON trace here")
    run.set_defaults(func=cmd_run)

    bench = sub.add_parser("bench", help="batch trials per (algo, dim) and write a results table")
    common(bench, repeat=True)
    bench.add_argument("--trials", type=parse_int, default=10_000)
    bench.add_argument("--pois", type=parse_int, default=1, help="POIs per trial")
    bench.add_argument("--out", help="results file (default stdout)")
    bench.add_argument("--format", choices=("csv", "json"), default="csv")
    bench.add_argument("--violations", help="write the bound-violation report (JSON array) here")
    bench.set_defaults(func=cmd_bench)

    render = sub.add_parser("render", help="draw a planar trace as SVG")
    render.add_argument("--trace", required=True)
    render.add_argument("--out", required=True)
    render.set_defaults(func=cmd_render)

    verify = sub.add_parser("verify", help="run the built-in property suites")
    verify.add_argument("--quick", action="store_true", help="reduced suites")
    verify.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on bad usage; 2 is reserved for bound violations here
        return EXIT_OK if e.code == 0 else EXIT_ERROR
    try:
        return args.func(args)
    except (CliError, UnsupportedConfiguration, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
