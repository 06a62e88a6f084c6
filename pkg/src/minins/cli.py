"""Command-line interface: run scenarios, analyze traces, validate goldens.

Exit codes: 0 success, 1 usage or scenario error, 2 data error
(malformed trace, lifecycle violations, I/O), 3 internal invariant
violation.
"""

from __future__ import annotations

import argparse
import sys

from .analyze import conservation_check, flow_stats, throughput_series
from .errors import MininsError, ScenarioError
from .golden import run_validate
from .scenario import parse_scenario
from .sim import run_scenario


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # usage errors must exit 1, not argparse's 2
        raise ScenarioError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="minins", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a scenario file")
    run_p.add_argument("scenario", help="scenario file path")
    run_p.add_argument("--seed", type=int, default=None, help="override the scenario seed")
    run_p.add_argument("--trace", default=None, help="override the trace output path")

    an_p = sub.add_parser("analyze", help="compute statistics from a trace file")
    an_p.add_argument("trace", help="trace file path")
    an_p.add_argument("--fid", type=int, default=None, help="flow id to report on")
    an_p.add_argument("--src", type=int, default=None, help="flow source node id")
    an_p.add_argument("--sink", type=int, default=None, help="flow sink node id")
    an_p.add_argument("--bin", type=float, default=None, metavar="SECONDS",
                      help="also print a throughput time series")
    an_p.add_argument("--check", action="store_true",
                      help="verify packet lifecycle conservation")

    val_p = sub.add_parser("validate", help="rerun golden scenarios against fixtures")
    val_p.add_argument("--dir", default=None, help="scenario directory (default: bundled)")
    return parser


def _cmd_run(args) -> int:
    try:
        text = open(args.scenario, encoding="utf-8").read()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario: {exc}") from None
    spec = parse_scenario(text)
    result = run_scenario(spec, trace_path=args.trace, seed=args.seed)
    sys.stdout.write(result.stats_block())
    return 0


def _cmd_analyze(args) -> int:
    wants_flow = args.fid is not None or args.src is not None or args.sink is not None
    if wants_flow and None in (args.fid, args.src, args.sink):
        raise ScenarioError("flow statistics need --fid, --src and --sink together")
    if args.bin is not None and None in (args.fid, args.sink):
        raise ScenarioError("--bin needs --fid and --sink")
    if not wants_flow and not args.check:
        raise ScenarioError("nothing to do: pass --fid/--src/--sink and/or --check")

    def lines():
        with open(args.trace, encoding="ascii") as f:
            yield from f

    status = 0
    if wants_flow:
        stats = flow_stats(lines(), args.fid, args.src, args.sink)
        print(f"sent={stats.sent}")
        print(f"received={stats.received}")
        print(f"dropped={stats.dropped}")
        print(f"bytes_received={stats.bytes_received}")
        if stats.mean_delay is not None:
            print(f"mean_delay_s={stats.mean_delay!r}")
            print(f"max_delay_s={stats.max_delay!r}")
        if args.bin is not None:
            for start, bps in throughput_series(lines(), args.fid, args.sink, args.bin):
                print(f"throughput_{start:g}s_bps={bps!r}")
    if args.check:
        violations = conservation_check(lines())
        print(f"violations={len(violations)}")
        for violation in violations:
            print(violation, file=sys.stderr)
        if violations:
            status = 2
    return status


def _cmd_validate(args) -> int:
    return 0 if run_validate(args.dir) else 1


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "analyze":
            return _cmd_analyze(args)
        return _cmd_validate(args)
    except MininsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
