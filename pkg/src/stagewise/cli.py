"""Command-line scenario runner.

    stagewise construct SCENARIO [--out DIR] [--horizon N]
    stagewise trace     SCENARIO [--out DIR] [--horizon N]
    stagewise run       SCENARIO [--out DIR] [--horizon N]
    stagewise verify    SCENARIO [--horizon N]
    stagewise demo --list
    stagewise demo --name NAME [--out DIR] [--verify]

Exit codes: 0 ok, 1 verification failure, 2 config error, 3 construction error.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional, Sequence

from .errors import ConfigError, ConstructionError
from .runner import build_all, machine_files, trace_files, write_files
from .scenario import Scenario, demo_names, demo_path, load_scenario
from .verify import SUITES, verify_result

EXIT_OK, EXIT_VERIFY, EXIT_CONFIG, EXIT_CONSTRUCTION = 0, 1, 2, 3


def run(sc: Scenario, out: Path, tables: bool = True, traces: bool = True) -> list[Path]:
    """Build every construction and write its files under ``out``."""
    files = {}
    for r in build_all(sc):
        if tables:
            files.update(machine_files(r, sc))
        if traces:
            files.update(trace_files(r, sc))
    return write_files(files, out)


def verify(sc: Scenario, stream=None) -> int:
    """Run every applicable suite; print one line per check and return the
    number of violations."""
    stream = stream or sys.stdout
    if sc.empty:
        print(f"warning: scenario {sc.name} has no constructions; nothing to verify",
              file=sys.stderr)
    total = 0
    for r in build_all(sc):
        found = verify_result(r, sc)
        total += len(found)
        failed = {v.suite for v in found}
        for suite in SUITES[r.kind]:
            if suite not in failed:
                print(f"ok   {suite} {r.id}", file=stream)
        for v in sorted(found, key=lambda v: (v.stage is None, v.stage or 0, v.suite)):
            print(v.line(), file=stream)
    print(f"{sc.name}: {total} violation(s)", file=stream)
    return total


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stagewise", description=__doc__.split("\n")[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("scenario", type=Path)
        p.add_argument("--horizon", type=int, default=None, help="override the stage horizon")
        p.add_argument("--seed", type=int, default=0,
                       help="reserved; constructions are deterministic")
        if out:
            p.add_argument("--out", type=Path, default=Path("out"))

    common(sub.add_parser("construct", help="write machine tables"))
    common(sub.add_parser("trace", help="write stage-measure traces"))
    common(sub.add_parser("run", help="write tables and traces"))
    common(sub.add_parser("verify", help="run the invariant suites"), out=False)
    demo = sub.add_parser("demo", help="bundled scenarios")
    demo.add_argument("--list", action="store_true")
    demo.add_argument("--name")
    demo.add_argument("--out", type=Path, default=None)
    demo.add_argument("--verify", action="store_true")
    demo.add_argument("--horizon", type=int, default=None)
    demo.add_argument("--seed", type=int, default=0)
    return ap


def _dispatch(args) -> int:
    if args.command == "demo":
        if args.list or not args.name:
            for name in demo_names():
                print(name)
            return EXIT_OK
        sc = load_scenario(demo_path(args.name), args.horizon)
        if args.verify:
            return EXIT_VERIFY if verify(sc) else EXIT_OK
        out = args.out or Path("out") / sc.name
        for path in run(sc, out):
            print(path)
        return EXIT_OK
    sc = load_scenario(args.scenario, args.horizon)
    if args.command == "verify":
        return EXIT_VERIFY if verify(sc) else EXIT_OK
    if sc.empty:
        print(f"warning: scenario {sc.name} has no constructions", file=sys.stderr)
    tables = args.command in ("construct", "run")
    traces = args.command in ("trace", "run")
    for path in run(sc, args.out, tables, traces):
        print(path)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _dispatch(args)
    except ConfigError as exc:
        print(f"ConfigError: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConstructionError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_CONSTRUCTION


if __name__ == "__main__":
    sys.exit(main())
