#!/usr/bin/env python3
"""Build every bundled demo scenario, write its tables and traces, then verify it.

    python scripts/run_demos.py --out out/demos
"""
import argparse
import sys
import time
from pathlib import Path

from stagewise.cli import main as cli
from stagewise.scenario import demo_names


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="out/demos")
    ap.add_argument("--only", nargs="*", help="demo names (default: all)")
    args = ap.parse_args(argv)
    names = args.only or demo_names()
    worst = 0
    for name in names:
        start = time.perf_counter()
        code = cli(["demo", "--name", name, "--out", str(Path(args.out) / name)])
        if code == 0:
            code = cli(["demo", "--name", name, "--verify"])
        worst = max(worst, code)
        print(f"# {name}: exit {code} in {time.perf_counter() - start:.2f}s", file=sys.stderr)
    return worst


if __name__ == "__main__":
    sys.exit(main())
