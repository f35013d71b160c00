#!/usr/bin/env python3
"""Random Kraft-Chaitin allocations, checked exactly.

Prints one row per request: reserved prefix, number of stages, final
weight, member count and longest member.  Exits 1 on the first request
whose allocation misses a target or leaves the allowed region.
"""
import argparse
import random
import sys

from stagewise.measure_core import Dyadic, compatible
from stagewise.prefix_sets import AllocationRequest, kc_allocate


def random_request(rng, max_k):
    rho = "".join(rng.choice("01") for _ in range(rng.randint(1, 5)))
    k = rng.randint(len(rho) + 1, max_k)
    cap = 2 ** k - 2 ** (k - len(rho))
    nums = sorted(rng.randrange(cap) for _ in range(rng.randint(1, 10)))
    return AllocationRequest(rho, tuple(Dyadic(n, k) for n in nums))


def problems(req, sets):
    prev = None
    for s, (v, t) in enumerate(zip(sets, req.stage_targets)):
        if v.weight != t or v.recompute_weight() != t:
            yield f"stage {s}: weight {v.weight} != {t}"
        if any(compatible(x, req.reserved) for x in v):
            yield f"stage {s}: member in the reserved cone"
        if prev is not None and not prev <= v:
            yield f"stage {s}: allocation shrank"
        prev = v


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--count", type=int, default=200)
    ap.add_argument("--max-k", type=int, default=14)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = random.Random(args.seed)
    print("reserved,stages,weight,members,longest")
    for _ in range(args.count):
        req = random_request(rng, args.max_k)
        sets = kc_allocate(req)
        bad = list(problems(req, sets))
        if bad:
            print(f"reserved {req.reserved}: " + "; ".join(bad), file=sys.stderr)
            return 1
        last = sets[-1]
        print(f"{req.reserved},{len(sets)},{last.weight},{len(last)},"
              f"{max(map(len, last), default=0)}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
