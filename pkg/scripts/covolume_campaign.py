"""Randomised campaign for the averaged mixed-covolume inequality."""

import argparse
import random
import sys
import time

from newton_durfee.covolume import generalized_inequality_check
from newton_durfee.newton_diagram import DiagramTuple, random_convenient


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=120)
    ap.add_argument("--seed", type=int, default=2024)
    ap.add_argument("--max-coord", type=int, default=6)
    ap.add_argument("--n-max", type=int, default=3)
    ap.add_argument("--r-max", type=int, default=3)
    args = ap.parse_args()
    rng = random.Random(args.seed)
    violations = equal = equal_hits = 0
    t = time.perf_counter()
    for i in range(args.count):
        n, r = rng.randint(1, args.n_max), rng.randint(1, args.r_max)
        first = random_convenient(rng, n + r, args.max_coord)
        same = i % 4 == 0
        ds = [first] * r if same else [first] + [random_convenient(rng, n + r, args.max_coord) for _ in range(r - 1)]
        rep = generalized_inequality_check(DiagramTuple.of(ds))
        if not rep.holds:
            violations += 1
            print(f"violation: n={n} r={r} lhs={rep.lhs} rhs={rep.rhs} diagrams={[g.vertices for g in ds]}")
        if same:
            equal += 1
            equal_hits += rep.equality
    print(f"{args.count} instances, {violations} violations, equality on {equal_hits}/{equal} equal-diagram instances, {time.perf_counter() - t:.1f}s")
    return 1 if violations or equal_hits != equal else 0


if __name__ == "__main__":
    sys.exit(main())
