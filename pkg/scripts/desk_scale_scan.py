"""Scaling scans for r=2, n=3 pairs: equal bases and unequal pairs, one CSV row per (pair, d)."""

import argparse
import sys

from newton_durfee.harness import scaling_scan, to_csv
from newton_durfee.invariants import IcisInput
from newton_durfee.newton_diagram import homogeneous, weighted


def pairs():
    H = lambda d: homogeneous(5, d)
    for g in [H(1), H(2), weighted((1, 1, 1, 1, 2)), weighted((1, 1, 1, 2, 2)), weighted((1, 1, 2, 2, 2)), weighted((2, 2, 2, 2, 3))]:
        yield "equal", g, g
    for a, b in [(H(1), H(2)), (H(2), H(3)), (H(1), H(3)), (H(1), weighted((2, 2, 2, 2, 3))), (H(2), weighted((1, 1, 1, 1, 2))), (weighted((1, 1, 1, 2, 2)), weighted((2, 2, 1, 1, 1)))]:
        yield "unequal", a, b
    # unequal pairs whose leading quotient still equals C_{3,2}
    yield "nested", H(1), weighted((1, 1, 1, 1, 2))
    yield "nested", weighted((1, 1, 1, 1, 2)), weighted((2, 1, 1, 1, 1))


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d-max", type=int, default=10)
    ap.add_argument("--csv", help="write per-scale rows here")
    args = ap.parse_args()
    rows = []
    for kind, a, b in pairs():
        s = scaling_scan(IcisInput.of([a, b]), range(1, args.d_max + 1))
        print(f"{kind:8s} {a.intercepts} {b.intercepts} quotient={s.quotient} d0={s.d0} check={s.quotient_check}")
        rows.extend(s.csv_rows())
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(to_csv(rows))
    return 0


if __name__ == "__main__":
    sys.exit(main())
