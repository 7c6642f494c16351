"""Scan k -> margin of the tangent-cone-corrected hypersurface bound for a few n=3 diagrams."""

import argparse
import sys

from newton_durfee.harness import theorem2_check, to_csv
from newton_durfee.newton_diagram import from_support, homogeneous, weighted

DIAGRAMS = {
    "homogeneous-3": homogeneous(4, 3),
    "simplex-2444": weighted((2, 4, 4, 4)),
    "simplex-2333": weighted((2, 3, 3, 3)),
    "simplex-3334": weighted((3, 3, 3, 4)),
    "cubic-plus-xy": from_support([(3, 0, 0, 0), (0, 3, 0, 0), (0, 0, 3, 0), (0, 0, 0, 3), (1, 1, 0, 0)]),
    "isolated-cone": from_support([(2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 2, 0), (1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, 1), (0, 0, 0, 3)]),
}


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--k-max", type=int, default=6)
    ap.add_argument("--csv")
    args = ap.parse_args()
    rows = []
    ok = True
    for name, g in DIAGRAMS.items():
        s = theorem2_check(g, range(1, args.k_max + 1))
        ok &= s.passed
        print(f"{name:14s} p={s.p} mu_pt={'yes' if s.includes_mu_pt else 'no '} lead={s.leading_margin} k0={s.k0} margins={[r.margin for r in s.rows]}")
        rows.extend(s.csv_rows())
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(to_csv(rows))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
