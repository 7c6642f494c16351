"""Command-line entry point: ``newton-durfee <command> ...``.

Exit codes: 0 all asserted checks pass, 1 assertion failure, 2 input error,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import BudgetExceededError, DurfeeError, InputError
from .lattice_geometry import DEFAULT_BUDGET, convex_hull
from .newton_diagram import DiagramTuple, NewtonPolyhedron, load_input
from . import harness
from .covolume import generalized_inequality_check, mixed_covolumes
from .ehrhart import ehrhart_polynomial, pg_polynomial
from .invariants import IcisInput, milnor_hypersurface, milnor_icis, pg_icis

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def parse_range(text: str) -> list[int]:
    """``a..b`` (inclusive) or a single integer."""
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected a..b, got {text!r}") from exc
    if lo > hi:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return list(range(lo, hi + 1))


def _load_icis(path: str) -> IcisInput:
    return IcisInput.of(load_input(path))


def _load_single(path: str) -> NewtonPolyhedron:
    obj = load_input(path)
    if isinstance(obj, DiagramTuple):
        if obj.r != 1:
            raise InputError(f"{path}: expected a single diagram, got a tuple of {obj.r}")
        return obj.diagrams[0]
    return obj


def cmd_invariants(args) -> tuple[dict, list | None, bool]:
    inp = _load_icis(args.file)
    mu = milnor_icis(inp, args.seed)
    pg = pg_icis(inp, budget=args.budget)
    payload = {"input_hash": inp.tuple.digest(), "n": inp.n, "r": inp.r, "mu": mu, "pg": pg, "seed": args.seed}
    if inp.r == 1:
        payload["mu_hypersurface"] = milnor_hypersurface(inp.diagrams[0])
        ok = payload["mu_hypersurface"] == mu
    else:
        ok = True
    payload["consistent"] = ok
    return payload, None, ok


def cmd_durfee(args):
    inp = _load_icis(args.file)
    rep = harness.durfee_check(inp, args.d, args.seed, args.budget)
    return rep.to_dict(), [rep.csv_row()], True


def cmd_scan(args):
    inp = _load_icis(args.file)
    series = harness.scaling_scan(inp, args.range, args.seed, args.budget)
    return series.to_dict(), series.csv_rows(), series.passed


def cmd_thm2(args):
    gamma = _load_single(args.file)
    series = harness.theorem2_check(gamma, args.range, args.budget)
    return series.to_dict(), series.csv_rows(), series.passed


def cmd_counterexample(args):
    rep = harness.counterexample(args.m_range)
    return rep.to_dict(), rep.csv_rows(), rep.passed


def cmd_lemma_suite(args):
    rep = harness.lemma_suite(args.n_max, args.r_max, args.seed)
    return rep.to_dict(), None, rep.passed


def cmd_mixed_covol(args):
    inp = _load_icis(args.file)
    table = mixed_covolumes(inp.tuple, args.seed)
    payload = {"input_hash": inp.tuple.digest(), "table": table.to_dict()}
    if inp.r > 1:
        payload["generalized_inequality"] = generalized_inequality_check(inp.tuple, args.seed).to_dict()
        payload["conjecture"] = harness.conjecture_report(inp, args.seed, args.budget).to_dict()
        ok = payload["generalized_inequality"]["holds"]
    else:
        ok = True
    return payload, None, ok


def cmd_ehrhart(args):
    obj = json.loads(Path(args.file).read_text())
    if isinstance(obj, dict) and "points" in obj:
        pts = obj["points"]
        if not isinstance(pts, list) or not pts:
            raise InputError("points: expected a non-empty list")
        P = convex_hull([tuple(p) for p in pts])
        E = ehrhart_polynomial(P, args.budget)
        payload = {"kind": "polytope", "coefficients": list(E.coefficients)}
        return payload, None, True
    gamma = _load_single(args.file)
    poly = pg_polynomial(gamma, budget=args.budget)
    payload = {"kind": "pg-dilates", "input_hash": gamma.digest(), "coefficients": list(poly.coeffs)}
    return payload, None, True


COMMANDS = {
    "invariants": cmd_invariants,
    "durfee": cmd_durfee,
    "scan": cmd_scan,
    "thm2": cmd_thm2,
    "counterexample": cmd_counterexample,
    "lemma-suite": cmd_lemma_suite,
    "mixed-covol": cmd_mixed_covol,
    "ehrhart": cmd_ehrhart,
}


def build_parser() -> argparse.ArgumentParser:
    def flags(defaults: bool) -> argparse.ArgumentParser:
        # subcommand copies suppress their defaults so flags given before the subcommand survive
        g = argparse.ArgumentParser(add_help=False)
        dflt = (lambda v: v) if defaults else (lambda v: argparse.SUPPRESS)
        g.add_argument("--format", choices=["json", "csv", "text"], default=dflt("text"))
        g.add_argument("--seed", type=int, default=dflt(0))
        g.add_argument("--budget", type=int, default=dflt(DEFAULT_BUDGET), help="maximum lattice cells/columns to visit")
        g.add_argument("--out", default=dflt(None), help="write the report here instead of stdout")
        return g

    common = flags(False)
    p = argparse.ArgumentParser(prog="newton-durfee", description="Durfee-type bounds for Newton-non-degenerate singularities", parents=[flags(True)])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("invariants", "mixed-covol", "ehrhart"):
        sub.add_parser(name, parents=[common]).add_argument("file")
    d = sub.add_parser("durfee", parents=[common])
    d.add_argument("file")
    d.add_argument("--d", type=int, default=1, help="scale factor")
    for name in ("scan", "thm2"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("file")
        s.add_argument("--range", type=parse_range, required=True)
    c = sub.add_parser("counterexample", parents=[common])
    c.add_argument("--m-range", type=parse_range, default=parse_range("2..8"))
    l = sub.add_parser("lemma-suite", parents=[common])
    l.add_argument("--n-max", type=int, default=8)
    l.add_argument("--r-max", type=int, default=6)
    return p


def render(fmt: str, payload: dict, rows: list | None) -> str:
    if fmt == "json":
        return harness.to_json(payload)
    if fmt == "csv":
        return harness.to_csv(rows) if rows is not None else harness.to_kv_csv(payload)
    return harness.to_text({"version": harness.VERSION, **payload})


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        payload, rows, ok = COMMANDS[args.command](args)
    except BudgetExceededError as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InputError, json.JSONDecodeError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DurfeeError as exc:
        print(f"check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    text = render(args.format, payload, rows)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if ok else EXIT_FAIL


if __name__ == "__main__":
    raise SystemExit(main())
