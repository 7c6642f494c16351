"""Experiment drivers: Durfee verdicts, scaling scans, tangent-cone bound scans,
the tetrahedron counterexample, the combinatorial checks, and report output."""

from __future__ import annotations

import csv
import io
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import comb, factorial
from typing import Sequence

from .combinatorics import (
    CheckResult,
    PropertyReport,
    _run,
    cnr,
    compositions,
    multinomial,
    stirling2,
    verify_cnr_properties,
)
from .covolume import mixed_covolumes, newton_sum
from .errors import ConsistencyError, InputError
from .lattice_geometry import DEFAULT_BUDGET, convex_hull, lattice_points, normalized_volume, relative_lattice_volume, q
from .newton_diagram import (
    NewtonPolyhedron,
    count_positive_points,
    facet_total_volume,
    is_homogeneous,
    random_convenient,
    scale,
    vol_j_sum,
    vol_under,
)
from .invariants import (
    IcisInput,
    icis_volume_terms,
    milnor_from_terms,
    pg_icis,
    mu_tangent_cone,
    tangent_cone_data,
    theorem2_correction,
    thm2_leading_margin,
)

VERSION = "newton_durfee 0.1.0"
CSV_COLUMNS = ["input_hash", "n", "r", "d", "mu", "pg", "cnr_num", "cnr_den", "margin_num", "margin_den", "verdict"]
TANGENT_CONE_CONVENTION = "face sum over j = 0..n; the j = 0 term counts vertices of the simplex missing from the tangent-cone face"
COVOLUME_CONVENTION = "mixed terms use the covolume normalisation coVol"


def _frac(x) -> Fraction:
    return Fraction(x)


def _s(x) -> str:
    return str(q(x))


# ---------------------------------------------------------------------------
# Durfee verdicts


@dataclass
class InvariantReport:
    input_hash: str
    n: int
    r: int
    d: int
    mu: int
    pg: int
    cnr: Fraction
    margin: Fraction
    ratio: Fraction | None
    verdict: str
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "input_hash": self.input_hash,
            "n": self.n,
            "r": self.r,
            "d": self.d,
            "mu": self.mu,
            "pg": self.pg,
            "cnr": _s(self.cnr),
            "margin": _s(self.margin),
            "ratio": None if self.ratio is None else _s(self.ratio),
            "verdict": self.verdict,
            "metadata": self.metadata,
        }

    def csv_row(self) -> list:
        c, m = _frac(self.cnr), _frac(self.margin)
        return [self.input_hash, self.n, self.r, self.d, self.mu, self.pg, c.numerator, c.denominator, m.numerator, m.denominator, self.verdict]


def verdict_for(inp: IcisInput, pg: int, margin) -> str:
    if not inp.in_hypothesis:
        return "out-of-hypothesis"
    if pg == 0:
        return "pg-zero"
    return "holds" if margin > 0 else "violated"


def _report(inp: IcisInput, d: int, mu: int, pg: int, metadata: dict | None = None) -> InvariantReport:
    c = cnr(inp.n, inp.r)
    margin = mu - c * pg
    ratio = Fraction(mu, pg) if pg > 0 else None
    return InvariantReport(inp.tuple.digest(), inp.n, inp.r, d, mu, pg, c, margin, ratio, verdict_for(inp, pg, margin), metadata or {})


def durfee_check(inp: IcisInput, d: int = 1, seed: int = 0, budget: int = DEFAULT_BUDGET) -> InvariantReport:
    """μ, p_g, C_{n,r}, the margin μ - C_{n,r} p_g and a verdict for the tuple scaled by d."""
    terms = icis_volume_terms(inp, seed)
    mu = milnor_from_terms(terms, inp.n, inp.r, d)
    pg = pg_icis(inp, d, budget)
    return _report(inp, d, mu, pg, {"seed": seed, "in_hypothesis": inp.in_hypothesis})


# ---------------------------------------------------------------------------
# scaling scans


@dataclass
class ScanSeries:
    reports: list[InvariantReport]
    lt_mu: Fraction
    lt_pg: Fraction
    quotient: Fraction
    cnr: Fraction
    all_equal: bool
    d0: int | None
    ratio_decreasing: bool
    fitted: dict = field(default_factory=dict)

    @property
    def quotient_check(self) -> bool:
        """Equal diagrams reach C_{n,r} exactly; unequal ones exceed it."""
        return self.quotient == self.cnr if self.all_equal else self.quotient > self.cnr

    @property
    def passed(self) -> bool:
        return self.quotient_check and self.fitted.get("consistent", True)

    def to_dict(self) -> dict:
        return {
            "reports": [r.to_dict() for r in self.reports],
            "lt_mu": _s(self.lt_mu),
            "lt_pg": _s(self.lt_pg),
            "quotient": _s(self.quotient),
            "cnr": _s(self.cnr),
            "all_equal": self.all_equal,
            "quotient_check": self.quotient_check,
            "d0": self.d0,
            "ratio_decreasing": self.ratio_decreasing,
            "fitted": self.fitted,
            "passed": self.passed,
        }

    def csv_rows(self) -> list[list]:
        return [r.csv_row() for r in self.reports]


def leading_terms(inp: IcisInput, seed: int = 0) -> tuple[Fraction, Fraction]:
    """Coefficients of d^N in μ(dΓ) and p_g(dΓ), from the full-space mixed covolume table."""
    N = inp.n + inp.r
    table = mixed_covolumes(inp.diagrams, seed)
    pos = table.positive_entries()
    lt_mu = factorial(N) * sum(_frac(v) for v in pos.values())
    lt_pg = sum(multinomial(N, k) * _frac(v) for k, v in pos.items())
    return q(lt_mu), q(lt_pg)


def leading_pg_by_sums(inp: IcisInput):
    """l.t.(p_g) again, as the inclusion-exclusion of covolumes of Minkowski sums."""
    r = inp.r
    total = Fraction(0)
    for size in range(1, r + 1):
        for S in combinations(range(r), size):
            total += (-1) ** (r - size) * _frac(vol_under(newton_sum([inp.diagrams[i] for i in S])))
    return q(total)


def threshold(ds: Sequence[int], good: Sequence[bool]) -> int | None:
    """First d from which every later entry is good, or None if the last one fails."""
    d0 = None
    for d, ok in zip(ds, good):
        if ok and d0 is None:
            d0 = d
        elif not ok:
            d0 = None
    return d0


def _fit_top(ds: list[int], values: list[int], degree: int):
    from .ehrhart import fit_polynomial

    return fit_polynomial(ds, values, degree).coefficient(degree)


def scaling_scan(inp: IcisInput, d_range: Sequence[int], seed: int = 0, budget: int = DEFAULT_BUDGET) -> ScanSeries:
    ds = sorted(set(d_range))
    if not ds or ds[0] < 1:
        raise InputError("scan range must be a non-empty set of positive integers")
    reports = [durfee_check(inp, d, seed, budget) for d in ds]
    lt_mu, lt_pg = leading_terms(inp, seed)
    by_sums = leading_pg_by_sums(inp)
    if by_sums != lt_pg:
        raise ConsistencyError(f"leading p_g term {lt_pg} from the table != {by_sums} from Minkowski sums")
    c = cnr(inp.n, inp.r)
    ratios = [r.ratio for r in reports if r.ratio is not None]
    decreasing = all(a > b for a, b in zip(ratios, ratios[1:]))
    d0 = threshold(ds, [r.margin > 0 for r in reports])
    N = inp.n + inp.r
    fitted: dict = {}
    # p_g(dΓ) is an exact polynomial of degree N in d >= 1, so enough samples pin it down
    if len(ds) >= N + 2:
        top_mu = _fit_top(ds, [r.mu for r in reports], N)
        top_pg = _fit_top(ds, [r.pg for r in reports], N)
        fitted = {
            "mu_top": _s(top_mu),
            "pg_top": _s(top_pg),
            "consistent": top_mu == lt_mu and top_pg == lt_pg,
        }
    all_equal = len(set(inp.diagrams)) == 1
    return ScanSeries(reports, lt_mu, lt_pg, q(Fraction(lt_mu) / lt_pg), c, all_equal, d0, decreasing, fitted)


# ---------------------------------------------------------------------------
# hypersurface bound with the tangent-cone correction


@dataclass
class TangentBoundRow:
    k: int
    mu: int
    mu_pt: int
    correction: int
    pg: int
    margin: int

    def to_dict(self) -> dict:
        return self.__dict__.copy()


@dataclass
class TangentBoundSeries:
    input_hash: str
    n: int
    p: int
    homogeneous: bool
    includes_mu_pt: bool
    meets_all_edges: bool
    sigma_top_dimensional: bool
    leading_margin: Fraction | None
    rows: list[TangentBoundRow]
    k0: int | None

    @property
    def passed(self) -> bool:
        if self.homogeneous:
            return all(r.margin == 0 for r in self.rows)
        return self.leading_margin is not None and self.leading_margin > 0

    def to_dict(self) -> dict:
        return {
            "input_hash": self.input_hash,
            "n": self.n,
            "p": self.p,
            "homogeneous": self.homogeneous,
            "includes_mu_pt": self.includes_mu_pt,
            "meets_all_edges": self.meets_all_edges,
            "sigma_top_dimensional": self.sigma_top_dimensional,
            "leading_margin": None if self.leading_margin is None else _s(self.leading_margin),
            "rows": [r.to_dict() for r in self.rows],
            "k0": self.k0,
            "passed": self.passed,
            "metadata": {"tangent_cone_convention": TANGENT_CONE_CONVENTION},
        }

    def csv_rows(self) -> list[list]:
        c = factorial(self.n + 1)
        verdict = lambda m: ("equality" if m == 0 else "holds" if m > 0 else "violated")
        return [[self.input_hash, self.n, 1, r.k, r.mu, r.pg, c, 1, r.margin, 1, verdict(r.margin)] for r in self.rows]


def theorem2_check(gamma: NewtonPolyhedron, k_range: Sequence[int], budget: int = DEFAULT_BUDGET) -> TangentBoundSeries:
    """Per k: μ(kΓ) - μ(ℙT) - correction(kp, n) - (n+1)! p_g(kΓ).

    μ(ℙT) enters only when the tangent-cone singularities are isolated.
    """
    ks = sorted(set(k_range))
    if not ks or ks[0] < 1:
        raise InputError("k range must be a non-empty set of positive integers")
    N = gamma.ambient_dim
    n = N - 1
    if n < 1:
        raise InputError("need a diagram in at least two variables")
    vols = [vol_j_sum(gamma, j) for j in range(N + 1)]
    tc = tangent_cone_data(gamma)
    homog = is_homogeneous(gamma)
    rows = []
    for k in ks:
        mu = q(sum((-1) ** (N - j) * factorial(j) * Fraction(k) ** j * vols[j] for j in range(N + 1)))
        mu_pt = mu_tangent_cone(tangent_cone_data(scale(gamma, k))) if tc.isolated else 0
        corr = theorem2_correction(k * tc.p, n)
        pg = count_positive_points(scale(gamma, k), budget=budget)
        rows.append(TangentBoundRow(k, mu, mu_pt, corr, pg, mu - mu_pt - corr - factorial(n + 1) * pg))
    lead = None if homog else thm2_leading_margin(gamma)
    k0 = threshold(ks, [(r.margin == 0) if homog else (r.margin > 0) for r in rows])
    return TangentBoundSeries(gamma.digest(), n, tc.p, homog, tc.isolated, tc.meets_all_edges, tc.top_dimensional, lead, rows, k0)


# ---------------------------------------------------------------------------
# the tetrahedron counterexample


@dataclass
class CounterexampleRow:
    m: int
    vol3: Fraction
    vol2: Fraction
    vol1: int
    interior: int
    face_interior: int
    mu: int
    pg: int
    margin: int
    matches: bool

    def to_dict(self) -> dict:
        d = self.__dict__.copy()
        d["vol3"], d["vol2"] = _s(self.vol3), _s(self.vol2)
        return d


@dataclass
class CounterexampleReport:
    rows: list[CounterexampleRow]

    @property
    def passed(self) -> bool:
        return all(r.matches for r in self.rows)

    def to_dict(self) -> dict:
        return {"rows": [r.to_dict() for r in self.rows], "passed": self.passed}

    def csv_rows(self) -> list[list]:
        return [["tetrahedron-m%d" % r.m, 2, 1, r.m, r.mu, r.pg, 6, 1, r.margin, 1, "violated" if r.margin < 0 else "holds"] for r in self.rows]


def _edge_length(u, v) -> int:
    from math import gcd

    g = 0
    for a, b in zip(u, v):
        g = gcd(g, a - b)
    return g


def counterexample_row(m: int) -> CounterexampleRow:
    if m < 2:
        raise InputError("counterexample needs m >= 2")
    apex = (-1, -1, -1)
    tips = [tuple(m if j == i else 0 for j in range(3)) for i in range(3)]
    T = convex_hull([apex] + tips)
    vol3 = normalized_volume(T)
    vol2 = sum(_frac(relative_lattice_volume(convex_hull([apex, a, b]))) for a, b in combinations(tips, 2))
    vol1 = sum(_edge_length(apex, t) for t in tips)
    interior = len(lattice_points(T, interior=True))
    far = convex_hull(tips)
    face_interior = len(lattice_points(far, interior=True))
    mu = q(6 * vol3 - 2 * vol2 + vol1 - 1)
    pg = interior + face_interior
    margin = mu - 6 * pg
    matches = (
        vol3 == Fraction(m**3 + 3 * m**2, 6)
        and vol2 == Fraction(3 * m, 2)
        and vol1 == 3
        and interior == comb(m + 2, 3)
        and face_interior == comb(m - 1, 2)
        and mu == m**3 + 3 * m**2 - 3 * m + 2
        and pg == comb(m + 2, 3) + comb(m - 1, 2)
        and margin == -3 * m**2 + 4 * m - 4
        and margin < 0
    )
    return CounterexampleRow(m, q(vol3), q(vol2), vol1, interior, face_interior, mu, pg, margin, matches)


def counterexample(m_range: Sequence[int]) -> CounterexampleReport:
    return CounterexampleReport([counterexample_row(m) for m in sorted(set(m_range))])


# ---------------------------------------------------------------------------
# combinatorial checks


def stirling_ratio_holds(n: int, r: int) -> bool:
    """S(n+r-1, r) / S(n+r, r) > 2n / (n+r-1)^2."""
    return Fraction(stirling2(n + r - 1, r), stirling2(n + r, r)) > Fraction(2 * n, (n + r - 1) ** 2)


def stirling_comparison_holds(n: int, r: int) -> bool:
    """S(n+r, r) >= S(n+r-1, r-1), with equality exactly when n = 0."""
    a, b = stirling2(n + r, r), stirling2(n + r - 1, r - 1)
    return a == b if n == 0 else a > b


def random_corpus(seed: int, size: int, dims: Sequence[int] = (2, 3, 4), max_coord: int = 6) -> list[NewtonPolyhedron]:
    rng = random.Random(seed)
    return [random_convenient(rng, rng.choice(list(dims)), max_coord) for _ in range(size)]


def facet_volume_claim_holds(gamma: NewtonPolyhedron) -> bool:
    """Vol_{N-1}(Γ) <= Vol_{N-1}(Γ⁻) / N."""
    N = gamma.ambient_dim
    return N * _frac(facet_total_volume(gamma)) <= _frac(vol_j_sum(gamma, N - 1))


def lemma_suite(n_max: int = 8, r_max: int = 6, seed: int = 0, corpus_size: int = 60) -> PropertyReport:
    report = verify_cnr_properties(n_max, r_max)
    grid = [(n, r) for r in range(2, r_max + 1) for n in range(3, n_max + 1)]
    report.checks.append(_run("stirling-ratio-lower-bound", grid, stirling_ratio_holds))
    boundary = Fraction(stirling2(4, 2), stirling2(5, 2))
    report.checks.append(
        CheckResult("stirling-ratio-boundary-(2,3)", boundary == Fraction(7, 15) and boundary > Fraction(3, 8), 1, None, f"{boundary} > 3/8")
    )
    cmp_grid = [(n, r) for n in range(0, n_max + 1) for r in range(1, r_max + 1)]
    report.checks.append(_run("stirling-comparison", cmp_grid, stirling_comparison_holds))
    corpus = random_corpus(seed, corpus_size)
    res = _run("facet-volume-claim", [(g,) for g in corpus], facet_volume_claim_holds)
    res.detail = f"seed {seed}"
    report.checks.append(res)
    return report


# ---------------------------------------------------------------------------
# the conjectural strengthening


@dataclass
class ConjectureReport:
    lhs: Fraction
    rhs: Fraction
    lhs_exceeds_rhs: bool
    label: str = "CONJECTURAL"

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "lhs": _s(self.lhs),
            "rhs": _s(self.rhs),
            "lhs_exceeds_rhs": self.lhs_exceeds_rhs,
            "metadata": {"normalisation": COVOLUME_CONVENTION},
        }


def conjecture_report(inp: IcisInput, seed: int = 0, budget: int = DEFAULT_BUDGET) -> ConjectureReport:
    """Both sides of the conjectured refinement; reported, never asserted."""
    if inp.r < 1:
        raise InputError("need r >= 1")
    n, r = inp.n, inp.r
    N = n + r
    c = cnr(n, r)
    table = mixed_covolumes(inp.diagrams, seed)
    rhs = sum(
        _frac(table[tuple(x + 1 for x in k)]) * (factorial(N) - c * multinomial(N, [x + 1 for x in k]))
        for k in compositions(n, r)
    )
    rep = durfee_check(inp, 1, seed, budget)
    lhs = _frac(rep.margin)
    return ConjectureReport(q(lhs), q(rhs), lhs > rhs)


# ---------------------------------------------------------------------------
# output


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return _s(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def to_json(payload: dict) -> str:
    return json.dumps(_jsonable({"version": VERSION, **payload}), sort_keys=True, indent=2) + "\n"


def to_csv(rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    w.writerows(rows)
    return buf.getvalue()


def to_kv_csv(payload: dict) -> str:
    """Flattened key,value CSV for reports that are not row-shaped."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["key", "value"])

    def walk(prefix, obj):
        if isinstance(obj, dict):
            for k in sorted(obj):
                walk(f"{prefix}.{k}" if prefix else str(k), obj[k])
        elif isinstance(obj, list):
            for i, v in enumerate(obj):
                walk(f"{prefix}[{i}]", v)
        else:
            w.writerow([prefix, obj])

    walk("", _jsonable(payload))
    return buf.getvalue()


def to_text(payload: dict, indent: int = 0) -> str:
    lines = []
    pad = "  " * indent
    for k in sorted(payload):
        v = _jsonable(payload[k])
        if isinstance(v, dict):
            lines.append(f"{pad}{k}:")
            lines.append(to_text(v, indent + 1).rstrip("\n"))
        elif isinstance(v, list) and v and isinstance(v[0], dict):
            lines.append(f"{pad}{k}:")
            for i, item in enumerate(v):
                lines.append(f"{pad}  [{i}]")
                lines.append(to_text(item, indent + 2).rstrip("\n"))
        else:
            lines.append(f"{pad}{k}: {v}")
    return "\n".join(l for l in lines if l) + "\n"
