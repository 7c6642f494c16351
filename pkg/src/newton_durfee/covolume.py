"""Covolumes and mixed covolumes of Newton polyhedra.

``CoVol(λ_1Γ_1⁺ + ... + λ_rΓ_r⁺)`` is a homogeneous polynomial of degree N in
the λ_i. Its coefficient at λ^k, divided by the multinomial ``N!/Π k_i!``, is
the mixed covolume at composition k. We recover the coefficients by exact
interpolation over an integer λ-grid and check the fit on held-out points.
"""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, prod
from typing import Sequence

from .combinatorics import Composition, compositions, multinomial
from .errors import ConsistencyError, InputError
from .lattice_geometry import q, rank, solve, vadd, vscale
from .newton_diagram import DiagramTuple, NewtonPolyhedron, from_support, pareto_minimal, vol_under

HELD_OUT = 2
DEFAULT_SEED = 0


def covol(gamma: NewtonPolyhedron):
    """Covolume of Γ⁺, i.e. the volume of the region Γ⁻ under its diagram."""
    return vol_under(gamma)


def newton_sum(polys: Sequence[NewtonPolyhedron], weights: Sequence | None = None) -> NewtonPolyhedron:
    """Σ w_i Γ_i⁺ as a Newton polyhedron (vertex sums, Pareto-filtered after each step)."""
    if not polys:
        raise InputError("empty Minkowski sum")
    N = polys[0].ambient_dim
    if any(g.ambient_dim != N for g in polys):
        raise InputError("Minkowski summands live in different dimensions")
    weights = [1] * len(polys) if weights is None else list(weights)
    acc = [tuple(0 for _ in range(N))]
    for g, w in zip(polys, weights):
        if w == 0:
            continue
        if w < 0:
            raise InputError("Minkowski weights must be non-negative")
        # re-hull after every summand so the candidate list stays at vertex size
        acc = from_support(pareto_minimal(vadd(a, vscale(w, v)) for a in acc for v in g.vertices)).vertices
    return from_support(acc)


def covol_of_sum(polys: Sequence[NewtonPolyhedron], weights: Sequence) -> int | Fraction:
    return covol(newton_sum(polys, weights))


@dataclass
class MixedCovolumeTable:
    """Mixed covolumes coVol((Γ_1⁺)^{k_1}, ..., (Γ_r⁺)^{k_r}) for Σk = N."""

    N: int
    r: int
    entries: dict[Composition, object]
    grid: list[tuple] = field(default_factory=list)
    seed: int | None = None

    def __getitem__(self, k: Sequence[int]):
        return self.entries[tuple(k)]

    def positive_entries(self) -> dict[Composition, object]:
        return {k: v for k, v in self.entries.items() if all(x >= 1 for x in k)}

    def evaluate(self, lams: Sequence) -> Fraction | int:
        """CoVol(Σ λ_i Γ_i⁺) from the table."""
        return q(sum(multinomial(self.N, k) * v * prod(Fraction(l) ** e for l, e in zip(lams, k)) for k, v in self.entries.items()))

    def scaled(self, ds: Sequence) -> "MixedCovolumeTable":
        """Table of (d_1Γ_1, ..., d_rΓ_r): entries pick up Π d_i^{k_i}."""
        ent = {k: q(v * prod(Fraction(d) ** e for d, e in zip(ds, k))) for k, v in self.entries.items()}
        return MixedCovolumeTable(self.N, self.r, ent, self.grid, self.seed)

    def permuted(self, perm: Sequence[int]) -> "MixedCovolumeTable":
        """Table for the reordered tuple (Γ_{perm[0]}, ..., Γ_{perm[r-1]})."""
        ent = {tuple(k[p] for p in perm): v for k, v in self.entries.items()}
        return MixedCovolumeTable(self.N, self.r, ent, self.grid, self.seed)

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "r": self.r,
            "entries": {",".join(map(str, k)): str(v) for k, v in self.entries.items()},
            "grid": [list(g) for g in self.grid],
            "seed": self.seed,
        }

    @classmethod
    def from_dict(cls, obj: dict) -> "MixedCovolumeTable":
        ent = {tuple(int(x) for x in k.split(",")): q(Fraction(v)) for k, v in obj["entries"].items()}
        return cls(obj["N"], obj["r"], ent, [tuple(g) for g in obj.get("grid", [])], obj.get("seed"))


def _lex_grid(N: int, r: int, size: int) -> list[tuple]:
    out = []

    def rec(prefix):
        if len(out) == size:
            return
        if len(prefix) == r:
            out.append(tuple(prefix))
            return
        for v in range(1, N + 2):
            rec(prefix + [v])
            if len(out) == size:
                return

    rec([])
    return out


def _design(points, ks):
    return [[prod(l**e for l, e in zip(p, k)) for k in ks] for p in points]


def _choose_grid(N: int, r: int, ks: list, seed: int) -> tuple[list[tuple], int | None]:
    need = len(ks) + HELD_OUT
    grid = _lex_grid(N, r, need)
    if len(grid) == need and rank(_design(grid[: len(ks)], ks)) == len(ks):
        return grid, None
    rng = random.Random(seed)
    hi = 2 * N + 2
    for _ in range(100):
        pts: list[tuple] = []
        while len(pts) < need:
            p = tuple(rng.randint(1, hi) for _ in range(r))
            if p not in pts:
                pts.append(p)
        if rank(_design(pts[: len(ks)], ks)) == len(ks):
            return pts, seed
    raise ConsistencyError(f"no nonsingular interpolation grid found for N={N}, r={r}")


def mixed_covolumes(diagrams: Sequence[NewtonPolyhedron] | DiagramTuple, seed: int = DEFAULT_SEED) -> MixedCovolumeTable:
    """Mixed covolume table of a list of diagrams in a common R^N."""
    if isinstance(diagrams, DiagramTuple):
        diagrams = diagrams.diagrams
    return _mixed_cached(tuple(diagrams), seed)


@lru_cache(maxsize=2048)
def _mixed_cached(diagrams: tuple, seed: int) -> MixedCovolumeTable:
    r = len(diagrams)
    if r == 0:
        raise InputError("need at least one diagram")
    N = diagrams[0].ambient_dim
    if any(g.ambient_dim != N for g in diagrams):
        raise InputError("diagrams live in different dimensions")
    ks = compositions(N, r)
    if r == 1:
        return MixedCovolumeTable(N, 1, {ks[0]: covol(diagrams[0])}, [(1,)], None)
    grid, used_seed = _choose_grid(N, r, ks, seed)
    fit, held = grid[: len(ks)], grid[len(ks) :]
    values = [Fraction(covol_of_sum(diagrams, lam)) for lam in fit]
    coeffs = solve(_design(fit, ks), values)
    entries = {}
    for k, c in zip(ks, coeffs):
        entries[k] = q(c / multinomial(N, k))
    table = MixedCovolumeTable(N, r, entries, grid, used_seed)
    for lam in held:
        if table.evaluate(lam) != covol_of_sum(diagrams, lam):
            raise ConsistencyError(f"interpolated covolume polynomial misses the held-out point {lam}")
    for k, v in entries.items():
        if v < 0:
            raise ConsistencyError(f"negative mixed covolume {v} at {k}")
    return table


def mixed_covolume(polys: Sequence[NewtonPolyhedron], seed: int = DEFAULT_SEED):
    """coVol(P_1, ..., P_N) for exactly N polyhedra in R^N (repeats allowed)."""
    polys = list(polys)
    N = polys[0].ambient_dim
    if len(polys) != N:
        raise InputError(f"need {N} polyhedra in R^{N}, got {len(polys)}")
    counts = Counter(polys)
    distinct = sorted(counts, key=lambda g: g.vertices)
    table = mixed_covolumes(distinct, seed)
    return table[tuple(counts[g] for g in distinct)]


@dataclass
class CheckReport:
    holds: bool
    lhs: object
    rhs: object
    detail: str = ""

    def to_dict(self) -> dict:
        return {"holds": self.holds, "lhs": str(self.lhs), "rhs": str(self.rhs), "detail": self.detail}


def verify_multilinearity(g11: NewtonPolyhedron, g12: NewtonPolyhedron, fixed: Sequence[NewtonPolyhedron]) -> CheckReport:
    """coVol(Γ11⁺ + Γ12⁺, F...) = coVol(Γ11⁺, F...) + coVol(Γ12⁺, F...)."""
    fixed = list(fixed)
    lhs = mixed_covolume([newton_sum([g11, g12])] + fixed)
    rhs = q(Fraction(mixed_covolume([g11] + fixed)) + mixed_covolume([g12] + fixed))
    return CheckReport(lhs == rhs, lhs, rhs, "" if lhs == rhs else f"discrepancy {Fraction(lhs) - rhs}")


def verify_convexity(g1: NewtonPolyhedron, g2: NewtonPolyhedron, fixed: Sequence[NewtonPolyhedron]) -> CheckReport:
    """coVol(Γ1, Γ2, F)^2 <= coVol(Γ1, Γ1, F) coVol(Γ2, Γ2, F)."""
    fixed = list(fixed)
    mixed = mixed_covolume([g1, g2] + fixed)
    lhs = q(Fraction(mixed) ** 2)
    rhs = q(Fraction(mixed_covolume([g1, g1] + fixed)) * mixed_covolume([g2, g2] + fixed))
    return CheckReport(lhs <= rhs, lhs, rhs, "equality" if lhs == rhs else "")


@dataclass
class GeneralizedInequalityReport:
    n: int
    r: int
    lhs: object
    rhs: object
    holds: bool
    equality: bool
    all_equal: bool
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "lhs": str(self.lhs),
            "rhs": str(self.rhs),
            "holds": self.holds,
            "equality": self.equality,
            "all_equal": self.all_equal,
            "seed": self.seed,
        }


def generalized_inequality_check(tup: DiagramTuple, seed: int = DEFAULT_SEED) -> GeneralizedInequalityReport:
    """Averaged convexity inequality for mixed covolumes of an ICIS tuple.

    LHS = (Σ_{k in K_{n,r}} multinomial(n+r; k+1)) · Σ_{k >= 1} coVol_k
    RHS = binom(n+r-1, n) · Σ_{k >= 1} multinomial(n+r; k) coVol_k
    """
    n, r = tup.n, tup.r
    N = n + r
    table = mixed_covolumes(tup.diagrams, seed)
    pos = table.positive_entries()
    weight = sum(multinomial(N, [x + 1 for x in k]) for k in compositions(n, r))
    lhs = q(weight * sum(Fraction(v) for v in pos.values()))
    rhs = q(comb(N - 1, n) * sum(multinomial(N, k) * Fraction(v) for k, v in pos.items()))
    all_equal = len(set(tup.diagrams)) == 1
    return GeneralizedInequalityReport(n, r, lhs, rhs, lhs >= rhs, lhs == rhs, all_equal, table.seed)
