"""Ehrhart polynomials, lattice-point counts of dilates, and p_g expansions."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import gcd, prod
from typing import Sequence

from .errors import BudgetExceededError, ConsistencyError, InputError, NonIntegralError
from .lattice_geometry import (
    DEFAULT_BUDGET,
    Polytope,
    normalized_volume,
    q,
    relative_lattice_volume,
    solve,
)
from .newton_diagram import (
    NewtonPolyhedron,
    count_positive_points,
    facet_total_volume,
    scale,
    vol_j_sum,
    vol_under,
)

MAX_EHRHART_DIM = 5


@dataclass(frozen=True)
class Polynomial:
    """Univariate polynomial with exact coefficients, lowest degree first."""

    coeffs: tuple

    def __call__(self, x):
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return q(acc)

    @property
    def degree(self) -> int:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i] != 0:
                return i
        return -1

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        a = list(self.coeffs) + [0] * (n - len(self.coeffs))
        b = list(other.coeffs) + [0] * (n - len(other.coeffs))
        return Polynomial(tuple(q(x - y) for x, y in zip(a, b)))

    def coefficient(self, i: int):
        return self.coeffs[i] if i < len(self.coeffs) else 0


def fit_polynomial(xs: Sequence, ys: Sequence, degree: int) -> Polynomial:
    """Exact fit of a degree-``degree`` polynomial through the first degree+1 points.

    Any further points are checked against the fit and a mismatch raises.
    """
    if len(xs) != len(ys) or len(xs) < degree + 1:
        raise InputError(f"need at least {degree + 1} samples")
    m = degree + 1
    V = [[Fraction(x) ** j for j in range(m)] for x in xs[:m]]
    P = Polynomial(tuple(q(c) for c in solve(V, [Fraction(y) for y in ys[:m]])))
    for x, y in zip(xs[m:], ys[m:]):
        if P(x) != y:
            raise ConsistencyError(f"samples are not a degree-{degree} polynomial: P({x}) = {P(x)} != {y}")
    return P


# ---------------------------------------------------------------------------
# counting


def count_halfspace_points(
    halfspaces: Sequence[tuple],
    bbox: Sequence[tuple[int, int]],
    strict: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> int:
    """Lattice points of a box satisfying ``<a, x> >= c`` (``>`` if strict) for every halfspace.

    The first N-1 coordinates are walked, the last one is solved in closed form.
    """
    N = len(bbox)
    *head, (lo_last, hi_last) = bbox
    columns = prod(max(0, hi - lo + 1) for lo, hi in head)
    if columns > budget:
        raise BudgetExceededError(f"{columns} columns exceed budget {budget}")
    total = 0
    if any(type(c) is not int for _, c in halfspaces):
        L = 1
        for _, c in halfspaces:
            L = L * Fraction(c).denominator // gcd(L, Fraction(c).denominator)
        halfspaces = [(tuple(L * x for x in a), int(L * c)) for a, c in halfspaces]
    rows = [(a[: N - 1], a[N - 1], c) for a, c in halfspaces]
    for prefix in product(*(range(lo, hi + 1) for lo, hi in head)):
        lo, hi = lo_last, hi_last
        for a, t, c in rows:
            rest = c - sum(x * y for x, y in zip(a, prefix))
            # t * x_N >= rest (or >)
            if t == 0:
                if (rest < 0) if strict else (rest <= 0):
                    continue
                lo, hi = 1, 0
                break
            if t > 0:
                lo = max(lo, rest // t + 1 if strict else -(-rest // t))
            else:
                p, m = -rest, -t
                hi = min(hi, -(-p // m) - 1 if strict else p // m)
            if lo > hi:
                break
        if hi >= lo:
            total += hi - lo + 1
    return total


def _require_lattice_full(P: Polytope) -> None:
    if not P.is_full_dimensional:
        raise InputError("lattice-point counting of dilates needs a full-dimensional polytope")
    if not P.is_lattice():
        raise NonIntegralError("Ehrhart data needs a lattice polytope")


def count_points(P: Polytope, k: int, interior: bool = False, budget: int = DEFAULT_BUDGET) -> int:
    """|kP ∩ Z^N|, or the count of the interior of kP."""
    _require_lattice_full(P)
    if k < 0:
        raise InputError("dilation factor must be >= 0")
    if k == 0:
        return 0 if interior else 1
    box = [(k * lo, k * hi) for lo, hi in P.bounding_box()]
    hs = [(a, k * c) for a, c in P.halfspaces]
    return count_halfspace_points(hs, box, strict=interior, budget=budget)


def facet_volume_sum(P: Polytope):
    """Total induced-lattice volume of the facets of P."""
    return q(sum(Fraction(relative_lattice_volume(P.face_polytope(F))) for F in P.facet_vertices))


@dataclass(frozen=True)
class EhrhartPolynomial:
    dim: int
    poly: Polynomial

    @property
    def coefficients(self) -> tuple:
        return self.poly.coeffs

    def __call__(self, k: int):
        return self.poly(k)

    def interior(self, k: int):
        """Interior count of kP by reciprocity."""
        return (-1) ** self.dim * self.poly(-k)


def ehrhart_polynomial(P: Polytope, budget: int = DEFAULT_BUDGET) -> EhrhartPolynomial:
    """Interpolate L(k) = |kP ∩ Z^N| through k = 0..N and audit it.

    Checks c_N = Vol_N(P), c_{N-1} = facet volume / 2, c_0 = 1 and reciprocity
    against direct interior counts for k = 1..N.
    """
    _require_lattice_full(P)
    N = P.ambient_dim
    if N > MAX_EHRHART_DIM:
        raise InputError(f"Ehrhart interpolation is limited to N <= {MAX_EHRHART_DIM}")
    ks = list(range(N + 1))
    poly = fit_polynomial(ks, [count_points(P, k, budget=budget) for k in ks], N)
    E = EhrhartPolynomial(N, poly)
    vol = normalized_volume(P)
    if poly.coefficient(N) != vol:
        raise ConsistencyError(f"leading Ehrhart coefficient {poly.coefficient(N)} != volume {vol}")
    half = q(Fraction(facet_volume_sum(P)) / 2)
    if poly.coefficient(N - 1) != half:
        raise ConsistencyError(f"second Ehrhart coefficient {poly.coefficient(N - 1)} != half facet volume {half}")
    if poly.coefficient(0) != 1:
        raise ConsistencyError(f"constant Ehrhart coefficient is {poly.coefficient(0)}")
    for k in range(1, N + 1):
        direct = count_points(P, k, interior=True, budget=budget)
        if E.interior(k) != direct:
            raise ConsistencyError(f"reciprocity fails at k={k}: {E.interior(k)} != {direct}")
    return E


def pick_holds(P: Polytope, k_max: int = 3) -> bool:
    """Closed and interior counts of kP agree with k^2 A ± (k/2) B + 1 for a lattice polygon."""
    _require_lattice_full(P)
    if P.ambient_dim != 2:
        raise InputError("Pick's identity is for lattice polygons")
    A = normalized_volume(P)
    B = facet_volume_sum(P)
    for k in range(1, k_max + 1):
        if count_points(P, k) != k * k * A + Fraction(k, 2) * B + 1:
            return False
        if count_points(P, k, interior=True) != k * k * A - Fraction(k, 2) * B + 1:
            return False
    return True


# ---------------------------------------------------------------------------
# p_g of dilated diagrams


def pg_leading_terms(gamma: NewtonPolyhedron) -> tuple:
    """Coefficients of k^N and k^{N-1} in k ↦ p_g(kΓ)."""
    N = gamma.ambient_dim
    lead = vol_under(gamma)
    sub = q((Fraction(facet_total_volume(gamma)) - vol_j_sum(gamma, N - 1)) / 2)
    return lead, sub


def pg_series(gamma: NewtonPolyhedron, ks: Sequence[int], budget: int = DEFAULT_BUDGET) -> list[int]:
    return [count_positive_points(scale(gamma, k), budget=budget) for k in ks]


def pg_polynomial(gamma: NewtonPolyhedron, extra: int = 2, budget: int = DEFAULT_BUDGET) -> Polynomial:
    """Exact polynomial k ↦ p_g(kΓ) fitted on k = 1..N+1 and checked on ``extra`` more values."""
    N = gamma.ambient_dim
    ks = list(range(1, N + 2 + extra))
    return fit_polynomial(ks, pg_series(gamma, ks, budget), N)


def pg_remainder(gamma: NewtonPolyhedron, budget: int = DEFAULT_BUDGET) -> Polynomial:
    """p_g(kΓ) minus its two leading terms; its degree should be at most N-2."""
    N = gamma.ambient_dim
    lead, sub = pg_leading_terms(gamma)
    top = [0] * (N + 1)
    top[N], top[N - 1] = lead, sub
    return pg_polynomial(gamma, budget=budget) - Polynomial(tuple(top))


def pg_by_box_difference(gamma: NewtonPolyhedron, budget: int = DEFAULT_BUDGET) -> int:
    """p_g as interior points of a big box minus interior points of Γ⁺ ∩ box."""
    if not gamma.convenient:
        raise InputError("box-difference count needs a convenient diagram")
    if not gamma.is_integral:
        raise NonIntegralError("lattice counts need a diagram with integral vertices")
    N = gamma.ambient_dim
    M = max(gamma.intercepts) + 1
    box_interior = (M - 1) ** N
    box = [(1, M - 1)] * N
    hs = [(a, c) for a, c, _ in gamma.facets]
    above = count_halfspace_points(hs, box, strict=True, budget=budget)
    return box_interior - above
