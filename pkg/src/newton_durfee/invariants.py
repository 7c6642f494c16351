"""Milnor number, geometric genus and tangent-cone data of non-degenerate germs.

Everything is computed from diagrams alone: alternating sums of lattice
volumes for μ, positive lattice points under the diagram for p_g.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial, prod
from typing import Sequence

from .combinatorics import compositions, falling_factorial
from .covolume import mixed_covolumes, newton_sum
from .errors import ConsistencyError, InputError
from .lattice_geometry import DEFAULT_BUDGET, Polytope, convex_hull, q, relative_lattice_volume
from .newton_diagram import (
    DiagramTuple,
    NewtonPolyhedron,
    count_positive_points,
    facet_total_volume,
    from_support,
    is_homogeneous,
    multiplicity,
    restrict,
    scale,
    tangent_cone_face,
    vol_j_sum,
)


@dataclass(frozen=True)
class IcisInput:
    """An ICIS of dimension n in C^{n+r}, seen through its r diagrams."""

    tuple: DiagramTuple

    @classmethod
    def of(cls, diagrams: Sequence[NewtonPolyhedron] | NewtonPolyhedron | DiagramTuple) -> "IcisInput":
        if isinstance(diagrams, DiagramTuple):
            return cls(diagrams)
        if isinstance(diagrams, NewtonPolyhedron):
            diagrams = [diagrams]
        return cls(DiagramTuple.of(diagrams))

    @property
    def n(self) -> int:
        return self.tuple.n

    @property
    def r(self) -> int:
        return self.tuple.r

    @property
    def diagrams(self) -> tuple:
        return self.tuple.diagrams

    @property
    def in_hypothesis(self) -> bool:
        """Whether (n, r) is in the range where the Durfee-type bound is claimed."""
        return (self.r == 1 and self.n >= 2) or (self.r > 1 and self.n > 2)

    def scaled(self, d) -> "IcisInput":
        return IcisInput(self.tuple.scaled(d))


def _as_integer(value, what: str) -> int:
    value = q(value)
    if not isinstance(value, int):
        raise ConsistencyError(f"{what} came out non-integral: {value}")
    if value < 0:
        raise ConsistencyError(f"{what} came out negative: {value}")
    return value


# ---------------------------------------------------------------------------
# Milnor numbers


def milnor_hypersurface(gamma: NewtonPolyhedron) -> int:
    """Σ_{i=0}^{N} (-1)^{N-i} i! Vol_i(Γ⁻)."""
    N = gamma.ambient_dim
    total = sum((-1) ** (N - i) * factorial(i) * Fraction(vol_j_sum(gamma, i)) for i in range(N + 1))
    return _as_integer(total, "Milnor number")


@lru_cache(maxsize=256)
def _icis_volume_terms(tup: DiagramTuple, seed: int) -> tuple:
    """A_j = Σ_{|I|=j} Σ_{k in K_{j,r}, k >= 1} coVol_k(Γ^I), for j = r..N."""
    N, r = tup.ambient_dim, tup.r
    out = []
    for j in range(r, N + 1):
        acc = Fraction(0)
        for I in combinations(range(N), j):
            table = mixed_covolumes(tup.restricted(I), seed)
            acc += sum(Fraction(v) for v in table.positive_entries().values())
        out.append((j, q(acc)))
    return tuple(out)


def icis_volume_terms(inp: IcisInput, seed: int = 0) -> dict[int, object]:
    return dict(_icis_volume_terms(inp.tuple, seed))


def milnor_from_terms(terms: dict, n: int, r: int, d=1) -> int:
    """μ of the tuple scaled by d, from the subspace terms A_j (which scale by d^j)."""
    N = n + r
    total = sum((-1) ** (N - j) * factorial(j) * Fraction(d) ** j * A for j, A in terms.items())
    total += (-1) ** (n + 1)
    return _as_integer(total, "ICIS Milnor number")


def milnor_icis(inp: IcisInput, seed: int = 0) -> int:
    """Alternating sum over coordinate subspaces of mixed covolumes with all k_i >= 1."""
    for g in inp.diagrams:
        if not g.is_integral:
            raise InputError("Milnor number needs diagrams with integral vertices")
    return milnor_from_terms(icis_volume_terms(inp, seed), inp.n, inp.r)


def theta(j: int, r: int, ds: Sequence) -> Fraction:
    """Θ_j(d) = (Π d_i) Σ_{k in K_{j-r,r}} Π d_i^{k_i}."""
    ds = [Fraction(d) for d in ds]
    return prod(ds) * sum(prod(d**k for d, k in zip(ds, ks)) for ks in compositions(j - r, r))


def milnor_proportional(gamma: NewtonPolyhedron, ds: Sequence):
    """μ of the tuple (d_1Γ, ..., d_rΓ) through the Θ_j closed form."""
    r = len(ds)
    N = gamma.ambient_dim
    n = N - r
    if r < 1 or n < 0:
        raise InputError(f"need 1 <= r <= N, got r={r}, N={N}")
    if any(Fraction(d) <= 0 for d in ds):
        raise InputError("proportionality factors must be positive")
    total = sum((-1) ** (N - j) * theta(j, r, ds) * factorial(j) * Fraction(vol_j_sum(gamma, j)) for j in range(r, N + 1))
    return q(total + (-1) ** (n + 1))


# ---------------------------------------------------------------------------
# geometric genus


def pg_hypersurface(gamma: NewtonPolyhedron) -> int:
    return count_positive_points(gamma)


def pg_icis(inp: IcisInput, d: int = 1, budget: int = DEFAULT_BUDGET) -> int:
    """Σ_{S nonempty} (-1)^{r-|S|} p_g(d Σ_{i in S} Γ_i), for the tuple scaled by d."""
    r = inp.r
    total = 0
    for size in range(1, r + 1):
        for S in combinations(range(r), size):
            summed = newton_sum([inp.diagrams[i] for i in S])
            total += (-1) ** (r - size) * count_positive_points(scale(summed, d), budget=budget)
    return _as_integer(total, "ICIS geometric genus")


# ---------------------------------------------------------------------------
# tangent cone


def theorem2_correction(p: int, n: int) -> int:
    """(p-1)^{n+1} - p(p-1)...(p-n); the product vanishes for p <= n."""
    if p < 1 or n < 1:
        raise InputError("need p, n >= 1")
    return (p - 1) ** (n + 1) - falling_factorial(p, n + 1)


@dataclass(frozen=True)
class TangentConeData:
    p: int
    n: int
    delta: Polytope
    delta0: Polytope
    meets_all_edges: bool
    top_dimensional: bool

    @property
    def isolated(self) -> bool:
        """Whether the combinatorial μ of the projectivised tangent cone applies."""
        return self.meets_all_edges and self.top_dimensional


def tangent_cone_data(gamma: NewtonPolyhedron) -> TangentConeData:
    N = gamma.ambient_dim
    if N < 2:
        raise InputError("tangent cone data needs N >= 2")
    p = multiplicity(gamma)
    face, top = tangent_cone_face(gamma)
    delta = convex_hull([tuple(p if j == i else 0 for j in range(N)) for i in range(N)])
    meets = all(
        any(all(v[k] == 0 for k in range(N) if k not in (i, j)) for v in face.vertices)
        for i, j in combinations(range(N), 2)
    )
    return TangentConeData(p, N - 1, delta, face, meets, top)


def _face_volume_missing(tc: TangentConeData, S: tuple[int, ...]):
    """Vol_j(F ∖ Δ₀) for the face F of Δ spanned by the vertices p e_i, i in S."""
    j = len(S) - 1
    full = Fraction(tc.p**j, factorial(j))
    inside = [v for v in tc.delta0.vertices if all(v[k] == 0 for k in range(len(v)) if k not in S)]
    if not inside:
        return full
    part = convex_hull(inside)
    if part.dim < j:
        return full
    return full - relative_lattice_volume(part)


def mu_tangent_cone(tc: TangentConeData) -> int:
    """Σ_{j=0}^{n} (-1)^{n-j} j! Vol_j(Δ ∖ Δ₀), summed over the j-faces of Δ.

    The j = 0 term counts the vertices of Δ missing from Δ₀.
    """
    if not tc.isolated:
        raise InputError("projectivised tangent cone has non-isolated singularities")
    n = tc.n
    total = Fraction(0)
    for j in range(n + 1):
        vol = sum(Fraction(_face_volume_missing(tc, S)) for S in combinations(range(n + 1), j + 1))
        total += (-1) ** (n - j) * factorial(j) * vol
    return _as_integer(total, "tangent-cone Milnor number")


def mu_tangent_cone_by_vertices(tc: TangentConeData) -> int:
    """Sum of local Milnor numbers at the vertices of Δ outside Δ₀.

    Each vertex p e_i is dehomogenised (x_i = 1) and the local diagram of Δ₀ is
    fed to the hypersurface formula.
    """
    if not tc.isolated:
        raise InputError("projectivised tangent cone has non-isolated singularities")
    N = tc.n + 1
    total = 0
    for i in range(N):
        corner = tuple(tc.p if k == i else 0 for k in range(N))
        if tc.delta0.contains(corner):
            continue
        local = [tuple(v[k] for k in range(N) if k != i) for v in tc.delta0.vertices]
        total += milnor_hypersurface(from_support(local))
    return total


def thm2_leading_margin(gamma: NewtonPolyhedron):
    """Leading coefficient (up to the factor (n+1)!/2) of the tangent-cone margin in k.

    (n-1)/(n+1) Vol_n(Γ⁻) - Vol_n(Γ) + 2/(n+1) Vol_n(σ_p) - (n-2+2/(n+1)) Vol_n(Δ).
    """
    if is_homogeneous(gamma):
        raise InputError("the leading-margin formula is for non-homogeneous diagrams")
    n = gamma.ambient_dim - 1
    tc = tangent_cone_data(gamma)
    sigma = relative_lattice_volume(tc.delta0) if tc.top_dimensional else 0
    vol_delta = Fraction(tc.p**n, factorial(n))
    margin = (
        Fraction(n - 1, n + 1) * vol_j_sum(gamma, n)
        - facet_total_volume(gamma)
        + Fraction(2, n + 1) * sigma
        - (n - 2 + Fraction(2, n + 1)) * vol_delta
    )
    return q(margin)
