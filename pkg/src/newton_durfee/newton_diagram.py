"""Newton polyhedra, their diagrams, and the region under a diagram.

A :class:`NewtonPolyhedron` stores the H-representation of
``conv(support) + R^N_{>=0}`` together with its vertices. The Newton diagram
is the union of its compact faces; for a convenient diagram the bounded
region ``Γ⁻`` under it is ``{x >= 0 : min_F (<a_F, x> - c_F) <= 0}`` over the
compact facets ``F``. Axis indices are 0-based throughout the Python API.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import ceil
from pathlib import Path
from typing import Iterable, Sequence

from .errors import (
    BudgetExceededError,
    DimensionMismatchError,
    InputError,
    NonIntegralError,
    NotConvenientError,
)
from .lattice_geometry import (
    DEFAULT_BUDGET,
    column_hermite,
    vsub,
    MAX_AMBIENT_DIM,
    Polytope,
    convex_hull,
    denominator_lcm,
    det,
    dot,
    enumerate_lattice_points,
    hull_facets,
    q,
    qvec,
    vertex_mask,
    vscale,
)

# Boxes up to this many cells get the full lattice cross-check at construction.
VALIDATION_BOX_CAP = 20_000


def pareto_minimal(points: Iterable[Sequence]) -> list[tuple]:
    """Drop points that dominate another point coordinatewise; they never matter for Γ⁺."""
    pts = sorted(set(qvec(p) for p in points), key=lambda p: (sum(p), p))
    kept: list[tuple] = []
    for p in pts:
        if not any(all(a <= b for a, b in zip(k, p)) for k in kept):
            kept.append(p)
    return sorted(kept)


class NewtonPolyhedron:
    """Γ⁺ = conv(support) + orthant, with its compact faces forming the diagram Γ."""

    def __init__(self, ambient_dim: int, vertices, facets, *, validate: bool = True):
        self.ambient_dim = ambient_dim
        self.vertices: tuple[tuple, ...] = vertices
        # (normal, offset, frozenset of vertex indices), normal primitive and >= 0
        self.facets: tuple = facets
        if validate:
            self._validate()

    def __repr__(self):
        return f"NewtonPolyhedron(N={self.ambient_dim}, vertices={list(self.vertices)})"

    def __eq__(self, other):
        return isinstance(other, NewtonPolyhedron) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    @cached_property
    def compact_facets(self) -> tuple:
        return tuple(f for f in self.facets if all(a > 0 for a in f[0]))

    @cached_property
    def intercepts(self) -> tuple:
        """Per axis the value d_i with Γ ∩ axis_i = d_i e_i, or ``None``."""
        out = []
        for i in range(self.ambient_dim):
            on_axis = [v[i] for v in self.vertices if all(x == 0 for j, x in enumerate(v) if j != i)]
            out.append(min(on_axis) if on_axis else None)
        return tuple(out)

    @property
    def convenient(self) -> bool:
        return all(d is not None for d in self.intercepts)

    @property
    def is_integral(self) -> bool:
        return all(isinstance(x, int) for v in self.vertices for x in v)

    def canonical(self) -> dict:
        return {"ambient_dim": self.ambient_dim, "vertices": [[str(x) for x in v] for v in self.vertices]}

    def digest(self) -> str:
        blob = json.dumps(self.canonical(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]

    @cached_property
    def facet_polytopes(self) -> tuple[Polytope, ...]:
        """The compact facets as standalone polytopes (the top-dimensional faces of Γ)."""
        return tuple(convex_hull([self.vertices[i] for i in sorted(fv)]) for _, _, fv in self.compact_facets)

    @cached_property
    def _skeleton(self) -> Polytope:
        # Face-lattice view of Γ⁺: the faces of a compact facet are its
        # intersections with the other facets, so pulling works unchanged.
        return Polytope(
            self.ambient_dim,
            self.vertices,
            self.ambient_dim,
            (),
            tuple((a, c) for a, c, _ in self.facets),
            tuple(fv for _, _, fv in self.facets),
        )

    def facet_triangulations(self) -> list[list[tuple[int, ...]]]:
        """Pulling triangulation of every compact facet (vertex indices into ``vertices``)."""
        sk = self._skeleton
        return [sk._pulling(fv, self.ambient_dim - 1) for _, _, fv in self.compact_facets]

    def _validate(self) -> None:
        if not self.convenient:
            return
        # Inside the orthant the compact facets alone cut out Γ⁺ iff every
        # non-compact facet passes through the origin.
        for a, c, _ in self.facets:
            if not all(x > 0 for x in a) and c != 0:
                raise AssertionError(f"non-compact facet {a} >= {c} of a convenient polyhedron misses the origin")
        if not self.is_integral:
            return
        M = max(self.intercepts)
        if (M + 1) ** self.ambient_dim > VALIDATION_BOX_CAP:
            return
        for x in enumerate_lattice_points(lambda _: True, [(0, M)] * self.ambient_dim):
            fast = gamma_minus_contains(self, x)
            # the ray through x enters Γ⁺ at t* = max_{c > 0} c / <a, x>; x in Γ⁻ iff t* >= 1
            slow = any(c > 0 and dot(a, x) <= c for a, c, _ in self.facets)
            if fast != slow:
                raise AssertionError(f"Γ⁻ membership disagrees with the hull oracle at {x}")


@dataclass(frozen=True)
class DiagramTuple:
    """Diagrams Γ_1..Γ_r of an ICIS of dimension n in C^{n+r}."""

    diagrams: tuple
    n: int
    r: int

    def __post_init__(self):
        if self.r < 1 or self.r != len(self.diagrams):
            raise InputError(f"tuple has {len(self.diagrams)} diagrams but r = {self.r}")
        N = self.n + self.r
        if self.n < 0 or N <= self.r:
            raise InputError(f"need n + r > r, got n={self.n}, r={self.r}")
        for g in self.diagrams:
            if g.ambient_dim != N:
                raise DimensionMismatchError(f"diagram in R^{g.ambient_dim}, expected R^{N}")

    @property
    def ambient_dim(self) -> int:
        return self.n + self.r

    @classmethod
    def of(cls, diagrams: Sequence[NewtonPolyhedron]) -> "DiagramTuple":
        diagrams = tuple(diagrams)
        return cls(diagrams, diagrams[0].ambient_dim - len(diagrams), len(diagrams))

    def scaled(self, d) -> "DiagramTuple":
        return DiagramTuple(tuple(scale(g, d) for g in self.diagrams), self.n, self.r)

    def restricted(self, I: Sequence[int]) -> tuple:
        return tuple(restrict(g, I) for g in self.diagrams)

    def digest(self) -> str:
        return hashlib.sha256("|".join(g.digest() for g in self.diagrams).encode()).hexdigest()[:16]


# ---------------------------------------------------------------------------
# construction


@lru_cache(maxsize=4096)
def _from_pareto(points: tuple) -> NewtonPolyhedron:
    N = len(points[0])
    L = denominator_lcm(points)
    ipts = [tuple(int(x * L) for x in p) for p in points]
    units = [tuple(int(i == j) for j in range(N)) for i in range(N)]
    raw = hull_facets(ipts, units)
    vidx = vertex_mask(len(points), [m for _, _, m in raw])
    remap = {old: new for new, old in enumerate(vidx)}
    vertices = tuple(points[i] for i in vidx)
    facets = []
    for a, c, m in raw:
        fv = frozenset(remap[i] for i in range(len(points)) if m >> i & 1 and i in remap)
        facets.append((a, q(c / L), fv))
    facets.sort(key=lambda f: (sorted(f[2]), f[0]))
    return NewtonPolyhedron(N, vertices, tuple(facets))


def from_support(support: Iterable[Sequence]) -> NewtonPolyhedron:
    """Newton polyhedron of a support set of non-negative exponent vectors."""
    pts = [qvec(p) for p in support]
    if not pts:
        raise InputError("empty support")
    N = len(pts[0])
    if any(len(p) != N for p in pts):
        raise DimensionMismatchError("support points have different lengths")
    if N > MAX_AMBIENT_DIM:
        raise InputError(f"ambient dimension {N} exceeds cap {MAX_AMBIENT_DIM}")
    if any(x < 0 for p in pts for x in p):
        raise InputError("negative exponent in support")
    if any(not any(p) for p in pts):
        raise InputError("support contains the constant monomial (not a singular germ)")
    return _from_pareto(tuple(pareto_minimal(pts)))


def homogeneous(N: int, d) -> NewtonPolyhedron:
    """The diagram of a generic homogeneous form of degree d in N variables."""
    return from_support([tuple(d if j == i else 0 for j in range(N)) for i in range(N)])


def weighted(intercepts: Sequence) -> NewtonPolyhedron:
    """The simplex diagram Conv(d_1 e_1, ..., d_N e_N)."""
    N = len(intercepts)
    return from_support([tuple(d if j == i else 0 for j in range(N)) for i, d in enumerate(intercepts)])


def is_convenient(gamma: NewtonPolyhedron) -> bool:
    return gamma.convenient


def _require_convenient(gamma: NewtonPolyhedron) -> None:
    if not gamma.convenient:
        raise NotConvenientError("diagram does not meet every coordinate axis")


def _require_integral(gamma: NewtonPolyhedron) -> None:
    if not gamma.is_integral:
        raise NonIntegralError("lattice counts need a diagram with integral vertices")


def scale(gamma: NewtonPolyhedron, d) -> NewtonPolyhedron:
    d = q(d)
    if d <= 0:
        raise InputError("scale factor must be positive")
    if d == 1:
        return gamma
    return NewtonPolyhedron(
        gamma.ambient_dim,
        tuple(vscale(d, v) for v in gamma.vertices),
        tuple((a, q(d * c), fv) for a, c, fv in gamma.facets),
        validate=False,
    )


def restrict(gamma: NewtonPolyhedron, I: Iterable[int]) -> NewtonPolyhedron:
    """Γ⁺ ∩ L_I re-indexed to R^{|I|} (I sorted, 0-based)."""
    _require_convenient(gamma)
    I = sorted(set(I))
    if not I:
        raise InputError("restriction to the empty coordinate set")
    if I == list(range(gamma.ambient_dim)):
        return gamma
    outside = [j for j in range(gamma.ambient_dim) if j not in I]
    pts = [tuple(v[i] for i in I) for v in gamma.vertices if all(v[j] == 0 for j in outside)]
    return from_support(pts)


# ---------------------------------------------------------------------------
# the region under the diagram


def gamma_minus_contains(gamma: NewtonPolyhedron, x: Sequence) -> bool:
    """Whether a point of the orthant lies in Γ⁻ (Γ itself included)."""
    return any(dot(a, x) <= c for a, c, _ in gamma.compact_facets)


def vol_under(gamma: NewtonPolyhedron):
    """Vol_N(Γ⁻): cone every compact facet over the origin and add simplex volumes."""
    _require_convenient(gamma)
    N = gamma.ambient_dim
    V = gamma.vertices
    total = 0
    for simplices in gamma.facet_triangulations():
        for s in simplices:
            total += abs(det([V[i] for i in s]))
    return q(Fraction(total) / _fact(N))


def _fact(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def vol_j_sum(gamma: NewtonPolyhedron, j: int):
    """Vol_j(Γ⁻): sum of Vol_j over the j-dimensional coordinate sections."""
    _require_convenient(gamma)
    N = gamma.ambient_dim
    if not 0 <= j <= N:
        raise InputError(f"j must lie in [0, {N}]")
    if j == 0:
        return 1
    return q(sum(Fraction(vol_under(restrict(gamma, I))) for I in combinations(range(N), j)))


def facet_total_volume(gamma: NewtonPolyhedron):
    """Vol_{N-1}(Γ): total induced-lattice volume of the top-dimensional compact faces."""
    _require_convenient(gamma)
    N = gamma.ambient_dim
    if N == 1:
        return 1
    V = gamma.vertices
    total = 0
    for (a, _, _), simplices in zip(gamma.compact_facets, gamma.facet_triangulations()):
        # any w with <a, w> = 1 completes a basis of the hyperplane lattice to Z^N
        _, U = column_hermite([list(a)])
        w = tuple(row[0] for row in U)
        for s in simplices:
            total += abs(det([vsub(V[i], V[s[0]]) for i in s[1:]] + [w]))
    return q(Fraction(total) / _fact(N - 1))


def count_positive_points(gamma: NewtonPolyhedron, method: str = "columns", budget: int = DEFAULT_BUDGET) -> int:
    """|Γ⁻ ∩ Z^N_{>0}|.

    ``columns`` walks the down-closed prefix tree and counts the last
    coordinate in closed form; ``enumerate`` tests every cell of the box
    ``[1, max intercept]^N`` and serves as the oracle.
    """
    _require_convenient(gamma)
    _require_integral(gamma)
    N = gamma.ambient_dim
    if method == "enumerate":
        M = ceil(max(gamma.intercepts))
        pts = enumerate_lattice_points(lambda x: gamma_minus_contains(gamma, x), [(1, M)] * N, budget)
        return len(pts)
    if method != "columns":
        raise InputError(f"unknown counting method {method!r}")
    A = [f[0] for f in gamma.compact_facets]
    C = [f[1] for f in gamma.compact_facets]
    F = range(len(A))
    tail = [[sum(a[depth + 1 :]) for a in A] for depth in range(N)]
    last = [a[N - 1] for a in A]
    count = 0
    columns = 0

    def walk(depth: int, partial: list[int]) -> None:
        nonlocal count, columns
        if depth == N - 1:
            columns += 1
            if columns > budget:
                raise BudgetExceededError(f"more than {budget} columns while counting")
            top = max((C[f] - partial[f]) // last[f] for f in F)
            if top > 0:
                count += top
            return
        rest = tail[depth]
        x = 1
        while True:
            nxt = [partial[f] + A[f][depth] * x for f in F]
            if all(nxt[f] + rest[f] > C[f] for f in F):
                return
            walk(depth + 1, nxt)
            x += 1

    walk(0, [0] * len(A))
    return count


def multiplicity(gamma: NewtonPolyhedron) -> int:
    """Minimal coordinate sum over the diagram (the multiplicity of the germ)."""
    _require_convenient(gamma)
    _require_integral(gamma)
    return min(sum(v) for v in gamma.vertices)


def tangent_cone_face(gamma: NewtonPolyhedron) -> tuple[Polytope, bool]:
    """The face σ_p = Γ ∩ {Σx = p} and whether it is top-dimensional (dim N-1)."""
    p = multiplicity(gamma)
    face = convex_hull([v for v in gamma.vertices if sum(v) == p])
    return face, face.dim == gamma.ambient_dim - 1


def is_homogeneous(gamma: NewtonPolyhedron) -> bool:
    cf = gamma.compact_facets
    return len(cf) == 1 and all(a == 1 for a in cf[0][0])


# ---------------------------------------------------------------------------
# random diagrams for campaigns


def random_convenient(rng: random.Random, N: int, max_coord: int = 6, extra: int = 2) -> NewtonPolyhedron:
    """A random convenient diagram: random axis intercepts plus a few interior monomials."""
    pts = [tuple(rng.randint(1, max_coord) if j == i else 0 for j in range(N)) for i in range(N)]
    for _ in range(rng.randint(0, extra)):
        pts.append(tuple(rng.randint(0, max_coord) for _ in range(N)))
    pts = [p for p in pts if any(p)]
    return from_support(pts)


# ---------------------------------------------------------------------------
# JSON input


def _parse_diagram(obj, where: str) -> NewtonPolyhedron:
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object with 'ambient_dim' and 'support'")
    for key in ("ambient_dim", "support"):
        if key not in obj:
            raise InputError(f"{where}: missing field '{key}'")
    N = obj["ambient_dim"]
    if not isinstance(N, int) or not 1 <= N <= MAX_AMBIENT_DIM:
        raise InputError(f"{where}.ambient_dim: expected an integer in [1, {MAX_AMBIENT_DIM}], got {N!r}")
    support = obj["support"]
    if not isinstance(support, list) or not support:
        raise InputError(f"{where}.support: expected a non-empty list")
    for i, p in enumerate(support):
        if not isinstance(p, list) or len(p) != N:
            raise DimensionMismatchError(f"{where}.support[{i}]: expected {N} exponents, got {p!r}")
        for j, x in enumerate(p):
            if not isinstance(x, int) or isinstance(x, bool):
                raise InputError(f"{where}.support[{i}][{j}]: exponent must be an integer, got {x!r}")
            if x < 0:
                raise InputError(f"{where}.support[{i}][{j}]: negative exponent {x}")
    return from_support([tuple(p) for p in support])


def parse_input(obj) -> NewtonPolyhedron | DiagramTuple:
    """Parse a diagram object or a tuple object ``{"n", "r", "diagrams"}``."""
    if isinstance(obj, dict) and "diagrams" in obj:
        for key in ("n", "r"):
            if not isinstance(obj.get(key), int):
                raise InputError(f"tuple: field '{key}' must be an integer")
        diagrams = obj["diagrams"]
        if not isinstance(diagrams, list) or not diagrams:
            raise InputError("tuple.diagrams: expected a non-empty list")
        parsed = tuple(_parse_diagram(d, f"diagrams[{i}]") for i, d in enumerate(diagrams))
        return DiagramTuple(parsed, obj["n"], obj["r"])
    return _parse_diagram(obj, "diagram")


def load_input(path: str | Path) -> NewtonPolyhedron | DiagramTuple:
    try:
        obj = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from exc
    return parse_input(obj)
