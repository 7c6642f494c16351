"""Exact convex geometry over Q^N with the lattice Z^N.

Hulls are computed with an integer double-description method on the
homogenised facet cone: a point configuration ``V`` (plus recession rays ``R``)
has facets ``<a, x> >= c`` exactly at the extreme rays ``(a, c)`` of
``{(a, c) : <a, v> - c >= 0 for v in V, <a, r> >= 0 for r in R}``.
Coordinates are ``int`` where integral and :class:`~fractions.Fraction`
otherwise; nothing is ever rounded.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property, reduce
from itertools import product
from math import factorial, gcd, lcm, prod
from typing import Callable, Iterable, Sequence

from .errors import BudgetExceededError, DimensionMismatchError, InputError, NoLatticePointError

MAX_AMBIENT_DIM = 7
DEFAULT_BUDGET = 10**8

Vector = tuple


# ---------------------------------------------------------------------------
# scalar and vector helpers


def q(x) -> int | Fraction:
    """Normalise a rational to ``int`` when integral."""
    if isinstance(x, int):
        return x
    x = Fraction(x)
    return x.numerator if x.denominator == 1 else x


def qvec(v: Iterable) -> Vector:
    return tuple(q(x) for x in v)


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def vsub(u: Sequence, v: Sequence) -> Vector:
    return tuple(a - b for a, b in zip(u, v))


def vadd(u: Sequence, v: Sequence) -> Vector:
    return tuple(a + b for a, b in zip(u, v))


def vscale(s, v: Sequence) -> Vector:
    return tuple(q(s * a) for a in v)


def denominator_lcm(vectors: Iterable[Sequence]) -> int:
    out = 1
    for v in vectors:
        for x in v:
            if not isinstance(x, int):
                out = lcm(out, Fraction(x).denominator)
    return out


def primitive(v: Sequence[int]) -> Vector:
    g = reduce(gcd, v, 0)
    if g == 0:
        return tuple(v)
    return tuple(x // g for x in v)


def integral_primitive(v: Sequence) -> Vector:
    """Smallest integer vector positively proportional to a rational vector."""
    L = denominator_lcm([v])
    return primitive([int(x * L) for x in v])


# ---------------------------------------------------------------------------
# exact linear algebra on small dense matrices


def rref(rows: Sequence[Sequence]) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q; returns (nonzero rows, pivot columns)."""
    A = [[Fraction(x) for x in r] for r in rows]
    pivots: list[int] = []
    if not A:
        return [], pivots
    ncols = len(A[0])
    row = 0
    for col in range(ncols):
        piv = next((i for i in range(row, len(A)) if A[i][col] != 0), None)
        if piv is None:
            continue
        A[row], A[piv] = A[piv], A[row]
        p = A[row][col]
        A[row] = [x / p for x in A[row]]
        for i in range(len(A)):
            if i != row and A[i][col] != 0:
                f = A[i][col]
                A[i] = [a - f * b for a, b in zip(A[i], A[row])]
        pivots.append(col)
        row += 1
        if row == len(A):
            break
    return A[:row], pivots


def rank(rows: Sequence[Sequence]) -> int:
    return len(rref(rows)[1]) if rows else 0


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[Vector]:
    """Integer primitive basis of the rational right kernel."""
    R, pivots = rref(rows) if rows else ([], [])
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for r, pc in zip(R, pivots):
            v[pc] = -r[f]
        basis.append(integral_primitive(v))
    return basis


def det(M: Sequence[Sequence]):
    """Exact determinant (fraction-free Bareiss elimination after clearing denominators)."""
    n = len(M)
    if n == 0:
        return 1
    scale = 1
    if all(type(x) is int for r in M for x in r):
        rows = [list(r) for r in M]
    else:
        rows = []
        for r in M:
            L = denominator_lcm([r])
            scale *= L
            rows.append([int(x * L) for x in r])
    sign = 1
    prev = 1
    for k in range(n - 1):
        if rows[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if rows[i][k] != 0), None)
            if swap is None:
                return 0
            rows[k], rows[swap] = rows[swap], rows[k]
            sign = -sign
        pk = rows[k][k]
        for i in range(k + 1, n):
            rik = rows[i][k]
            ri = rows[i]
            rk = rows[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * pk - rik * rk[j]) // prev
            ri[k] = 0
        prev = pk
    if scale == 1:
        return sign * rows[n - 1][n - 1]
    return q(Fraction(sign * rows[n - 1][n - 1], scale))


def inverse(M: Sequence[Sequence]) -> list[list[Fraction]]:
    n = len(M)
    aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(M)]
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise ZeroDivisionError("singular matrix")
    return [r[n:] for r in R]


def solve(M: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve a square nonsingular system exactly."""
    n = len(M)
    aug = [list(r) + [b[i]] for i, r in enumerate(M)]
    R, piv = rref(aug)
    if piv != list(range(n)):
        raise ZeroDivisionError("singular system")
    return [r[n] for r in R]


# ---------------------------------------------------------------------------
# double description


def _independent_rows(rows: Sequence[Sequence[int]]) -> list[int]:
    chosen: list[int] = []
    echelon: list[list[Fraction]] = []
    pivcols: list[int] = []
    for idx, r in enumerate(rows):
        v = [Fraction(x) for x in r]
        for e, pc in zip(echelon, pivcols):
            if v[pc] != 0:
                f = v[pc] / e[pc]
                v = [a - f * b for a, b in zip(v, e)]
        pc = next((c for c, x in enumerate(v) if x != 0), None)
        if pc is None:
            continue
        chosen.append(idx)
        echelon.append(v)
        pivcols.append(pc)
        if len(chosen) == len(r):
            break
    return chosen


def extreme_rays(rows: Sequence[Sequence[int]]) -> tuple[list[Vector], list[int]]:
    """Extreme rays of the pointed cone ``{y : <row, y> >= 0 for every row}``.

    Returns the rays (primitive integer vectors) and, per ray, a bitmask of
    the rows it is tight on.
    """
    D = len(rows[0])
    basis = _independent_rows(rows)
    if len(basis) < D:
        raise InputError("facet cone is not pointed (input not full-dimensional)")
    inv = inverse([rows[i] for i in basis])
    rays: list[Vector] = []
    zs: list[int] = []
    for j in range(D):
        rays.append(integral_primitive([inv[i][j] for i in range(D)]))
        zs.append(sum(1 << basis[i] for i in range(D) if i != j))
    done = set(basis)
    for idx, row in enumerate(rows):
        if idx in done:
            continue
        bit = 1 << idx
        vals = [dot(row, ray) for ray in rays]
        neg = [i for i, v in enumerate(vals) if v < 0]
        if not neg:
            zs = [z | bit if v == 0 else z for z, v in zip(zs, vals)]
            continue
        pos = [i for i, v in enumerate(vals) if v > 0]
        new_rays = [rays[i] for i in pos]
        new_zs = [zs[i] for i in pos]
        for i, v in enumerate(vals):
            if v == 0:
                new_rays.append(rays[i])
                new_zs.append(zs[i] | bit)
        for i in pos:
            for j in neg:
                common = zs[i] & zs[j]
                if common.bit_count() < D - 2:
                    continue
                if any(k != i and k != j and zs[k] & common == common for k in range(len(rays))):
                    continue
                vi, vj = vals[i], vals[j]
                new_rays.append(primitive([vi * b - vj * a for a, b in zip(rays[i], rays[j])]))
                new_zs.append(common | bit)
        rays, zs = new_rays, new_zs
    return rays, zs


def hull_facets(points: Sequence[Sequence[int]], recession: Sequence[Sequence[int]] = ()):
    """Facets of ``conv(points) + cone(recession)`` for integer full-dimensional input.

    Returns ``[(normal, offset, tight_point_mask)]`` with primitive normals,
    meaning ``<normal, x> >= offset``.
    """
    rows = [tuple(p) + (-1,) for p in points] + [tuple(r) + (0,) for r in recession]
    rays, zs = extreme_rays(rows)
    point_mask = (1 << len(points)) - 1
    out = []
    for ray, z in zip(rays, zs):
        a, c = ray[:-1], ray[-1]
        if not any(a):
            continue
        g = reduce(gcd, a, 0)
        out.append((tuple(x // g for x in a), Fraction(c, g), z & point_mask))
    return out


def vertex_mask(n_points: int, facet_masks: Sequence[int]) -> list[int]:
    """Indices of points that are vertices, given per-facet tight-point masks.

    A point is a vertex iff its set of tight facets is not contained in the
    tight set of any other (distinct) point.
    """
    tight = [0] * n_points
    for f, m in enumerate(facet_masks):
        for i in range(n_points):
            if m >> i & 1:
                tight[i] |= 1 << f
    out = []
    for i in range(n_points):
        if not any(j != i and tight[i] & tight[j] == tight[i] for j in range(n_points)):
            out.append(i)
    return out


# ---------------------------------------------------------------------------
# polytopes


class Polytope:
    """A bounded rational polytope with both V- and H-representation.

    ``halfspaces`` are ``(normal, offset)`` pairs meaning ``<normal, x> >= offset``;
    ``equations`` cut out the affine hull (``<normal, x> = offset``). For a
    lower-dimensional polytope the halfspace normals are only meaningful
    together with the equations.
    """

    def __init__(self, ambient_dim, vertices, dim, equations, halfspaces, facet_vertices):
        self.ambient_dim = ambient_dim
        self.vertices = vertices
        self.dim = dim
        self.equations = equations
        self.halfspaces = halfspaces
        self.facet_vertices = facet_vertices

    def __repr__(self):
        return f"Polytope(dim={self.dim}, ambient_dim={self.ambient_dim}, vertices={list(self.vertices)})"

    def __eq__(self, other):
        return isinstance(other, Polytope) and self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    @property
    def is_full_dimensional(self) -> bool:
        return self.dim == self.ambient_dim

    def contains(self, x: Sequence, strict: bool = False) -> bool:
        """Membership; ``strict`` tests the relative interior."""
        if any(dot(a, x) != c for a, c in self.equations):
            return False
        if strict:
            return all(dot(a, x) > c for a, c in self.halfspaces)
        return all(dot(a, x) >= c for a, c in self.halfspaces)

    def dilate(self, k) -> "Polytope":
        k = q(k)
        if k <= 0:
            raise InputError("dilation factor must be positive")
        return Polytope(
            self.ambient_dim,
            tuple(vscale(k, v) for v in self.vertices),
            self.dim,
            tuple((a, q(k * c)) for a, c in self.equations),
            tuple((a, q(k * c)) for a, c in self.halfspaces),
            self.facet_vertices,
        )

    def is_lattice(self) -> bool:
        return all(isinstance(x, int) for v in self.vertices for x in v)

    def bounding_box(self) -> list[tuple]:
        return [(min(v[i] for v in self.vertices), max(v[i] for v in self.vertices)) for i in range(self.ambient_dim)]

    # -- face lattice -----------------------------------------------------

    def _facets_of(self, face: frozenset) -> list[frozenset]:
        cache = self.__dict__.setdefault("_facet_cache", {})
        if face in cache:
            return cache[face]
        cands = {face & F for F in self.facet_vertices}
        cands.discard(face)
        cands.discard(frozenset())
        maximal = [G for G in cands if not any(G < H for H in cands)]
        maximal.sort(key=lambda s: sorted(s))
        cache[face] = maximal
        return maximal

    @cached_property
    def faces(self) -> dict[int, list[frozenset]]:
        """Faces by dimension as sets of vertex indices (the polytope itself included)."""
        top = frozenset(range(len(self.vertices)))
        out = {self.dim: [top]}
        level = [top]
        for d in range(self.dim, 0, -1):
            nxt: set[frozenset] = set()
            for G in level:
                nxt.update(self._facets_of(G))
            level = sorted(nxt, key=lambda s: sorted(s))
            out[d - 1] = level
        return out

    def f_vector(self) -> list[int]:
        """(f_0, ..., f_{d-1}); the polytope itself is not counted."""
        return [len(self.faces[d]) for d in range(self.dim)]

    def face_polytope(self, face: Iterable[int]) -> "Polytope":
        return convex_hull([self.vertices[i] for i in face])

    # -- triangulations and volumes --------------------------------------

    def _pulling(self, face: frozenset, d: int) -> list[tuple[int, ...]]:
        cache = self.__dict__.setdefault("_pull_cache", {})
        key = face
        if key in cache:
            return cache[key]
        if d == 0:
            out = [tuple(face)]
        else:
            v0 = min(face)
            out = []
            for G in self._facets_of(face):
                if v0 in G:
                    continue
                out.extend((v0,) + s for s in self._pulling(G, d - 1))
        cache[key] = out
        return out

    def triangulation(self) -> list[tuple[int, ...]]:
        """Pulling triangulation (always pulling the smallest vertex index)."""
        return self._pulling(frozenset(range(len(self.vertices))), self.dim)

    def _simplex_volume_sum(self, simplices, coords) -> Fraction:
        d = len(coords[0])
        total = 0
        for s in simplices:
            base = coords[s[0]]
            total += abs(det([vsub(coords[i], base) for i in s[1:]]))
        return q(Fraction(total, factorial(d)))


def _check_points(points) -> list[Vector]:
    pts = [qvec(p) for p in points]
    if not pts:
        raise InputError("empty point list")
    N = len(pts[0])
    if any(len(p) != N for p in pts):
        raise DimensionMismatchError("points have different lengths")
    if N == 0:
        raise InputError("points must have at least one coordinate")
    if N > MAX_AMBIENT_DIM:
        raise InputError(f"ambient dimension {N} exceeds cap {MAX_AMBIENT_DIM}")
    return pts


def affine_hull(points: Sequence[Vector]):
    """Return (base point, pivot coordinates, equations) of the affine hull."""
    p0 = points[0]
    N = len(p0)
    diffs = [vsub(p, p0) for p in points[1:]]
    R, pivots = rref(diffs) if diffs else ([], [])
    eqs = []
    for a in nullspace(R, N) if R else [tuple(int(i == j) for j in range(N)) for i in range(N)]:
        eqs.append((a, q(dot(a, p0))))
    return p0, pivots, eqs


def convex_hull(points: Iterable[Sequence]) -> Polytope:
    """Irredundant V- and H-representation of the convex hull of rational points."""
    pts = sorted(set(_check_points(points)))
    N = len(pts[0])
    p0, pivots, eqs = affine_hull(pts)
    d = len(pivots)
    if d == 0:
        return Polytope(N, (pts[0],), 0, tuple(eqs), (), ())
    proj = [tuple(p[i] for i in pivots) for p in pts]
    L = denominator_lcm(proj)
    iproj = [tuple(int(x * L) for x in p) for p in proj]
    facets = hull_facets(iproj)
    vidx = vertex_mask(len(pts), [m for _, _, m in facets])
    remap = {old: new for new, old in enumerate(vidx)}
    vertices = tuple(pts[i] for i in vidx)
    hs = []
    for b, c, m in facets:
        normal = [0] * N
        for coord, val in zip(pivots, b):
            normal[coord] = val
        fv = frozenset(remap[i] for i in range(len(pts)) if m >> i & 1 and i in remap)
        hs.append((tuple(normal), q(c / L), fv))
    hs.sort(key=lambda h: (sorted(h[2]), h[0]))
    P = Polytope(
        N,
        vertices,
        d,
        tuple(eqs),
        tuple((a, c) for a, c, _ in hs),
        tuple(fv for _, _, fv in hs),
    )
    _validate(P)
    return P


def _validate(P: Polytope) -> None:
    for v in P.vertices:
        if not P.contains(v):
            raise AssertionError(f"vertex {v} violates its own H-representation")
    for (a, c), fv in zip(P.halfspaces, P.facet_vertices):
        if {i for i, v in enumerate(P.vertices) if dot(a, v) == c} != set(fv):
            raise AssertionError("facet incidence mismatch")
        if len(fv) < P.dim:
            raise AssertionError("facet with too few vertices")


def minkowski_sum(P: Polytope, Q: Polytope) -> Polytope:
    if P.ambient_dim != Q.ambient_dim:
        raise DimensionMismatchError("Minkowski summands live in different dimensions")
    return convex_hull(vadd(u, v) for u in P.vertices for v in Q.vertices)


def normalized_volume(P: Polytope) -> int | Fraction:
    """Volume with the unit cube normalised to 1 (full-dimensional input only)."""
    if not P.is_full_dimensional:
        raise InputError("normalized_volume needs a full-dimensional polytope; use relative_lattice_volume")
    return P._simplex_volume_sum(P.triangulation(), P.vertices)


def normalized_volume_by_centroid(P: Polytope) -> int | Fraction:
    """Same volume via coning the facet triangulations over the vertex centroid."""
    if not P.is_full_dimensional:
        raise InputError("needs a full-dimensional polytope")
    n = len(P.vertices)
    c = tuple(Fraction(sum(v[i] for v in P.vertices), n) for i in range(P.ambient_dim))
    coords = list(P.vertices) + [c]
    apex = len(coords) - 1
    simplices = []
    for F in P.facet_vertices:
        simplices.extend((apex,) + s for s in P._pulling(F, P.dim - 1))
    return P._simplex_volume_sum(simplices, coords)


# ---------------------------------------------------------------------------
# induced lattices


def _ext_gcd(a: int, b: int) -> tuple[int, int, int]:
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        qt, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - qt * x1
        y0, y1 = y1, y0 - qt * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


def column_hermite(E: Sequence[Sequence[int]]) -> tuple[list[list[int]], list[list[int]]]:
    """Unimodular column reduction ``E U = [H | 0]`` with ``H`` lower triangular.

    ``E`` must have full row rank. Returns ``(E U, U)``.
    """
    m, N = len(E), len(E[0]) if E else 0
    A = [list(r) for r in E]
    U = [[int(i == j) for j in range(N)] for i in range(N)]

    def colop(i, j, x, y, u, v):
        # col_i <- x col_i + y col_j ; col_j <- u col_i + v col_j
        for M in (A, U):
            for row in M:
                ci, cj = row[i], row[j]
                row[i] = x * ci + y * cj
                row[j] = u * ci + v * cj

    for i in range(m):
        for j in range(i + 1, N):
            a, b = A[i][i], A[i][j]
            if b == 0:
                continue
            g, x, y = _ext_gcd(a, b)
            colop(i, j, x, y, -b // g, a // g)
        if A[i][i] == 0:
            raise InputError("equation matrix is rank deficient")
        if A[i][i] < 0:
            for M in (A, U):
                for row in M:
                    row[i] = -row[i]
    return A, U


class InducedLattice:
    """The lattice ``aff(P) ∩ Z^N`` of an affine subspace given by equations."""

    def __init__(self, equations: Sequence[tuple[Sequence[int], object]], ambient_dim: int):
        self.ambient_dim = ambient_dim
        E = [list(a) for a, _ in equations]
        c = [Fraction(b) for _, b in equations]
        m = len(E)
        if m == 0:
            self.origin = (0,) * ambient_dim
            self.U = [[int(i == j) for j in range(ambient_dim)] for i in range(ambient_dim)]
            self.m = 0
        else:
            H, U = column_hermite(E)
            w = []
            for i in range(m):
                s = c[i] - sum(H[i][j] * w[j] for j in range(i))
                wi = s / H[i][i]
                if wi.denominator != 1:
                    raise NoLatticePointError("affine hull contains no lattice point")
                w.append(int(wi))
            self.origin = tuple(sum(U[r][j] * w[j] for j in range(m)) for r in range(ambient_dim))
            self.U = U
            self.m = m
        self._Uinv = inverse(self.U)

    @property
    def rank(self) -> int:
        return self.ambient_dim - self.m

    @property
    def basis(self) -> list[Vector]:
        return [tuple(self.U[r][j] for r in range(self.ambient_dim)) for j in range(self.m, self.ambient_dim)]

    def coordinates(self, x: Sequence) -> Vector:
        diff = vsub(x, self.origin)
        w = [sum(row[k] * diff[k] for k in range(self.ambient_dim)) for row in self._Uinv]
        return qvec(w[self.m :])


def relative_lattice_volume(P: Polytope) -> int | Fraction:
    """Volume of ``P`` measured in the lattice induced on its affine hull.

    Points have volume 1. Raises :class:`NoLatticePointError` when the affine
    hull has no lattice point.
    """
    if P.dim == 0:
        return 1
    if P.is_full_dimensional:
        return normalized_volume(P)
    lat = InducedLattice(P.equations, P.ambient_dim)
    coords = [lat.coordinates(v) for v in P.vertices]
    return P._simplex_volume_sum(P.triangulation(), coords)


def scaled_relative_volume(P: Polytope) -> int | Fraction:
    """Relative lattice volume extended to rational polytopes by homogeneity."""
    L = denominator_lcm(P.vertices)
    if L == 1:
        return relative_lattice_volume(P)
    return q(Fraction(relative_lattice_volume(P.dilate(L)), L**P.dim))


# ---------------------------------------------------------------------------
# enumeration


def enumerate_lattice_points(
    membership: Callable[[tuple[int, ...]], bool],
    bbox: Sequence[tuple[int, int]],
    budget: int = DEFAULT_BUDGET,
) -> list[tuple[int, ...]]:
    """Lexicographic list of the points of an inclusive integer box passing ``membership``."""
    cells = prod(max(0, hi - lo + 1) for lo, hi in bbox)
    if cells > budget:
        raise BudgetExceededError(f"bounding box has {cells} cells, budget is {budget}")
    ranges = [range(lo, hi + 1) for lo, hi in bbox]
    return [p for p in product(*ranges) if membership(p)]


def lattice_points(P: Polytope, interior: bool = False, budget: int = DEFAULT_BUDGET) -> list[tuple[int, ...]]:
    bbox = [(_ceil(lo), _floor(hi)) for lo, hi in P.bounding_box()]
    return enumerate_lattice_points(lambda x: P.contains(x, strict=interior), bbox, budget)


def _floor(x) -> int:
    return x if isinstance(x, int) else Fraction(x).__floor__()


def _ceil(x) -> int:
    return x if isinstance(x, int) else Fraction(x).__ceil__()

