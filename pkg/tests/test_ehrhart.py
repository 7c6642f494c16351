import random
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, strategies as st

from conftest import box_points, random_lattice_polytope
from newton_durfee.ehrhart import (
    Polynomial,
    count_halfspace_points,
    count_points,
    ehrhart_polynomial,
    facet_volume_sum,
    fit_polynomial,
    pg_by_box_difference,
    pg_leading_terms,
    pg_polynomial,
    pg_remainder,
    pg_series,
    pick_holds,
)
from newton_durfee.errors import BudgetExceededError, ConsistencyError, InputError
from newton_durfee.lattice_geometry import convex_hull, lattice_points, normalized_volume
from newton_durfee.newton_diagram import count_positive_points, homogeneous, random_convenient, weighted

seeds = st.integers(0, 10**6)


def test_polynomial_basics():
    p = Polynomial((1, 0, 2))
    assert p(3) == 19 and p.degree == 2 and p.coefficient(5) == 0
    assert (p - Polynomial((1, 0, 2))).degree == -1


def test_fit_polynomial_checks_extra_points():
    assert fit_polynomial([0, 1, 2, 3], [1, 2, 5, 10], 2).coeffs == (1, 0, 1)
    with pytest.raises(ConsistencyError):
        fit_polynomial([0, 1, 2, 3], [1, 2, 5, 11], 2)
    with pytest.raises(InputError):
        fit_polynomial([0], [1], 2)


@given(seeds, st.booleans())
def test_halfspace_count_matches_brute_force(seed, strict):
    rng = random.Random(seed)
    N = rng.choice([2, 3])
    P = random_lattice_polytope(rng, N)
    box = [(int(lo) - 1, int(hi) + 1) for lo, hi in P.bounding_box()]
    op = (lambda a, c: a > c) if strict else (lambda a, c: a >= c)
    brute = sum(1 for x in box_points(box) if all(op(sum(u * v for u, v in zip(n, x)), c) for n, c in P.halfspaces))
    assert count_halfspace_points(P.halfspaces, box, strict=strict) == brute


def test_halfspace_count_with_fractional_offsets():
    hs = [((1, 0), Fraction(1, 2)), ((0, 1), Fraction(1, 3)), ((-1, -1), Fraction(-7, 2))]
    brute = sum(1 for x in box_points([(0, 5)] * 2) if x[0] >= 0.5 and x[1] >= 1 / 3 and x[0] + x[1] <= 3.5)
    assert count_halfspace_points(hs, [(0, 5)] * 2) == brute


def test_halfspace_count_budget():
    with pytest.raises(BudgetExceededError):
        count_halfspace_points([((1, 0, 0), 0)], [(0, 100)] * 3, budget=50)


@given(seeds, st.integers(0, 3))
def test_dilate_counts_match_enumeration(seed, k):
    rng = random.Random(seed)
    P = random_lattice_polytope(rng, rng.choice([2, 3]))
    if k == 0:
        assert count_points(P, 0) == 1 and count_points(P, 0, interior=True) == 0
        return
    Pk = P.dilate(k)
    assert count_points(P, k) == len(lattice_points(Pk))
    assert count_points(P, k, interior=True) == len(lattice_points(Pk, interior=True))


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_ehrhart_of_unit_cube(N):
    cube = convex_hull(box_points([(0, 1)] * N))
    E = ehrhart_polynomial(cube)
    for k in range(6):
        assert E(k) == (k + 1) ** N
        if k:
            assert E.interior(k) == (k - 1) ** N


@pytest.mark.parametrize("N", [1, 2, 3, 4])
def test_ehrhart_of_standard_simplex(N):
    S = convex_hull([(0,) * N] + [tuple(int(i == j) for j in range(N)) for i in range(N)])
    E = ehrhart_polynomial(S)
    assert all(E(k) == comb(k + N, N) for k in range(7))


@given(seeds)
def test_ehrhart_reciprocity_random(seed):
    rng = random.Random(seed)
    P = random_lattice_polytope(rng, rng.choice([2, 3, 4]), box=2 if seed % 2 else 3)
    E = ehrhart_polynomial(P)
    assert E.coefficients[-1] == normalized_volume(P)
    assert E.coefficients[-2] == Fraction(facet_volume_sum(P)) / 2
    assert E(P.ambient_dim + 2) == count_points(P, P.ambient_dim + 2)


@given(seeds)
def test_pick_random(seed):
    assert pick_holds(random_lattice_polytope(random.Random(seed), 2, box=5))


def test_ehrhart_rejects_bad_input():
    with pytest.raises(InputError):
        ehrhart_polynomial(convex_hull([(0, 0), (1, 1)]))
    with pytest.raises(InputError):
        ehrhart_polynomial(convex_hull(box_points([(0, 1)] * 6)))
    with pytest.raises(InputError):
        pick_holds(convex_hull(box_points([(0, 1)] * 3)))


@given(st.integers(1, 4), st.integers(1, 3))
def test_pg_series_homogeneous(N, d):
    assert pg_series(homogeneous(N, d), range(1, 5)) == [comb(k * d, N) for k in range(1, 5)]


@given(seeds)
def test_pg_polynomial_leading_terms(seed):
    rng = random.Random(seed)
    g = random_convenient(rng, rng.choice([2, 3]), 5)
    N = g.ambient_dim
    poly = pg_polynomial(g)
    lead, sub = pg_leading_terms(g)
    assert poly.coefficient(N) == lead
    assert poly.coefficient(N - 1) == sub
    assert pg_remainder(g).degree <= N - 2


@given(seeds)
def test_box_difference_matches_direct_count(seed):
    rng = random.Random(seed)
    g = random_convenient(rng, rng.choice([2, 3, 4]), 6)
    assert pg_by_box_difference(g) == count_positive_points(g)


def test_pg_leading_terms_simplex():
    # p_g(k conv(2e1, 3e2)) = #{i, j >= 1 : 3i + 2j <= 6k}
    g = weighted((2, 3))
    lead, sub = pg_leading_terms(g)
    assert lead == 3
    ks = range(1, 6)
    brute = [sum(1 for i in range(1, 2 * k + 1) for j in range(1, 3 * k + 1) if 3 * i + 2 * j <= 6 * k) for k in ks]
    assert pg_series(g, ks) == brute
    assert pg_polynomial(g).coeffs == fit_polynomial(list(ks), brute, 2).coeffs
