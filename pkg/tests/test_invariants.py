import random
from fractions import Fraction
from itertools import combinations
from math import comb, factorial, prod

import pytest
from hypothesis import given, settings, strategies as st

from conftest import box_points
from newton_durfee.combinatorics import falling_factorial
from newton_durfee.errors import InputError
from newton_durfee.invariants import (
    IcisInput,
    icis_volume_terms,
    milnor_from_terms,
    milnor_hypersurface,
    milnor_icis,
    milnor_proportional,
    mu_tangent_cone,
    mu_tangent_cone_by_vertices,
    pg_hypersurface,
    pg_icis,
    tangent_cone_data,
    theorem2_correction,
    theta,
    thm2_leading_margin,
)
from newton_durfee.newton_diagram import count_positive_points, from_support, homogeneous, random_convenient, scale, weighted

seeds = st.integers(0, 10**6)

# tangent cone of y^2 z = x^3 + x^2 z, made convenient by higher powers of y and z
NODAL_CUBIC = [(3, 0, 0), (2, 0, 1), (0, 2, 1), (0, 4, 0), (0, 0, 4)]
# σ_2 is a full 3-dimensional face meeting every edge of the simplex
ISOLATED_N3 = [(2, 0, 0, 0), (0, 2, 0, 0), (0, 0, 2, 0), (1, 0, 0, 1), (0, 1, 0, 1), (0, 0, 1, 1), (0, 0, 0, 3)]


@given(st.lists(st.integers(1, 7), min_size=1, max_size=4))
def test_brieskorn_pham_milnor_number(ds):
    assert milnor_hypersurface(weighted(ds)) == prod(d - 1 for d in ds)


@given(st.lists(st.integers(1, 6), min_size=2, max_size=4))
def test_brieskorn_pham_genus_by_enumeration(ds):
    brute = sum(1 for x in box_points([(1, d) for d in ds]) if sum(Fraction(a, d) for a, d in zip(x, ds)) <= 1)
    assert pg_hypersurface(weighted(ds)) == brute


@pytest.mark.parametrize("n", [1, 2, 3])
@pytest.mark.parametrize("d", range(1, 7))
def test_homogeneous_hypersurface_closed_forms(n, d):
    g = homogeneous(n + 1, d)
    assert milnor_hypersurface(g) == (d - 1) ** (n + 1)
    assert pg_hypersurface(g) == comb(d, n + 1)


def test_plane_curve_with_two_facets():
    # x^4 + x y + y^4 is an A_1 singularity
    assert milnor_hypersurface(from_support([(4, 0), (1, 1), (0, 4)])) == 1
    # x^a + y^b + x^2 y^2 is the cusp singularity T_{2,a,b} with μ = a + b + 1
    for a, b in [(5, 5), (5, 7), (6, 9)]:
        assert milnor_hypersurface(from_support([(a, 0), (2, 2), (0, b)])) == a + b + 1


@settings(max_examples=20)
@given(seeds)
def test_icis_formula_reduces_to_hypersurface(seed):
    rng = random.Random(seed)
    g = random_convenient(rng, rng.choice([2, 3, 4]), 6)
    inp = IcisInput.of(g)
    assert milnor_icis(inp) == milnor_hypersurface(g)
    assert pg_icis(inp) == pg_hypersurface(g)


@pytest.mark.parametrize("a,b", [(1, 2), (1, 3), (2, 2), (2, 3), (2, 4), (3, 3), (3, 4), (4, 4)])
def test_homogeneous_space_curves(a, b):
    # complete intersection of two generic forms in C^3
    inp = IcisInput.of([homogeneous(3, a), homogeneous(3, b)])
    assert milnor_icis(inp) == a * b * (a + b - 3) + 1


@pytest.mark.parametrize("ds,N", [((2, 2), 3), ((2, 3), 3), ((2, 2), 4), ((2, 3), 5), ((2, 2, 2), 5)])
def test_homogeneous_icis_genus(ds, N):
    inp = IcisInput.of([homogeneous(N, d) for d in ds])
    r = len(ds)
    expected = sum((-1) ** (r - len(S)) * comb(sum(S), N) for k in range(1, r + 1) for S in combinations(ds, k))
    assert pg_icis(inp) == expected


def test_homogeneous_quadric_pair_genus():
    assert pg_icis(IcisInput.of([homogeneous(3, 2)] * 2)) == 4


@settings(max_examples=10)
@given(seeds, st.lists(st.integers(1, 3), min_size=1, max_size=3))
def test_proportional_tuples(seed, ds):
    rng = random.Random(seed)
    N = len(ds) + rng.choice([1, 2]) if len(ds) < 3 else 4
    g = random_convenient(rng, N, 3)
    inp = IcisInput.of([scale(g, d) for d in ds])
    assert milnor_icis(inp) == milnor_proportional(g, ds)


def test_theta_hypersurface_case():
    assert theta(3, 1, [2]) == 8
    assert theta(2, 2, [1, 1]) == 1
    assert theta(3, 2, [2, 3]) == 2 * 3 * (2 + 3)


def test_milnor_proportional_rejects_bad_factors():
    with pytest.raises(InputError):
        milnor_proportional(homogeneous(3, 1), [0, 1])
    with pytest.raises(InputError):
        milnor_proportional(homogeneous(3, 1), [1, 1, 1, 1])


def test_volume_terms_scale_with_degree():
    g = weighted((2, 3, 2, 4))
    inp = IcisInput.of([g, g])
    terms = icis_volume_terms(inp)
    for d in (2, 3):
        assert milnor_from_terms(terms, 2, 2, d) == milnor_icis(inp.scaled(d))


def test_hypothesis_flags():
    assert IcisInput.of(homogeneous(3, 2)).in_hypothesis
    assert IcisInput.of(homogeneous(4, 2)).in_hypothesis
    assert not IcisInput.of(homogeneous(2, 2)).in_hypothesis
    assert not IcisInput.of([homogeneous(4, 2)] * 2).in_hypothesis
    assert IcisInput.of([homogeneous(5, 2)] * 2).in_hypothesis


@pytest.mark.parametrize("p,n", [(p, n) for p in range(1, 7) for n in range(1, 5)])
def test_tangent_cone_correction(p, n):
    assert theorem2_correction(p, n) == (p - 1) ** (n + 1) - falling_factorial(p, n + 1)


def test_tangent_cone_correction_values():
    assert theorem2_correction(2, 3) == 1
    assert theorem2_correction(4, 3) == 57
    assert theorem2_correction(5, 3) == 256 - 120


def test_homogeneous_tangent_cone_is_smooth():
    tc = tangent_cone_data(homogeneous(4, 3))
    assert tc.isolated and tc.p == 3
    assert mu_tangent_cone(tc) == 0 == mu_tangent_cone_by_vertices(tc)


def test_nodal_cubic_tangent_cone():
    tc = tangent_cone_data(from_support(NODAL_CUBIC))
    assert tc.isolated and tc.p == 3
    assert mu_tangent_cone(tc) == 1 == mu_tangent_cone_by_vertices(tc)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_isolated_tangent_cone_two_methods(k):
    tc = tangent_cone_data(scale(from_support(ISOLATED_N3), k))
    assert tc.isolated
    assert mu_tangent_cone(tc) == mu_tangent_cone_by_vertices(tc) == [0, 1, 8][k - 1]


def test_flags_for_a_simplex_with_one_low_intercept():
    tc = tangent_cone_data(weighted((2, 2, 2, 3)))
    assert tc.p == 2 and not tc.top_dimensional and not tc.isolated
    with pytest.raises(InputError):
        mu_tangent_cone(tc)


def test_tangent_cone_missing_an_edge():
    tc = tangent_cone_data(weighted((2, 4, 4, 4)))
    assert not tc.meets_all_edges and not tc.isolated


def test_leading_margin_values():
    assert thm2_leading_margin(weighted((2, 4, 4, 4))) == 6
    assert thm2_leading_margin(from_support(ISOLATED_N3)) == Fraction(1, 6)
    with pytest.raises(InputError):
        thm2_leading_margin(homogeneous(4, 3))
