import random
from fractions import Fraction
from math import factorial, prod

import pytest
from hypothesis import given, settings, strategies as st

from newton_durfee.combinatorics import compositions
from newton_durfee.covolume import (
    MixedCovolumeTable,
    covol,
    covol_of_sum,
    generalized_inequality_check,
    mixed_covolume,
    mixed_covolumes,
    newton_sum,
    verify_convexity,
    verify_multilinearity,
)
from newton_durfee.errors import InputError
from newton_durfee.newton_diagram import DiagramTuple, from_support, homogeneous, random_convenient, scale, weighted

seeds = st.integers(0, 10**6)


def random_tuple(seed: int, N: int, r: int, max_coord: int = 6):
    rng = random.Random(seed)
    return [random_convenient(rng, N, max_coord) for _ in range(r)]


def test_newton_sum_of_homogeneous():
    assert newton_sum([homogeneous(3, 2), homogeneous(3, 5)]) == homogeneous(3, 7)
    assert newton_sum([homogeneous(3, 2)], [3]) == homogeneous(3, 6)


def test_newton_sum_rejects_bad_input():
    with pytest.raises(InputError):
        newton_sum([])
    with pytest.raises(InputError):
        newton_sum([homogeneous(2, 1), homogeneous(3, 1)])
    with pytest.raises(InputError):
        newton_sum([homogeneous(2, 1)], [-1])


@given(seeds)
def test_newton_sum_vertices_are_sums_of_vertices(seed):
    a, b = random_tuple(seed, 3, 2)
    s = newton_sum([a, b])
    sums = {tuple(x + y for x, y in zip(u, v)) for u in a.vertices for v in b.vertices}
    assert set(s.vertices) <= sums


@given(st.integers(1, 5), st.integers(1, 3), st.data())
def test_homogeneous_table_closed_form(N, r, data):
    # Σ λ_i (d_i Δ) = (Σ λ_i d_i) Δ, so coVol_k = Π d_i^{k_i} / N!
    ds = data.draw(st.lists(st.integers(1, 4), min_size=r, max_size=r))
    table = mixed_covolumes([homogeneous(N, d) for d in ds])
    for k in compositions(N, r):
        assert table[k] == Fraction(prod(d**e for d, e in zip(ds, k)), factorial(N))


def test_single_diagram_table_is_covolume():
    g = from_support([(3, 0, 0), (0, 4, 0), (0, 0, 2), (1, 1, 1)])
    assert mixed_covolumes([g]).entries == {(3,): covol(g)}


def test_mixed_area_of_two_segments():
    # hand computation: CoVol(λΔ + μ conv(e1, 2e2)) = (λ² + 2λμ + 2μ²)/2
    a, b = homogeneous(2, 1), weighted((1, 2))
    for lam in [(1, 1), (2, 3), (5, 1)]:
        l, m = lam
        assert covol_of_sum([a, b], lam) == Fraction(l * l + 2 * l * m + 2 * m * m, 2)
    assert mixed_covolume([a, b]) == Fraction(1, 2)
    assert mixed_covolume([b, b]) == 1


@settings(max_examples=12)
@given(seeds, st.integers(2, 3), st.integers(2, 3), st.tuples(st.integers(1, 9), st.integers(1, 9), st.integers(1, 9)))
def test_table_reproduces_fresh_sums(seed, N, r, lam):
    polys = random_tuple(seed, N, r)
    table = mixed_covolumes(polys)
    assert table.evaluate(lam[:r]) == covol_of_sum(polys, lam[:r])


@settings(max_examples=12)
@given(seeds)
def test_table_is_symmetric_under_permutation(seed):
    polys = random_tuple(seed, 3, 3)
    perm = (2, 0, 1)
    assert mixed_covolumes([polys[p] for p in perm]).entries == mixed_covolumes(polys).permuted(perm).entries


@settings(max_examples=12)
@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_table_scaling(seed, d1, d2):
    a, b = random_tuple(seed, 3, 2)
    assert mixed_covolumes([scale(a, d1), scale(b, d2)]).entries == mixed_covolumes([a, b]).scaled([d1, d2]).entries


@given(seeds)
def test_multilinearity(seed):
    g11, g12, f = random_tuple(seed, 2, 3)
    rep = verify_multilinearity(g11, g12, [f])
    assert rep.holds, rep.to_dict()


@settings(max_examples=12)
@given(seeds)
def test_multilinearity_3d(seed):
    g11, g12, f1, f2 = random_tuple(seed, 3, 4, max_coord=4)
    assert verify_multilinearity(g11, g12, [f1, f2]).holds


@settings(max_examples=12)
@given(seeds)
def test_convexity_inequality(seed):
    g1, g2, f = random_tuple(seed, 3, 3)
    assert verify_convexity(g1, g2, [f]).holds


def test_convexity_equality_for_proportional():
    g = weighted((2, 3, 4))
    rep = verify_convexity(g, scale(g, 2), [g])
    assert rep.holds and rep.lhs == rep.rhs


def test_mixed_covolume_needs_n_polyhedra():
    with pytest.raises(InputError):
        mixed_covolume([homogeneous(3, 1)] * 2)


def test_nested_simplices_share_mixed_terms():
    # Δ and conv(e1..e4, 2e5) touch along the facet normal (1,..,1) at height 1:
    # every mixed term with k_1 >= 1 equals coVol(Δ), only (0, 5) differs
    table = mixed_covolumes([homogeneous(5, 1), weighted((1, 1, 1, 1, 2))])
    for k, v in table.entries.items():
        assert v == (Fraction(1, 60) if k == (0, 5) else Fraction(1, 120))


def test_table_serialisation_round_trip():
    table = mixed_covolumes([weighted((2, 3, 1)), weighted((1, 2, 2))], seed=5)
    back = MixedCovolumeTable.from_dict(table.to_dict())
    assert back.entries == table.entries and back.grid == table.grid


def test_grid_choice_records_seed_only_when_random():
    two = mixed_covolumes([weighted((2, 3, 1)), weighted((1, 2, 2))])
    assert two.seed is None
    three = mixed_covolumes([weighted((2, 3, 1)), weighted((1, 2, 2)), weighted((3, 1, 1))], seed=7)
    assert three.seed == 7
    assert mixed_covolumes([weighted((2, 3, 1)), weighted((1, 2, 2)), weighted((3, 1, 1))], seed=8).entries == three.entries


@settings(max_examples=12)
@given(seeds, st.integers(1, 3), st.integers(2, 3))
def test_generalized_inequality_random(seed, n, r):
    tup = DiagramTuple.of(random_tuple(seed, n + r, r, max_coord=4))
    rep = generalized_inequality_check(tup)
    assert rep.holds


@given(seeds, st.integers(1, 3), st.integers(1, 3))
def test_generalized_inequality_equality_on_equal_diagrams(seed, n, r):
    g = random_tuple(seed, n + r, 1, max_coord=4)[0]
    rep = generalized_inequality_check(DiagramTuple.of([g] * r))
    assert rep.all_equal and rep.equality


def test_generalized_inequality_strict_for_distinct_degrees():
    rep = generalized_inequality_check(DiagramTuple.of([homogeneous(5, 2), homogeneous(5, 3)]))
    assert rep.holds and not rep.equality
    assert (rep.lhs, rep.rhs) == (Fraction(195, 2), 95)
