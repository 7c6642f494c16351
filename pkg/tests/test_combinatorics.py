from fractions import Fraction
from itertools import product
from math import comb, factorial

import pytest
from hypothesis import given, strategies as st

from newton_durfee.combinatorics import (
    cnr,
    cnr_composition_form,
    cnr_stirling_form,
    compositions,
    falling_factorial,
    inclusion_exclusion_sum,
    multinomial,
    positive_compositions,
    property4_sum,
    stirling2,
    stirling2_explicit,
    stirling_convolution_holds,
    verify_cnr_properties,
)
from newton_durfee.errors import InputError


def surjections(m: int, r: int) -> int:
    return sum(1 for f in product(range(r), repeat=m) if len(set(f)) == r)


@pytest.mark.parametrize("m,r", [(m, r) for m in range(0, 7) for r in range(0, 7)])
def test_stirling_matches_surjection_count(m, r):
    # S(m, r) r! counts surjections of an m-set onto an r-set
    assert stirling2(m, r) * factorial(r) == surjections(m, r)


def test_stirling_small_values():
    assert stirling2(4, 2) == 7
    assert stirling2(5, 2) == 15
    assert stirling2(0, 0) == 1
    assert stirling2(3, 0) == 0
    assert stirling2(10, 3) == 9330


@given(st.integers(0, 25), st.integers(0, 12))
def test_stirling_recursion_equals_explicit_sum(m, r):
    assert stirling2(m, r) == stirling2_explicit(m, r)


@given(st.integers(0, 9), st.integers(1, 5))
def test_compositions_are_complete_and_descending(n, r):
    ks = compositions(n, r)
    assert len(ks) == comb(n + r - 1, r - 1) == len(set(ks))
    assert all(sum(k) == n and len(k) == r and min(k) >= 0 for k in ks)
    assert ks == sorted(ks, reverse=True)


@given(st.integers(1, 9), st.integers(1, 5))
def test_positive_compositions(n, r):
    ks = positive_compositions(n, r)
    assert len(ks) == (comb(n - 1, r - 1) if n >= r else 0)
    assert all(min(k) >= 1 for k in ks)


@given(st.lists(st.integers(0, 5), min_size=1, max_size=5))
def test_multinomial_counts_words(parts):
    total = sum(parts)
    expected = factorial(total)
    for p in parts:
        expected //= factorial(p)
    assert multinomial(total, parts) == expected


def test_multinomial_rejects_wrong_total():
    with pytest.raises(InputError):
        multinomial(4, [1, 1])


def test_falling_factorial():
    assert falling_factorial(5, 3) == 60
    assert falling_factorial(2, 4) == 0
    assert falling_factorial(4, 0) == 1


@pytest.mark.parametrize("n", range(0, 9))
def test_cnr_hypersurface_case(n):
    assert cnr(n, 1) == factorial(n + 1)


def test_cnr_known_values():
    assert cnr(3, 2) == 16
    assert cnr(2, 2) == Fraction(36, 7)
    assert cnr(0, 4) == 1
    assert cnr(1, 5) == 2


@given(st.integers(0, 8), st.integers(1, 6))
def test_cnr_two_forms_agree(n, r):
    assert cnr_stirling_form(n, r) == cnr_composition_form(n, r)


@given(st.integers(2, 8), st.integers(1, 6))
def test_cnr_strictly_decreasing_and_above_power_of_two(n, r):
    assert cnr(n, r) > cnr(n, r + 1) > 2**n


def test_cnr_tends_to_power_of_two():
    n = 3
    gaps = [cnr(n, r) - 2**n for r in (5, 20, 80)]
    assert gaps[0] > gaps[1] > gaps[2] > 0
    assert gaps[2] < Fraction(1, 2)


@given(st.integers(0, 8), st.integers(1, 6))
def test_property4_identity(n, r):
    assert property4_sum(n, r) == 0


@given(st.integers(0, 7), st.integers(1, 5), st.data())
def test_stirling_convolution(n, r, data):
    j = data.draw(st.integers(0, r))
    assert stirling_convolution_holds(n, r, j)


@given(st.integers(1, 6), st.integers(1, 4))
def test_inclusion_exclusion_isolates_positive_parts(n, r):
    weights = {k: 3 ** sum(i * x for i, x in enumerate(k)) + 7 * k[0] for k in compositions(n, r)}
    direct = sum(v for k, v in weights.items() if min(k) >= 1)
    assert inclusion_exclusion_sum(weights, n, r) == direct


def test_verify_cnr_properties_full_grid():
    report = verify_cnr_properties(8, 6)
    assert report.passed, report.to_dict()
    names = {c.name for c in report.checks}
    assert {"cnr-two-forms", "cnr-strictly-decreasing-in-r", "cnr-exceeds-2^n", "cnr-property-4-identity"} <= names


def test_verify_cnr_properties_smallest_grid():
    assert verify_cnr_properties(1, 1).passed


def test_verify_cnr_properties_rejects_empty_grid():
    with pytest.raises(InputError):
        verify_cnr_properties(0, 3)
