"""Exact combinatorics: Stirling numbers, compositions, multinomials and C_{n,r}.

Everything here is integer or :class:`fractions.Fraction` arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import comb, factorial, prod

from .errors import ConsistencyError, InputError

Composition = tuple[int, ...]


@lru_cache(maxsize=None)
def stirling2(m: int, r: int) -> int:
    """Number of partitions of ``m`` labelled elements into ``r`` non-empty blocks.

    ``S(m, r) = 0`` for ``r > m``; ``r = 0`` is accepted with ``S(0, 0) = 1``.
    """
    if m < 0 or r < 0:
        raise InputError(f"stirling2 needs m, r >= 0, got ({m}, {r})")
    if r == 0:
        return 1 if m == 0 else 0
    if r > m:
        return 0
    if r == 1 or r == m:
        return 1
    return r * stirling2(m - 1, r) + stirling2(m - 1, r - 1)


def stirling2_explicit(m: int, r: int) -> int:
    """``S(m, r)`` from the alternating binomial sum; independent of the recurrence."""
    total = sum((-1) ** j * comb(r, j) * (r - j) ** m for j in range(r + 1))
    q, rem = divmod(total, factorial(r))
    assert rem == 0
    return q


def compositions(n: int, r: int) -> list[Composition]:
    """All ordered ``r``-tuples of non-negative integers summing to ``n``.

    Order is lexicographically descending (first part largest first). Empty
    when ``r <= 0`` or ``n < 0``.
    """
    if r <= 0 or n < 0:
        return []
    if r == 1:
        return [(n,)]
    out = []
    for first in range(n, -1, -1):
        for rest in compositions(n - first, r - 1):
            out.append((first,) + rest)
    return out


def positive_compositions(n: int, r: int) -> list[Composition]:
    """Compositions of ``n`` into ``r`` parts that are all at least one."""
    return [tuple(k + 1 for k in c) for c in compositions(n - r, r)]


def multinomial(total: int, parts) -> int:
    parts = list(parts)
    if any(p < 0 for p in parts):
        raise InputError(f"multinomial parts must be >= 0, got {parts}")
    if sum(parts) != total:
        raise InputError(f"multinomial parts {parts} do not sum to {total}")
    out = factorial(total)
    for p in parts:
        out //= factorial(p)
    return out


def falling_factorial(x: int, length: int) -> int:
    """x (x-1) ... (x-length+1); zero as soon as a factor vanishes."""
    return prod(x - i for i in range(length))


def cnr_stirling_form(n: int, r: int) -> Fraction:
    return Fraction(comb(n + r - 1, n) * factorial(n + r), stirling2(n + r, r) * factorial(r))


def cnr_composition_form(n: int, r: int) -> Fraction:
    ks = compositions(n, r)
    denom = sum(Fraction(1, prod(factorial(k + 1) for k in c)) for c in ks)
    return len(ks) / denom


@lru_cache(maxsize=None)
def cnr(n: int, r: int) -> Fraction:
    """The corrected Durfee coefficient C_{n,r}.

    Computed twice, from the Stirling form and from the composition sum, and
    the two are required to agree.
    """
    if n < 0 or r < 1:
        raise InputError(f"cnr needs n >= 0 and r >= 1, got ({n}, {r})")
    a = cnr_stirling_form(n, r)
    b = cnr_composition_form(n, r)
    if a != b:
        raise ConsistencyError(f"C_{{{n},{r}}}: Stirling form {a} != composition form {b}")
    return a


def inclusion_exclusion_sum(weights: dict, n: int, r: int) -> Fraction | int:
    """Alternating sum over forced-zero coordinate sets.

    Sum_{S subset [r]} (-1)^{|S|} Sum_{k in K_{n,r}, k_i = 0 for i in S} weights[k],
    which must equal the sum over compositions with all parts positive.
    """
    total = 0
    for size in range(r + 1):
        for zeros in combinations(range(r), size):
            part = sum(weights[k] for k in compositions(n, r) if all(k[i] == 0 for i in zeros))
            total += (-1) ** size * part
    return total


@dataclass
class CheckResult:
    name: str
    passed: bool
    checked: int = 0
    counterexample: object = None
    detail: str = ""

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "counterexample": None if self.counterexample is None else str(self.counterexample),
            "detail": self.detail,
        }


@dataclass
class PropertyReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def _run(name, cases, predicate) -> CheckResult:
    res = CheckResult(name, True)
    for case in cases:
        res.checked += 1
        if not predicate(*case):
            res.passed = False
            res.counterexample = case
            break
    return res


def stirling_convolution_holds(n: int, r: int, j: int) -> bool:
    """binom(r, j) S(n+r, r) = Sum_i binom(n+r, i) S(n+r-i, j) S(i, r-j)."""
    lhs = comb(r, j) * stirling2(n + r, r)
    rhs = sum(
        comb(n + r, i) * stirling2(n + r - i, j) * stirling2(i, r - j)
        for i in range(r - j, n + r - j + 1)
    )
    return lhs == rhs


def property4_sum(n: int, r: int) -> Fraction:
    c = cnr(n, r)
    return sum(
        factorial(n + r) - c * multinomial(n + r, [k + 1 for k in ks]) for ks in compositions(n, r)
    )


def verify_cnr_properties(n_max: int, r_max: int) -> PropertyReport:
    if n_max < 1 or r_max < 1:
        raise InputError("n_max and r_max must be >= 1")
    grid = [(n, r) for n in range(1, n_max + 1) for r in range(1, r_max + 1)]
    # n = 1 is degenerate: C_{1,r} = 2 = 2^1 for every r, so the strict
    # inequalities only make sense from n = 2 on
    strict = [(n, r) for n, r in grid if n >= 2]
    report = PropertyReport()
    report.checks.append(_run("cnr-two-forms", grid, lambda n, r: cnr_stirling_form(n, r) == cnr_composition_form(n, r)))
    report.checks.append(_run("cnr-strictly-decreasing-in-r", strict, lambda n, r: cnr(n, r) > cnr(n, r + 1)))
    report.checks.append(_run("cnr-exceeds-2^n", strict, lambda n, r: cnr(n, r) > 2**n))
    report.checks.append(_run("cnr-n1-constant", [(r,) for r in range(1, r_max + 2)], lambda r: cnr(1, r) == 2))
    report.checks.append(_run("cnr-property-4-identity", grid, lambda n, r: property4_sum(n, r) == 0))
    conv = [(n, r, j) for n, r in grid for j in range(r + 1)]
    report.checks.append(_run("stirling-convolution", conv, stirling_convolution_holds))
    return report
