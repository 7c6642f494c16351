import random
from itertools import product

import pytest
from hypothesis import HealthCheck, settings

from newton_durfee.lattice_geometry import convex_hull
from newton_durfee.newton_diagram import random_convenient

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_lattice_polytope(rng: random.Random, N: int, box: int = 3, extra: int = 3):
    """Full-dimensional lattice polytope from random points of [0, box]^N."""
    while True:
        pts = {tuple(rng.randint(0, box) for _ in range(N)) for _ in range(N + 1 + extra)}
        P = convex_hull(sorted(pts))
        if P.is_full_dimensional:
            return P


def random_diagrams(seed: int, count: int, dims=(2, 3, 4), max_coord: int = 6):
    rng = random.Random(seed)
    return [random_convenient(rng, rng.choice(list(dims)), max_coord) for _ in range(count)]


def box_points(bounds):
    return product(*(range(lo, hi + 1) for lo, hi in bounds))


@pytest.fixture
def rng():
    return random.Random(12345)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[key])
