"""Exact lattice-geometry toolkit for Durfee-type inequalities of Newton-non-degenerate singularities."""

from .combinatorics import cnr, multinomial, stirling2
from .covolume import generalized_inequality_check, mixed_covolume, mixed_covolumes, newton_sum
from .ehrhart import ehrhart_polynomial, pg_polynomial
from .errors import BudgetExceededError, ConsistencyError, DurfeeError, InputError
from .harness import (
    conjecture_report,
    counterexample,
    durfee_check,
    lemma_suite,
    scaling_scan,
    theorem2_check,
)
from .invariants import IcisInput, milnor_hypersurface, milnor_icis, milnor_proportional, pg_hypersurface, pg_icis
from .lattice_geometry import Polytope, convex_hull, normalized_volume
from .newton_diagram import DiagramTuple, NewtonPolyhedron, from_support, homogeneous, load_input, parse_input

__version__ = "0.1.0"
