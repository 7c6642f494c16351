"""Exception hierarchy. CLI exit codes are attached to the classes."""


class DurfeeError(Exception):
    exit_code = 1


class ConsistencyError(DurfeeError):
    """Two independent computations of the same quantity disagree."""

    exit_code = 1


class InputError(DurfeeError, ValueError):
    exit_code = 2


class DimensionMismatchError(InputError):
    pass


class NotConvenientError(InputError):
    pass


class NonIntegralError(InputError):
    """A lattice count was requested on a diagram with non-integral vertices."""


class NoLatticePointError(InputError):
    pass


class BudgetExceededError(DurfeeError):
    exit_code = 3
