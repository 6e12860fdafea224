"""Exception hierarchy.

``InternalConsistencyError`` marks failures that the theory rules out; the
CLI maps them to exit status 4.
"""


class SolitonError(Exception):
    pass


class UnknownAlgebraError(SolitonError, ValueError):
    """Illegal (type, rank) pair."""


class UnsupportedAlgebraError(SolitonError):
    """Algebra is known but only carried as table data."""


class InternalConsistencyError(SolitonError):
    pass
