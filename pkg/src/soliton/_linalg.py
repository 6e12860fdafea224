"""Exact rational linear algebra on small dense systems.

Thin layer over sympy's ``DomainMatrix`` (field QQ).  Right-hand sides may
carry any additive values that support multiplication by a ``Fraction``,
which is how vectors of differential polynomials get solved against
purely numeric coefficient matrices.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Any, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix


def _to_qq(x) -> Any:
    x = Fraction(x)
    return QQ(x.numerator, x.denominator)


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _dm(rows: Sequence[Sequence], ncols: int | None = None) -> DomainMatrix:
    rows = [list(r) for r in rows]
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    data = [[_to_qq(v) for v in r] for r in rows]
    return DomainMatrix(data, (len(rows), ncols), QQ)


def rank(rows: Sequence[Sequence]) -> int:
    if not rows or not rows[0]:
        return 0
    return _dm(rows).rank()


def nullspace(rows: Sequence[Sequence], ncols: int) -> list[list[Fraction]]:
    """Basis of {x : A x = 0}, returned as rows in reduced form."""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    ns = _dm(rows, ncols).nullspace()
    return [[_to_fraction(v) for v in r] for r in ns.to_list()]


class LinearSystem:
    """Precomputed elimination for ``A x = b`` with ``A`` fixed.

    ``E`` records the row operations bringing ``A`` to reduced echelon form,
    so each solve is a matrix-vector product plus a consistency check on the
    zero rows.  Free variables are set to zero.
    """

    def __init__(self, rows: Sequence[Sequence], ncols: int):
        self.nrows = len(rows)
        self.ncols = ncols
        m = self.nrows
        aug = [list(r) + [int(i == j) for j in range(m)] for i, r in enumerate(rows)]
        if m == 0:
            self._pivots = ()
            self._E = []
            return
        red, pivots = _dm(aug, ncols + m).rref()
        red = red.to_list()
        self._pivots = tuple(p for p in pivots if p < ncols)
        self._E = [
            {j: _to_fraction(v) for j, v in enumerate(row[ncols:]) if v}
            for row in red
        ]

    @property
    def rank(self) -> int:
        return len(self._pivots)

    def _combine(self, coeffs: dict, b: Sequence, zero):
        acc = zero
        for j, c in coeffs.items():
            if b[j]:
                acc = acc + b[j] * c
        return acc

    def solve(self, b: Sequence, zero=Fraction(0)):
        """Return one solution as a list, or ``None`` if inconsistent."""
        if len(b) != self.nrows:
            raise ValueError("right-hand side has wrong length")
        x = [zero] * self.ncols
        r = len(self._pivots)
        for row_idx, col in enumerate(self._pivots):
            x[col] = self._combine(self._E[row_idx], b, zero)
        for row_idx in range(r, self.nrows):
            if self._combine(self._E[row_idx], b, zero):
                return None
        return x
