"""Affine root-system data: Coxeter numbers, exponents, labels, Cartan matrices.

Types are keyed as ``"A^(1)"``, ``"A^(2)"``, ... and the second argument of
:func:`cartan_data` is the subscript as it appears in the usual tables, so
``("A^(2)", 4)`` is A_4^(2) (rank 2) and ``("D^(2)", 5)`` is D_5^(2) (rank 4).
Only A^(1) is supported by the computational modules; everything else is
reference data.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from soliton.errors import UnknownAlgebraError, UnsupportedAlgebraError

F = Fraction


@dataclass(frozen=True)
class CartanData:
    algebra_type: str
    subscript: int
    rank: int
    coxeter_number: int
    exponents: tuple
    labels: tuple
    dual_labels: tuple
    sym_cartan: tuple
    finite_type: str
    twist: int = 1
    _exponent_set: frozenset = field(default=frozenset(), repr=False, compare=False)

    @property
    def name(self) -> str:
        letter = self.algebra_type[0]
        if self.twist == 1:
            return f"{letter}{self.subscript}"
        return f"{letter}{self.subscript}^({self.twist})"

    @property
    def is_computational(self) -> bool:
        return self.algebra_type == "A^(1)"

    @property
    def exponent_multiplicity(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for e in self.exponents:
            out[e] = out.get(e, 0) + 1
        return out

    def in_I(self, m: int) -> bool:
        return m > 0 and (m % self.coxeter_number) in self.exponent_multiplicity

    def multiplicity(self, m: int) -> int:
        if m <= 0:
            return 0
        return self.exponent_multiplicity.get(m % self.coxeter_number, 0)

    def pairing(self, i: int, j: int) -> Fraction:
        """(alpha_i, alpha_j) for 0 <= i, j <= rank, with alpha_0 = -theta/a_0-style
        extension ``alpha_0 = -(1/a_0) sum a_k alpha_k``."""
        return extended_pairing(self, i, j)

    def to_json_obj(self) -> dict:
        return {
            "type": self.name,
            "h": self.coxeter_number,
            "exponents": list(self.exponents),
            "labels": list(self.labels),
            "cartan": [[_json_number(x) for x in row] for row in self.sym_cartan],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def _json_number(x: Fraction):
    return int(x) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# -- finite Cartan matrices (long roots have square length 2) ---------------


def _chain(lengths: list[Fraction], links: list[Fraction]) -> list[list[Fraction]]:
    n = len(lengths)
    m = [[F(0)] * n for _ in range(n)]
    for i in range(n):
        m[i][i] = lengths[i]
    for i, c in enumerate(links):
        m[i][i + 1] = m[i + 1][i] = c
    return m


def finite_sym_cartan(letter: str, n: int) -> list[list[Fraction]]:
    if letter == "A":
        return _chain([F(2)] * n, [F(-1)] * (n - 1))
    if letter == "B":
        return _chain([F(2)] * (n - 1) + [F(1)], [F(-1)] * (n - 1))
    if letter == "C":
        if n == 1:
            return [[F(2)]]
        return _chain([F(1)] * (n - 1) + [F(2)], [F(-1, 2)] * (n - 2) + [F(-1)])
    if letter == "D":
        m = _chain([F(2)] * n, [F(-1)] * (n - 2) + [F(0)])
        m[n - 3][n - 1] = m[n - 1][n - 3] = F(-1)
        return m
    if letter == "E":
        m = [[F(0)] * n for _ in range(n)]
        for i in range(n):
            m[i][i] = F(2)
        edges = [(1, 3), (3, 4), (4, 5), (2, 4)] + [(k, k + 1) for k in range(5, n)]
        for a, b in edges:
            m[a - 1][b - 1] = m[b - 1][a - 1] = F(-1)
        return m
    if letter == "F":
        return _chain([F(2), F(2), F(1), F(1)], [F(-1), F(-1), F(-1, 2)])
    if letter == "G":
        return _chain([F(2), F(2, 3)], [F(-1)])
    raise UnknownAlgebraError(f"unknown finite type {letter}{n}")


# -- the table ---------------------------------------------------------------


def _odd(lo: int, hi: int) -> list[int]:
    return list(range(lo, hi + 1, 2))


def _row(algebra_type: str, sub: int):
    """(rank, h, exponents, labels, dual_labels, finite letter, finite rank, twist)."""
    if algebra_type == "A^(1)":
        n = sub
        if n < 1:
            raise UnknownAlgebraError("A^(1)_n needs n >= 1")
        return n, n + 1, list(range(1, n + 1)), [1] * (n + 1), [1] * (n + 1), "A", n, 1
    if algebra_type == "A^(2)":
        if sub >= 2 and sub % 2 == 0:
            n = sub // 2
            exps = _odd(1, 2 * n - 1) + _odd(2 * n + 3, 4 * n + 1)
            return n, 4 * n + 2, exps, [2] * n + [1], [1] + [2] * n, "C", n, 2
        if sub >= 5 and sub % 2 == 1:
            n = (sub + 1) // 2
            return (n, 4 * n - 2, _odd(1, 4 * n - 3), [1, 1] + [2] * (n - 2) + [1],
                    [1, 1] + [2] * (n - 1), "C", n, 2)
        raise UnknownAlgebraError(f"A^(2)_{sub} is not in the table")
    if algebra_type == "B^(1)":
        n = sub
        if n < 3:
            raise UnknownAlgebraError("B^(1)_n needs n >= 3")
        return n, 2 * n, _odd(1, 2 * n - 1), [1, 1] + [2] * (n - 1), [1, 1] + [2] * (n - 2) + [1], "B", n, 1
    if algebra_type == "C^(1)":
        n = sub
        if n < 2:
            raise UnknownAlgebraError("C^(1)_n needs n >= 2")
        return n, 2 * n, _odd(1, 2 * n - 1), [1] + [2] * (n - 1) + [1], [1] * (n + 1), "C", n, 1
    if algebra_type == "D^(1)":
        n = sub
        if n < 4:
            raise UnknownAlgebraError("D^(1)_n needs n >= 4")
        labels = [1, 1] + [2] * (n - 3) + [1, 1]
        return n, 2 * n - 2, sorted(_odd(1, 2 * n - 3) + [n - 1]), labels, labels, "D", n, 1
    if algebra_type == "D^(2)":
        n = sub - 1
        if n < 2:
            raise UnknownAlgebraError("D^(2)_{n+1} needs n >= 2")
        return n, 2 * n + 2, _odd(1, 2 * n + 1), [1] * (n + 1), [1] + [2] * (n - 1) + [1], "B", n, 2
    if algebra_type == "D^(3)":
        if sub != 4:
            raise UnknownAlgebraError("only D^(3)_4 exists")
        return 2, 12, [1, 5, 7, 11], [1, 2, 1], [1, 2, 3], "G", 2, 3
    if algebra_type == "E^(1)":
        table = {
            6: (12, [1, 4, 5, 7, 8, 11], [1, 1, 2, 2, 3, 2, 1]),
            7: (18, [1, 5, 7, 9, 11, 13, 17], [1, 2, 2, 3, 4, 3, 2, 1]),
            8: (30, [1, 7, 11, 13, 17, 19, 23, 29], [1, 2, 3, 4, 6, 5, 4, 3, 2]),
        }
        if sub not in table:
            raise UnknownAlgebraError(f"E^(1)_{sub} is not in the table")
        h, exps, labels = table[sub]
        return sub, h, exps, labels, labels, "E", sub, 1
    if algebra_type == "E^(2)":
        if sub != 6:
            raise UnknownAlgebraError("only E^(2)_6 exists")
        return 4, 18, [1, 5, 7, 11, 13, 17], [1, 2, 3, 2, 1], [1, 2, 3, 4, 2], "F", 4, 2
    if algebra_type == "F^(1)":
        if sub != 4:
            raise UnknownAlgebraError("only F^(1)_4 exists")
        return 4, 12, [1, 5, 7, 11], [1, 2, 3, 4, 2], [1, 2, 3, 2, 1], "F", 4, 1
    if algebra_type == "G^(1)":
        if sub != 2:
            raise UnknownAlgebraError("only G^(1)_2 exists")
        return 2, 6, [1, 5], [1, 2, 3], [1, 2, 1], "G", 2, 1
    raise UnknownAlgebraError(f"unknown affine type {algebra_type!r}")


ALGEBRA_TYPES = ("A^(1)", "A^(2)", "B^(1)", "C^(1)", "D^(1)", "D^(2)", "D^(3)",
                 "E^(1)", "E^(2)", "F^(1)", "G^(1)")


@lru_cache(maxsize=None)
def cartan_data(algebra_type: str, rank: int) -> CartanData:
    """Table row for the affine algebra ``algebra_type`` with the given subscript."""
    if not isinstance(rank, int) or isinstance(rank, bool):
        raise UnknownAlgebraError(f"subscript must be an integer, got {rank!r}")
    ell, h, exps, labels, dual, letter, frank, twist = _row(algebra_type, rank)
    sym = finite_sym_cartan(letter, frank)
    return CartanData(
        algebra_type=algebra_type,
        subscript=rank,
        rank=ell,
        coxeter_number=h,
        exponents=tuple(exps),
        labels=tuple(labels),
        dual_labels=tuple(dual),
        sym_cartan=tuple(tuple(r) for r in sym),
        finite_type=f"{letter}{frank}",
        twist=twist,
    )


def sl(N: int) -> CartanData:
    """A_{N-1}^(1)."""
    if N < 2:
        raise UnknownAlgebraError("sl_N needs N >= 2")
    return cartan_data("A^(1)", N - 1)


def require_computational(data: CartanData) -> int:
    """Return N for A_{N-1}^(1), otherwise refuse."""
    if not data.is_computational:
        raise UnsupportedAlgebraError(
            f"{data.name} is table data only; computations need type A^(1)")
    return data.rank + 1


def exponent_sequence(data: CartanData, bound: int) -> list[int]:
    """Elements of I up to ``bound``, repeated by multiplicity."""
    out = []
    for m in range(1, bound + 1):
        out.extend([m] * data.multiplicity(m))
    return out


def extended_pairing(data: CartanData, i: int, j: int) -> Fraction:
    if not (0 <= i <= data.rank and 0 <= j <= data.rank):
        raise IndexError("root index out of range")
    if data.twist != 1:
        raise UnsupportedAlgebraError("alpha_0 pairing only defined for untwisted types")
    a = data.labels
    c = data.sym_cartan

    def with0(k: int) -> Fraction:
        return -sum(F(a[m]) * c[m - 1][k - 1] for m in range(1, data.rank + 1)) / a[0]

    if i and j:
        return c[i - 1][j - 1]
    if i == 0 and j == 0:
        return -sum(F(a[m]) * with0(m) for m in range(1, data.rank + 1)) / a[0]
    return with0(j or i)


def leading_minors(matrix) -> list[Fraction]:
    """Leading principal minors, by fraction-exact elimination."""
    from soliton._linalg import _dm, _to_fraction

    out = []
    for k in range(1, len(matrix) + 1):
        sub = [list(r[:k]) for r in matrix[:k]]
        out.append(_to_fraction(_dm(sub).det()))
    return out


_NAME = re.compile(
    r"^(?:sl(?P<sl>\d+)"
    r"|(?P<l1>[A-G])\^?\((?P<t1>[123])\)_?(?P<n1>\d+)"
    r"|(?P<l2>[A-G])_?(?P<n2>\d+)(?:\^?\((?P<t2>[123])\))?)$"
)


def parse_algebra(name: str) -> CartanData:
    """Accept ``sl3``, ``A2``, ``E8``, ``A4^(2)``, ``A^(2)_4``, ``D4(3)``."""
    m = _NAME.match(name.strip().replace(" ", ""))
    if not m:
        raise UnknownAlgebraError(f"cannot parse algebra name {name!r}")
    if m.group("sl"):
        return sl(int(m.group("sl")))
    letter = m.group("l1") or m.group("l2")
    n = int(m.group("n1") or m.group("n2"))
    twist = m.group("t1") or m.group("t2") or "1"
    return cartan_data(f"{letter}^({twist})", n)


def all_table_rows(max_rank: int = 8) -> list[CartanData]:
    """Every legal table row with subscript up to ``max_rank``."""
    out = []
    for t in ALGEBRA_TYPES:
        for n in range(1, max_rank + 1):
            try:
                out.append(cartan_data(t, n))
            except UnknownAlgebraError:
                pass
    return out
