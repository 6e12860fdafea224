"""Loop algebra of sl_N as sparse Laurent-polynomial matrices over DiffPoly.

An element is a dict ``{(row, col, t_power): DiffPoly}`` with 0-based rows
and columns.  The principal degree of ``E_{jk} t^a`` is ``(k - j) + a N``.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping

from soliton import _linalg
from soliton.diffpoly import DiffPoly
from soliton.errors import SolitonError


class NotInImage(SolitonError, ValueError):
    """Input has a nonzero component along the principal abelian subalgebra."""


def principal_degree(N: int, j: int, k: int, a: int) -> int:
    return (k - j) + a * N


def _coeff(c, rank: int) -> DiffPoly:
    if isinstance(c, DiffPoly):
        return c
    return DiffPoly.const(c, rank)


class LoopElement:
    """Immutable N x N Laurent matrix with DiffPoly entries."""

    __slots__ = ("N", "entries")

    def __init__(self, N: int, entries: Mapping | None = None):
        self.N = N
        clean = {}
        if entries:
            for (j, k, a), c in entries.items():
                if not (0 <= j < N and 0 <= k < N):
                    raise IndexError(f"entry ({j},{k}) outside {N}x{N}")
                c = _coeff(c, N - 1)
                if c:
                    key = (j, k, a)
                    clean[key] = clean[key] + c if key in clean else c
                    if not clean[key]:
                        del clean[key]
        self.entries = clean

    @classmethod
    def _raw(cls, N: int, entries: dict) -> "LoopElement":
        obj = cls.__new__(cls)
        obj.N = N
        obj.entries = entries
        return obj

    @classmethod
    def zero(cls, N: int) -> "LoopElement":
        return cls._raw(N, {})

    @classmethod
    def unit(cls, N: int, j: int, k: int, a: int = 0, coeff=1) -> "LoopElement":
        return cls(N, {(j, k, a): coeff})

    @classmethod
    def identity(cls, N: int) -> "LoopElement":
        return cls(N, {(j, j, 0): 1 for j in range(N)})

    # -- arithmetic ---------------------------------------------------------

    def _check(self, other: "LoopElement"):
        if not isinstance(other, LoopElement):
            raise TypeError("expected LoopElement")
        if other.N != self.N:
            raise ValueError(f"dimension mismatch: {self.N} vs {other.N}")

    def __add__(self, other: "LoopElement") -> "LoopElement":
        self._check(other)
        out = dict(self.entries)
        for key, c in other.entries.items():
            if key in out:
                v = out[key] + c
                if v:
                    out[key] = v
                else:
                    del out[key]
            else:
                out[key] = c
        return LoopElement._raw(self.N, out)

    def __neg__(self) -> "LoopElement":
        return LoopElement._raw(self.N, {k: -c for k, c in self.entries.items()})

    def __sub__(self, other: "LoopElement") -> "LoopElement":
        return self + (-other)

    def scale(self, c) -> "LoopElement":
        if isinstance(c, DiffPoly):
            out = {k: v * c for k, v in self.entries.items()}
        else:
            c = Fraction(c)
            if not c:
                return LoopElement.zero(self.N)
            out = {k: v * c for k, v in self.entries.items()}
        return LoopElement._raw(self.N, {k: v for k, v in out.items() if v})

    def __mul__(self, c) -> "LoopElement":
        if isinstance(c, LoopElement):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def __matmul__(self, other: "LoopElement") -> "LoopElement":
        self._check(other)
        by_row: dict = {}
        for (k, l, b), c in other.entries.items():
            by_row.setdefault(k, []).append((l, b, c))
        out: dict = {}
        for (j, k, a), c1 in self.entries.items():
            for l, b, c2 in by_row.get(k, ()):
                key = (j, l, a + b)
                v = c1 * c2
                if key in out:
                    out[key] = out[key] + v
                else:
                    out[key] = v
        return LoopElement._raw(self.N, {k: v for k, v in out.items() if v})

    def __eq__(self, other) -> bool:
        if not isinstance(other, LoopElement):
            return NotImplemented
        return self.N == other.N and self.entries == other.entries

    def __hash__(self):
        return hash((self.N, frozenset(self.entries.items())))

    def __bool__(self) -> bool:
        return bool(self.entries)

    def __repr__(self) -> str:
        return f"LoopElement(N={self.N}, {pretty(self)!r})"

    # -- structure ----------------------------------------------------------

    def degree_of(self, key) -> int:
        j, k, a = key
        return principal_degree(self.N, j, k, a)

    def degrees(self) -> list[int]:
        return sorted({self.degree_of(key) for key in self.entries})

    def component(self, m: int) -> "LoopElement":
        return LoopElement._raw(
            self.N, {key: c for key, c in self.entries.items() if self.degree_of(key) == m})

    def components(self) -> dict[int, "LoopElement"]:
        out: dict = {}
        for key, c in self.entries.items():
            out.setdefault(self.degree_of(key), {})[key] = c
        return {m: LoopElement._raw(self.N, e) for m, e in sorted(out.items())}

    def restrict_window(self, lo: int | None = None, hi: int | None = None) -> "LoopElement":
        """Keep principal degrees in [lo, hi]; the only truncating operation."""
        return LoopElement._raw(self.N, {
            key: c for key, c in self.entries.items()
            if (lo is None or self.degree_of(key) >= lo) and (hi is None or self.degree_of(key) <= hi)
        })

    def window(self) -> tuple[int, int] | None:
        pw = [a for _, _, a in self.entries]
        return (min(pw), max(pw)) if pw else None

    def is_homogeneous(self) -> bool:
        return len(self.degrees()) <= 1

    def trace(self) -> dict[int, DiffPoly]:
        out: dict = {}
        for (j, k, a), c in self.entries.items():
            if j == k:
                out[a] = out[a] + c if a in out else c
        return {a: c for a, c in out.items() if c}

    def is_traceless(self) -> bool:
        return not self.trace()

    def map_coeffs(self, fn: Callable[[DiffPoly], DiffPoly]) -> "LoopElement":
        out = {}
        for key, c in self.entries.items():
            v = fn(c)
            if v:
                out[key] = v
        return LoopElement._raw(self.N, out)

    def d_z(self) -> "LoopElement":
        return self.map_coeffs(lambda c: c.d_z())

    def entry(self, j: int, k: int, a: int = 0) -> DiffPoly:
        return self.entries.get((j, k, a), DiffPoly.zero(self.N - 1))

    def is_cartan_t0(self) -> bool:
        """True when only diagonal t^0 entries are present."""
        return all(j == k and a == 0 for j, k, a in self.entries)

    # -- serialization --------------------------------------------------------

    def to_json_obj(self) -> dict:
        items = sorted(self.entries.items(), key=lambda kv: (kv[0][0], kv[0][1], kv[0][2]))
        return {
            "N": self.N,
            "entries": [
                {"row": j + 1, "col": k + 1, "t": a, "coeff": c.to_json_obj()}
                for (j, k, a), c in items
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: dict) -> "LoopElement":
        N = obj["N"]
        return cls(N, {
            (e["row"] - 1, e["col"] - 1, e["t"]): DiffPoly.from_json_obj(e["coeff"], N - 1)
            for e in obj["entries"]
        })


def bracket(x: LoopElement, y: LoopElement) -> LoopElement:
    return (x @ y) - (y @ x)


def inner_product(x: LoopElement, y: LoopElement) -> DiffPoly:
    """Constant term in t of tr(xy)."""
    x._check(y)
    out = DiffPoly.zero(x.N - 1)
    for (j, k, a), c in x.entries.items():
        d = y.entries.get((k, j, -a))
        if d is not None:
            out = out + c * d
    return out


# -- distinguished elements -------------------------------------------------


@lru_cache(maxsize=None)
def p_element(N: int, m: int) -> LoopElement:
    """Generator of the principal abelian subalgebra in degree m: (p_1)^m."""
    if N < 2:
        raise ValueError("N must be at least 2")
    if m % N == 0:
        raise ValueError(f"no abelian generator in degree {m} for N={N}")
    entries = {}
    for j in range(N):
        k = (j + m) % N
        a = (m - (k - j)) // N
        entries[(j, k, a)] = 1
    return LoopElement(N, entries)


def e_generator(N: int, i: int) -> LoopElement:
    """Chevalley e_i, i = 0..N-1 (e_0 = t E_{N1})."""
    if i == 0:
        return LoopElement.unit(N, N - 1, 0, 1)
    return LoopElement.unit(N, i - 1, i, 0)


def f_generator(N: int, i: int) -> LoopElement:
    """Chevalley f_i, i = 0..N-1 (f_0 = t^{-1} E_{1N})."""
    if i == 0:
        return LoopElement.unit(N, 0, N - 1, -1)
    return LoopElement.unit(N, i, i - 1, 0)


def p_bar_minus_one(N: int) -> LoopElement:
    """Sum of f_1..f_{N-1}: the subdiagonal of ones."""
    return LoopElement(N, {(j + 1, j, 0): 1 for j in range(N - 1)})


def fundamental_coweight(N: int, j: int) -> LoopElement:
    return LoopElement(N, {
        (k, k, 0): Fraction(N - j, N) if k < j else Fraction(-j, N) for k in range(N)
    })


def coroot(N: int, i: int) -> LoopElement:
    return LoopElement(N, {(i - 1, i - 1, 0): 1, (i, i, 0): -1})


def cartan_embedding(values) -> LoopElement:
    """sum_i omega_i^vee q_i for a list of ell DiffPoly values q_i."""
    N = len(values) + 1
    out = LoopElement.zero(N)
    for i, q in enumerate(values, start=1):
        out = out + fundamental_coweight(N, i).scale(q)
    return out


def u_matrix(N: int) -> LoopElement:
    """The generic Cartan element sum_i omega_i^vee u_i."""
    return cartan_embedding([DiffPoly.var(i, 0, N - 1) for i in range(1, N)])


def cartan_coordinates(x: LoopElement) -> list[DiffPoly]:
    """(alpha_i, x) for a diagonal t^0 element: differences of consecutive entries."""
    return [x.entry(i - 1, i - 1) - x.entry(i, i) for i in range(1, x.N)]


# sl_2 basis homogeneous in the principal gradation


def q_element(j: int) -> LoopElement:
    """Degree 2j+1: [[0, t^j], [-t^{j+1}, 0]]."""
    return LoopElement(2, {(0, 1, j): 1, (1, 0, j + 1): -1})


def r_element(j: int) -> LoopElement:
    """Degree 2j: diag(t^j, -t^j)."""
    return LoopElement(2, {(0, 0, j): 1, (1, 1, j): -1})


# -- graded components as coordinate vectors --------------------------------


def _slot(N: int, m: int, j: int) -> tuple[int, int, int]:
    k = (j + m) % N
    return (j, k, (m - (k - j)) // N)


def component_coords(x: LoopElement, m: int) -> list[DiffPoly]:
    """Coordinates of the degree-m part of x, one per row."""
    return [x.entry(*_slot(x.N, m, j)) for j in range(x.N)]


def from_coords(N: int, m: int, values) -> LoopElement:
    return LoopElement(N, {_slot(N, m, j): v for j, v in enumerate(values) if v})


def component_basis(N: int, m: int) -> list[LoopElement]:
    """Basis of the degree-m part of the loop algebra of sl_N."""
    if m % N:
        return [from_coords(N, m, [int(j == r) for j in range(N)]) for r in range(N)]
    return [from_coords(N, m, [int(j == r) - int(j == r + 1) for j in range(N)])
            for r in range(N - 1)]


# -- splitting ----------------------------------------------------------------


class Splitting:
    __slots__ = ("ab_part", "perp_part")

    def __init__(self, ab_part: LoopElement, perp_part: LoopElement):
        self.ab_part = ab_part
        self.perp_part = perp_part

    def __iter__(self):
        return iter((self.ab_part, self.perp_part))


def abelian_coefficient(x: LoopElement, m: int) -> DiffPoly:
    """c with x_m = c p_m + (element of Im ad p_{-1}); zero when N divides m."""
    if m % x.N == 0:
        return DiffPoly.zero(x.N - 1)
    return inner_product(p_element(x.N, -m), x.component(m)) * Fraction(1, x.N)


def split(x: LoopElement, window: tuple[int, int] | None = None) -> Splitting:
    """Decompose x along the abelian subalgebra and the image of ad p_{-1}."""
    if window is not None:
        lo, hi = window
        outside = [m for m in x.degrees() if not lo <= m <= hi]
        if outside:
            raise ValueError(f"degrees {outside} outside window {window}")
    ab = LoopElement.zero(x.N)
    for m in x.degrees():
        c = abelian_coefficient(x, m)
        if c:
            ab = ab + p_element(x.N, m).scale(c)
    return Splitting(ab, x - ab)


@lru_cache(maxsize=None)
def _inv_ad_system(N: int, m: int):
    """Linear system for [p_{-1}, w] = y, w in degree m+1, y in degree m.

    One extra row pins the abelian part of w to zero (trace zero when N
    divides m+1).
    """
    pm1 = p_element(N, -1)
    cols = []
    for r in range(N):
        w = from_coords(N, m + 1, [int(j == r) for j in range(N)])
        img = bracket(pm1, w)
        cols.append([c.constant_term() for c in component_coords(img, m)])
    rows = [[cols[r][j] for r in range(N)] for j in range(N)]
    if (m + 1) % N:
        pairing = p_element(N, -(m + 1))
        extra = []
        for r in range(N):
            w = from_coords(N, m + 1, [int(j == r) for j in range(N)])
            extra.append(inner_product(pairing, w).constant_term())
    else:
        extra = [Fraction(1)] * N
    rows.append(extra)
    return _linalg.LinearSystem(rows, N)


def inv_ad_pm1(y: LoopElement) -> LoopElement:
    """Unique x with [p_{-1}, x] = y and no abelian component."""
    N = y.N
    out = LoopElement.zero(N)
    zero = DiffPoly.zero(N - 1)
    for m in y.degrees():
        b = component_coords(y, m) + [zero]
        sol = _inv_ad_system(N, m).solve(b, zero)
        if sol is None:
            raise NotInImage(f"degree-{m} component has an abelian part")
        out = out + from_coords(N, m + 1, sol)
    return out


# -- gamma vectors ------------------------------------------------------------


def gamma_vectors(N: int) -> tuple[list[LoopElement], int]:
    """(ad p_{-1})^{N-i-1} [f_0, p_{-i}] for i = 1..N-1, and the rank of their
    Cartan coefficient matrix."""
    pm1 = p_element(N, -1)
    f0 = f_generator(N, 0)
    vectors = []
    for i in range(1, N):
        g = bracket(f0, p_element(N, -i))
        for _ in range(N - i - 1):
            g = bracket(pm1, g)
        vectors.append(g)
    rows = []
    for g in vectors:
        if any(not (j == k and a == -1) for j, k, a in g.entries):
            raise AssertionError("gamma vector left the Cartan subalgebra tensor t^-1")
        rows.append([g.entry(j, j, -1).constant_term() for j in range(N)])
    return vectors, _linalg.rank(rows)


# -- display ------------------------------------------------------------------


def laurent_text(terms: Iterable[tuple[int, DiffPoly]]) -> str:
    parts = []
    for a, c in sorted(terms):
        s = str(c)
        if a == 0:
            parts.append(s)
            continue
        tp = "t" if a == 1 else f"t^{a}"
        if c == 1:
            parts.append(tp)
        elif c == -1:
            parts.append("−" + tp)
        else:
            parts.append(f"({s}) {tp}")
    return " + ".join(parts) if parts else "0"


def pretty(x: LoopElement) -> str:
    """Aligned matrix of Laurent entries."""
    cells = [[[] for _ in range(x.N)] for _ in range(x.N)]
    for (j, k, a), c in x.entries.items():
        cells[j][k].append((a, c))
    text = [[laurent_text(c) for c in row] for row in cells]
    widths = [max(len(text[j][k]) for j in range(x.N)) for k in range(x.N)]
    return "\n".join(
        "[ " + "  ".join(text[j][k].ljust(widths[k]) for k in range(x.N)) + " ]"
        for j in range(x.N)
    )
