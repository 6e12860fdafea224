"""Graded differential polynomial ring C[u_i^(n)] with exact coefficients.

A monomial is a sorted tuple of ``(i, n, power)`` triples, ``1 <= i <= rank``.
Variable ``u_i^(n)`` has weighted degree ``w_i + n`` where the base weight
``w_i`` defaults to 1; the KdV ring uses ``w_i = d_i + 1`` instead.
"""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

from soliton import _linalg
from soliton.errors import SolitonError

Monomial = tuple  # tuple[tuple[int, int, int], ...]

ONE: Monomial = ()


class NotTotalDerivative(SolitonError, ValueError):
    """Raised by :meth:`DiffPoly.antiderivative`.

    ``obstruction`` holds the (plain) Euler-operator images, at least one
    of which is nonzero.
    """

    def __init__(self, poly: "DiffPoly", obstruction: list["DiffPoly"]):
        self.poly = poly
        self.obstruction = obstruction
        super().__init__(f"not a total derivative: {poly}")


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d: dict = {}
    for i, n, p in a:
        d[(i, n)] = p
    for i, n, p in b:
        d[(i, n)] = d.get((i, n), 0) + p
    return tuple(sorted((i, n, p) for (i, n), p in d.items()))


def _mono_change(m: Monomial, var: tuple[int, int], delta: int) -> Monomial:
    d = {(i, n): p for i, n, p in m}
    new = d.get(var, 0) + delta
    if new:
        d[var] = new
    else:
        d.pop(var, None)
    return tuple(sorted((i, n, p) for (i, n), p in d.items()))


def mono_degree(m: Monomial, weights: Sequence[int] | None = None) -> int:
    if weights is None:
        return sum((n + 1) * p for _, n, p in m)
    return sum((n + weights[i - 1]) * p for i, n, p in m)


def mono_key(m: Monomial, weights=None):
    return (mono_degree(m, weights), m)


@lru_cache(maxsize=None)
def monomials_of_degree(rank: int, degree: int, weights: tuple | None = None) -> tuple:
    """All monomials of exact weighted degree ``degree``, in canonical order."""
    if degree < 0:
        return ()
    w = weights or (1,) * rank
    variables = []
    for i in range(1, rank + 1):
        for n in range(0, degree - w[i - 1] + 1):
            variables.append((i, n, w[i - 1] + n))
    out = []

    def rec(start, remaining, acc):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for k in range(start, len(variables)):
            i, n, d = variables[k]
            if d > remaining:
                continue
            for p in range(1, remaining // d + 1):
                acc.append((i, n, p))
                rec(k + 1, remaining - p * d, acc)
                acc.pop()

    rec(0, degree, [])
    return tuple(sorted(out, key=lambda m: mono_key(m, weights)))


class DiffPoly:
    """Immutable element of C[u_i^(n)] with rational coefficients."""

    __slots__ = ("terms", "rank", "weights", "_hash")

    def __init__(self, terms: Mapping | None = None, rank: int = 1, weights=None):
        clean = {}
        if terms:
            for m, c in terms.items():
                c = Fraction(c)
                if c:
                    clean[tuple(sorted(m))] = clean.get(tuple(sorted(m)), 0) + c
            clean = {m: c for m, c in clean.items() if c}
        self.terms = clean
        self.rank = rank
        self.weights = tuple(weights) if weights is not None else None
        self._hash = None

    @classmethod
    def _raw(cls, terms: dict, rank: int, weights=None) -> "DiffPoly":
        obj = cls.__new__(cls)
        obj.terms = terms
        obj.rank = rank
        obj.weights = weights
        obj._hash = None
        return obj

    @classmethod
    def var(cls, i: int, n: int = 0, rank: int = 1, weights=None) -> "DiffPoly":
        if not 1 <= i <= rank:
            raise IndexError(f"variable index {i} outside 1..{rank}")
        return cls._raw({((i, n, 1),): Fraction(1)}, rank,
                        tuple(weights) if weights is not None else None)

    @classmethod
    def const(cls, c, rank: int = 1, weights=None) -> "DiffPoly":
        c = Fraction(c)
        return cls._raw({ONE: c} if c else {}, rank,
                        tuple(weights) if weights is not None else None)

    @classmethod
    def zero(cls, rank: int = 1, weights=None) -> "DiffPoly":
        return cls._raw({}, rank, tuple(weights) if weights is not None else None)

    # -- basic protocol ---------------------------------------------------

    def _like(self, terms: dict, other=None) -> "DiffPoly":
        rank = self.rank
        weights = self.weights
        if isinstance(other, DiffPoly):
            rank = max(rank, other.rank)
            weights = weights or other.weights
        return DiffPoly._raw(terms, rank, weights)

    def _coerce(self, other) -> "DiffPoly | None":
        if isinstance(other, DiffPoly):
            return other
        if isinstance(other, (int, Fraction)):
            return DiffPoly.const(other, self.rank, self.weights)
        return None

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.terms == o.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if not o.terms:
            return self._like(self.terms, o)
        terms = dict(self.terms)
        for m, c in o.terms.items():
            v = terms.get(m, 0) + c
            if v:
                terms[m] = v
            else:
                terms.pop(m, None)
        return self._like(terms, o)

    __radd__ = __add__

    def __neg__(self) -> "DiffPoly":
        return self._like({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            c = Fraction(other)
            if not c:
                return self._like({})
            return self._like({m: v * c for m, v in self.terms.items()})
        if not isinstance(other, DiffPoly):
            return NotImplemented
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                v = terms.get(m, 0) + c1 * c2
                if v:
                    terms[m] = v
                else:
                    terms.pop(m, None)
        return self._like(terms, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = Fraction(other)
        return self * (1 / c)

    def __pow__(self, k: int) -> "DiffPoly":
        if k < 0:
            raise ValueError("negative power")
        result = DiffPoly.const(1, self.rank, self.weights)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __repr__(self) -> str:
        return f"DiffPoly({to_text(self)})"

    def __str__(self) -> str:
        return to_text(self)

    # -- structure --------------------------------------------------------

    def is_constant(self) -> bool:
        return all(m == ONE for m in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get(ONE, Fraction(0))

    def coeff(self, monomial: Monomial) -> Fraction:
        return self.terms.get(tuple(monomial), Fraction(0))

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda mc: mono_key(mc[0], self.weights))

    def leading_monomial(self) -> Monomial:
        return max(self.terms, key=lambda m: mono_key(m, self.weights))

    def homogeneous_components(self) -> dict[int, "DiffPoly"]:
        comps: dict[int, dict] = {}
        for m, c in self.terms.items():
            comps.setdefault(mono_degree(m, self.weights), {})[m] = c
        return {d: self._like(t) for d, t in sorted(comps.items())}

    def degrees(self) -> set[int]:
        return {mono_degree(m, self.weights) for m in self.terms}

    def is_homogeneous(self, degree: int | None = None) -> bool:
        ds = self.degrees()
        if not ds:
            return True
        if len(ds) != 1:
            return False
        return degree is None or ds == {degree}

    def max_order(self) -> int:
        """Largest derivative order present (-1 for constants)."""
        return max((n for m in self.terms for _, n, _ in m), default=-1)

    def variables(self) -> set[tuple[int, int]]:
        return {(i, n) for m in self.terms for i, n, _ in m}

    # -- calculus ----------------------------------------------------------

    def partial(self, i: int, n: int) -> "DiffPoly":
        """Partial derivative with respect to u_i^(n)."""
        terms: dict = {}
        for m, c in self.terms.items():
            for j, k, p in m:
                if j == i and k == n:
                    nm = _mono_change(m, (i, n), -1)
                    terms[nm] = terms.get(nm, 0) + c * p
        return self._like({m: c for m, c in terms.items() if c})

    def d_z(self) -> "DiffPoly":
        terms: dict = {}
        for m, c in self.terms.items():
            for i, n, p in m:
                nm = _mono_change(_mono_change(m, (i, n), -1), (i, n + 1), 1)
                terms[nm] = terms.get(nm, 0) + c * p
        return self._like({m: c for m, c in terms.items() if c})

    def d_z_n(self, k: int) -> "DiffPoly":
        p = self
        for _ in range(k):
            p = p.d_z()
        return p

    def euler(self, j: int) -> "DiffPoly":
        """Plain Euler operator sum_n (-d_z)^n dP/du_j^(n)."""
        result = self._like({})
        for n in range(self.max_order() + 1):
            part = self.partial(j, n)
            if part:
                term = part.d_z_n(n)
                result = result + (term if n % 2 == 0 else -term)
        return result

    def variational_derivative(self, i: int, cartan=None) -> "DiffPoly":
        """delta_i P = sum_j (alpha_i, alpha_j) E_j(P).

        ``cartan`` is the symmetrized Cartan matrix; A-type by default.
        """
        if not 1 <= i <= self.rank:
            raise IndexError(f"index {i} outside 1..{self.rank}")
        if cartan is None:
            cartan = a_type_cartan(self.rank)
        result = self._like({})
        for j in range(1, self.rank + 1):
            c = cartan[i - 1][j - 1]
            if c:
                result = result + self.euler(j) * c
        return result

    def antiderivative(self) -> "DiffPoly":
        """Return q with zero constant term and d_z(q) = self.

        Solved exactly on each weighted-degree component.
        """
        result = self._like({})
        for d, comp in self.homogeneous_components().items():
            q = _antiderivative_component(comp, d)
            if q is None:
                obstruction = [comp.euler(j) for j in range(1, self.rank + 1)]
                raise NotTotalDerivative(self, obstruction)
            result = result + q
        return result

    def substitute(self, images: Sequence["DiffPoly"], rank: int | None = None) -> "DiffPoly":
        """Ring map sending u_i^(n) to d_z^n(images[i-1])."""
        if rank is None:
            rank = max((im.rank for im in images), default=self.rank)
        weights = next((im.weights for im in images if im.weights), None)
        cache: dict = {}

        def image(i, n):
            key = (i, n)
            if key not in cache:
                cache[key] = images[i - 1] if n == 0 else image(i, n - 1).d_z()
            return cache[key]

        result = DiffPoly.zero(rank, weights)
        for m, c in self.terms.items():
            term = DiffPoly.const(c, rank, weights)
            for i, n, p in m:
                term = term * image(i, n) ** p
            result = result + term
        return result

    # -- serialization -----------------------------------------------------

    def to_json_obj(self) -> list:
        return [
            {"coeff": f"{c.numerator}/{c.denominator}", "monomial": [list(v) for v in m]}
            for m, c in self.sorted_terms()
        ]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())

    @classmethod
    def from_json_obj(cls, obj: list, rank: int | None = None, weights=None) -> "DiffPoly":
        terms = {}
        for item in obj:
            m = tuple(sorted(tuple(int(x) for x in v) for v in item["monomial"]))
            terms[m] = terms.get(m, 0) + Fraction(item["coeff"])
        if rank is None:
            rank = max((i for m in terms for i, _, _ in m), default=1)
        return cls(terms, rank, weights)

    @classmethod
    def from_json(cls, text: str, rank: int | None = None, weights=None) -> "DiffPoly":
        return cls.from_json_obj(json.loads(text), rank, weights)

    def latex(self, name: str = "u") -> str:
        return to_latex(self, name)


def a_type_cartan(rank: int) -> list[list[Fraction]]:
    return [
        [Fraction(2 if i == j else -1 if abs(i - j) == 1 else 0) for j in range(rank)]
        for i in range(rank)
    ]


def variables(rank: int, weights=None) -> list[DiffPoly]:
    """The generators u_1, ..., u_rank."""
    return [DiffPoly.var(i, 0, rank, weights) for i in range(1, rank + 1)]


def linear_combination(coeffs: Iterable, monomials: Iterable[Monomial], rank: int,
                       weights=None) -> DiffPoly:
    terms = {}
    for c, m in zip(coeffs, monomials):
        if c:
            terms[m] = terms.get(m, 0) + Fraction(c)
    return DiffPoly(terms, rank, weights)


# -- antiderivative machinery ---------------------------------------------


@lru_cache(maxsize=None)
def _dz_system(rank: int, degree: int, weights: tuple | None):
    """Matrix of d_z from non-constant degree-(d-1) monomials to degree d."""
    src = [m for m in monomials_of_degree(rank, degree - 1, weights) if m != ONE]
    dst = monomials_of_degree(rank, degree, weights)
    index = {m: k for k, m in enumerate(dst)}
    rows = [[Fraction(0)] * len(src) for _ in dst]
    for col, m in enumerate(src):
        img = DiffPoly._raw({m: Fraction(1)}, rank, weights).d_z()
        for mm, c in img.terms.items():
            rows[index[mm]][col] = c
    return src, index, _linalg.LinearSystem(rows, len(src))


def _antiderivative_component(comp: DiffPoly, degree: int) -> DiffPoly | None:
    if degree == 0:
        return None if comp else comp._like({})
    src, index, system = _dz_system(comp.rank, degree, comp.weights)
    b = [Fraction(0)] * len(index)
    for m, c in comp.terms.items():
        b[index[m]] = c
    x = system.solve(b)
    if x is None:
        return None
    return linear_combination(x, src, comp.rank, comp.weights)


def is_total_derivative(p: DiffPoly) -> bool:
    """Membership in Im d_z, decided by the linear solver."""
    try:
        p.antiderivative()
    except NotTotalDerivative:
        return False
    return True


# -- evolutionary derivations ---------------------------------------------


class EvolutionaryDerivation:
    """Derivation commuting with d_z, fixed by the images of u_1..u_rank."""

    __slots__ = ("images", "rank")

    def __init__(self, images: Sequence[DiffPoly]):
        self.images = tuple(images)
        self.rank = len(self.images)

    def apply(self, p: DiffPoly) -> DiffPoly:
        if p.rank > self.rank and p.variables() and max(i for i, _ in p.variables()) > self.rank:
            raise ValueError("rank mismatch")
        result = DiffPoly.zero(max(p.rank, self.rank), p.weights)
        shifted: dict = {}
        for i, n in sorted(p.variables()):
            part = p.partial(i, n)
            if (i, n) not in shifted:
                shifted[(i, n)] = self.images[i - 1].d_z_n(n)
            result = result + shifted[(i, n)] * part
        return result

    __call__ = apply

    def is_zero(self) -> bool:
        return not any(self.images)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EvolutionaryDerivation):
            return NotImplemented
        return self.images == other.images

    def __hash__(self):
        return hash(self.images)

    def __add__(self, other: "EvolutionaryDerivation") -> "EvolutionaryDerivation":
        return EvolutionaryDerivation([a + b for a, b in zip(self.images, other.images)])

    def __sub__(self, other: "EvolutionaryDerivation") -> "EvolutionaryDerivation":
        return EvolutionaryDerivation([a - b for a, b in zip(self.images, other.images)])

    def __mul__(self, c) -> "EvolutionaryDerivation":
        return EvolutionaryDerivation([a * c for a in self.images])

    __rmul__ = __mul__

    def __repr__(self) -> str:
        return "EvolutionaryDerivation(" + ", ".join(map(str, self.images)) + ")"


def d_z_derivation(rank: int) -> EvolutionaryDerivation:
    return EvolutionaryDerivation([DiffPoly.var(i, 1, rank) for i in range(1, rank + 1)])


def commutator(d1: EvolutionaryDerivation, d2: EvolutionaryDerivation) -> EvolutionaryDerivation:
    if d1.rank != d2.rank:
        raise ValueError("rank mismatch")
    return EvolutionaryDerivation(
        [d1.apply(d2.images[i]) - d2.apply(d1.images[i]) for i in range(d1.rank)]
    )


def proportionality(d1: EvolutionaryDerivation, d2: EvolutionaryDerivation) -> Fraction | None:
    """Scalar c with d1 = c * d2, or None when no such scalar exists."""
    c = None
    for a, b in zip(d1.images, d2.images):
        for m, bc in b.terms.items():
            c = a.coeff(m) / bc
            break
        if c is not None:
            break
    if c is None:
        return Fraction(0) if d1.is_zero() else None
    return c if d1 == d2 * c else None


# -- rendering -----------------------------------------------------------


def _var_text(i: int, n: int, rank: int, name: str) -> str:
    base = name if rank == 1 else f"{name}{i}"
    if n <= 3:
        return base + "'" * n
    return f"{base}^({n})"


def _coeff_text(c: Fraction, first: bool, has_mono: bool) -> str:
    sign = "-" if c < 0 else "+"
    a = abs(c)
    body = "" if (a == 1 and has_mono) else str(a)
    if first:
        lead = "−" if sign == "-" else ""
        return lead + body
    return (" − " if sign == "-" else " + ") + body


def to_text(p: DiffPoly, name: str = "u") -> str:
    if not p.terms:
        return "0"
    parts = []
    for k, (m, c) in enumerate(p.sorted_terms()):
        factors = []
        for i, n, pw in m:
            v = _var_text(i, n, p.rank, name)
            if pw > 1:
                v = f"({v})^{pw}" if n else f"{v}^{pw}"
            factors.append(v)
        head = _coeff_text(c, k == 0, bool(factors))
        sep = " " if head.strip("+− ") and factors else ""
        parts.append(head + sep + " ".join(factors))
    return "".join(parts)


def _var_latex(i: int, n: int, rank: int, name: str) -> str:
    sub = f"_{{{i}}}" if rank > 1 else ""
    if n == 0:
        return name + sub
    return f"{name}{sub}^{{({n})}}"


def to_latex(p: DiffPoly, name: str = "u") -> str:
    if not p.terms:
        return "0"
    out = []
    for k, (m, c) in enumerate(p.sorted_terms()):
        factors = []
        for i, n, pw in m:
            v = _var_latex(i, n, p.rank, name)
            if pw > 1:
                v = f"\\left({v}\\right)^{{{pw}}}" if n else f"{v}^{{{pw}}}"
            factors.append(v)
        a = abs(c)
        if a == 1 and factors:
            cs = ""
        elif a.denominator == 1:
            cs = str(a.numerator)
        else:
            cs = f"\\frac{{{a.numerator}}}{{{a.denominator}}}"
        body = cs + (" " if cs and factors else "") + " ".join(factors)
        if k == 0:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def iter_monomials_up_to(rank: int, max_degree: int, weights=None) -> Iterator[Monomial]:
    for d in range(max_degree + 1):
        yield from monomials_of_degree(rank, d, weights)
