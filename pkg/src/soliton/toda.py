"""Toda modules pi_lambda, screening operators, local functionals, the Poisson
bracket of local functionals and the integrals-of-motion solver (type A).

A weight lambda is a tuple (lambda_0, ..., lambda_l) of coefficients on the
affine simple roots; P (x) e^{lambda} has d_z acting by d_z P + (sum lambda_i u_i) P
with u_0 = -(u_1 + ... + u_l).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from soliton import _linalg
from soliton.cartan import sl
from soliton.diffpoly import (DiffPoly, EvolutionaryDerivation, commutator,
                              monomials_of_degree, proportionality)
from soliton.errors import InternalConsistencyError
from soliton.recursion import check_flow_index, mkdv_flow
from soliton.reduction import screening_field, u_index


class NoIntegralFound(InternalConsistencyError):
    pass


class UnexpectedDimension(InternalConsistencyError):
    def __init__(self, degree: int, dimension: int, expected: int):
        self.dimension = dimension
        super().__init__(f"integrals of degree {degree}: dimension {dimension}, expected {expected}")


class NotProportional(InternalConsistencyError):
    pass


def zero_weight(N: int) -> tuple:
    return (0,) * N


def minus_root(N: int, i: int) -> tuple:
    return tuple(-1 if k == i else 0 for k in range(N))


@dataclass(frozen=True)
class TodaElement:
    weight: tuple
    poly: DiffPoly

    @property
    def N(self) -> int:
        return len(self.weight)

    def __add__(self, other: "TodaElement") -> "TodaElement":
        if other.weight != self.weight:
            raise ValueError("weights differ")
        return TodaElement(self.weight, self.poly + other.poly)

    def __sub__(self, other: "TodaElement") -> "TodaElement":
        return self + other.scale(-1)

    def scale(self, c) -> "TodaElement":
        return TodaElement(self.weight, self.poly * c)

    def __bool__(self) -> bool:
        return bool(self.poly)

    def degrees(self) -> set[int]:
        shift = sum(self.weight)
        return {d + shift for d in self.poly.degrees()}

    def __str__(self) -> str:
        if not any(self.weight):
            return str(self.poly)
        parts = []
        for i, c in enumerate(self.weight):
            if c:
                coef = "" if abs(c) == 1 else str(abs(c))
                parts.append(("−" if c < 0 else "+") + coef + f"φ{i}")
        exp = "".join(parts).lstrip("+")
        return f"({self.poly}) e^({exp})"


def weight_multiplier(weight: Sequence[int]) -> DiffPoly:
    """sum_i lambda_i u_i, u_0 substituted."""
    N = len(weight)
    out = DiffPoly.zero(N - 1)
    for i, c in enumerate(weight):
        if c:
            out = out + u_index(N, i) * c
    return out


def toda_dz(x: TodaElement) -> TodaElement:
    mult = weight_multiplier(x.weight)
    return TodaElement(x.weight, x.poly.d_z() + mult * x.poly)


def toda_dz_poly(weight: tuple, p: DiffPoly) -> DiffPoly:
    return toda_dz(TodaElement(weight, p)).poly


def weight_pairing(N: int, i: int, weight: Sequence[int]) -> Fraction:
    """(alpha_i, lambda) for lambda = sum lambda_k alpha_k."""
    data = sl(N)
    return sum((Fraction(c) * data.pairing(i, k) for k, c in enumerate(weight) if c), Fraction(0))


# -- screening operators ----------------------------------------------------------


def screening_apply(i: int, p: DiffPoly, N: int | None = None) -> TodaElement:
    """q_i p = sum_n b_i^(n) d_i^(n) p, an element of pi_{-alpha_i}."""
    N = N or p.rank + 1
    f = screening_field(N, i)
    out = DiffPoly.zero(N - 1)
    for n in range(p.max_order() + 1):
        d = f.directional(p, n)
        if d:
            out = out + f.coefficient(n) * d
    return TodaElement(minus_root(N, i), out)


# -- local functionals --------------------------------------------------------------


def _elimination_key(m):
    return (max((n for _, n, _ in m), default=-1), m)


@lru_cache(maxsize=None)
def _image_basis(N: int, weight: tuple, degree: int):
    """Row-reduced basis of (Im d_z in pi_weight) in poly degree ``degree``,
    with pivots on the highest-derivative monomials.  Constants are included
    in the image at weight zero."""
    rank = N - 1
    targets = sorted(monomials_of_degree(rank, degree), key=_elimination_key, reverse=True)
    index = {m: k for k, m in enumerate(targets)}
    rows = []
    for m in monomials_of_degree(rank, degree - 1):
        if not any(weight) and m == ():
            continue
        img = toda_dz_poly(weight, DiffPoly({m: 1}, rank))
        row = [Fraction(0)] * len(targets)
        for mm, c in img.terms.items():
            row[index[mm]] = c
        rows.append(row)
    if not any(weight) and degree == 0:
        rows.append([Fraction(1)])
    if not rows or not targets:
        return targets, []
    red, pivots = _linalg._dm(rows, len(targets)).rref()
    red = red.to_list()
    basis = []
    for r, col in enumerate(pivots):
        basis.append((col, [_linalg._to_fraction(v) for v in red[r]]))
    return targets, basis


def reduce_modulo_image(weight: tuple, p: DiffPoly) -> DiffPoly:
    """Canonical representative of p modulo total derivatives (and constants at
    weight zero)."""
    N = len(weight)
    out = DiffPoly.zero(N - 1)
    for d, comp in p.homogeneous_components().items():
        targets, basis = _image_basis(N, tuple(weight), d)
        vec = [comp.coeff(m) for m in targets]
        for col, row in basis:
            c = vec[col]
            if c:
                vec = [a - c * b for a, b in zip(vec, row)]
        out = out + DiffPoly(dict(zip(targets, vec)), N - 1)
    return out


def complement_basis(N: int, degree: int, weight: tuple | None = None) -> list:
    """Monomials spanning pi_weight / Im d_z in the given degree."""
    weight = weight or zero_weight(N)
    targets, basis = _image_basis(N, tuple(weight), degree)
    pivots = {col for col, _ in basis}
    return sorted((m for k, m in enumerate(targets) if k not in pivots),
                  key=lambda m: (degree, m))


def is_total_derivative(x: TodaElement) -> bool:
    return not reduce_modulo_image(x.weight, x.poly)


class LocalFunctional:
    """Class of a differential polynomial modulo Im d_z (and constants at weight 0)."""

    __slots__ = ("weight", "representative")

    def __init__(self, poly: DiffPoly, weight: tuple | None = None):
        self.weight = tuple(weight) if weight is not None else zero_weight(poly.rank + 1)
        self.representative = reduce_modulo_image(self.weight, poly)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LocalFunctional):
            return NotImplemented
        return self.weight == other.weight and self.representative == other.representative

    def __hash__(self):
        return hash((self.weight, self.representative))

    def __bool__(self) -> bool:
        return bool(self.representative)

    @property
    def degree(self) -> int:
        """Grading: representative degree minus one."""
        ds = self.representative.degrees()
        return max(ds) + sum(self.weight) - 1 if ds else 0

    def __repr__(self) -> str:
        return f"LocalFunctional(∫ {self.representative} dz)"


# -- hamiltonian vector fields ----------------------------------------------------


def xi_field(p: DiffPoly | LocalFunctional) -> EvolutionaryDerivation:
    """xi_P u_i = d_z(delta_i P)."""
    if isinstance(p, LocalFunctional):
        p = p.representative
    N = p.rank + 1
    cartan = sl(N).sym_cartan
    return EvolutionaryDerivation(
        [p.variational_derivative(i, cartan).d_z() for i in range(1, N)])


def xi_apply(p: DiffPoly, x: TodaElement) -> TodaElement:
    """Extension of xi_P to pi_lambda: xi_P(S e^lambda) = (xi_P S + sum lambda_k delta_k P S) e^lambda."""
    N = x.N
    cartan = sl(N).sym_cartan
    deltas = [p.variational_derivative(i, cartan) for i in range(1, N)]
    delta0 = DiffPoly.zero(N - 1)
    for d in deltas:
        delta0 = delta0 - d
    phase = DiffPoly.zero(N - 1)
    for k, c in enumerate(x.weight):
        if c:
            phase = phase + (delta0 if k == 0 else deltas[k - 1]) * c
    ev = EvolutionaryDerivation([d.d_z() for d in deltas])
    return TodaElement(x.weight, ev.apply(x.poly) + phase * x.poly)


def twisted_euler(x: TodaElement, j: int) -> DiffPoly:
    """sum_n (-d_z)^n (dS/du_j^(n) e^lambda) computed in pi_lambda."""
    out = DiffPoly.zero(x.N - 1)
    for n in range(x.poly.max_order() + 1):
        term = x.poly.partial(j, n)
        for _ in range(n):
            term = -toda_dz_poly(x.weight, term)
        out = out + term
    return out


class WeightedField:
    """The evolutionary operator xi_R : pi_0 -> pi_lambda attached to R in pi_lambda."""

    def __init__(self, r: TodaElement):
        self.element = r
        N = r.N
        self.N = N
        cartan = sl(N).sym_cartan
        eulers = [twisted_euler(r, j) for j in range(1, N)]
        self.generators = []
        for i in range(1, N):
            var = DiffPoly.zero(N - 1)
            for j in range(1, N):
                c = cartan[i - 1][j - 1]
                if c:
                    var = var + eulers[j - 1] * c
            g = toda_dz_poly(r.weight, var) - r.poly * weight_pairing(N, i, r.weight)
            self.generators.append(g)
        self._shifted: dict = {}

    def _image(self, i: int, n: int) -> DiffPoly:
        key = (i, n)
        if key not in self._shifted:
            base = self.generators[i - 1] if n == 0 else self._image(i, n - 1)
            self._shifted[key] = base if n == 0 else toda_dz_poly(self.element.weight, base)
        return self._shifted[key]

    def apply(self, p: DiffPoly) -> TodaElement:
        out = DiffPoly.zero(self.N - 1)
        for i, n in sorted(p.variables()):
            out = out + self._image(i, n) * p.partial(i, n)
        return TodaElement(self.element.weight, out)

    __call__ = apply


def xi_field_weighted(r: TodaElement) -> WeightedField:
    return WeightedField(r)


def poisson_bracket(f, g) -> LocalFunctional:
    """{int P, int R} = int xi_P R."""
    p = f.representative if isinstance(f, LocalFunctional) else f
    r = g.representative if isinstance(g, LocalFunctional) else g
    return LocalFunctional(xi_field(p).apply(r))


def hamiltonian_h1(N: int) -> DiffPoly:
    """1/2 sum u_i u^i with u^i dual to u_i under the Cartan pairing."""
    from soliton._linalg import _dm, _to_fraction

    rank = N - 1
    cartan = sl(N).sym_cartan
    inv = _dm([list(r) for r in cartan]).inv().to_list()
    us = [DiffPoly.var(i, 0, rank) for i in range(1, N)]
    out = DiffPoly.zero(rank)
    for i in range(rank):
        dual = DiffPoly.zero(rank)
        for j in range(rank):
            c = _to_fraction(inv[i][j])
            if c:
                dual = dual + us[j] * c
        out = out + us[i] * dual
    return out * Fraction(1, 2)


# -- integrals of motion -----------------------------------------------------------


@dataclass(frozen=True)
class ConservedDensity:
    degree: int
    density: DiffPoly          # leading coefficient 1
    scale: Fraction            # xi_density = scale * d_degree
    hamiltonian: DiffPoly      # density / scale, so xi_hamiltonian = d_degree

    @property
    def functional(self) -> LocalFunctional:
        return LocalFunctional(self.density)


def integral_space(N: int, m: int, screenings: Sequence[int] | None = None) -> list[DiffPoly]:
    """Basis of local functionals of degree m killed by the given screenings
    (all affine ones by default), as canonical representatives."""
    rank = N - 1
    D = m + 1
    screenings = list(range(N)) if screenings is None else list(screenings)
    basis = complement_basis(N, D)
    xmonos = monomials_of_degree(rank, D - 2) if D >= 2 else ()
    n_c = len(basis)
    n_cols = n_c + len(screenings) * len(xmonos)
    rows = []
    for s_idx, i in enumerate(screenings):
        images = [screening_apply(i, DiffPoly({b: 1}, rank), N).poly for b in basis]
        weight = minus_root(N, i)
        derivs = [toda_dz_poly(weight, DiffPoly({x: 1}, rank)) for x in xmonos]
        support = sorted({mm for p in images + derivs for mm in p.terms})
        for mm in support:
            row = [Fraction(0)] * n_cols
            for k, p in enumerate(images):
                row[k] = p.coeff(mm)
            off = n_c + s_idx * len(xmonos)
            for k, p in enumerate(derivs):
                row[off + k] = -p.coeff(mm)
            rows.append(row)
    null = _linalg.nullspace(rows, n_cols)
    projected = [v[:n_c] for v in null]
    kept = []
    if projected:
        red, pivots = _linalg._dm(projected, n_c).rref()
        for r in range(len(pivots)):
            kept.append([_linalg._to_fraction(v) for v in red.to_list()[r]])
    return [DiffPoly(dict(zip(basis, v)), rank) for v in kept]


def normalize_leading(p: DiffPoly) -> DiffPoly:
    return p / p.terms[p.leading_monomial()]


@lru_cache(maxsize=None)
def find_integrals(N: int, m: int) -> ConservedDensity:
    check_flow_index(N, m)
    space = integral_space(N, m)
    expected = sl(N).multiplicity(m)
    if not space:
        raise NoIntegralFound(f"no integral of motion of degree {m}")
    if len(space) != expected:
        raise UnexpectedDimension(m, len(space), expected)
    density = normalize_leading(space[0])
    scale = _scale_against_flow(density, N, m)
    return ConservedDensity(m, density, scale, density / scale)


def _scale_against_flow(density: DiffPoly, N: int, m: int) -> Fraction:
    c = proportionality(xi_field(density), mkdv_flow(N, m).derivation)
    if c is None or c == 0:
        raise NotProportional(f"xi of the degree-{m} density is not a multiple of the flow")
    return c


def verify_hamiltonian(N: int, m: int, density: DiffPoly | None = None) -> Fraction:
    """Scalar c with xi_H = c d_m (H defaults to the normalized density)."""
    if density is None:
        density = find_integrals(N, m).density
    return _scale_against_flow(density, N, m)


def xi_homomorphism_defect(p: DiffPoly, r: DiffPoly) -> EvolutionaryDerivation:
    """xi_{P,R} - [xi_P, xi_R]; zero by the homomorphism property."""
    lhs = xi_field(poisson_bracket(p, r).representative)
    return lhs - commutator(xi_field(p), xi_field(r))


def density_in_kdv_variables(N: int, m: int) -> DiffPoly:
    """The degree-m density modulo total derivatives, written in s-variables."""
    from soliton.reduction import _s_monomial_image, kdv_weights

    rank = N - 1
    density = find_integrals(N, m).density
    target = reduce_modulo_image(zero_weight(N), density)
    monos = monomials_of_degree(rank, m + 1, kdv_weights(N))
    images = [reduce_modulo_image(zero_weight(N), _s_monomial_image(N, mo)) for mo in monos]
    support = sorted({mm for im in images for mm in im.terms} | set(target.terms))
    rows = [[im.coeff(mm) for im in images] for mm in support]
    x = _linalg.LinearSystem(rows, len(monos)).solve([target.coeff(mm) for mm in support])
    if x is None:
        raise NotProportional(f"density of degree {m} is not a KdV-variable density")
    return DiffPoly(dict(zip(monos, x)), rank, kdv_weights(N))
