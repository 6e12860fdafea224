"""Degree-by-degree construction of the canonical zero-curvature solution
V = K p_{-n} K^{-1} and the mKdV flows of type A_{N-1}^(1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from soliton.cartan import sl
from soliton.diffpoly import (DiffPoly, EvolutionaryDerivation, NotTotalDerivative,
                              commutator)
from soliton.errors import InternalConsistencyError, SolitonError
from soliton.loopalg import (LoopElement, abelian_coefficient, bracket, cartan_coordinates,
                             inv_ad_pm1, p_element, split, u_matrix)

DEFAULT_CUTOFF = 1


class AntiderivativeObstruction(InternalConsistencyError):
    def __init__(self, degree: int, residual: DiffPoly):
        self.degree = degree
        self.residual = residual
        super().__init__(f"abelian equation in degree {degree} not integrable: {residual}")


class NonCartanResidual(InternalConsistencyError):
    def __init__(self, residual: LoopElement):
        self.residual = residual
        super().__init__("flow right-hand side has non-Cartan components")


class NotInHierarchy(SolitonError, ValueError):
    """Flow index outside I."""


def check_flow_index(N: int, n: int) -> None:
    if not sl(N).in_I(n):
        raise NotInHierarchy(f"{n} is not in I for A_{N - 1}^(1)")


@dataclass(frozen=True)
class ZeroCurvatureSolution:
    N: int
    flow_index: int
    cutoff: int
    components: dict  # degree -> homogeneous LoopElement

    def total(self, hi: int | None = None) -> LoopElement:
        out = LoopElement.zero(self.N)
        for m, v in self.components.items():
            if hi is None or m <= hi:
                out = out + v
        return out

    def minus_part(self) -> LoopElement:
        return self.total(0)

    def __getitem__(self, m: int) -> LoopElement:
        return self.components.get(m, LoopElement.zero(self.N))


@lru_cache(maxsize=None)
def solve_canonical(N: int, n: int, cutoff: int = DEFAULT_CUTOFF) -> ZeroCurvatureSolution:
    """Components V_m, -n <= m <= cutoff, of the canonical solution."""
    check_flow_index(N, n)
    if cutoff < 0:
        raise ValueError("cutoff must be non-negative")
    u = u_matrix(N)
    components = {-n: p_element(N, -n)}
    perp = LoopElement.zero(N)
    for m in range(-n, cutoff + 1):
        if m > -n:
            # abelian part of degree m: d_z V_m^0 = -[u, V_m^perp]^0
            source = -abelian_coefficient(bracket(u, perp), m)
            try:
                c = source.antiderivative()
            except NotTotalDerivative:
                raise AntiderivativeObstruction(m, source) from None
            v = perp
            if c:
                v = v + p_element(N, m).scale(c)
            components[m] = v
        if m == cutoff:
            break
        vm = components[m]
        rhs = split(-(perp.d_z()) - bracket(u, vm)).perp_part
        perp = inv_ad_pm1(rhs)
    return ZeroCurvatureSolution(N, n, cutoff, components)


def commutator_residual(sol: ZeroCurvatureSolution) -> LoopElement:
    """[d_z + p_{-1} + u, V] on degrees strictly below the cutoff."""
    N = sol.N
    L = p_element(N, -1) + u_matrix(N)
    V = sol.total()
    return (V.d_z() + bracket(L, V)).restrict_window(None, sol.cutoff - 1)


@dataclass(frozen=True)
class MkdvFlow:
    N: int
    flow_index: int
    derivation: EvolutionaryDerivation
    minus_part: LoopElement

    @property
    def images(self):
        return self.derivation.images


def flow_rhs(N: int, minus: LoopElement) -> LoopElement:
    L = p_element(N, -1) + u_matrix(N)
    return minus.d_z() + bracket(L, minus)


@lru_cache(maxsize=None)
def mkdv_flow(N: int, n: int, cutoff: int = DEFAULT_CUTOFF) -> MkdvFlow:
    """d_n u_i from the zero-curvature condition."""
    sol = solve_canonical(N, n, cutoff)
    minus = sol.minus_part()
    rhs = flow_rhs(N, minus)
    if not rhs.is_cartan_t0():
        raise NonCartanResidual(rhs)
    return MkdvFlow(N, n, EvolutionaryDerivation(cartan_coordinates(rhs)), minus)


def apply_to_loop(d: EvolutionaryDerivation, x: LoopElement) -> LoopElement:
    return x.map_coeffs(d.apply)


def verify_zero_curvature(flow_m: MkdvFlow, flow_n: MkdvFlow) -> LoopElement:
    """d_m(A_n) - d_n(A_m) + [A_m, A_n]; zero when the flows are compatible."""
    if flow_m.N != flow_n.N:
        raise ValueError("flows belong to different algebras")
    a_m, a_n = flow_m.minus_part, flow_n.minus_part
    return (apply_to_loop(flow_m.derivation, a_n)
            - apply_to_loop(flow_n.derivation, a_m)
            + bracket(a_m, a_n))


def flows_commutator(N: int, m: int, n: int) -> EvolutionaryDerivation:
    return commutator(mkdv_flow(N, m).derivation, mkdv_flow(N, n).derivation)


def sl2_coordinates(x: LoopElement, m: int) -> dict[str, DiffPoly]:
    """Coefficients of the degree-m part of x in the sl_2 basis p, q, r."""
    if x.N != 2:
        raise ValueError("sl_2 only")
    if m % 2 == 0:
        return {"R": x.entry(0, 0, m // 2)}
    j = (m - 1) // 2
    upper, lower = x.entry(0, 1, j), x.entry(1, 0, j + 1)
    half = Fraction(1, 2)
    return {"P": (upper + lower) * half, "Q": (upper - lower) * half}


def is_weighted_homogeneous(sol: ZeroCurvatureSolution) -> bool:
    """Every coefficient of V_m has weighted degree n + m."""
    for m, v in sol.components.items():
        for c in v.entries.values():
            if not c.is_homogeneous(sol.flow_index + m):
                return False
    return True
