"""Dressing operator M = exp(m) bringing d_z + p_{-1} + u into abelian form.

The log m = m_1 + m_2 + ... is solved degree by degree with each m_j in the
image of ad p_{-1}; the abelian remainder gives the densities h_n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial

from soliton.cartan import sl
from soliton.diffpoly import DiffPoly
from soliton.errors import SolitonError
from soliton.loopalg import (LoopElement, abelian_coefficient, bracket, f_generator,
                             inner_product, inv_ad_pm1, p_element, split, u_matrix)


class CutoffTooSmall(SolitonError, ValueError):
    pass


def conjugate_by_exp(m: LoopElement, x: LoopElement, hi: int, sign: int = 1) -> LoopElement:
    """exp(sign * ad m) x restricted to degrees <= hi (m of positive degree)."""
    out = x.restrict_window(None, hi)
    term = out
    k = 1
    while term:
        term = bracket(m, term).restrict_window(None, hi)
        if sign < 0:
            term = -term
        term = term.scale(Fraction(1, k))
        out = out + term
        k += 1
    return out


def log_derivative(m: LoopElement, hi: int) -> LoopElement:
    """exp(-m) d_z exp(m) = sum_k (-ad m)^k (d_z m) / (k+1)!, degrees <= hi."""
    out = LoopElement.zero(m.N)
    power = m.d_z().restrict_window(None, hi)
    k = 0
    while power:
        out = out + power.scale(Fraction(1, factorial(k + 1)))
        power = (-bracket(m, power)).restrict_window(None, hi)
        k += 1
    return out


@dataclass(frozen=True)
class DressingOperator:
    N: int
    cutoff: int
    log_parts: dict  # j -> m_j, 1 <= j <= cutoff
    h_densities: dict  # n -> h_n for n in I, n <= cutoff - 1

    @property
    def log_m(self) -> LoopElement:
        out = LoopElement.zero(self.N)
        for part in self.log_parts.values():
            out = out + part
        return out

    def matrix(self, hi: int | None = None, sign: int = 1) -> LoopElement:
        """Truncated exp(sign * m) as a Laurent matrix, degrees <= hi."""
        hi = self.cutoff if hi is None else hi
        m = self.log_m.scale(sign)
        out = LoopElement.identity(self.N)
        term = out
        k = 1
        while term:
            term = (term @ m).restrict_window(None, hi).scale(Fraction(1, k))
            out = out + term
            k += 1
        return out


@lru_cache(maxsize=None)
def dressing_operator(N: int, cutoff: int) -> DressingOperator:
    if cutoff < 1:
        raise CutoffTooSmall("cutoff must be at least 1")
    L = p_element(N, -1) + u_matrix(N)
    data = sl(N)
    parts: dict = {}
    h: dict = {}
    m = LoopElement.zero(N)
    for n in range(0, cutoff):
        # degree-n part of exp(-ad m)(L) + exp(-m) d_z exp(m) with m_{n+1} unset
        conj = conjugate_by_exp(m, L, n, sign=-1) + log_derivative(m, n)
        r = conj.component(n)
        if n and data.in_I(n):
            h[n] = abelian_coefficient(r, n)
        perp = split(r).perp_part
        nxt = inv_ad_pm1(-perp)
        parts[n + 1] = nxt
        m = m + nxt
    return DressingOperator(N, cutoff, parts, h)


def conjugated_generator(d: DressingOperator, n: int) -> LoopElement:
    """M p_{-n} M^{-1} on the degrees it is determined: -n .. cutoff - n."""
    hi = d.cutoff - n
    if hi < 0:
        raise CutoffTooSmall(f"flow {n} needs cutoff >= {n}, have {d.cutoff}")
    return conjugate_by_exp(d.log_m, p_element(d.N, -n), hi, sign=1)


def minus_part(d: DressingOperator, n: int) -> LoopElement:
    return conjugated_generator(d, n).restrict_window(None, 0)


def kdv_variable(d: DressingOperator, i: int) -> DiffPoly:
    """(f_0, M p_{-d_i} M^{-1}) where d_i = i for type A."""
    if not 1 <= i < d.N:
        raise IndexError(f"exponent index {i} outside 1..{d.N - 1}")
    if i > d.cutoff - 1:
        raise CutoffTooSmall(f"kdv variable {i} needs cutoff >= {i + 1}")
    return inner_product(f_generator(d.N, 0), conjugated_generator(d, i))


def ds_residual(d: DressingOperator) -> LoopElement:
    """M^{-1}(d_z + L)M - (d_z + p_{-1} + sum h_n p_n) on degrees < cutoff,
    computed with explicit truncated matrices."""
    hi = d.cutoff - 1
    N = d.N
    M = d.matrix(d.cutoff, 1)
    Minv = d.matrix(d.cutoff, -1)
    L = p_element(N, -1) + u_matrix(N)
    lhs = ((Minv @ L).restrict_window(None, hi) @ M).restrict_window(None, hi)
    lhs = lhs + (Minv @ M.d_z()).restrict_window(None, hi)
    rhs = p_element(N, -1)
    for n, c in d.h_densities.items():
        rhs = rhs + p_element(N, n).scale(c)
    return lhs - rhs
