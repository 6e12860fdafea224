"""Gauge fixing of d_z + p_bar + q (q upper triangular) to the first-row slice,
the Miura map, KdV flows in the slice coordinates s_i, and screening fields.

Matrices here are plain N x N (only t^0 entries of a LoopElement).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from soliton import _linalg
from soliton.cartan import sl
from soliton.diffpoly import (DiffPoly, EvolutionaryDerivation, monomials_of_degree)
from soliton.errors import InternalConsistencyError
from soliton.loopalg import LoopElement, bracket, p_bar_minus_one, u_matrix
from soliton.recursion import check_flow_index, mkdv_flow


class ClosureFailure(InternalConsistencyError):
    pass


class GaugeFixingError(InternalConsistencyError):
    pass


def _finite_degree(key) -> int:
    j, k, _ = key
    return k - j


def finite_component(x: LoopElement, k: int) -> LoopElement:
    return LoopElement._raw(x.N, {key: c for key, c in x.entries.items() if _finite_degree(key) == k})


def unipotent_inverse(g: LoopElement) -> LoopElement:
    """(I + n)^{-1} = sum (-n)^k for strictly upper n."""
    N = g.N
    nil = g - LoopElement.identity(N)
    out = LoopElement.identity(N)
    term = out
    for _ in range(N):
        term = -(term @ nil)
        out = out + term
    return out


def matrix_exp(x: LoopElement) -> LoopElement:
    """exp of a strictly upper triangular matrix."""
    out = LoopElement.identity(x.N)
    term = out
    for k in range(1, x.N):
        term = (term @ x).scale(Fraction(1, k))
        out = out + term
    return out


def matrix_log(g: LoopElement) -> LoopElement:
    """log of a unipotent upper triangular matrix."""
    nil = g - LoopElement.identity(g.N)
    out = LoopElement.zero(g.N)
    power = nil
    for k in range(1, g.N):
        out = out + power.scale(Fraction((-1) ** (k + 1), k))
        power = power @ nil
    return out


def gauge_action(x: LoopElement, a: LoopElement) -> LoopElement:
    """x . (d_z + a) = d_z + x a x^{-1} - (d_z x) x^{-1}, x unipotent upper."""
    xi = unipotent_inverse(x)
    return x @ a @ xi - x.d_z() @ xi


@dataclass(frozen=True)
class BorelOperator:
    """d_z + p_bar + q with q upper triangular (diagonal included)."""

    q: LoopElement

    def __post_init__(self):
        for (j, k, a) in self.q.entries:
            if a != 0 or k < j:
                raise ValueError("q must be an upper triangular t^0 matrix")

    @property
    def N(self) -> int:
        return self.q.N

    def matrix(self) -> LoopElement:
        return p_bar_minus_one(self.N) + self.q


@dataclass(frozen=True)
class CanonicalOper:
    """d_z + p_bar + sum_k s_k E_{1,k+1}: the first-row slice."""

    N: int
    s: tuple

    def q_matrix(self) -> LoopElement:
        return LoopElement(self.N, {(0, k, 0): c for k, c in enumerate(self.s, start=1)})

    def matrix(self) -> LoopElement:
        return p_bar_minus_one(self.N) + self.q_matrix()


@lru_cache(maxsize=None)
def _slice_system(N: int, k: int):
    """Unknowns: slice coordinate at degree k (k >= 1) then the upper entries of
    g at degree k+1.  Equations: entries of degree k in the upper triangle."""
    pbar = p_bar_minus_one(N)
    targets = [(j, j + k) for j in range(N - k)]
    unknown_keys = [(j, j + k + 1) for j in range(N - k - 1)]
    cols = []
    if k >= 1:
        cols.append([Fraction(int(t == (0, k))) for t in targets])
    for (j, l) in unknown_keys:
        img = bracket(pbar, LoopElement.unit(N, j, l))
        cols.append([img.entry(a, b).constant_term() for a, b in targets])
    rows = [[c[r] for c in cols] for r in range(len(targets))]
    system = _linalg.LinearSystem(rows, len(cols))
    return targets, unknown_keys, system


def slice_transversal(N: int) -> bool:
    """Slice plus image of ad p_bar fills each graded piece, without overlap."""
    for k in range(N):
        targets, unknown_keys, system = _slice_system(N, k)
        n_unknowns = len(unknown_keys) + (1 if k >= 1 else 0)
        expected = len(targets) - (1 if k == 0 else 0)
        if system.rank != n_unknowns or n_unknowns != expected:
            return False
    return True


def slice_dimensions(N: int) -> dict[int, int]:
    return {k: 1 for k in range(1, N)}


def gauge_to_canonical(op: BorelOperator | LoopElement):
    """Return (U, canonical) with exp(U) . canonical = op."""
    if isinstance(op, LoopElement):
        op = BorelOperator(op)
    N = op.N
    rank = N - 1
    zero = DiffPoly.zero(rank)
    q = op.q
    q_parts = [finite_component(q, j) for j in range(N)]
    g_parts = [LoopElement.identity(N)] + [LoopElement.zero(N) for _ in range(N)]
    q0_parts = [LoopElement.zero(N) for _ in range(N)]
    s = []
    for k in range(N):
        rhs = LoopElement.zero(N)
        for j in range(k + 1):
            rhs = rhs + g_parts[k - j] @ q_parts[j]
        for j in range(k):
            rhs = rhs - q0_parts[j] @ g_parts[k - j]
        rhs = rhs - g_parts[k].d_z()
        rhs = finite_component(rhs, k)
        targets, unknown_keys, system = _slice_system(N, k)
        sol = system.solve([rhs.entry(a, b) for a, b in targets], zero)
        if sol is None:
            raise GaugeFixingError(f"degree {k} equation has no solution")
        if k >= 1:
            s.append(sol[0])
            q0_parts[k] = LoopElement(N, {(0, k, 0): sol[0]})
            sol = sol[1:]
        g_parts[k + 1] = LoopElement(N, {(j, l, 0): v for (j, l), v in zip(unknown_keys, sol)})
    g = LoopElement.zero(N)
    for part in g_parts:
        g = g + part
    U = -matrix_log(g)
    return U, CanonicalOper(N, tuple(s))


@lru_cache(maxsize=None)
def miura(N: int) -> tuple:
    """Slice coordinates of d_z + p_bar + u: the KdV variables in terms of u."""
    sl(N)
    _, canon = gauge_to_canonical(BorelOperator(u_matrix(N)))
    return canon.s


def kdv_weights(N: int) -> tuple:
    """Base weights d_i + 1 of s_1..s_{N-1}."""
    return tuple(i + 1 for i in range(1, N))


def s_variable(N: int, i: int, n: int = 0) -> DiffPoly:
    return DiffPoly.var(i, n, N - 1, kdv_weights(N))


@lru_cache(maxsize=None)
def _s_monomial_image(N: int, monomial) -> DiffPoly:
    images = miura(N)
    return DiffPoly({monomial: 1}, N - 1, kdv_weights(N)).substitute(images, N - 1)


def express_in_s(N: int, p: DiffPoly, degree: int) -> DiffPoly:
    """Write a u-polynomial of weighted degree ``degree`` as a polynomial in the
    Miura images, or raise ClosureFailure."""
    weights = kdv_weights(N)
    monos = monomials_of_degree(N - 1, degree, weights)
    images = [_s_monomial_image(N, m) for m in monos]
    support = sorted({m for im in images for m in im.terms} | set(p.terms))
    index = {m: r for r, m in enumerate(support)}
    rows = [[Fraction(0)] * len(monos) for _ in support]
    for col, im in enumerate(images):
        for m, c in im.terms.items():
            rows[index[m]][col] = c
    b = [Fraction(0)] * len(support)
    for m, c in p.terms.items():
        b[index[m]] = c
    x = _linalg.LinearSystem(rows, len(monos)).solve(b)
    if x is None:
        raise ClosureFailure(f"{p} is not a differential polynomial in the Miura images")
    return DiffPoly(dict(zip(monos, x)), N - 1, weights)


@lru_cache(maxsize=None)
def kdv_flow(N: int, n: int) -> EvolutionaryDerivation:
    """d_n s_i written in the s-variables."""
    check_flow_index(N, n)
    flow = mkdv_flow(N, n).derivation
    images = []
    for i, v in enumerate(miura(N), start=1):
        images.append(express_in_s(N, flow.apply(v), i + 1 + n))
    return EvolutionaryDerivation(images)


# -- screening fields -----------------------------------------------------------


def u_zero(N: int) -> DiffPoly:
    """u_0 = -(1/a_0) sum a_i u_i; all labels are 1 in type A."""
    data = sl(N)
    out = DiffPoly.zero(N - 1)
    for i in range(1, N):
        out = out - DiffPoly.var(i, 0, N - 1) * Fraction(data.labels[i], data.labels[0])
    return out


def u_index(N: int, i: int) -> DiffPoly:
    return u_zero(N) if i == 0 else DiffPoly.var(i, 0, N - 1)


class ScreeningField:
    """e_i^L = -sum_n B_i^(n) d_i^(n), with d_i^(n) = sum_j (alpha_i, alpha_j) d/du_j^(n)."""

    def __init__(self, N: int, i: int):
        if not 0 <= i < N:
            raise IndexError(f"screening index {i} outside 0..{N - 1}")
        self.N = N
        self.index = i
        self._u = u_index(N, i)
        self._b = [DiffPoly.const(1, N - 1)]
        data = sl(N)
        self.pairings = [data.pairing(i, j) for j in range(1, N)]

    def coefficient(self, n: int) -> DiffPoly:
        while len(self._b) <= n:
            prev = self._b[-1]
            self._b.append(-self._u * prev + prev.d_z())
        return self._b[n]

    def directional(self, p: DiffPoly, n: int) -> DiffPoly:
        out = DiffPoly.zero(self.N - 1)
        for j, c in enumerate(self.pairings, start=1):
            if c:
                out = out + p.partial(j, n) * c
        return out

    def apply(self, p: DiffPoly) -> DiffPoly:
        out = DiffPoly.zero(self.N - 1)
        for n in range(p.max_order() + 1):
            d = self.directional(p, n)
            if d:
                out = out - self.coefficient(n) * d
        return out

    __call__ = apply


@lru_cache(maxsize=None)
def screening_field(N: int, i: int, order: int = 0) -> ScreeningField:
    f = ScreeningField(N, i)
    f.coefficient(order)
    return f


def verify_invariance(N: int, max_derivative: int = 3) -> dict:
    """e_i^L d_z^k v_j for i = 1..N-1; returns the nonzero residuals (empty = pass)."""
    violations = {}
    images = miura(N)
    for i in range(1, N):
        e = screening_field(N, i)
        for j, v in enumerate(images, start=1):
            w = v
            for k in range(max_derivative + 1):
                r = e.apply(w)
                if r:
                    violations[(i, j, k)] = r
                w = w.d_z()
    return violations
