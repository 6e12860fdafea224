from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings

from soliton.diffpoly import (DiffPoly, EvolutionaryDerivation, NotTotalDerivative,
                              commutator, d_z_derivation, is_total_derivative,
                              monomials_of_degree, proportionality, to_latex, to_text)
from soliton.recursion import mkdv_flow
from soliton.sampling import random_homogeneous

from strategies import homogeneous_polys, polys

u = DiffPoly.var(1, 0, 1)


def d(n, i=1, rank=1):
    return DiffPoly.var(i, n, rank)


def test_d_z_examples():
    assert (u * u).d_z() == u * d(1) * 2
    assert (u * d(1)).d_z() == d(1) ** 2 + u * d(2)
    assert DiffPoly.const(5).d_z() == DiffPoly.zero()
    assert u.d_z_n(3) == d(3)


def test_d_z_two_variables():
    u1, u2 = DiffPoly.var(1, 0, 2), DiffPoly.var(2, 0, 2)
    assert (u1 * u2).d_z() == DiffPoly.var(1, 1, 2) * u2 + u1 * DiffPoly.var(2, 1, 2)


def test_weighted_degrees():
    p = u ** 3 + d(2)
    assert p.is_homogeneous(3)
    assert p.d_z().is_homogeneous(4)
    assert p.variational_derivative(1).is_homogeneous(2)
    assert (p * d(1)).is_homogeneous(5)


def test_antiderivative_examples():
    assert (u * d(1)).antiderivative() == u * u / 2
    assert d(3).antiderivative() == d(2)
    assert (d(1) ** 2 + u * d(2)).antiderivative() == u * d(1)


def test_antiderivative_obstruction():
    with pytest.raises(NotTotalDerivative) as info:
        (u * u).antiderivative()
    assert info.value.obstruction
    assert not is_total_derivative(d(1) ** 2)


def test_variational_derivative_sl2():
    # the sl2 Cartan entry (alpha, alpha) = 2 doubles the plain Euler operator
    assert (u * u).variational_derivative(1) == u * 4
    assert (u * u).euler(1) == u * 2
    assert (d(1) ** 2).euler(1) == d(2) * -2


def test_partial_and_substitute():
    p = u * u * d(1)
    assert p.partial(1, 0) == u * d(1) * 2
    assert p.partial(1, 1) == u * u
    v = u * u / 4 + d(1) / 2
    s = DiffPoly.var(1, 0, 1)
    assert s.substitute([v]) == v
    assert s.d_z().substitute([v]) == v.d_z()


@settings(max_examples=60, deadline=None)
@given(polys(rank=1, max_degree=5))
def test_antiderivative_round_trip(p):
    q = p - DiffPoly.const(p.constant_term())
    assert q.d_z().antiderivative() == q


@settings(max_examples=40, deadline=None)
@given(polys(rank=2, max_degree=4))
def test_antiderivative_round_trip_rank2(p):
    q = p - DiffPoly.const(p.constant_term(), 2)
    assert q.d_z().antiderivative() == q


def test_solver_and_euler_agree():
    """Gaussian-elimination exactness test vs. the variational criterion."""
    rng = random.Random(7)
    disagreements = 0
    for k in range(200):
        rank = 1 + k % 2
        degree = rng.randint(1, 8)
        if k % 2:
            p = random_homogeneous(rng, rank, degree - 1, 3).d_z() if degree > 1 else \
                random_homogeneous(rng, rank, degree, 3)
        else:
            p = random_homogeneous(rng, rank, degree, 3)
        exact = is_total_derivative(p)
        euler = all(not p.variational_derivative(i) for i in range(1, rank + 1))
        disagreements += exact != euler
    assert disagreements == 0


@settings(max_examples=40, deadline=None)
@given(polys(rank=1, max_degree=4), homogeneous_polys(rank=1, max_degree=4))
def test_evolutionary_commutes_with_d_z(p, image):
    ev = EvolutionaryDerivation([image])
    assert ev.apply(p.d_z()) == ev.apply(p).d_z()


def test_commutator_of_flows_zero():
    assert commutator(mkdv_flow(2, 3).derivation, mkdv_flow(2, 5).derivation).is_zero()


def test_commutator_nonzero_example():
    a = EvolutionaryDerivation([u * u])
    b = EvolutionaryDerivation([d(1)])
    assert commutator(a, b).is_zero()  # u^2 flow commutes with d_z
    c = EvolutionaryDerivation([u])
    assert not commutator(a, c).is_zero()


def test_proportionality():
    base = d_z_derivation(1)
    assert proportionality(base * 3, base) == 3
    assert proportionality(EvolutionaryDerivation([u * u]), base) is None


def test_json_round_trip():
    p = u ** 2 * d(1) * Fraction(3, 8) - d(3) / 4
    assert DiffPoly.from_json(p.to_json(), 1) == p
    obj = (u * u).to_json_obj()
    assert obj == [{"coeff": "1/1", "monomial": [[1, 0, 2]]}]


@settings(max_examples=40, deadline=None)
@given(polys(rank=2, max_degree=4))
def test_json_round_trip_random(p):
    assert DiffPoly.from_json(p.to_json(), 2) == p


def test_text_and_latex():
    p = u ** 2 * d(1) * Fraction(3, 8) - d(3) / 4
    assert to_text(p) == "3/8 u^2 u' − 1/4 u'''"
    tex = to_latex(p, "u")
    assert "u^{(3)}" in tex and "\\frac{3}{8}" in tex
    assert "u^{(0)}" not in tex
    two = DiffPoly.var(2, 1, 2)
    assert "u_{2}^{(1)}" in to_latex(two, "u")


def test_monomials_of_degree_counts():
    # partitions of 4 for one variable
    assert len(monomials_of_degree(1, 4)) == 5
    assert monomials_of_degree(1, 0) == ((),)


def test_index_errors():
    with pytest.raises(IndexError):
        u.variational_derivative(2)
    with pytest.raises(IndexError):
        DiffPoly.var(3, 0, 2)


def test_zero_antiderivative():
    assert DiffPoly.zero().antiderivative() == DiffPoly.zero()
