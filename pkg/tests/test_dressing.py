from __future__ import annotations

from fractions import Fraction

import pytest

from soliton.diffpoly import DiffPoly
from soliton.dressing import (CutoffTooSmall, conjugated_generator, dressing_operator,
                              ds_residual, kdv_variable, minus_part)
from soliton.loopalg import (LoopElement, bracket, p_element, q_element, r_element, split,
                             u_matrix)
from soliton.recursion import solve_canonical
from soliton.reduction import express_in_s, miura, screening_field
from soliton.toda import hamiltonian_h1

u = DiffPoly.var(1, 0, 1)


def test_first_log_component_sl2():
    d = dressing_operator(2, 1)
    m1 = d.log_parts[1]
    assert m1 == q_element(0).scale(u / 4)
    assert bracket(p_element(2, -1), m1) == r_element(0).scale(-u / 2)


@pytest.mark.parametrize("N,cutoff", [(2, 4), (3, 4)])
def test_log_components_in_image(N, cutoff):
    d = dressing_operator(N, cutoff)
    for j, part in d.log_parts.items():
        assert part.degrees() == [j]
        assert not split(part).ab_part


@pytest.mark.parametrize("N", [2, 3])
def test_h1_is_mkdv_density(N):
    # h_1 = (p_1, p_{-1})^{-1} * 1/2 sum u_i u^i, exactly (not just modulo d_z)
    h1 = dressing_operator(N, 2).h_densities[1]
    assert h1 == hamiltonian_h1(N) / N


@pytest.mark.parametrize("N,flows", [(2, (1, 3)), (3, (1, 2))])
def test_equivalence_with_recursion(N, flows):
    cutoff = max(flows) + 2
    d = dressing_operator(N, cutoff)
    for n in flows:
        assert conjugated_generator(d, n) == solve_canonical(N, n, cutoff - n).total()


def test_first_flow_minus_part():
    for N in (2, 3, 4):
        d = dressing_operator(N, 2)
        assert minus_part(d, 1) == p_element(N, -1) + u_matrix(N)


@pytest.mark.parametrize("N,cutoff", [(2, 4), (3, 3), (4, 2)])
def test_conjugation_identity(N, cutoff):
    assert not ds_residual(dressing_operator(N, cutoff))


@pytest.mark.parametrize("N,cutoff", [(2, 4), (3, 3)])
def test_exp_inverse(N, cutoff):
    d = dressing_operator(N, cutoff)
    prod = (d.matrix(cutoff, 1) @ d.matrix(cutoff, -1)).restrict_window(None, cutoff)
    assert prod == LoopElement.identity(N)


def test_cutoff_too_small():
    d = dressing_operator(2, 2)
    with pytest.raises(CutoffTooSmall):
        conjugated_generator(d, 3)
    with pytest.raises(CutoffTooSmall):
        kdv_variable(dressing_operator(3, 2), 2)


def test_kdv_variable_sl2():
    v = kdv_variable(dressing_operator(2, 2), 1)
    assert v == miura(2)[0] * Fraction(-1, 2)
    assert v.is_homogeneous(2)


def test_kdv_variables_sl3():
    d = dressing_operator(3, 3)
    v1, v2 = kdv_variable(d, 1), kdv_variable(d, 2)
    assert v1.is_homogeneous(2) and v2.is_homogeneous(3)
    assert v1 == miura(3)[0] * Fraction(-1, 3)
    # v2 is a differential polynomial in the slice coordinates, not a multiple of s_2
    in_s = express_in_s(3, v2, 3)
    assert len(in_s.terms) == 2
    for i in (1, 2):
        e = screening_field(3, i)
        assert not e.apply(v1) and not e.apply(v2)
