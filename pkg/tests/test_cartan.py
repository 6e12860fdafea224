from __future__ import annotations

import json
from fractions import Fraction

import pytest

from soliton.cartan import (ALGEBRA_TYPES, all_table_rows, cartan_data, exponent_sequence,
                            leading_minors, parse_algebra, require_computational, sl)
from soliton.errors import UnknownAlgebraError, UnsupportedAlgebraError


def test_a1_row():
    d = cartan_data("A^(1)", 1)
    assert d.coxeter_number == 2
    assert d.exponents == (1,)
    assert [m for m in range(1, 8) if d.in_I(m)] == [1, 3, 5, 7]


def test_e8_row():
    d = cartan_data("E^(1)", 8)
    assert d.coxeter_number == 30
    assert d.exponents == (1, 7, 11, 13, 17, 19, 23, 29)


def test_g2_row():
    d = cartan_data("G^(1)", 2)
    assert d.coxeter_number == 6
    assert d.exponents == (1, 5)
    assert d.labels == (1, 2, 3)


def test_every_type_has_rows():
    seen = {d.algebra_type for d in all_table_rows()}
    assert seen == set(ALGEBRA_TYPES)


@pytest.mark.parametrize("d", all_table_rows(), ids=lambda d: d.name)
def test_row_invariants(d):
    h = d.coxeter_number
    assert all(1 <= e <= h - 1 for e in d.exponents)
    assert h == d.twist * sum(d.labels)
    assert len(d.labels) == d.rank + 1
    # the symmetrized Cartan matrix of the finite part
    cartan = [list(r) for r in d.sym_cartan]
    assert all(cartan[i][j] == cartan[j][i] for i in range(len(cartan)) for j in range(len(cartan)))
    assert all(cartan[i][i] > 0 for i in range(len(cartan)))
    assert all(m > 0 for m in leading_minors(cartan))


@pytest.mark.parametrize("d", [r for r in all_table_rows() if r.twist == 1], ids=lambda d: d.name)
def test_exponent_count_untwisted(d):
    assert len(d.exponents) == d.rank


def test_exponent_count_fails_for_twisted():
    # A^(2)_{2n} lists 2n exponents at rank n; the count invariant is for untwisted rows
    d = cartan_data("A^(2)", 4)
    assert d.rank == 2 and len(d.exponents) == 4


@pytest.mark.parametrize("n", [2, 3, 4])
def test_d_even_multiplicity(n):
    d = cartan_data("D^(1)", 2 * n)
    mult = d.exponent_multiplicity
    assert mult[2 * n - 1] == 2
    assert all(v == 1 for k, v in mult.items() if k != 2 * n - 1)


def test_distinct_exponents_elsewhere():
    for d in all_table_rows():
        if d.algebra_type == "D^(1)" and d.subscript % 2 == 0:
            continue
        assert len(set(d.exponents)) == len(d.exponents), d.name


@pytest.mark.parametrize("d", all_table_rows(), ids=lambda d: d.name)
def test_I_closed_under_shift(d):
    h = d.coxeter_number
    for m in range(1, 3 * h):
        assert d.in_I(m) == d.in_I(m + h)


@pytest.mark.parametrize("N", range(2, 9))
def test_a_type(N):
    d = sl(N)
    assert d.coxeter_number == N
    assert all(a == 1 for a in d.labels)
    cartan = [list(r) for r in d.sym_cartan]
    for i in range(N - 1):
        for j in range(N - 1):
            expected = 2 if i == j else (-1 if abs(i - j) == 1 else 0)
            assert cartan[i][j] == expected
    assert leading_minors(cartan) == [Fraction(k + 1) for k in range(1, N)]
    assert d.pairing(0, 0) == 2


def test_dual_labels_sum():
    # dual Coxeter numbers
    expected = {"A1": 2, "E8": 30, "G2": 4, "F4": 9, "B3": 5, "C2": 3, "D4": 6}
    for name, hv in expected.items():
        assert sum(parse_algebra(name).dual_labels) == hv, name


def test_exponent_sequence_examples():
    assert exponent_sequence(sl(2), 8) == [1, 3, 5, 7]
    assert exponent_sequence(sl(3), 7) == [1, 2, 4, 5, 7]
    assert exponent_sequence(sl(2), 0) == []
    assert exponent_sequence(cartan_data("D^(1)", 4), 5) == [1, 3, 3, 5]


def test_parse_algebra_forms():
    assert parse_algebra("sl2") == sl(2)
    assert parse_algebra("A2") == sl(3)
    assert parse_algebra("A^(2)_4") == parse_algebra("A4^(2)")
    assert parse_algebra("D4(3)").twist == 3
    with pytest.raises(UnknownAlgebraError):
        parse_algebra("Q7")


def test_illegal_rows():
    for args in [("B^(1)", 2), ("D^(1)", 3), ("E^(1)", 5), ("A^(1)", 0), ("G^(1)", 3)]:
        with pytest.raises(UnknownAlgebraError):
            cartan_data(*args)


def test_computational_gate():
    assert require_computational(sl(4)) == 4
    with pytest.raises(UnsupportedAlgebraError):
        require_computational(parse_algebra("E8"))


def test_json_export():
    assert json.loads(sl(2).to_json()) == {"type": "A1", "h": 2, "exponents": [1],
                                           "labels": [1, 1], "cartan": [[2]]}
