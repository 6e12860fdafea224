"""Acceptance criteria 1-9, each printing one PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` or ``python3 tests/test_acceptance.py``.
Caches are cleared before each criterion so that the reported runtimes are cold.
"""

from __future__ import annotations

import contextlib
import random
import sys
import time
from fractions import Fraction

import soliton.cartan
import soliton.diffpoly
import soliton.dressing
import soliton.loopalg
import soliton.recursion
import soliton.reduction
import soliton.toda
from soliton.diffpoly import (DiffPoly, d_z_derivation, is_total_derivative, proportionality,
                              to_text)
from soliton.dressing import conjugated_generator, dressing_operator
from soliton.loopalg import gamma_vectors, p_bar_minus_one
from soliton.recursion import flows_commutator, mkdv_flow, sl2_coordinates, solve_canonical
from soliton.reduction import (BorelOperator, CanonicalOper, gauge_action, gauge_to_canonical,
                               kdv_flow, matrix_exp, miura, s_variable, screening_field,
                               verify_invariance)
from soliton.sampling import (random_canonical_s, random_diffpoly, random_homogeneous,
                              random_strictly_upper)
from soliton.toda import (LocalFunctional, find_integrals, hamiltonian_h1, integral_space,
                          poisson_bracket, screening_apply, xi_field, xi_homomorphism_defect)

u = DiffPoly.var(1, 0, 1)
_MODULES = (soliton.cartan, soliton.diffpoly, soliton.loopalg, soliton.recursion,
            soliton.dressing, soliton.reduction, soliton.toda)


def _clear_caches():
    for module in _MODULES:
        for obj in vars(module).values():
            clear = getattr(obj, "cache_clear", None)
            if callable(clear):
                clear()


class Criterion:
    """Times a block, collects failed checks and prints the summary line."""

    def __init__(self, number: int, limit: float, capsys=None):
        self.number = number
        self.limit = limit
        self.capsys = capsys
        self.failures: list[str] = []

    def check(self, ok: bool, label: str):
        if not ok:
            self.failures.append(label)

    def __enter__(self):
        _clear_caches()
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        elapsed = time.perf_counter() - self.start
        if exc[0] is not None:
            self.failures.append(f"raised {exc[0].__name__}: {exc[1]}")
        if elapsed >= self.limit:
            self.failures.append(f"runtime {elapsed:.2f}s over {self.limit}s")
        status = "FAIL" if self.failures else "PASS"
        line = f"criterion {self.number}: {status} ({elapsed:.2f}s)"
        if self.failures:
            line += " -- " + "; ".join(self.failures)
        guard = self.capsys.disabled() if self.capsys is not None else contextlib.nullcontext()
        with guard:
            print(line)
        return False

    def verdict(self):
        assert not self.failures, "; ".join(self.failures)


def test_criterion_1_recursion_intermediates(capsys):
    with Criterion(1, 1.0, capsys) as c:
        sol = solve_canonical(2, 3, 1)
        c.check(sl2_coordinates(sol[-2], -2) == {"R": u / 2}, "R_-2")
        c.check(sl2_coordinates(sol[-1], -1) == {"P": -u * u / 8, "Q": u.d_z() / 4},
                "P_-1/Q_-1")
        c.check(sl2_coordinates(sol[0], 0) == {"R": -u ** 3 / 16 + u.d_z_n(2) / 8}, "R_0")
    c.verdict()


def test_criterion_2_mkdv_equation(capsys):
    expected = u * u * u.d_z() * Fraction(3, 8) - u.d_z_n(3) / 4
    with Criterion(2, 1.0, capsys) as c:
        got = mkdv_flow(2, 3).images[0]
        c.check(got == expected, f"computed d_3 u = {to_text(got)}, "
                                 f"expected {to_text(expected)}")
        c.check(mkdv_flow(2, 1).images[0] == u.d_z(), "d_1 u = u'")
    c.verdict()


def test_criterion_3_miura_and_kdv(capsys):
    s = s_variable(2, 1)
    expected_kdv = s * s.d_z() * Fraction(3, 2) - s.d_z_n(3) / 4
    with Criterion(3, 5.0, capsys) as c:
        c.check(miura(2) == (u * u / 4 + u.d_z() / 2,), "miura(2)")
        flow = kdv_flow(2, 3).images[0]
        c.check(flow == expected_kdv,
                f"computed d_3 s = {to_text(flow, 's')}, expected {to_text(expected_kdv, 's')}")
        # s = -v and tau_3 = -4 tau, so v_tau = -4 d_3 v = 4 d_3 s evaluated at s = -v
        v = DiffPoly.var(1, 0, 1)
        v_tau = flow.substitute([-v]) * 4
        classical = v * v.d_z() * 6 + v.d_z_n(3)
        c.check(v_tau == classical, f"substitution gives v_tau = {to_text(v_tau, 'v')}")
    c.verdict()


def test_criterion_4_two_oracles(capsys):
    with Criterion(4, 30.0, capsys) as c:
        for N, flows in [(2, (1, 3)), (3, (1, 2))]:
            cutoff = max(flows) + 2
            d = dressing_operator(N, cutoff)
            for n in flows:
                dressed = conjugated_generator(d, n)
                recursive = solve_canonical(N, n, cutoff - n).total()
                c.check(dressed == recursive, f"N={N} n={n}")
                c.check(dressed.degrees() == list(range(-n, cutoff - n + 1)), "degree window")
    c.verdict()


def test_criterion_5_commutativity(capsys):
    with Criterion(5, 120.0, capsys) as c:
        for N, m, n in [(2, 3, 5), (3, 1, 2), (3, 2, 4)]:
            c.check(flows_commutator(N, m, n).is_zero(), f"[d_{m}, d_{n}] at N={N}")
    c.verdict()


def test_criterion_6_screening_invariance(capsys):
    with Criterion(6, 10.0, capsys) as c:
        for N in (2, 3):
            c.check(verify_invariance(N) == {}, f"e_i v_j at N={N}")
        c.check(screening_field(2, 1).apply(u) == -2, "e u = -2")
    c.verdict()


def test_criterion_7_toda_hamiltonians(capsys):
    with Criterion(7, 120.0, capsys) as c:
        d_z = d_z_derivation(1)
        h1 = find_integrals(2, 1)
        c.check(xi_field(hamiltonian_h1(2)) == d_z, "xi of 1/2 u u^dual")
        c.check(xi_field(h1.hamiltonian) == d_z, "xi of normalized H_1")
        c.check(LocalFunctional(h1.density) == LocalFunctional(hamiltonian_h1(2) * 4),
                "found H_1 spans 1/2 u u^dual")
        c.check(len(integral_space(2, 3)) == 1, "degree-3 space is one-dimensional")
        h3 = find_integrals(2, 3)
        c.check(proportionality(xi_field(h3.density), mkdv_flow(2, 3).derivation) is not None,
                "xi H_3 proportional to d_3")
        c.check(not poisson_bracket(h1.density, h3.density), "{H_1, H_3} = 0")
    c.verdict()


def test_criterion_8_gamma_vectors(capsys):
    with Criterion(8, 10.0, capsys) as c:
        for N in (2, 3, 4, 5):
            c.check(gamma_vectors(N)[1] == N - 1, f"rank at N={N}")
    c.verdict()


def _suite_antiderivative(rng, count):
    failures = 0
    for k in range(count):
        rank = 1 + k % 2
        p = random_diffpoly(rng, rank, 5, 4)
        p = p - DiffPoly.const(p.constant_term(), rank)
        failures += p.d_z().antiderivative() != p
    return failures


def _suite_euler(rng, count):
    failures = 0
    for k in range(count):
        rank = 1 + k % 2
        degree = rng.randint(2, 8)
        p = random_homogeneous(rng, rank, degree, 3)
        if k % 3 == 0:
            p = random_homogeneous(rng, rank, degree - 1, 3).d_z()
        euler = all(not p.variational_derivative(i) for i in range(1, rank + 1))
        failures += is_total_derivative(p) != euler
    return failures


def _suite_gauge(rng, count):
    failures = 0
    for k in range(count):
        N = 2 + k % 2
        U = random_strictly_upper(rng, N)
        canon = CanonicalOper(N, tuple(random_canonical_s(rng, N)))
        op = gauge_action(matrix_exp(U), canon.matrix())
        U2, canon2 = gauge_to_canonical(BorelOperator(op - p_bar_minus_one(N)))
        failures += U2 != U or canon2.s != canon.s
    return failures


def _suite_homomorphism(rng, count):
    failures = 0
    for k in range(count):
        N = 2 + k % 2
        p = random_diffpoly(rng, N - 1, 4, 3)
        r = random_diffpoly(rng, N - 1, 4, 3)
        failures += not xi_homomorphism_defect(p, r).is_zero()
    return failures


def _suite_screening(rng, count):
    failures = 0
    for k in range(count):
        N = 2 + k % 3
        p = random_diffpoly(rng, N - 1, 4, 4)
        for i in range(N):
            failures += screening_apply(i, p, N).poly != -screening_field(N, i).apply(p)
    return failures


SUITES = [
    ("d_z/antiderivative round trip", _suite_antiderivative),
    ("solver vs Euler criterion", _suite_euler),
    ("gauge round trip", _suite_gauge),
    ("xi homomorphism", _suite_homomorphism),
    ("screening identification", _suite_screening),
]


def test_criterion_9_property_suites(capsys):
    with Criterion(9, 600.0, capsys) as c:
        for k, (name, suite) in enumerate(SUITES):
            failures = suite(random.Random(9000 + k), 60)
            c.check(failures == 0, f"{name}: {failures} of 60 failed")
    c.verdict()


if __name__ == "__main__":
    failed = 0
    for name, fn in sorted((n, f) for n, f in globals().items() if n.startswith("test_criterion_")):
        try:
            fn(None)
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)
