"""Cross-module consistency checks used by ``soliton verify``."""

from __future__ import annotations

import random
import time

from soliton.cartan import exponent_sequence, sl


def _flows(N: int, count: int) -> list[int]:
    return exponent_sequence(sl(N), 4 * N)[:count]


def check_zero_curvature(N: int) -> bool:
    from soliton.recursion import mkdv_flow, verify_zero_curvature

    flows = _flows(N, 3)
    return all(not verify_zero_curvature(mkdv_flow(N, a), mkdv_flow(N, b))
               for a in flows for b in flows if a < b)


def check_flows_commute(N: int) -> bool:
    from soliton.recursion import flows_commutator

    flows = _flows(N, 3)
    return all(flows_commutator(N, a, b).is_zero() for a in flows for b in flows if a < b)


def check_dressing_equivalence(N: int) -> bool:
    from soliton.dressing import conjugated_generator, dressing_operator
    from soliton.recursion import solve_canonical

    flows = _flows(N, 2)
    cutoff = max(flows) + 2
    d = dressing_operator(N, cutoff)
    return all(conjugated_generator(d, n) == solve_canonical(N, n, cutoff - n).total()
               for n in flows)


def check_dressing_residual(N: int) -> bool:
    from soliton.dressing import ds_residual, dressing_operator

    return not ds_residual(dressing_operator(N, 3))


def check_screening_invariance(N: int) -> bool:
    from soliton.reduction import verify_invariance

    return not verify_invariance(N)


def check_gauge_round_trip(N: int, samples: int = 10) -> bool:
    from soliton.loopalg import p_bar_minus_one
    from soliton.reduction import (BorelOperator, CanonicalOper, gauge_action,
                                   gauge_to_canonical, matrix_exp)
    from soliton.sampling import random_canonical_s, random_strictly_upper

    rng = random.Random(N)
    for _ in range(samples):
        U = random_strictly_upper(rng, N)
        canon = CanonicalOper(N, tuple(random_canonical_s(rng, N)))
        op = gauge_action(matrix_exp(U), canon.matrix())
        U2, canon2 = gauge_to_canonical(BorelOperator(op - p_bar_minus_one(N)))
        if U2 != U or canon2.s != canon.s:
            return False
    return True


def check_gamma_rank(N: int) -> bool:
    from soliton.loopalg import gamma_vectors

    return gamma_vectors(N)[1] == N - 1


def check_integrals(N: int) -> bool:
    from soliton.diffpoly import d_z_derivation
    from soliton.toda import find_integrals, hamiltonian_h1, poisson_bracket, xi_field

    if xi_field(hamiltonian_h1(N)) != d_z_derivation(N - 1):
        return False
    flows = _flows(N, 2)
    found = [find_integrals(N, m) for m in flows]
    return all(not poisson_bracket(a.density, b.density) for a in found for b in found)


CHECKS = [
    ("zero-curvature", check_zero_curvature),
    ("flows-commute", check_flows_commute),
    ("dressing-equals-recursion", check_dressing_equivalence),
    ("dressing-residual", check_dressing_residual),
    ("screening-invariance", check_screening_invariance),
    ("gauge-round-trip", check_gauge_round_trip),
    ("gamma-rank", check_gamma_rank),
    ("integrals-of-motion", check_integrals),
]


def run_checks(N: int) -> list[tuple[str, bool, float]]:
    out = []
    for name, fn in CHECKS:
        start = time.perf_counter()
        ok = bool(fn(N))
        out.append((name, ok, time.perf_counter() - start))
    return out
