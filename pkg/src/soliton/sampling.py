"""Random exact inputs for property checks."""

from __future__ import annotations

import random
from fractions import Fraction

from soliton.diffpoly import DiffPoly, monomials_of_degree
from soliton.loopalg import LoopElement


def random_fraction(rng: random.Random, size: int = 5) -> Fraction:
    return Fraction(rng.randint(-size, size), rng.randint(1, size))


def random_homogeneous(rng: random.Random, rank: int, degree: int, terms: int = 4,
                       weights=None) -> DiffPoly:
    monos = monomials_of_degree(rank, degree, weights)
    if not monos:
        return DiffPoly.zero(rank, weights)
    out = {}
    for m in rng.sample(monos, min(terms, len(monos))):
        out[m] = random_fraction(rng)
    return DiffPoly(out, rank, weights)


def random_diffpoly(rng: random.Random, rank: int, max_degree: int, terms: int = 4) -> DiffPoly:
    out = DiffPoly.zero(rank)
    for _ in range(terms):
        out = out + random_homogeneous(rng, rank, rng.randint(0, max_degree), 1)
    return out


def random_strictly_upper(rng: random.Random, N: int, max_degree: int = 3) -> LoopElement:
    entries = {}
    for j in range(N):
        for k in range(j + 1, N):
            if rng.random() < 0.8:
                entries[(j, k, 0)] = random_diffpoly(rng, N - 1, max_degree, 2)
    return LoopElement(N, entries)


def random_canonical_s(rng: random.Random, N: int, max_degree: int = 3) -> list[DiffPoly]:
    return [random_diffpoly(rng, N - 1, max_degree, 2) for _ in range(N - 1)]
