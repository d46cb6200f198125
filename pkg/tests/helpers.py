"""Shared generators and small brute-force oracles for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

from starwick import CoeffElement, Poly, PropagatorMatrix


def rand_rational(rng: random.Random, span: int = 3, den: int = 3) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, den))


def rand_poly(
    rng: random.Random,
    dim: int,
    max_degree: int = 3,
    terms: int = 3,
    block: int = 0,
) -> Poly:
    out = Poly.zero(dim)
    for _ in range(terms):
        piece = Poly.constant(rand_rational(rng), dim)
        for _ in range(rng.randint(0, max_degree)):
            piece = piece * Poly.variable(rng.randint(1, dim), dim, block=block)
        out = out + piece
    return out


def rand_matrix(
    rng: random.Random, dim: int, symmetric: bool = False
) -> PropagatorMatrix:
    rows = [[rand_rational(rng) for _ in range(dim)] for _ in range(dim)]
    if symmetric:
        for i in range(dim):
            for j in range(i):
                rows[i][j] = rows[j][i]
    return PropagatorMatrix.from_entries(rows, symmetric=symmetric)


def rand_asymmetric_matrix(rng: random.Random, dim: int) -> PropagatorMatrix:
    """Random matrix guaranteed to have entry(1,2) != entry(2,1)."""
    while True:
        m = rand_matrix(rng, dim)
        if m.entry(1, 2) != m.entry(2, 1):
            return m


def all_pairings(items: list) -> list[list[tuple]]:
    """Every partition of the items into unordered pairs."""
    if not items:
        return [[]]
    first, rest = items[0], items[1:]
    out = []
    for pick in range(len(rest)):
        pair = (first, rest[pick])
        for sub in all_pairings(rest[:pick] + rest[pick + 1 :]):
            out.append([pair] + sub)
    return out


def poly_from_coeff(value: CoeffElement, dim: int) -> Poly:
    return Poly.constant(value, dim)
