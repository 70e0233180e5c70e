"""Deterministic random generators shared across the tests.

Valid zig-zags are built from the five exact interval blocks (boundary
tails, the boundary-to-A arc, the skyscraper arc, the B-to-boundary arc)
and then conjugated by random invertible matrices on every space, which
preserves exactness while hiding the block structure.
"""

from __future__ import annotations

import random
from fractions import Fraction

from zzl.linalg import QMatrix, rank
from zzl.zigzag import ZigZag


def random_invertible(rng: random.Random, n: int) -> QMatrix:
    if n == 0:
        return QMatrix.identity(0)
    while True:
        m = QMatrix.from_rows(
            [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        )
        if rank(m) == n:
            return m


def random_valid_zigzag(
    rng: random.Random, max_dim: int = 4, label: str = "Q_U[3]"
) -> ZigZag:
    while True:
        m11, m12, m23, m34, m44 = (rng.randint(0, 2) for _ in range(5))
        e_minus, a_dim = m11 + m12, m12 + m23
        b_dim, e_zero = m23 + m34, m34 + m44
        if max(e_minus, a_dim, b_dim, e_zero) <= max_dim and (
            e_minus + a_dim + b_dim + e_zero
        ):
            break
    alpha = [[Fraction(0)] * e_minus for _ in range(a_dim)]
    for i in range(m12):
        alpha[i][m11 + i] = Fraction(1)
    beta = [[Fraction(0)] * a_dim for _ in range(b_dim)]
    for i in range(m23):
        beta[i][m12 + i] = Fraction(1)
    gamma = [[Fraction(0)] * b_dim for _ in range(e_zero)]
    for i in range(m34):
        gamma[i][m23 + i] = Fraction(1)

    p = random_invertible(rng, e_minus)
    g_a = random_invertible(rng, a_dim)
    g_b = random_invertible(rng, b_dim)
    q = random_invertible(rng, e_zero)
    return ZigZag(
        label, e_minus, e_zero, a_dim, b_dim,
        g_a * QMatrix.from_rows(alpha, cols=e_minus) * p.inverse(),
        g_b * QMatrix.from_rows(beta, cols=a_dim) * g_a.inverse(),
        q * QMatrix.from_rows(gamma, cols=b_dim) * g_b.inverse(),
    )


def random_nilpotent_upper(rng: random.Random, n: int) -> QMatrix:
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rows[i][j] = Fraction(rng.randint(-2, 2))
    return QMatrix.from_rows(rows, cols=n)


def random_skew_pairing_gram(rng: random.Random, n: int) -> QMatrix:
    m = QMatrix.from_rows(
        [[Fraction(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
    )
    return m - m.transpose()
