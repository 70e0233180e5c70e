"""Monodromy-side formulas: the Picard-Lefschetz transformation, the
logarithm/exponential pair between unipotent and nilpotent operators, and
the weight filtration of a nilpotent operator.

Convention: a pairing evaluates as x . y = x^T * gram * y.  Nothing in
the underlying formulas fixes this; it is pinned here so every worked
value in the test suite is reproducible.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .linalg import (
    DimensionMismatch,
    QMatrix,
    Scalar,
    Subspace,
    Vector,
    as_vector,
    image_basis,
    kernel_basis,
    subspace_intersect,
    subspace_sum,
)


class NotUnipotent(ValueError):
    """The operator minus the identity is not nilpotent."""


class NotNilpotent(ValueError):
    """No power of the operator vanishes."""


@dataclass(frozen=True)
class Pairing:
    """A bilinear pairing on Q^dim; skew-symmetry is checked, never assumed."""

    gram: QMatrix
    is_skew: bool = field(init=False, compare=False)

    def __post_init__(self) -> None:
        if not self.gram.is_square():
            raise DimensionMismatch("gram matrix must be square")
        object.__setattr__(self, "is_skew", self.gram.transpose() == -self.gram)

    @property
    def dim(self) -> int:
        return self.gram.rows

    def pair(self, x: Iterable[Scalar], y: Iterable[Scalar]) -> Fraction:
        xv = as_vector(x)
        yv = as_vector(y)
        if len(xv) != self.dim or len(yv) != self.dim:
            raise DimensionMismatch("pairing arguments of wrong length")
        gy = self.gram.apply(yv)
        return sum((a * b for a, b in zip(xv, gy)), Fraction(0))


def pl_transform(alpha: Iterable[Scalar], delta: Iterable[Scalar], q: Pairing) -> Vector:
    """alpha + (alpha . delta) * delta, the reflection in the vanishing cycle."""
    av = as_vector(alpha)
    dv = as_vector(delta)
    if len(av) != q.dim or len(dv) != q.dim:
        raise DimensionMismatch("vectors must match the pairing dimension")
    c = q.pair(av, dv)
    return tuple(a + c * d for a, d in zip(av, dv))


def pl_operator(delta: Iterable[Scalar], q: Pairing) -> QMatrix:
    """The matrix T with T*x = pl_transform(x, delta, q) for all x."""
    dv = as_vector(delta)
    if len(dv) != q.dim:
        raise DimensionMismatch("delta must match the pairing dimension")
    columns = []
    for j in range(q.dim):
        e = [Fraction(0)] * q.dim
        e[j] = Fraction(1)
        columns.append(pl_transform(e, dv, q))
    return QMatrix.from_columns(columns, rows=q.dim)


def nilpotency_index(m: QMatrix) -> int | None:
    """Least k with m^k = 0, or None if m is not nilpotent (k <= dim suffices)."""
    if not m.is_square():
        raise DimensionMismatch("nilpotency of a non-square matrix")
    power = QMatrix.identity(m.rows)
    for k in range(m.rows + 1):
        if power.is_zero():
            return k
        power = power * m
    return None


@dataclass(frozen=True)
class NilpotentOperator:
    """A square matrix some power of which vanishes; verified at construction."""

    matrix: QMatrix

    def __post_init__(self) -> None:
        if nilpotency_index(self.matrix) is None:
            raise NotNilpotent("no power <= dim of the matrix vanishes")

    @property
    def dim(self) -> int:
        return self.matrix.rows

    @property
    def index(self) -> int:
        """Least k with matrix^k = 0 (0 for the operator on the zero space)."""
        k = nilpotency_index(self.matrix)
        assert k is not None
        return k


def nilpotent_log(t: QMatrix) -> NilpotentOperator:
    """log of a unipotent operator via the terminating alternating series."""
    if not t.is_square():
        raise DimensionMismatch("logarithm of a non-square matrix")
    n = t.rows
    u = t - QMatrix.identity(n)
    if nilpotency_index(u) is None:
        raise NotUnipotent("(t - I)^dim is nonzero")
    total = QMatrix.zero(n, n)
    power = QMatrix.identity(n)
    for j in range(1, n + 1):
        power = power * u
        if power.is_zero():
            break
        total = total + Fraction((-1) ** (j + 1), j) * power
    return NilpotentOperator(total)


def unipotent_exp(n: NilpotentOperator) -> QMatrix:
    """exp of a nilpotent operator; the series is finite and exact."""
    d = n.dim
    total = QMatrix.identity(d)
    power = QMatrix.identity(d)
    for j in range(1, d + 1):
        power = power * n.matrix
        if power.is_zero():
            break
        total = total + Fraction(1, math.factorial(j)) * power
    return total


@dataclass(frozen=True)
class WeightFiltration:
    """Increasing exhaustive filtration W_w, stored as (weight, subspace) steps.

    The lowest stored step is the zero subspace and the highest is the
    full space; weights in between step by one.
    """

    center: int
    steps: tuple[tuple[int, Subspace], ...]

    def __post_init__(self) -> None:
        weights = [w for w, _ in self.steps]
        if weights != list(range(weights[0], weights[0] + len(weights))):
            raise ValueError("filtration weights must be consecutive")
        if self.steps[0][1].dim != 0:
            raise ValueError("lowest step must be the zero subspace")
        top = self.steps[-1][1]
        if top.dim != top.ambient_dim:
            raise ValueError("highest step must be the full space")

    @property
    def ambient_dim(self) -> int:
        return self.steps[0][1].ambient_dim

    def step(self, weight: int) -> Subspace:
        lo = self.steps[0][0]
        hi = self.steps[-1][0]
        if weight < lo:
            return Subspace.zero(self.ambient_dim)
        if weight > hi:
            return Subspace.full(self.ambient_dim)
        return self.steps[weight - lo][1]

    def graded_dim(self, weight: int) -> int:
        return self.step(weight).dim - self.step(weight - 1).dim

    def graded_dims(self) -> dict[int, int]:
        return {
            w: d
            for w, _ in self.steps
            if (d := self.graded_dim(w)) != 0
        }


def weight_filtration(n: NilpotentOperator, center: int) -> WeightFiltration:
    """The unique filtration with N W_w <= W_{w-2} and N^j : Gr_{k+j} ~ Gr_{k-j}.

    Built from sums of (kernel of a power) intersect (image of a power);
    for a single Jordan block this reproduces the textbook staircase, and
    both defining conditions are re-verified on the output before it is
    returned.
    """
    d = n.dim
    m = max(n.index - 1, 0)
    powers = [QMatrix.identity(d)]
    for _ in range(m + 1):
        powers.append(powers[-1] * n.matrix)

    def ker(j: int) -> Subspace:
        return Subspace.full(d) if j > m else kernel_basis(powers[j])

    def im(j: int) -> Subspace:
        return Subspace.zero(d) if j > m else image_basis(powers[j])

    def w_step(level: int) -> Subspace:
        total = Subspace.zero(d)
        for j in range(m + 1):
            if level >= 0:
                piece = subspace_intersect(ker(level + j + 1), im(j))
            else:
                piece = subspace_intersect(ker(j + 1), im(j - level))
            total = subspace_sum(total, piece)
        return total

    steps = tuple(
        (center + level, w_step(level)) for level in range(-m - 1, m + 1)
    )
    filtration = WeightFiltration(center, steps)
    issues = check_weight_conditions(n, filtration)
    assert not issues, f"weight filtration conditions failed: {issues}"
    return filtration


def check_weight_conditions(n: NilpotentOperator, w: WeightFiltration) -> list[str]:
    """Report every violation of the two defining conditions (empty = good)."""
    issues: list[str] = []
    k = w.center
    lo = w.steps[0][0]
    hi = w.steps[-1][0]
    for level in range(lo, hi + 1):
        sub = w.step(level)
        target = w.step(level - 2)
        for j in range(sub.dim):
            if not target.contains(n.matrix.apply(sub.basis.col(j))):
                issues.append(f"N W_{level} not inside W_{level - 2}")
                break
    for j in range(0, hi - k + 1):
        g_plus = w.graded_dim(k + j)
        g_minus = w.graded_dim(k - j)
        if g_plus != g_minus:
            issues.append(f"graded dims at {k + j} and {k - j} differ")
            continue
        # the induced map Gr_{k+j} -> Gr_{k-j} has image
        # (N^j W_{k+j} + W_{k-j-1}) / W_{k-j-1}; it is an isomorphism
        # iff that image has dimension g_{k+j} = g_{k-j}.
        source = w.step(k + j)
        below = w.step(k - j - 1)
        power = n.matrix ** j
        mapped = [power.apply(source.basis.col(c)) for c in range(source.dim)]
        big = subspace_sum(Subspace.spanned_by(w.ambient_dim, mapped), below)
        if big.dim - below.dim != g_plus:
            issues.append(f"N^{j} is not an isomorphism Gr_{k + j} -> Gr_{k - j}")
    return issues


def conjugate(n: NilpotentOperator, g: QMatrix) -> NilpotentOperator:
    """g N g^{-1}; conjugation preserves nilpotency."""
    if not g.is_square() or g.rows != n.dim:
        raise DimensionMismatch("conjugating matrix of wrong size")
    return NilpotentOperator(g * n.matrix * g.inverse())


def jordan_nilpotent(block_sizes: Sequence[int]) -> NilpotentOperator:
    """Nilpotent matrix with the given Jordan block sizes (ones above the diagonal)."""
    d = sum(block_sizes)
    rows = [[Fraction(0)] * d for _ in range(d)]
    offset = 0
    for s in block_sizes:
        for i in range(s - 1):
            rows[offset + i][offset + i + 1] = Fraction(1)
        offset += s
    return NilpotentOperator(QMatrix.from_rows(rows, cols=d))
