"""Solving for intertwiners between tuples of linear maps.

The isomorphism tests in this package all reduce to the same shape of
problem: a family of unknown matrix blocks X_1, ..., X_m subject to
linear equations sum_t L_t * X_{i(t)} * R_t + C = 0, inside which an
element with prescribed blocks invertible is wanted.  The solution set
is an affine subspace; an invertible element is found by evaluating
candidates exactly, and certified absent by exhausting a rational grid
large enough for the degree of the block-determinant polynomial
(a nonzero polynomial of total degree d cannot vanish on a grid with
d+1 values per coordinate).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .linalg import QMatrix, ShapeMismatch, kernel_basis, rank, solve


class SearchExhausted(RuntimeError):
    """An invertible intertwiner was expected but not found; indicates a bug."""


@dataclass
class BlockSystem:
    """Linear system over named matrix unknowns."""

    variables: dict[str, tuple[int, int]]
    _offsets: dict[str, int] = field(init=False)
    _total: int = field(init=False)
    _rows: list[list[Fraction]] = field(init=False, default_factory=list)
    _rhs: list[Fraction] = field(init=False, default_factory=list)

    def __post_init__(self) -> None:
        self._offsets = {}
        pos = 0
        for name, (r, c) in self.variables.items():
            self._offsets[name] = pos
            pos += r * c
        self._total = pos

    def add_equation(
        self,
        terms: list[tuple[QMatrix, str, QMatrix]],
        constant: QMatrix | None = None,
        shape: tuple[int, int] | None = None,
    ) -> None:
        """Impose sum_t L_t * X_t * R_t + constant = 0."""
        if shape is None:
            if constant is not None:
                shape = (constant.rows, constant.cols)
            else:
                lt, name, rt = terms[0]
                shape = (lt.rows, rt.cols)
        out_r, out_c = shape
        if constant is None:
            constant = QMatrix.zero(out_r, out_c)
        if (constant.rows, constant.cols) != (out_r, out_c):
            raise ShapeMismatch("constant term of wrong shape")
        for lt, name, rt in terms:
            vr, vc = self.variables[name]
            if lt.rows != out_r or lt.cols != vr or rt.rows != vc or rt.cols != out_c:
                raise ShapeMismatch(f"term for {name} does not fit the equation shape")
        for a in range(out_r):
            for b in range(out_c):
                row = [Fraction(0)] * self._total
                for lt, name, rt in terms:
                    vr, vc = self.variables[name]
                    base = self._offsets[name]
                    for i in range(vr):
                        la = lt.entry(a, i)
                        if la == 0:
                            continue
                        for j in range(vc):
                            rb = rt.entry(j, b)
                            if rb != 0:
                                row[base + i * vc + j] += la * rb
                self._rows.append(row)
                self._rhs.append(-constant.entry(a, b))

    def _unpack(self, x: tuple[Fraction, ...]) -> dict[str, QMatrix]:
        out = {}
        for name, (r, c) in self.variables.items():
            base = self._offsets[name]
            out[name] = QMatrix(r, c, tuple(x[base : base + r * c]))
        return out

    def solve_affine(
        self,
    ) -> tuple[dict[str, QMatrix] | None, list[dict[str, QMatrix]]]:
        """Particular solution (None when inconsistent) and homogeneous basis."""
        m = QMatrix.from_rows(self._rows, cols=self._total) if self._rows else QMatrix.zero(0, self._total)
        particular_vec = solve(m, self._rhs)
        if particular_vec is None:
            return None, []
        ker = kernel_basis(m)
        basis = [self._unpack(ker.basis.col(j)) for j in range(ker.dim)]
        return self._unpack(particular_vec), basis


def _combine(
    particular: dict[str, QMatrix],
    basis: list[dict[str, QMatrix]],
    coeffs: tuple[Fraction | int, ...],
) -> dict[str, QMatrix]:
    out = dict(particular)
    for t, h in zip(coeffs, basis):
        if t == 0:
            continue
        for name, blk in h.items():
            out[name] = out[name] + t * blk
    return out


def _all_invertible(candidate: dict[str, QMatrix], square_names: list[str]) -> bool:
    for name in square_names:
        blk = candidate[name]
        if not blk.is_square():
            raise ShapeMismatch(f"block {name} must be square to be invertible")
        if rank(blk) != blk.rows:
            return False
    return True


def find_invertible(
    particular: dict[str, QMatrix] | None,
    basis: list[dict[str, QMatrix]],
    square_names: list[str],
    *,
    must_exist: bool = False,
    certify_cap: int = 200_000,
    seed: int = 99991,
) -> dict[str, QMatrix] | None:
    """An element of the affine family with the named blocks invertible.

    Returns None only when the full certification grid has been
    exhausted, which proves no such element exists.  With must_exist the
    caller has already decided existence by an independent invariant, so
    the search keeps sampling until it succeeds.  Raises SearchExhausted
    or ShapeMismatch-flavored errors on misuse, and ValueError when the
    grid needed for certification exceeds certify_cap.
    """
    if particular is None:
        return None
    k = len(basis)
    if _all_invertible(particular, square_names):
        return particular
    if k == 0:
        return None  # the affine space is a single point
    degree = sum(particular[name].rows for name in square_names)

    rng = random.Random(seed)
    for radius in (1, 2, 4, 8, 16, 64, 256):
        for _ in range(40 if radius < 64 else 400):
            coeffs = tuple(rng.randint(-radius, radius) for _ in range(k))
            cand = _combine(particular, basis, coeffs)
            if _all_invertible(cand, square_names):
                return cand
    if must_exist:
        raise SearchExhausted("invertible intertwiner expected but not found")

    grid_values: list[int] = [0]
    step = 1
    while len(grid_values) < degree + 1:
        grid_values.append(step)
        if len(grid_values) < degree + 1:
            grid_values.append(-step)
        step += 1
    if (degree + 1) ** k > certify_cap:
        raise ValueError(
            "certification grid too large for a desk-scale exhaustive search"
        )
    for coeffs in itertools.product(grid_values, repeat=k):
        cand = _combine(particular, basis, coeffs)
        if _all_invertible(cand, square_names):
            return cand
    return None
