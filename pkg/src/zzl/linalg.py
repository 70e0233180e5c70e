"""Exact linear algebra over the rationals.

Everything in this package is built on two value types: an immutable
row-major matrix of ``fractions.Fraction`` entries, and a subspace of an
ambient rational vector space given by an independent column basis.  Zero
rows and zero columns are first class: a 0xn or nx0 matrix is a genuine
map to or from the zero space, and many of the objects downstream (the
minimal-extension zig-zag, empty coupling blocks) rely on that.

No floating point is used anywhere.  Gaussian elimination always picks
the first nonzero pivot, so every basis this module produces is
deterministic and safe to freeze into golden tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class DimensionMismatch(ValueError):
    """Two maps were combined along spaces of different dimensions."""


class AmbientMismatch(ValueError):
    """Two subspaces of different ambient spaces were compared."""


class ShapeMismatch(ValueError):
    """A matrix block does not fit the declared partition."""


Scalar = Fraction | int
Vector = tuple[Fraction, ...]


def _frac(x: Scalar) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


def format_rational(x: Scalar) -> str:
    """Render as ``p/q`` in lowest terms, or ``p`` when the denominator is 1."""
    x = _frac(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(text: str) -> Fraction:
    """Inverse of :func:`format_rational`.  Raises ``ValueError`` on bad input."""
    text = text.strip()
    if "/" in text:
        num, _, den = text.partition("/")
        return Fraction(int(num), int(den))
    return Fraction(int(text))


def as_vector(values: Iterable[Scalar]) -> Vector:
    return tuple(_frac(v) for v in values)


@dataclass(frozen=True)
class QMatrix:
    """Immutable rational matrix; ``entries`` is row-major of length rows*cols."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        if self.rows < 0 or self.cols < 0:
            raise ShapeMismatch(f"negative shape {self.rows}x{self.cols}")
        if len(self.entries) != self.rows * self.cols:
            raise ShapeMismatch(
                f"{self.rows}x{self.cols} matrix needs {self.rows * self.cols} "
                f"entries, got {len(self.entries)}"
            )
        if not all(isinstance(e, Fraction) for e in self.entries):
            object.__setattr__(
                self, "entries", tuple(_frac(e) for e in self.entries)
            )

    # -- constructors -------------------------------------------------

    @staticmethod
    def from_rows(rows_data: Sequence[Sequence[Scalar]], cols: int | None = None) -> QMatrix:
        """Build from a list of rows; ``cols`` disambiguates zero-row matrices."""
        nrows = len(rows_data)
        if nrows == 0:
            return QMatrix(0, 0 if cols is None else cols, ())
        ncols = len(rows_data[0])
        if any(len(r) != ncols for r in rows_data):
            raise ShapeMismatch("ragged rows")
        if cols is not None and cols != ncols:
            raise ShapeMismatch(f"declared {cols} cols, rows have {ncols}")
        return QMatrix(nrows, ncols, tuple(_frac(x) for row in rows_data for x in row))

    @staticmethod
    def zero(rows: int, cols: int) -> QMatrix:
        return QMatrix(rows, cols, (Fraction(0),) * (rows * cols))

    @staticmethod
    def identity(n: int) -> QMatrix:
        return QMatrix(
            n, n, tuple(Fraction(1 if i == j else 0) for i in range(n) for j in range(n))
        )

    @staticmethod
    def column(values: Iterable[Scalar]) -> QMatrix:
        vals = as_vector(values)
        return QMatrix(len(vals), 1, vals)

    @staticmethod
    def from_columns(columns: Sequence[Sequence[Scalar]], rows: int | None = None) -> QMatrix:
        if not columns:
            return QMatrix(0 if rows is None else rows, 0, ())
        return QMatrix.from_rows(
            [[col[i] for col in columns] for i in range(len(columns[0]))]
        )

    # -- access -------------------------------------------------------

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def col(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def rows_list(self) -> list[list[Fraction]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def columns(self) -> list[Vector]:
        return [self.col(j) for j in range(self.cols)]

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other: QMatrix) -> QMatrix:
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise DimensionMismatch("matrix addition shape mismatch")
        return QMatrix(
            self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries))
        )

    def __sub__(self, other: QMatrix) -> QMatrix:
        return self + (-other)

    def __neg__(self) -> QMatrix:
        return QMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def __mul__(self, other: QMatrix | Scalar) -> QMatrix:
        if isinstance(other, QMatrix):
            if self.cols != other.rows:
                raise DimensionMismatch(
                    f"cannot compose {self.rows}x{self.cols} with {other.rows}x{other.cols}"
                )
            k, m = self.cols, other.cols
            a, b = self.entries, other.entries
            zero = Fraction(0)
            out = []
            for i in range(self.rows):
                base = i * k
                for j in range(m):
                    acc = zero
                    for t in range(k):
                        av = a[base + t]
                        if av:
                            bv = b[t * m + j]
                            if bv:
                                acc = acc + av * bv
                    out.append(acc)
            return QMatrix(self.rows, m, tuple(out))
        return QMatrix(self.rows, self.cols, tuple(_frac(other) * e for e in self.entries))

    def __rmul__(self, other: Scalar) -> QMatrix:
        return self * other

    def __pow__(self, k: int) -> QMatrix:
        if not self.is_square():
            raise DimensionMismatch("power of a non-square matrix")
        if k < 0:
            raise ValueError("negative power")
        result = QMatrix.identity(self.rows)
        for _ in range(k):
            result = result * self
        return result

    def apply(self, vec: Iterable[Scalar]) -> Vector:
        v = as_vector(vec)
        if len(v) != self.cols:
            raise DimensionMismatch(f"vector of length {len(v)} for {self.rows}x{self.cols}")
        return tuple(
            sum((self.entry(i, k) * v[k] for k in range(self.cols)), Fraction(0))
            for i in range(self.rows)
        )

    def transpose(self) -> QMatrix:
        return QMatrix(
            self.cols,
            self.rows,
            tuple(self.entry(i, j) for j in range(self.cols) for i in range(self.rows)),
        )

    def inverse(self) -> QMatrix:
        if not self.is_square():
            raise DimensionMismatch("inverse of a non-square matrix")
        n = self.rows
        aug = [list(self.row(i)) + [Fraction(1 if j == i else 0) for j in range(n)] for i in range(n)]
        pivots = _rref_in_place(aug)
        if pivots[:n] != list(range(n)):
            raise ValueError("matrix is singular")
        return QMatrix.from_rows([row[n:] for row in aug], cols=n)


def _rref_in_place(m: list[list[Fraction]]) -> list[int]:
    """Reduce to RREF with first-nonzero pivoting; returns pivot column indices."""
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        pivot_row = None
        for i in range(r, nrows):
            if m[i][c] != 0:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        m[r], m[pivot_row] = m[pivot_row], m[r]
        pv = m[r][c]
        if pv != 1:
            m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
    return pivots


def rref(m: QMatrix) -> tuple[QMatrix, tuple[int, ...]]:
    """Reduced row-echelon form and the pivot column indices."""
    if m.rows == 0 or m.cols == 0:
        return m, ()
    work = m.rows_list()
    pivots = _rref_in_place(work)
    return QMatrix.from_rows(work, cols=m.cols), tuple(pivots)


def rank(m: QMatrix) -> int:
    """Dimension of the column span."""
    return len(rref(m)[1])


@dataclass(frozen=True)
class Subspace:
    """A subspace of Q^ambient_dim; basis columns are linearly independent."""

    ambient_dim: int
    basis: QMatrix

    def __post_init__(self) -> None:
        if self.basis.rows != self.ambient_dim:
            raise ShapeMismatch(
                f"basis lives in Q^{self.basis.rows}, ambient is Q^{self.ambient_dim}"
            )
        if rank(self.basis) != self.basis.cols:
            raise ShapeMismatch("basis columns are dependent")

    @staticmethod
    def zero(ambient_dim: int) -> Subspace:
        return Subspace(ambient_dim, QMatrix.zero(ambient_dim, 0))

    @staticmethod
    def full(ambient_dim: int) -> Subspace:
        return Subspace(ambient_dim, QMatrix.identity(ambient_dim))

    @staticmethod
    def spanned_by(ambient_dim: int, vectors: Sequence[Sequence[Scalar]]) -> Subspace:
        """Span of the given vectors; keeps the first independent ones."""
        cols = [as_vector(v) for v in vectors]
        if any(len(c) != ambient_dim for c in cols):
            raise AmbientMismatch("spanning vector of wrong length")
        m = QMatrix.from_columns(cols, rows=ambient_dim)
        _, pivots = rref(m)
        keep = QMatrix.from_columns([m.col(j) for j in pivots], rows=ambient_dim)
        return Subspace(ambient_dim, keep)

    @property
    def dim(self) -> int:
        return self.basis.cols

    def contains(self, vec: Iterable[Scalar]) -> bool:
        v = as_vector(vec)
        if len(v) != self.ambient_dim:
            raise AmbientMismatch("vector of wrong length")
        return solve(self.basis, v) is not None

    def contains_subspace(self, other: Subspace) -> bool:
        if other.ambient_dim != self.ambient_dim:
            raise AmbientMismatch("subspaces of different ambient spaces")
        return all(self.contains(other.basis.col(j)) for j in range(other.dim))


def solve(a: QMatrix, b: Iterable[Scalar]) -> Vector | None:
    """One solution x of a*x = b, or None when inconsistent."""
    rhs = as_vector(b)
    if len(rhs) != a.rows:
        raise DimensionMismatch("right-hand side of wrong length")
    if a.cols == 0:
        return () if all(x == 0 for x in rhs) else None
    aug = [list(a.row(i)) + [rhs[i]] for i in range(a.rows)]
    pivots = _rref_in_place(aug)
    if a.cols in pivots:
        return None
    x = [Fraction(0)] * a.cols
    for r, c in enumerate(pivots):
        x[c] = aug[r][a.cols]
    return tuple(x)


def kernel_basis(m: QMatrix) -> Subspace:
    """Basis of {x : m*x = 0}; dimension is cols - rank by rank-nullity."""
    reduced, pivots = rref(m)
    free = [j for j in range(m.cols) if j not in pivots]
    vectors = []
    for f in free:
        v = [Fraction(0)] * m.cols
        v[f] = Fraction(1)
        for r, c in enumerate(pivots):
            v[c] = -reduced.entry(r, f)
        vectors.append(v)
    basis = QMatrix.from_columns(vectors, rows=m.cols)
    return Subspace(m.cols, basis)


def image_basis(m: QMatrix) -> Subspace:
    """Basis of the column span: the original columns at the pivot positions."""
    _, pivots = rref(m)
    basis = QMatrix.from_columns([m.col(j) for j in pivots], rows=m.rows)
    return Subspace(m.rows, basis)


def subspace_equal(s1: Subspace, s2: Subspace) -> bool:
    """True iff each basis vector of either lies in the span of the other."""
    if s1.ambient_dim != s2.ambient_dim:
        raise AmbientMismatch(
            f"ambient dims differ: {s1.ambient_dim} vs {s2.ambient_dim}"
        )
    if s1.dim != s2.dim:
        return False
    return s1.contains_subspace(s2)


def subspace_sum(s1: Subspace, s2: Subspace) -> Subspace:
    if s1.ambient_dim != s2.ambient_dim:
        raise AmbientMismatch("sum of subspaces of different ambient spaces")
    return Subspace.spanned_by(
        s1.ambient_dim, [s1.basis.col(j) for j in range(s1.dim)] + [s2.basis.col(j) for j in range(s2.dim)]
    )


def subspace_intersect(s1: Subspace, s2: Subspace) -> Subspace:
    """Intersection, computed from the kernel of the stacked basis matrix."""
    if s1.ambient_dim != s2.ambient_dim:
        raise AmbientMismatch("intersection of subspaces of different ambient spaces")
    n = s1.ambient_dim
    if s1.dim == 0 or s2.dim == 0:
        return Subspace.zero(n)
    # columns (x; y) with B1*x = B2*y; the intersection is B1*x.
    stacked = hstack(s1.basis, -1 * s2.basis)
    ker = kernel_basis(stacked)
    vectors = []
    for j in range(ker.dim):
        coeffs = ker.basis.col(j)[: s1.dim]
        vectors.append(s1.basis.apply(coeffs))
    return Subspace.spanned_by(n, vectors)


def hstack(*mats: QMatrix) -> QMatrix:
    if not mats:
        raise ShapeMismatch("hstack of nothing")
    nrows = mats[0].rows
    if any(m.rows != nrows for m in mats):
        raise ShapeMismatch("hstack with differing row counts")
    rows = [[e for m in mats for e in m.row(i)] for i in range(nrows)]
    return QMatrix.from_rows(rows, cols=sum(m.cols for m in mats))


def vstack(*mats: QMatrix) -> QMatrix:
    if not mats:
        raise ShapeMismatch("vstack of nothing")
    ncols = mats[0].cols
    if any(m.cols != ncols for m in mats):
        raise ShapeMismatch("vstack with differing column counts")
    entries = tuple(e for m in mats for e in m.entries)
    return QMatrix(sum(m.rows for m in mats), ncols, entries)


def is_exact_at(f: QMatrix, g: QMatrix) -> bool:
    """Exactness at the middle of f: X -> Y, g: Y -> Z, i.e. im f = ker g."""
    if f.rows != g.cols:
        raise DimensionMismatch(
            f"middle dimensions disagree: f lands in Q^{f.rows}, g leaves Q^{g.cols}"
        )
    return subspace_equal(image_basis(f), kernel_basis(g))


def block_assemble(
    blocks: Sequence[Sequence[QMatrix | None]],
    row_dims: Sequence[int],
    col_dims: Sequence[int],
) -> QMatrix:
    """Assemble a partitioned matrix from a grid of blocks; None means zero.

    Present blocks must agree exactly with the declared row/column
    partition; reading any quadrant back with :func:`block_extract`
    recovers the input block.
    """
    if len(blocks) != len(row_dims) or any(len(row) != len(col_dims) for row in blocks):
        raise ShapeMismatch("block grid does not match the declared partition")
    for bi, row in enumerate(blocks):
        for bj, blk in enumerate(row):
            if blk is None:
                continue
            if (blk.rows, blk.cols) != (row_dims[bi], col_dims[bj]):
                raise ShapeMismatch(
                    f"block ({bi},{bj}) is {blk.rows}x{blk.cols}, "
                    f"partition wants {row_dims[bi]}x{col_dims[bj]}"
                )
    total_rows = sum(row_dims)
    total_cols = sum(col_dims)
    row_offsets = [sum(row_dims[:i]) for i in range(len(row_dims))]
    col_offsets = [sum(col_dims[:j]) for j in range(len(col_dims))]
    grid = [[Fraction(0)] * total_cols for _ in range(total_rows)]
    for bi, row in enumerate(blocks):
        for bj, blk in enumerate(row):
            if blk is None:
                continue
            for i in range(blk.rows):
                for j in range(blk.cols):
                    grid[row_offsets[bi] + i][col_offsets[bj] + j] = blk.entry(i, j)
    return QMatrix.from_rows(grid, cols=total_cols)


def block_extract(
    m: QMatrix,
    row_dims: Sequence[int],
    col_dims: Sequence[int],
    i: int,
    j: int,
) -> QMatrix:
    """Read block (i, j) back out of a partitioned matrix."""
    if sum(row_dims) != m.rows or sum(col_dims) != m.cols:
        raise ShapeMismatch("partition does not cover the matrix")
    r0 = sum(row_dims[:i])
    c0 = sum(col_dims[:j])
    rows = [
        [m.entry(r0 + a, c0 + b) for b in range(col_dims[j])] for a in range(row_dims[i])
    ]
    return QMatrix.from_rows(rows, cols=col_dims[j])


def block_diag(*mats: QMatrix) -> QMatrix:
    """Block-diagonal sum; the empty sum is the 0x0 matrix."""
    n = len(mats)
    grid: list[list[QMatrix | None]] = [
        [mats[i] if i == j else None for j in range(n)] for i in range(n)
    ]
    return block_assemble(grid, [m.rows for m in mats], [m.cols for m in mats])


def serialize_matrix(m: QMatrix) -> str:
    """Row-major text form ``[a,b;c,d]``; the empty matrix is ``[]``."""
    if m.rows == 0 or m.cols == 0:
        return "[]"
    return "[" + ";".join(",".join(format_rational(x) for x in m.row(i)) for i in range(m.rows)) + "]"
