from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zzl.linalg import (
    AmbientMismatch,
    DimensionMismatch,
    QMatrix,
    ShapeMismatch,
    Subspace,
    block_assemble,
    block_extract,
    format_rational,
    image_basis,
    is_exact_at,
    kernel_basis,
    parse_rational,
    rank,
    serialize_matrix,
    solve,
    subspace_equal,
    subspace_intersect,
    subspace_sum,
)


def small_fractions():
    return st.fractions(min_value=-3, max_value=3, max_denominator=4)


@st.composite
def qmatrices(draw, max_dim=4, min_rows=0, min_cols=0):
    rows = draw(st.integers(min_rows, max_dim))
    cols = draw(st.integers(min_cols, max_dim))
    entries = draw(
        st.lists(small_fractions(), min_size=rows * cols, max_size=rows * cols)
    )
    return QMatrix(rows, cols, tuple(entries))


class TestRank:
    def test_identity(self):
        assert rank(QMatrix.identity(3)) == 3

    def test_proportional_rows(self):
        assert rank(QMatrix.from_rows([[1, 2], [2, 4]])) == 1

    def test_empty_domain(self):
        assert rank(QMatrix.zero(0, 5)) == 0
        assert rank(QMatrix.zero(5, 0)) == 0

    @settings(max_examples=60, deadline=None)
    @given(qmatrices())
    def test_rank_nullity(self, m):
        assert rank(m) + kernel_basis(m).dim == m.cols


class TestKernelImage:
    def test_kernel_of_identity(self):
        assert kernel_basis(QMatrix.identity(2)).dim == 0

    def test_kernel_of_zero(self):
        k = kernel_basis(QMatrix.zero(2, 2))
        assert k.dim == 2

    def test_kernel_line(self):
        m = QMatrix.from_rows([[1, 2], [2, 4]])
        k = kernel_basis(m)
        assert k.dim == 1
        assert k.contains([2, -1])
        assert m.apply(k.basis.col(0)) == (Fraction(0), Fraction(0))

    def test_image_identity_full(self):
        assert subspace_equal(image_basis(QMatrix.identity(3)), Subspace.full(3))

    def test_image_zero(self):
        assert image_basis(QMatrix.zero(3, 2)).dim == 0

    def test_image_single_column(self):
        s = image_basis(QMatrix.from_rows([[1], [2]]))
        assert s.dim == 1 and s.contains([1, 2])

    @settings(max_examples=60, deadline=None)
    @given(qmatrices())
    def test_kernel_vectors_annihilated(self, m):
        k = kernel_basis(m)
        for j in range(k.dim):
            assert all(x == 0 for x in m.apply(k.basis.col(j)))


class TestSubspaces:
    def test_scaling_is_equal(self):
        assert subspace_equal(
            Subspace.spanned_by(2, [[1, 0]]), Subspace.spanned_by(2, [[2, 0]])
        )

    def test_different_lines(self):
        assert not subspace_equal(
            Subspace.spanned_by(2, [[1, 0]]), Subspace.spanned_by(2, [[0, 1]])
        )

    def test_two_vectors_span_plane(self):
        assert subspace_equal(
            Subspace.spanned_by(2, [[1, 1], [1, -1]]), Subspace.full(2)
        )

    def test_ambient_mismatch(self):
        with pytest.raises(AmbientMismatch):
            subspace_equal(Subspace.zero(2), Subspace.zero(3))

    def test_sum_and_intersection(self):
        s1 = Subspace.spanned_by(3, [[1, 0, 0], [0, 1, 0]])
        s2 = Subspace.spanned_by(3, [[0, 1, 0], [0, 0, 1]])
        assert subspace_equal(subspace_sum(s1, s2), Subspace.full(3))
        meet = subspace_intersect(s1, s2)
        assert meet.dim == 1 and meet.contains([0, 1, 0])

    @settings(max_examples=40, deadline=None)
    @given(qmatrices(max_dim=3), qmatrices(max_dim=3))
    def test_equal_is_equivalence_on_images(self, m1, m2):
        s1 = image_basis(m1)
        assert subspace_equal(s1, s1)
        if m1.rows == m2.rows:
            s2 = image_basis(m2)
            assert subspace_equal(s1, s2) == subspace_equal(s2, s1)

    @settings(max_examples=40, deadline=None)
    @given(qmatrices(max_dim=3), st.integers(-3, 3), st.integers(-3, 3))
    def test_equal_is_transitive_along_rescalings(self, m, c1, c2):
        s = image_basis(m)
        if c1 == 0 or c2 == 0:
            return
        s1 = image_basis(c1 * m)
        s2 = image_basis((c1 * c2) * m)
        assert subspace_equal(s, s1) and subspace_equal(s1, s2)
        assert subspace_equal(s, s2)


class TestExactness:
    def test_zero_then_identity(self):
        assert is_exact_at(QMatrix.zero(1, 1), QMatrix.identity(1))

    def test_identity_then_zero_map_to_point(self):
        assert is_exact_at(QMatrix.identity(1), QMatrix.zero(0, 1))

    def test_zero_zero_not_exact(self):
        assert not is_exact_at(QMatrix.zero(1, 1), QMatrix.zero(1, 1))

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            is_exact_at(QMatrix.zero(2, 1), QMatrix.zero(1, 1))

    @settings(max_examples=40, deadline=None)
    @given(qmatrices(max_dim=3), qmatrices(max_dim=3))
    def test_exactness_implies_zero_composite(self, f, g):
        if f.rows != g.cols:
            return
        if is_exact_at(f, g):
            assert (g * f).is_zero()


class TestBlocks:
    def test_direct_placement(self):
        m = block_assemble(
            [[QMatrix.identity(1), QMatrix.from_rows([[1]])],
             [None, QMatrix.identity(1)]],
            [1, 1], [1, 1],
        )
        assert m == QMatrix.from_rows([[1, 1], [0, 1]])

    def test_all_absent_is_zero(self):
        assert block_assemble([[None, None], [None, None]], [1, 1], [1, 1]) == QMatrix.zero(2, 2)

    def test_odp_collapse_to_rank_one(self):
        # 0x0 beta with no coupling block and an identity quotient
        m = block_assemble(
            [[QMatrix.zero(0, 0), QMatrix.zero(0, 1)], [None, QMatrix.identity(1)]],
            [0, 1], [0, 1],
        )
        assert m == QMatrix.identity(1)

    def test_shape_mismatch(self):
        with pytest.raises(ShapeMismatch):
            block_assemble([[QMatrix.identity(2), None], [None, None]], [1, 1], [1, 1])

    @settings(max_examples=40, deadline=None)
    @given(qmatrices(max_dim=3), qmatrices(max_dim=3), qmatrices(max_dim=3), qmatrices(max_dim=3))
    def test_extract_recovers_blocks(self, a, b, c, d):
        row_dims = [a.rows, c.rows]
        col_dims = [a.cols, b.cols]
        if b.rows != a.rows or c.cols != a.cols or (d.rows, d.cols) != (c.rows, b.cols):
            return
        m = block_assemble([[a, b], [c, d]], row_dims, col_dims)
        assert block_extract(m, row_dims, col_dims, 0, 0) == a
        assert block_extract(m, row_dims, col_dims, 0, 1) == b
        assert block_extract(m, row_dims, col_dims, 1, 0) == c
        assert block_extract(m, row_dims, col_dims, 1, 1) == d


class TestArithmetic:
    def test_zero_dim_composition(self):
        m = QMatrix.zero(2, 0) * QMatrix.zero(0, 3)
        assert m == QMatrix.zero(2, 3)

    def test_inverse(self):
        m = QMatrix.from_rows([[1, 1], [0, 1]])
        assert m * m.inverse() == QMatrix.identity(2)

    def test_singular_inverse(self):
        with pytest.raises(ValueError):
            QMatrix.from_rows([[1, 1], [1, 1]]).inverse()

    def test_solve(self):
        m = QMatrix.from_rows([[1, 2], [0, 1]])
        x = solve(m, [3, 1])
        assert x is not None and m.apply(x) == (Fraction(3), Fraction(1))
        assert solve(QMatrix.zero(1, 1), [1]) is None


class TestSerialization:
    @pytest.mark.parametrize(
        "value,text",
        [
            (Fraction(1, 2), "1/2"),
            (Fraction(-2, 4), "-1/2"),
            (Fraction(5), "5"),
            (Fraction(0), "0"),
            (Fraction(-7), "-7"),
        ],
    )
    def test_rational_round_trip(self, value, text):
        assert format_rational(value) == text
        assert parse_rational(text) == value

    def test_matrix_text(self):
        m = QMatrix.from_rows([[Fraction(1, 2), 0], [-1, 3]])
        assert serialize_matrix(m) == "[1/2,0;-1,3]"
        assert serialize_matrix(QMatrix.zero(0, 3)) == "[]"
