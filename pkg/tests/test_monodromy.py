import random
from fractions import Fraction

import pytest

from generators import random_invertible, random_nilpotent_upper, random_skew_pairing_gram
from zzl.linalg import DimensionMismatch, QMatrix, subspace_equal
from zzl.monodromy import (
    NilpotentOperator,
    NotNilpotent,
    NotUnipotent,
    Pairing,
    check_weight_conditions,
    conjugate,
    jordan_nilpotent,
    nilpotent_log,
    pl_operator,
    pl_transform,
    unipotent_exp,
    weight_filtration,
)


SKEW2 = Pairing(QMatrix.from_rows([[0, 1], [-1, 0]]))


class TestPicardLefschetz:
    def test_skew_fixes_delta(self):
        # delta . delta = 0 for a skew pairing, so the reflection fixes delta
        delta = (Fraction(1), Fraction(2))
        assert pl_transform(delta, delta, SKEW2) == delta

    def test_pairing_one_adds_delta(self):
        alpha = (Fraction(0), Fraction(1))
        delta = (Fraction(1), Fraction(0))
        assert SKEW2.pair(alpha, delta) == -1
        beta = (Fraction(1), Fraction(0))
        # alpha . delta = 1 here
        assert SKEW2.pair(beta, (0, 1)) == 1
        assert pl_transform(beta, (0, 1), SKEW2) == (Fraction(1), Fraction(1))

    def test_pairing_zero_fixes(self):
        alpha = (Fraction(3), Fraction(0))
        delta = (Fraction(1), Fraction(0))
        assert SKEW2.pair(alpha, delta) == 0
        assert pl_transform(alpha, delta, SKEW2) == alpha

    def test_operator_matrix(self):
        assert pl_operator([1, 0], SKEW2) == QMatrix.from_rows([[1, -1], [0, 1]])

    def test_zero_delta_gives_identity(self):
        assert pl_operator([0, 0], SKEW2) == QMatrix.identity(2)

    def test_unipotence_for_skew(self):
        rng = random.Random(7)
        for _ in range(25):
            n = rng.randint(1, 5)
            q = Pairing(random_skew_pairing_gram(rng, n))
            assert q.is_skew
            delta = [Fraction(rng.randint(-3, 3)) for _ in range(n)]
            t = pl_operator(delta, q)
            assert ((t - QMatrix.identity(n)) ** 2).is_zero()

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            pl_transform([1], [1, 0], SKEW2)

    def test_skew_flag_is_checked(self):
        assert not Pairing(QMatrix.identity(2)).is_skew


class TestLogExp:
    def test_log_of_identity(self):
        assert nilpotent_log(QMatrix.identity(2)).matrix.is_zero()

    def test_single_jordan_block(self):
        t = QMatrix.from_rows([[1, 1], [0, 1]])
        assert nilpotent_log(t).matrix == QMatrix.from_rows([[0, 1], [0, 0]])

    def test_two_term_series(self):
        t = QMatrix.from_rows([[1, 1, 0], [0, 1, 1], [0, 0, 1]])
        expected = QMatrix.from_rows([[0, 1, Fraction(-1, 2)], [0, 0, 1], [0, 0, 0]])
        assert nilpotent_log(t).matrix == expected

    def test_exp_of_zero(self):
        assert unipotent_exp(NilpotentOperator(QMatrix.zero(3, 3))) == QMatrix.identity(3)

    def test_exp_single_block(self):
        n = NilpotentOperator(QMatrix.from_rows([[0, 1], [0, 0]]))
        assert unipotent_exp(n) == QMatrix.from_rows([[1, 1], [0, 1]])

    def test_round_trip_random(self):
        rng = random.Random(11)
        for _ in range(20):
            dim = rng.randint(1, 5)
            n = NilpotentOperator(random_nilpotent_upper(rng, dim))
            assert nilpotent_log(unipotent_exp(n)).matrix == n.matrix
            t = unipotent_exp(n)
            assert unipotent_exp(nilpotent_log(t)) == t

    def test_not_unipotent(self):
        with pytest.raises(NotUnipotent):
            nilpotent_log(2 * QMatrix.identity(2))

    def test_not_nilpotent(self):
        with pytest.raises(NotNilpotent):
            NilpotentOperator(QMatrix.identity(1))


class TestWeightFiltration:
    def test_zero_operator(self):
        w = weight_filtration(NilpotentOperator(QMatrix.zero(2, 2)), 3)
        assert w.step(2).dim == 0
        assert w.step(3).dim == 2

    def test_single_block_dim_two(self):
        w = weight_filtration(jordan_nilpotent([2]), 0)
        assert w.step(-2).dim == 0
        assert subspace_equal(w.step(-1), w.step(0))
        assert w.step(-1).contains([1, 0])
        assert w.step(1).dim == 2
        assert w.graded_dims() == {-1: 1, 1: 1}

    def test_blocks_one_and_three(self):
        w = weight_filtration(jordan_nilpotent([1, 3]), 0)
        assert {k: w.graded_dim(k) for k in range(-2, 3)} == {
            -2: 1, -1: 0, 0: 2, 1: 0, 2: 1,
        }
        # the size-1 block sits in weight 0: e1 is in W_0 but not W_{-1}
        assert w.step(0).contains([1, 0, 0, 0])
        assert not w.step(-1).contains([1, 0, 0, 0])

    def test_blocks_three_two_one(self):
        w = weight_filtration(jordan_nilpotent([3, 2, 1]), 0)
        assert {k: w.graded_dim(k) for k in range(-2, 3)} == {
            -2: 1, -1: 1, 0: 2, 1: 1, 2: 1,
        }

    def test_all_jordan_types_up_to_dim_six(self):
        for total, partitions in _partitions_by_total(6).items():
            for part in partitions:
                n = jordan_nilpotent(part)
                w = weight_filtration(n, 0)
                assert not check_weight_conditions(n, w), (part, total)
                expected = _expected_graded(part)
                assert w.graded_dims() == expected, part

    def test_conjugation_invariance(self):
        rng = random.Random(23)
        for part in ([2], [3, 1], [2, 2]):
            n = jordan_nilpotent(part)
            g = random_invertible(rng, n.dim)
            w = weight_filtration(n, 0)
            wg = weight_filtration(conjugate(n, g), 0)
            for level in range(-3, 4):
                moved = [
                    g.apply(w.step(level).basis.col(j))
                    for j in range(w.step(level).dim)
                ]
                from zzl.linalg import Subspace

                assert subspace_equal(
                    wg.step(level), Subspace.spanned_by(n.dim, moved)
                )

    def test_centered_off_zero(self):
        w = weight_filtration(jordan_nilpotent([2]), 5)
        assert w.graded_dims() == {4: 1, 6: 1}


def _partitions_by_total(n_max):
    def partitions(n, largest):
        if n == 0:
            yield ()
            return
        for k in range(min(n, largest), 0, -1):
            for rest in partitions(n - k, k):
                yield (k,) + rest

    return {n: list(partitions(n, n)) for n in range(1, n_max + 1)}


def _expected_graded(block_sizes):
    graded = {}
    for s in block_sizes:
        for a in range(s):
            weight = s - 1 - 2 * a
            graded[weight] = graded.get(weight, 0) + 1
    return graded
