"""Tests for exact linear algebra over Q and F_p."""

from fractions import Fraction

import pytest

from bialg.linalg import LinearAlgebraError, determinant, inverse, nullity, rank, rref, solve_affine
from bialg.scalars import RATIONALS, Field

F2 = Field.prime(2)


def q(rows):
    return [[RATIONALS(v) for v in row] for row in rows]


class TestRank:
    def test_rank_over_q(self) -> None:
        assert rank(q([[1, 2], [2, 4]]), RATIONALS) == 1
        assert rank(q([[1, 2], [3, 4]]), RATIONALS) == 2

    def test_rank_depends_on_characteristic(self) -> None:
        rows = [[1, 1], [1, -1]]
        assert rank(q(rows), RATIONALS) == 2
        assert rank([[F2(v) for v in row] for row in rows], F2) == 1

    def test_empty(self) -> None:
        assert rank([], RATIONALS) == 0
        assert nullity([], 3, RATIONALS) == 3

    def test_ragged(self) -> None:
        with pytest.raises(LinearAlgebraError):
            rank(q([[1, 2], [1]]), RATIONALS)


class TestDeterminantInverse:
    def test_determinant(self) -> None:
        assert determinant(q([[1, 2], [3, 4]]), RATIONALS) == Fraction(-2)

    def test_inverse(self) -> None:
        inv = inverse(q([[2, 0], [0, 4]]), RATIONALS)
        assert inv == [[Fraction(1, 2), Fraction(0)], [Fraction(0), Fraction(1, 4)]]

    def test_inverse_mod_p(self) -> None:
        f5 = Field.prime(5)
        inv = inverse([[f5(2)]], f5)
        assert inv == [[f5(3)]]

    def test_singular(self) -> None:
        with pytest.raises(LinearAlgebraError):
            inverse(q([[1, 1], [1, 1]]), RATIONALS)

    def test_not_square(self) -> None:
        with pytest.raises(LinearAlgebraError):
            determinant(q([[1, 2, 3], [4, 5, 6]]), RATIONALS)


class TestSolve:
    def test_rref_unit_pivots(self) -> None:
        reduced, pivots = rref(q([[2, 4], [1, 3]]), RATIONALS)
        assert pivots == (0, 1)
        assert reduced == q([[1, 0], [0, 1]])

    def test_unique_solution(self) -> None:
        result = solve_affine(q([[1, 1], [1, -1]]), q([[3, 1]])[0], 2, RATIONALS)
        assert result is not None
        particular, kernel = result
        assert particular == q([[2, 1]])[0]
        assert kernel == []

    def test_kernel(self) -> None:
        result = solve_affine(q([[1, 1, 0]]), [RATIONALS(1)], 3, RATIONALS)
        assert result is not None
        particular, kernel = result
        assert particular == q([[1, 0, 0]])[0]
        assert len(kernel) == 2
        for vector in kernel:
            assert vector[0] + vector[1] == 0

    def test_inconsistent(self) -> None:
        assert solve_affine(q([[1, 1], [1, 1]]), q([[0, 1]])[0], 2, RATIONALS) is None

    def test_no_equations(self) -> None:
        particular, kernel = solve_affine([], [], 2, F2)
        assert particular == [F2(0), F2(0)]
        assert kernel == [[F2(1), F2(0)], [F2(0), F2(1)]]
