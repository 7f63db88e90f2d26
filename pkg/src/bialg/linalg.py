"""Exact linear algebra over Q and F_p, delegated to sympy's DomainMatrix."""

import logging
from typing import Any, Optional, Sequence

from sympy import Rational
from sympy.polys.domains import GF, QQ
from sympy.polys.matrices import DomainMatrix

from .scalars import Field, Scalar

logger = logging.getLogger(__name__)

Rows = Sequence[Sequence[Scalar]]


class LinearAlgebraError(Exception):
    """Raised on shape errors or singular inputs."""

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(self.message)


def _domain(field: Field) -> Any:
    return QQ if field.is_rational else GF(field.characteristic)


def _to_domain_matrix(rows: Rows, field: Field) -> DomainMatrix:
    if not rows or not rows[0]:
        raise LinearAlgebraError("Empty matrix")
    width = len(rows[0])
    if any(len(row) != width for row in rows):
        raise LinearAlgebraError("Ragged matrix rows")
    domain = _domain(field)
    if field.is_rational:
        data = [
            [domain(int(v.numerator), int(v.denominator)) for v in row]  # type: ignore[union-attr]
            for row in rows
        ]
    else:
        data = [[domain(int(v)) for v in row] for row in rows]
    return DomainMatrix(data, (len(rows), width), domain)


def _from_sympy(value: Any, field: Field) -> Scalar:
    number = Rational(value)
    if field.is_rational:
        return field(int(number.p)) / field(int(number.q))
    return field(int(number.p))


def _to_rows(matrix: DomainMatrix, field: Field) -> list[list[Scalar]]:
    dense = matrix.to_Matrix()
    return [
        [_from_sympy(dense[r, c], field) for c in range(dense.cols)]
        for r in range(dense.rows)
    ]


def rank(rows: Rows, field: Field) -> int:
    """Rank of a matrix given as rows; an empty row list has rank 0."""
    if not rows or not rows[0]:
        return 0
    return int(_to_domain_matrix(rows, field).rank())


def nullity(rows: Rows, columns: int, field: Field) -> int:
    """Dimension of the kernel of a matrix with the given number of columns."""
    return columns - rank(rows, field)


def determinant(rows: Rows, field: Field) -> Scalar:
    """Determinant of a square matrix."""
    if len(rows) != len(rows[0]):
        raise LinearAlgebraError(f"Not square: {len(rows)}x{len(rows[0])}")
    matrix = _to_domain_matrix(rows, field)
    value = matrix.det()
    return _from_sympy(matrix.domain.to_sympy(value), field)


def inverse(rows: Rows, field: Field) -> list[list[Scalar]]:
    """Inverse of a square matrix; raises LinearAlgebraError when singular."""
    if not determinant(rows, field):
        raise LinearAlgebraError("Matrix is singular")
    return _to_rows(_to_domain_matrix(rows, field).inv(), field)


def rref(rows: Rows, field: Field) -> tuple[list[list[Scalar]], tuple[int, ...]]:
    """Reduced row echelon form with unit pivots, plus pivot columns."""
    reduced, pivots = _to_domain_matrix(rows, field).rref()
    result = _to_rows(reduced, field)
    for r, column in enumerate(pivots):
        lead = result[r][column]
        if lead != field.one:
            result[r] = [entry / lead for entry in result[r]]
    return result, tuple(int(c) for c in pivots)


def solve_affine(
    rows: Rows, rhs: Sequence[Scalar], columns: int, field: Field
) -> Optional[tuple[list[Scalar], list[list[Scalar]]]]:
    """
    Solve A x = b exactly.

    Returns:
        (particular solution, kernel basis) or None when inconsistent.
    """
    zero = field.zero
    if not rows:
        basis = [
            [field.one if c == k else zero for c in range(columns)]
            for k in range(columns)
        ]
        return [zero] * columns, basis

    augmented = [list(row) + [value] for row, value in zip(rows, rhs)]
    reduced, pivots = rref(augmented, field)
    if columns in pivots:
        return None

    particular = [zero] * columns
    for r, column in enumerate(pivots):
        particular[column] = reduced[r][columns]

    free = [c for c in range(columns) if c not in pivots]
    basis = []
    for column in free:
        vector = [zero] * columns
        vector[column] = field.one
        for r, pivot in enumerate(pivots):
            vector[pivot] = -reduced[r][column]
        basis.append(vector)
    return particular, basis
