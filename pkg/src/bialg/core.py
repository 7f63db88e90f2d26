"""Structure-constant tensors, bundles, and the basic operations on them."""

import logging
from dataclasses import dataclass
from dataclasses import field as dataclass_field
from enum import Enum
from typing import Any, Iterable, Mapping, Optional, Sequence

from .linalg import LinearAlgebraError, determinant, inverse
from .scalars import RATIONALS, Field, FieldError, Scalar, format_scalar

logger = logging.getLogger(__name__)

Vector = tuple[Scalar, ...]
Matrix = tuple[tuple[Scalar, ...], ...]
Cube = tuple[tuple[tuple[Scalar, ...], ...], ...]

DEFAULT_MAX_DIMENSION = 8


class StructureError(Exception):
    """Raised when structure data is malformed or operands do not match."""

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(self.message)


def _dimension_limit() -> int:
    from .settings import get_settings

    try:
        return get_settings().arithmetic.max_dimension
    except Exception as e:
        logger.debug(f"Falling back to default dimension cap: {e}")
        return DEFAULT_MAX_DIMENSION


def _check_dim(dim: int) -> None:
    if dim < 1:
        raise StructureError(f"Dimension must be positive, got {dim}")
    limit = _dimension_limit()
    if dim > limit:
        raise StructureError(f"Dimension {dim} exceeds configured cap {limit}")


def _check_entries(values: Iterable[Any], fld: Field, what: str) -> None:
    for value in values:
        if not fld.contains(value):
            raise StructureError(f"{what} entry {value!r} is not in {fld}")


# Generic kernels. They only use +, * and truthiness, so they run on exact
# scalars as well as on sympy expressions (see axioms.export_system).


def mult_apply(c: Sequence[Any], x: Sequence[Any], y: Sequence[Any], zero: Any) -> list[Any]:
    """Σ_ij x_i y_j C_ij^k for a raw n×n×n array."""
    n = len(c)
    out = [zero] * n
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j, yj in enumerate(y):
            if not yj:
                continue
            weight = xi * yj
            row = c[i][j]
            for k in range(n):
                if row[k]:
                    out[k] = out[k] + weight * row[k]
    return out


def comult_apply(d: Sequence[Any], x: Sequence[Any], zero: Any) -> list[list[Any]]:
    """Σ_i x_i D_i^jk for a raw n×n×n array."""
    n = len(d)
    out = [[zero] * n for _ in range(n)]
    for i, xi in enumerate(x):
        if not xi:
            continue
        for j in range(n):
            for k in range(n):
                if d[i][j][k]:
                    out[j][k] = out[j][k] + xi * d[i][j][k]
    return out


def square_product(
    c: Sequence[Any], u: Sequence[Sequence[Any]], v: Sequence[Sequence[Any]], zero: Any
) -> list[list[Any]]:
    """(x⊗y)•(x′⊗y′) = μ(x⊗x′)⊗μ(y⊗y′), extended bilinearly."""
    n = len(c)
    out = [[zero] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            if not u[a][b]:
                continue
            for cc in range(n):
                for d in range(n):
                    if not v[cc][d]:
                        continue
                    weight = u[a][b] * v[cc][d]
                    left = c[a][cc]
                    right = c[b][d]
                    for k in range(n):
                        if not left[k]:
                            continue
                        for l in range(n):
                            if right[l]:
                                out[k][l] = out[k][l] + weight * left[k] * right[l]
    return out


def outer(x: Sequence[Any], y: Sequence[Any], zero: Any) -> list[list[Any]]:
    """Coefficients of x⊗y."""
    return [[xi * yj if xi and yj else zero for yj in y] for xi in x]


def map_apply(m: Sequence[Sequence[Any]], x: Sequence[Any], zero: Any) -> list[Any]:
    """Apply a matrix whose column j is the image of e_j."""
    n = len(m)
    out = [zero] * n
    for j, xj in enumerate(x):
        if not xj:
            continue
        for r in range(n):
            if m[r][j]:
                out[r] = out[r] + m[r][j] * xj
    return out


def basis_vector(dim: int, index: int, fld: Field = RATIONALS) -> Vector:
    """The basis vector e_index (1-based)."""
    if not 1 <= index <= dim:
        raise StructureError(f"Basis index {index} out of range 1..{dim}")
    return tuple(fld.one if k == index - 1 else fld.zero for k in range(dim))


def _freeze_cube(raw: Sequence[Sequence[Sequence[Scalar]]]) -> Cube:
    return tuple(tuple(tuple(v for v in col) for col in row) for row in raw)


def _check_cube(raw: Cube, what: str) -> int:
    n = len(raw)
    if n == 0 or any(len(row) != n or any(len(col) != n for col in row) for row in raw):
        raise StructureError(f"{what} array must be n×n×n")
    return n


@dataclass(frozen=True)
class MultTensor:
    """Multiplication μ(e_i⊗e_j) = Σ_k C_ij^k e_k, optionally with a unit vector."""

    c: Cube
    field: Field = RATIONALS
    unit: Optional[Vector] = None
    strict: bool = dataclass_field(default=True, compare=False, repr=False)

    def __post_init__(self) -> None:
        n = _check_cube(self.c, "Multiplication")
        _check_dim(n)
        _check_entries((v for row in self.c for col in row for v in col), self.field, "Multiplication")
        if self.unit is not None:
            if len(self.unit) != n:
                raise StructureError(f"Unit vector has length {len(self.unit)}, expected {n}")
            _check_entries(self.unit, self.field, "Unit")
            if self.strict and not self.satisfies_unit_law():
                raise StructureError("Unit vector is not a two-sided unit of the multiplication")

    @classmethod
    def from_products(
        cls,
        dim: int,
        products: Mapping[tuple[int, int], Mapping[int, object]],
        fld: Field = RATIONALS,
        unit_index: Optional[int] = 1,
        strict: bool = True,
    ) -> "MultTensor":
        """
        Build from 1-based products {(i, j): {k: coefficient}}.

        When unit_index is given, the unit products are filled in and need not
        be listed.
        """
        raw = [[[fld.zero] * dim for _ in range(dim)] for _ in range(dim)]
        if unit_index is not None:
            u = unit_index - 1
            for i in range(dim):
                raw[u][i][i] = fld.one
                raw[i][u][i] = fld.one
        for (i, j), image in products.items():
            row = [fld.zero] * dim
            for k, coefficient in image.items():
                row[k - 1] = fld(coefficient)
            raw[i - 1][j - 1] = row
        unit = basis_vector(dim, unit_index, fld) if unit_index is not None else None
        return cls(_freeze_cube(raw), fld, unit, strict)

    @classmethod
    def zero(cls, dim: int, fld: Field = RATIONALS) -> "MultTensor":
        """The zero multiplication (no unit)."""
        return cls(_freeze_cube([[[fld.zero] * dim for _ in range(dim)] for _ in range(dim)]), fld)

    @property
    def dim(self) -> int:
        return len(self.c)

    @property
    def unit_index(self) -> Optional[int]:
        """1-based index of the unit when it is a basis vector."""
        if self.unit is None:
            return None
        nonzero = [k for k, v in enumerate(self.unit) if v]
        if len(nonzero) == 1 and self.unit[nonzero[0]] == self.field.one:
            return nonzero[0] + 1
        return None

    def satisfies_unit_law(self) -> bool:
        """Check μ(u⊗x) = μ(x⊗u) = x on the basis."""
        if self.unit is None:
            return False
        zero = self.field.zero
        for i in range(self.dim):
            e = basis_vector(self.dim, i + 1, self.field)
            if tuple(mult_apply(self.c, self.unit, e, zero)) != e:
                return False
            if tuple(mult_apply(self.c, e, self.unit, zero)) != e:
                return False
        return True

    def with_unit(self, unit: Optional[Vector], strict: bool = True) -> "MultTensor":
        return MultTensor(self.c, self.field, unit, strict)

    def over(self, fld: Field) -> "MultTensor":
        """Reduce entrywise into another field (Q → F_p only)."""
        if fld == self.field:
            return self
        c = tuple(tuple(tuple(fld(v) for v in col) for col in row) for row in self.c)
        unit = tuple(fld(v) for v in self.unit) if self.unit is not None else None
        return MultTensor(c, fld, unit, self.strict)

    def is_commutative(self) -> bool:
        n = self.dim
        return all(self.c[i][j] == self.c[j][i] for i in range(n) for j in range(n))


@dataclass(frozen=True)
class ComultTensor:
    """Comultiplication Δ(e_i) = Σ D_i^jk e_j⊗e_k with an optional counit vector ξ."""

    d: Cube
    field: Field = RATIONALS
    counit: Optional[Vector] = None

    def __post_init__(self) -> None:
        n = _check_cube(self.d, "Comultiplication")
        _check_dim(n)
        _check_entries((v for row in self.d for col in row for v in col), self.field, "Comultiplication")
        if self.counit is not None:
            if len(self.counit) != n:
                raise StructureError(f"Counit has length {len(self.counit)}, expected {n}")
            _check_entries(self.counit, self.field, "Counit")

    @classmethod
    def from_images(
        cls,
        dim: int,
        images: Mapping[int, Mapping[tuple[int, int], object]],
        counit: Optional[Sequence[object]] = None,
        fld: Field = RATIONALS,
    ) -> "ComultTensor":
        """Build from 1-based images {i: {(j, k): coefficient}}; omitted rows are zero."""
        raw = [[[fld.zero] * dim for _ in range(dim)] for _ in range(dim)]
        for i, image in images.items():
            for (j, k), coefficient in image.items():
                raw[i - 1][j - 1][k - 1] = fld(coefficient)
        xi = tuple(fld(v) for v in counit) if counit is not None else None
        return cls(_freeze_cube(raw), fld, xi)

    @property
    def dim(self) -> int:
        return len(self.d)

    def over(self, fld: Field) -> "ComultTensor":
        if fld == self.field:
            return self
        d = tuple(tuple(tuple(fld(v) for v in col) for col in row) for row in self.d)
        counit = tuple(fld(v) for v in self.counit) if self.counit is not None else None
        return ComultTensor(d, fld, counit)

    def is_cocommutative(self) -> bool:
        n = self.dim
        return all(
            self.d[i][j][k] == self.d[i][k][j]
            for i in range(n)
            for j in range(n)
            for k in range(n)
        )


@dataclass(frozen=True)
class Tensor2Element:
    """An element of V⊗V: coeffs[j][k] is the coefficient of e_j⊗e_k."""

    coeffs: Matrix
    field: Field = RATIONALS

    def __post_init__(self) -> None:
        n = len(self.coeffs)
        if n == 0 or any(len(row) != n for row in self.coeffs):
            raise StructureError("Tensor2Element coefficients must be n×n")
        _check_entries((v for row in self.coeffs for v in row), self.field, "Tensor")

    @classmethod
    def from_terms(
        cls, dim: int, terms: Mapping[tuple[int, int], object], fld: Field = RATIONALS
    ) -> "Tensor2Element":
        """Build from 1-based terms {(j, k): coefficient}."""
        raw = [[fld.zero] * dim for _ in range(dim)]
        for (j, k), coefficient in terms.items():
            raw[j - 1][k - 1] = fld(coefficient)
        return cls(tuple(tuple(row) for row in raw), fld)

    @classmethod
    def simple(cls, x: Vector, y: Vector, fld: Field = RATIONALS) -> "Tensor2Element":
        """The pure tensor x⊗y."""
        return cls(tuple(tuple(row) for row in outer(x, y, fld.zero)), fld)

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __add__(self, other: "Tensor2Element") -> "Tensor2Element":
        _same(self, other)
        return Tensor2Element(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.coeffs, other.coeffs)),
            self.field,
        )

    def __sub__(self, other: "Tensor2Element") -> "Tensor2Element":
        _same(self, other)
        return Tensor2Element(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.coeffs, other.coeffs)),
            self.field,
        )

    def scaled(self, factor: Scalar) -> "Tensor2Element":
        return Tensor2Element(
            tuple(tuple(factor * a for a in row) for row in self.coeffs), self.field
        )

    def swapped(self) -> "Tensor2Element":
        """Apply the flip τ(x⊗y) = y⊗x."""
        n = self.dim
        return Tensor2Element(
            tuple(tuple(self.coeffs[k][j] for k in range(n)) for j in range(n)), self.field
        )

    def is_zero(self) -> bool:
        return not any(v for row in self.coeffs for v in row)

    def terms(self) -> list[tuple[int, int, Scalar]]:
        """Nonzero terms as 1-based (j, k, coefficient)."""
        return [
            (j + 1, k + 1, v)
            for j, row in enumerate(self.coeffs)
            for k, v in enumerate(row)
            if v
        ]

    def __str__(self) -> str:
        parts = [f"{format_scalar(v)}*e{j}⊗e{k}" for j, k, v in self.terms()]
        return " + ".join(parts) if parts else "0"


def _same(a: Any, b: Any) -> None:
    if a.dim != b.dim:
        raise StructureError(f"Dimension mismatch: {a.dim} vs {b.dim}")
    if a.field != b.field:
        raise StructureError(f"Field mismatch: {a.field} vs {b.field}")


@dataclass(frozen=True)
class LinearEndo:
    """Endomorphism of V as an n×n matrix; column j is the image of e_j."""

    m: Matrix
    field: Field = RATIONALS

    def __post_init__(self) -> None:
        n = len(self.m)
        if n == 0 or any(len(row) != n for row in self.m):
            raise StructureError("LinearEndo matrix must be n×n")
        _check_entries((v for row in self.m for v in row), self.field, "Endomorphism")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[object]], fld: Field = RATIONALS) -> "LinearEndo":
        return cls(tuple(tuple(fld(v) for v in row) for row in rows), fld)

    @classmethod
    def from_images(cls, images: Sequence[Sequence[object]], fld: Field = RATIONALS) -> "LinearEndo":
        """Build from the list of images f(e_1), ..., f(e_n)."""
        n = len(images)
        return cls(tuple(tuple(fld(images[j][r]) for j in range(n)) for r in range(n)), fld)

    @classmethod
    def identity(cls, dim: int, fld: Field = RATIONALS) -> "LinearEndo":
        return cls(tuple(basis_vector(dim, i + 1, fld) for i in range(dim)), fld)

    @classmethod
    def zero(cls, dim: int, fld: Field = RATIONALS) -> "LinearEndo":
        return cls(tuple(tuple(fld.zero for _ in range(dim)) for _ in range(dim)), fld)

    @classmethod
    def elementary(cls, dim: int, row: int, col: int, fld: Field = RATIONALS) -> "LinearEndo":
        """E_row,col: sends e_col to e_row and every other basis vector to 0 (1-based)."""
        return cls(
            tuple(
                tuple(fld.one if (r, c) == (row - 1, col - 1) else fld.zero for c in range(dim))
                for r in range(dim)
            ),
            fld,
        )

    @property
    def dim(self) -> int:
        return len(self.m)

    def apply(self, x: Sequence[Scalar]) -> Vector:
        if len(x) != self.dim:
            raise StructureError(f"Vector of length {len(x)} for endomorphism of dim {self.dim}")
        return tuple(map_apply(self.m, x, self.field.zero))

    def image(self, index: int) -> Vector:
        """f(e_index), 1-based."""
        return tuple(row[index - 1] for row in self.m)

    def compose(self, other: "LinearEndo") -> "LinearEndo":
        """self ∘ other."""
        _same(self, other)
        n = self.dim
        zero = self.field.zero
        rows = []
        for r in range(n):
            row = []
            for c in range(n):
                total = zero
                for k in range(n):
                    total = total + self.m[r][k] * other.m[k][c]
                row.append(total)
            rows.append(tuple(row))
        return LinearEndo(tuple(rows), self.field)

    def __add__(self, other: "LinearEndo") -> "LinearEndo":
        _same(self, other)
        return LinearEndo(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.m, other.m)), self.field
        )

    def __sub__(self, other: "LinearEndo") -> "LinearEndo":
        _same(self, other)
        return LinearEndo(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.m, other.m)), self.field
        )

    def scaled(self, factor: Scalar) -> "LinearEndo":
        return LinearEndo(tuple(tuple(factor * a for a in row) for row in self.m), self.field)

    def determinant(self) -> Scalar:
        return determinant(self.m, self.field)

    def is_invertible(self) -> bool:
        return bool(self.determinant())

    def inverse(self) -> "LinearEndo":
        try:
            rows = inverse(self.m, self.field)
        except LinearAlgebraError as e:
            raise StructureError(f"Endomorphism is not invertible: {e.message}") from e
        return LinearEndo(tuple(tuple(row) for row in rows), self.field)

    def is_zero(self) -> bool:
        return not any(v for row in self.m for v in row)

    def over(self, fld: Field) -> "LinearEndo":
        if fld == self.field:
            return self
        return LinearEndo(tuple(tuple(fld(v) for v in row) for row in self.m), fld)


class BundleKind(Enum):
    """Structure kinds a bundle can carry."""

    ALGEBRA = "algebra"
    COALGEBRA = "coalgebra"
    BIALGEBRA = "bialgebra"
    INFINITESIMAL = "infinitesimal"
    TWO_AS = "2as"
    TWO_B = "2b"
    TWO_TWO_B = "22b"


_MEMBER_COUNTS = {
    BundleKind.ALGEBRA: (1, 0),
    BundleKind.COALGEBRA: (0, 1),
    BundleKind.BIALGEBRA: (1, 1),
    BundleKind.INFINITESIMAL: (1, 1),
    BundleKind.TWO_AS: (2, 1),
    BundleKind.TWO_B: (2, 2),
    BundleKind.TWO_TWO_B: (2, 2),
}


@dataclass(frozen=True)
class Bundle:
    """A tagged collection of multiplications and comultiplications on one space."""

    kind: BundleKind
    mults: tuple[MultTensor, ...] = ()
    comults: tuple[ComultTensor, ...] = ()
    theta: Optional[Scalar] = None

    def __post_init__(self) -> None:
        expected = _MEMBER_COUNTS[self.kind]
        if (len(self.mults), len(self.comults)) != expected:
            raise StructureError(
                f"{self.kind.value} bundle needs {expected[0]} multiplication(s) and "
                f"{expected[1]} comultiplication(s), got {len(self.mults)} and {len(self.comults)}"
            )
        members: list[Any] = [*self.mults, *self.comults]
        first = members[0]
        for member in members[1:]:
            _same(first, member)
        units = {m.unit for m in self.mults}
        if len(units) > 1:
            raise StructureError("Multiplications of a bundle must share one unit")
        if self.kind is BundleKind.INFINITESIMAL:
            if self.theta is None:
                raise StructureError("Infinitesimal bundle needs theta")
            if not first.field.contains(self.theta):
                raise StructureError(f"theta {self.theta!r} is not in {first.field}")
        elif self.theta is not None:
            raise StructureError(f"theta only applies to infinitesimal bundles, not {self.kind.value}")

    @property
    def dim(self) -> int:
        return (self.mults or self.comults)[0].dim

    @property
    def field(self) -> Field:
        return (self.mults or self.comults)[0].field

    @property
    def unit(self) -> Optional[Vector]:
        return self.mults[0].unit if self.mults else None

    def over(self, fld: Field) -> "Bundle":
        """Reduce every member into another field (Q → F_p only)."""
        theta = fld(self.theta) if self.theta is not None else None
        return Bundle(
            self.kind,
            tuple(m.over(fld) for m in self.mults),
            tuple(c.over(fld) for c in self.comults),
            theta,
        )


def _check_vector(x: Sequence[Scalar], dim: int, fld: Field) -> None:
    if len(x) != dim:
        raise StructureError(f"Vector of length {len(x)} for dimension {dim}")
    for value in x:
        if not fld.contains(value):
            raise StructureError(f"Vector entry {value!r} is not in {fld}")


def evaluate_mult(t: MultTensor, x: Sequence[Scalar], y: Sequence[Scalar]) -> Vector:
    """μ(x⊗y) for coefficient vectors x and y."""
    _check_vector(x, t.dim, t.field)
    _check_vector(y, t.dim, t.field)
    return tuple(mult_apply(t.c, x, y, t.field.zero))


def evaluate_comult(t: ComultTensor, x: Sequence[Scalar]) -> Tensor2Element:
    """Δ(x) for a coefficient vector x."""
    _check_vector(x, t.dim, t.field)
    raw = comult_apply(t.d, x, t.field.zero)
    return Tensor2Element(tuple(tuple(row) for row in raw), t.field)


def tensor_square_product(t: MultTensor, u: Tensor2Element, v: Tensor2Element) -> Tensor2Element:
    """The product of V⊗V induced by μ on both legs."""
    _same(t, u)
    _same(t, v)
    raw = square_product(t.c, u.coeffs, v.coeffs, t.field.zero)
    return Tensor2Element(tuple(tuple(row) for row in raw), t.field)


def _transport_mult(t: MultTensor, f: LinearEndo, g: LinearEndo) -> MultTensor:
    n = t.dim
    zero = t.field.zero
    raw = [
        [map_apply(f.m, mult_apply(t.c, g.image(i + 1), g.image(j + 1), zero), zero) for j in range(n)]
        for i in range(n)
    ]
    unit = f.apply(t.unit) if t.unit is not None else None
    return MultTensor(_freeze_cube(raw), t.field, unit, t.strict)


def _push_tensor(f: LinearEndo, tensor: Sequence[Sequence[Scalar]], zero: Scalar) -> list[list[Scalar]]:
    n = f.dim
    out = [[zero] * n for _ in range(n)]
    for a in range(n):
        for b in range(n):
            value = tensor[a][b]
            if not value:
                continue
            for k in range(n):
                if not f.m[k][a]:
                    continue
                for l in range(n):
                    if f.m[l][b]:
                        out[k][l] = out[k][l] + f.m[k][a] * f.m[l][b] * value
    return out


def _transport_comult(t: ComultTensor, f: LinearEndo, g: LinearEndo) -> ComultTensor:
    zero = t.field.zero
    raw = [_push_tensor(f, comult_apply(t.d, g.image(i + 1), zero), zero) for i in range(t.dim)]
    counit = None
    if t.counit is not None:
        counit = tuple(
            sum((t.counit[a] * g.m[a][i] for a in range(t.dim)), zero) for i in range(t.dim)
        )
    return ComultTensor(_freeze_cube(raw), t.field, counit)


def transport(b: Bundle, f: LinearEndo) -> Bundle:
    """
    Move every structure of b along the invertible map f.

    μ′ = f∘μ∘(f⁻¹⊗f⁻¹), Δ′ = (f⊗f)∘Δ∘f⁻¹, ε′ = ε∘f⁻¹ and the unit becomes f(u).
    """
    _same(b, f)
    g = f.inverse()
    return Bundle(
        b.kind,
        tuple(_transport_mult(m, f, g) for m in b.mults),
        tuple(_transport_comult(c, f, g) for c in b.comults),
        b.theta,
    )


def op(b: Bundle) -> Bundle:
    """Replace every multiplication by its opposite."""
    mults = tuple(
        MultTensor(
            tuple(tuple(m.c[j][i] for j in range(m.dim)) for i in range(m.dim)),
            m.field,
            m.unit,
            m.strict,
        )
        for m in b.mults
    )
    return Bundle(b.kind, mults, b.comults, b.theta)


def cop(b: Bundle) -> Bundle:
    """Replace every comultiplication by τ∘Δ."""
    comults = tuple(
        ComultTensor(
            tuple(
                tuple(tuple(c.d[i][k][j] for k in range(c.dim)) for j in range(c.dim))
                for i in range(c.dim)
            ),
            c.field,
            c.counit,
        )
        for c in b.comults
    )
    return Bundle(b.kind, b.mults, comults, b.theta)


def op_cop(b: Bundle) -> Bundle:
    return cop(op(b))


def is_morphism(source: Bundle, target: Bundle, f: LinearEndo) -> bool:
    """Check that f intertwines every multiplication, comultiplication, counit and the unit."""
    if source.kind is not target.kind:
        return False
    _same(source, target)
    _same(source, f)
    zero = source.field.zero
    n = source.dim
    images = [f.image(i + 1) for i in range(n)]

    for m1, m2 in zip(source.mults, target.mults):
        if (m1.unit is None) != (m2.unit is None):
            return False
        if m1.unit is not None and m2.unit is not None and f.apply(m1.unit) != m2.unit:
            return False
        for i in range(n):
            for j in range(n):
                lhs = map_apply(f.m, m1.c[i][j], zero)
                rhs = mult_apply(m2.c, images[i], images[j], zero)
                if lhs != rhs:
                    return False

    for c1, c2 in zip(source.comults, target.comults):
        if (c1.counit is None) != (c2.counit is None):
            return False
        for i in range(n):
            if _push_tensor(f, c1.d[i], zero) != comult_apply(c2.d, images[i], zero):
                return False
            if c1.counit is not None and c2.counit is not None:
                pulled = sum((c2.counit[r] * images[i][r] for r in range(n)), zero)
                if pulled != c1.counit[i]:
                    return False
    return True


def check_same_field(*items: Any) -> Field:
    """Ensure all operands share one field and return it."""
    fields = {item.field for item in items}
    if len(fields) != 1:
        raise FieldError(f"Mixed fields: {sorted(str(f) for f in fields)}")
    return fields.pop()
