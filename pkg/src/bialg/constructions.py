"""
Builders that adjoin a unit to a unital algebra and equip the result with
Kaplansky-type comultiplications, plus the 2-associative, 2- and
2-2-bialgebra bundles assembled from them.

Index layout of every output: the adjoined unit is e1, the old unit is e2 and
the remaining old basis vectors follow in their original order.
"""

import logging
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

from .axioms import CheckReport, check_algebra, check_bialgebra, check_bundle, check_infinitesimal
from .core import (
    Bundle,
    BundleKind,
    ComultTensor,
    MultTensor,
    basis_vector,
    cop,
    op,
)
from .scalars import RATIONALS, Field

logger = logging.getLogger(__name__)


class ConstructionError(Exception):
    """Raised when a builder receives an unusable input algebra."""

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(self.message)


class PostconditionError(Exception):
    """Raised when a builder's own output fails its verification."""

    def __init__(self, message: str, report: Optional[CheckReport] = None) -> None:
        self.message = message
        self.report = report
        super().__init__(self.message)


@dataclass(frozen=True)
class UnitalAlgebraInput:
    """A unital associative algebra whose unit is a basis vector."""

    t: MultTensor
    labels: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.t.unit is None or self.t.unit_index is None:
            raise ConstructionError("Input algebra must have a unit that is a basis vector")
        report = check_algebra(self.t)
        if not report.passed:
            raise ConstructionError(f"Input is not a unital associative algebra: {report.summary()}")
        if self.labels and len(self.labels) != self.t.dim:
            raise ConstructionError(f"Expected {self.t.dim} basis labels, got {len(self.labels)}")

    @property
    def dim(self) -> int:
        return self.t.dim

    @property
    def unit_index(self) -> int:
        index = self.t.unit_index
        assert index is not None
        return index

    @property
    def field(self) -> Field:
        return self.t.field


def one_dimensional(fld: Field = RATIONALS) -> UnitalAlgebraInput:
    """The ground field K·e as a 1-dimensional unital algebra."""
    return UnitalAlgebraInput(MultTensor.from_products(1, {}, fld))


def _layout(a: UnitalAlgebraInput) -> List[int]:
    """New 0-based position of every old basis vector."""
    old_unit = a.unit_index - 1
    others = [i for i in range(a.dim) if i != old_unit]
    position = [0] * a.dim
    position[old_unit] = 1
    for offset, i in enumerate(others):
        position[i] = offset + 2
    return position


def _extended_mult(a: UnitalAlgebraInput) -> MultTensor:
    fld = a.field
    n = a.dim + 1
    position = _layout(a)
    raw = [[[fld.zero] * n for _ in range(n)] for _ in range(n)]
    for i in range(n):
        raw[0][i][i] = fld.one
        raw[i][0][i] = fld.one
    for i in range(a.dim):
        for j in range(a.dim):
            for k in range(a.dim):
                raw[position[i]][position[j]][position[k]] = a.t.c[i][j][k]
    c = tuple(tuple(tuple(col) for col in row) for row in raw)
    return MultTensor(c, fld, basis_vector(n, 1, fld))


def _empty(n: int, fld: Field) -> List[List[List[object]]]:
    return [[[fld.zero] * n for _ in range(n)] for _ in range(n)]


def _freeze(raw: List[List[List[object]]], fld: Field) -> ComultTensor:
    n = len(raw)
    d = tuple(tuple(tuple(col) for col in row) for row in raw)
    return ComultTensor(d, fld, basis_vector(n, 1, fld))  # type: ignore[arg-type]


def _k1_comult(n: int, fld: Field) -> ComultTensor:
    # Δ(x) = x⊗e1 + e1⊗x − e2⊗x for x ≠ e1, Δ(e1) = e1⊗e1
    raw = _empty(n, fld)
    raw[0][0][0] = fld.one
    for x in range(1, n):
        raw[x][x][0] = raw[x][x][0] + fld.one
        raw[x][0][x] = raw[x][0][x] + fld.one
        raw[x][1][x] = raw[x][1][x] - fld.one
    return _freeze(raw, fld)


def _k2_comult(n: int, fld: Field) -> ComultTensor:
    # Δ(e2) = e2⊗e1 + e1⊗e2 − e2⊗e2, Δ(x) = (e1−e2)⊗x + x⊗(e1−e2) otherwise
    raw = _empty(n, fld)
    raw[0][0][0] = fld.one
    raw[1][1][0] = fld.one
    raw[1][0][1] = fld.one
    raw[1][1][1] = -fld.one
    for x in range(2, n):
        raw[x][0][x] = fld.one
        raw[x][1][x] = -fld.one
        raw[x][x][0] = fld.one
        raw[x][x][1] = -fld.one
    return _freeze(raw, fld)


def _should_verify(verify: Optional[bool]) -> bool:
    if verify is not None:
        return verify
    from .settings import get_settings

    return get_settings().checks.verify_constructions


def _ensure(name: str, checks: List[Tuple[str, Callable[[], CheckReport]]], verify: Optional[bool]) -> None:
    if not _should_verify(verify):
        return
    for label, run in checks:
        report = run()
        if not report.passed:
            logger.error(f"{name}: postcondition {label} failed: {report.summary()}")
            raise PostconditionError(f"{name} output fails {label}: {report.summary()}", report)
    logger.debug(f"{name}: postconditions verified")


def kaplansky_k1(a: UnitalAlgebraInput, verify: Optional[bool] = None) -> Tuple[MultTensor, ComultTensor]:
    """Adjoin a unit e1 and the comultiplication Δ(x) = x⊗e1 + e1⊗x − e2⊗x."""
    m = _extended_mult(a)
    c = _k1_comult(m.dim, a.field)
    _ensure(
        "kaplansky_k1",
        [
            ("bialgebra", lambda: check_bialgebra(m, c)),
            ("infinitesimal(1)", lambda: check_infinitesimal(m, c, theta=1)),
        ],
        verify,
    )
    return m, c


def kaplansky_k2(a: UnitalAlgebraInput, verify: Optional[bool] = None) -> Tuple[MultTensor, ComultTensor]:
    """
    Adjoin a unit e1 with the second Kaplansky comultiplication.

    The generic formula is applied on the chosen basis, so a different basis of
    the input through its unit can give a non-isomorphic coalgebra.
    """
    m = _extended_mult(a)
    c = _k2_comult(m.dim, a.field)
    _ensure("kaplansky_k2", [("bialgebra", lambda: check_bialgebra(m, c))], verify)
    return m, c


def _require_pair(a1: UnitalAlgebraInput, a2: UnitalAlgebraInput) -> None:
    if a1.dim != a2.dim:
        raise ConstructionError(f"Dimension mismatch: {a1.dim} vs {a2.dim}")
    if a1.unit_index != a2.unit_index:
        raise ConstructionError(f"Unit mismatch: e{a1.unit_index} vs e{a2.unit_index}")
    if a1.field != a2.field:
        raise ConstructionError(f"Field mismatch: {a1.field} vs {a2.field}")


def _verified_bundle(name: str, b: Bundle, verify: Optional[bool]) -> Bundle:
    _ensure(name, [(b.kind.value, lambda: check_bundle(b))], verify)
    return b


def build_2as(a: UnitalAlgebraInput, a2: UnitalAlgebraInput, verify: Optional[bool] = None) -> Bundle:
    """(μ̃, μ̃′, Δ1) with both extended multiplications sharing the K1 comultiplication."""
    _require_pair(a, a2)
    m1, c = kaplansky_k1(a, verify=False)
    m2 = _extended_mult(a2)
    return _verified_bundle("build_2as", Bundle(BundleKind.TWO_AS, (m1, m2), (c,)), verify)


def build_2b(
    a1: UnitalAlgebraInput, a2: UnitalAlgebraInput, verify: Optional[bool] = None
) -> Tuple[Bundle, Bundle]:
    """B1 = (μ̃1, μ̃2, Δ1, Δ2) and B2 = (μ̃1, μ̃2, Δ1^cop, Δ2)."""
    _require_pair(a1, a2)
    m1, k1 = kaplansky_k1(a1, verify=False)
    m2, k2 = kaplansky_k2(a2, verify=False)
    b1 = Bundle(BundleKind.TWO_B, (m1, m2), (k1, k2))
    flipped = cop(Bundle(BundleKind.COALGEBRA, (), (k1,))).comults[0]
    b2 = Bundle(BundleKind.TWO_B, (m1, m2), (flipped, k2))
    return _verified_bundle("build_2b", b1, verify), _verified_bundle("build_2b", b2, verify)


def build_22b(a1: UnitalAlgebraInput, a2: UnitalAlgebraInput, verify: Optional[bool] = None) -> Bundle:
    """(μ̃1, μ̃2, Δ1, Δ1) with the K1 comultiplication in both slots."""
    _require_pair(a1, a2)
    m1, c = kaplansky_k1(a1, verify=False)
    m2 = _extended_mult(a2)
    return _verified_bundle("build_22b", Bundle(BundleKind.TWO_TWO_B, (m1, m2), (c, c)), verify)


def opposite_2b(m: MultTensor, c: ComultTensor, verify: Optional[bool] = None) -> Bundle:
    """A bialgebra gives the 2-bialgebra (μ, μ^op, Δ, Δ^cop)."""
    base = Bundle(BundleKind.BIALGEBRA, (m,), (c,))
    m_op = op(base).mults[0]
    c_cop = cop(base).comults[0]
    return _verified_bundle("opposite_2b", Bundle(BundleKind.TWO_B, (m, m_op), (c, c_cop)), verify)


def diagonal_2b(m: MultTensor, c: ComultTensor, verify: Optional[bool] = None) -> Bundle:
    """A bialgebra repeated in both slots of a 2-bialgebra."""
    return _verified_bundle("diagonal_2b", Bundle(BundleKind.TWO_B, (m, m), (c, c)), verify)


def trivial_2as(m: MultTensor, c: ComultTensor, verify: Optional[bool] = None) -> Bundle:
    """(μ, μ, Δ) for a pair that is both a bialgebra and unital infinitesimal."""
    return _verified_bundle("trivial_2as", Bundle(BundleKind.TWO_AS, (m, m), (c,)), verify)
