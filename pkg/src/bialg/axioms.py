"""
Residual-based verification of the structure axioms and export of the
corresponding polynomial systems.

Every axiom is written once, as a generator of component residuals over raw
structure-constant arrays. The checkers run those generators on exact scalars
and keep the nonzero components; the exporter runs the same generators on
sympy symbols and prints one polynomial per component.
"""

import logging
import re
from dataclasses import dataclass
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import sympy

from .core import (
    Bundle,
    BundleKind,
    ComultTensor,
    MultTensor,
    StructureError,
    comult_apply,
    mult_apply,
    outer,
    square_product,
)
from .scalars import Field, FieldError, Scalar, format_scalar

logger = logging.getLogger(__name__)

Component = Tuple[str, Tuple[int, ...], Any]

ASSOC = "assoc"
UNIT = "unit"
COASSOC = "coassoc"
COUNIT_LEFT = "counit_left"
COUNIT_RIGHT = "counit_right"
COMPAT_MULT = "compat_mult"
COMPAT_UNIT_IMAGE = "compat_unit_image"
COMPAT_COUNIT = "compat_counit"
PRELIE = "prelie"
ANTISYMMETRY = "antisymmetry"
JACOBI = "jacobi"


def infinitesimal_label(theta: Any) -> str:
    return f"infinitesimal({theta})"


@dataclass(frozen=True)
class Residual:
    """One violated component equation."""

    axiom: str
    index: Tuple[int, ...]
    value: Scalar
    scope: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return {
            "scope": self.scope,
            "axiom": self.axiom,
            "index": list(self.index),
            "value": format_scalar(self.value),
        }


@dataclass(frozen=True)
class CheckReport:
    """Outcome of a check: every violated component, exactly."""

    residuals: Tuple[Residual, ...] = ()
    precondition: Optional[str] = None

    @property
    def passed(self) -> bool:
        return not self.residuals

    def axioms(self) -> set[str]:
        """Labels of the violated families."""
        return {r.axiom for r in self.residuals}

    def scoped(self, scope: str) -> "CheckReport":
        """Prefix every residual with a sub-check scope."""
        residuals = tuple(
            Residual(r.axiom, r.index, r.value, f"{scope}/{r.scope}" if r.scope else scope)
            for r in self.residuals
        )
        precondition = f"{scope}: {self.precondition}" if self.precondition else None
        return CheckReport(residuals, precondition)

    @classmethod
    def merge(cls, reports: Sequence["CheckReport"]) -> "CheckReport":
        residuals = tuple(r for report in reports for r in report.residuals)
        preconditions = [report.precondition for report in reports if report.precondition]
        return cls(residuals, "; ".join(preconditions) if preconditions else None)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "passed": self.passed,
            "precondition": self.precondition,
            "residuals": [r.to_dict() for r in self.residuals],
        }

    def summary(self) -> str:
        if self.passed:
            return "passed"
        families = ", ".join(sorted(self.axioms()))
        head = f"failed ({len(self.residuals)} residuals: {families})"
        if self.precondition:
            head += f"; precondition failed: {self.precondition}"
        return head


# Component generators over raw arrays. Indices are reported 1-based.


def _delta(i: int, j: int, zero: Any, one: Any) -> Any:
    return one if i == j else zero


def associativity_components(c: Sequence[Any], zero: Any) -> Iterator[Component]:
    """(e_i e_j) e_k − e_i (e_j e_k), coefficient of e_s."""
    n = len(c)
    for i in range(n):
        for j in range(n):
            for k in range(n):
                lhs = [zero] * n
                rhs = [zero] * n
                for l in range(n):
                    if c[i][j][l]:
                        for s in range(n):
                            if c[l][k][s]:
                                lhs[s] = lhs[s] + c[i][j][l] * c[l][k][s]
                    if c[j][k][l]:
                        for s in range(n):
                            if c[i][l][s]:
                                rhs[s] = rhs[s] + c[j][k][l] * c[i][l][s]
                for s in range(n):
                    yield ASSOC, (i + 1, j + 1, k + 1, s + 1), lhs[s] - rhs[s]


def unit_components(c: Sequence[Any], unit: Sequence[Any], zero: Any, one: Any) -> Iterator[Component]:
    """μ(u⊗e_i) − e_i as (1, i, j) and μ(e_i⊗u) − e_i as (2, i, j)."""
    n = len(c)
    for side in (1, 2):
        for i in range(n):
            e = [_delta(i, k, zero, one) for k in range(n)]
            image = mult_apply(c, unit, e, zero) if side == 1 else mult_apply(c, e, unit, zero)
            for j in range(n):
                yield UNIT, (side, i + 1, j + 1), image[j] - e[j]


def coassociativity_components(d: Sequence[Any], zero: Any) -> Iterator[Component]:
    """(Δ⊗id)Δ(e_s) − (id⊗Δ)Δ(e_s), coefficient of e_i⊗e_j⊗e_k."""
    n = len(d)
    for s in range(n):
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    value = zero
                    for l in range(n):
                        if d[s][l][k] and d[l][i][j]:
                            value = value + d[s][l][k] * d[l][i][j]
                        if d[s][i][l] and d[l][j][k]:
                            value = value - d[s][i][l] * d[l][j][k]
                    yield COASSOC, (s + 1, i + 1, j + 1, k + 1), value


def counit_components(d: Sequence[Any], xi: Sequence[Any], zero: Any, one: Any) -> Iterator[Component]:
    """(ε⊗id)Δ(e_i) − e_i as (i, k) and (id⊗ε)Δ(e_i) − e_i as (i, j)."""
    n = len(d)
    for i in range(n):
        for k in range(n):
            value = zero
            for j in range(n):
                if xi[j] and d[i][j][k]:
                    value = value + xi[j] * d[i][j][k]
            yield COUNIT_LEFT, (i + 1, k + 1), value - _delta(i, k, zero, one)
    for i in range(n):
        for j in range(n):
            value = zero
            for k in range(n):
                if xi[k] and d[i][j][k]:
                    value = value + xi[k] * d[i][j][k]
            yield COUNIT_RIGHT, (i + 1, j + 1), value - _delta(i, j, zero, one)


def compat_mult_components(c: Sequence[Any], d: Sequence[Any], zero: Any) -> Iterator[Component]:
    """Δ(e_i e_j) − Δ(e_i)•Δ(e_j), coefficient of e_k⊗e_l."""
    n = len(c)
    for i in range(n):
        for j in range(n):
            lhs = comult_apply(d, c[i][j], zero)
            rhs = square_product(c, d[i], d[j], zero)
            for k in range(n):
                for l in range(n):
                    yield COMPAT_MULT, (i + 1, j + 1, k + 1, l + 1), lhs[k][l] - rhs[k][l]


def compat_counit_components(
    c: Sequence[Any], xi: Sequence[Any], unit: Sequence[Any], zero: Any, one: Any
) -> Iterator[Component]:
    """ε(e_i e_j) − ε(e_i)ε(e_j) as (i, j), then ε(u) − 1 as ()."""
    n = len(c)
    for i in range(n):
        for j in range(n):
            value = zero
            for s in range(n):
                if c[i][j][s] and xi[s]:
                    value = value + c[i][j][s] * xi[s]
            yield COMPAT_COUNIT, (i + 1, j + 1), value - xi[i] * xi[j]
    value = zero
    for a in range(n):
        if unit[a] and xi[a]:
            value = value + unit[a] * xi[a]
    yield COMPAT_COUNIT, (), value - one


def unit_image_components(d: Sequence[Any], unit: Sequence[Any], zero: Any) -> Iterator[Component]:
    """Δ(u) − u⊗u, coefficient of e_k⊗e_l."""
    n = len(d)
    image = comult_apply(d, unit, zero)
    square = outer(unit, unit, zero)
    for k in range(n):
        for l in range(n):
            yield COMPAT_UNIT_IMAGE, (k + 1, l + 1), image[k][l] - square[k][l]


def infinitesimal_components(
    c: Sequence[Any], d: Sequence[Any], unit: Sequence[Any], theta: Any, zero: Any, label: str
) -> Iterator[Component]:
    """Δ(e_i e_j) − (e_i⊗u)•Δ(e_j) − Δ(e_i)•(u⊗e_j) + θ·e_i⊗e_j."""
    n = len(c)
    for i in range(n):
        for j in range(n):
            lhs = comult_apply(d, c[i][j], zero)
            left_factor = [[zero] * n for _ in range(n)]
            right_factor = [[zero] * n for _ in range(n)]
            for a in range(n):
                left_factor[i][a] = unit[a]
                right_factor[a][j] = unit[a]
            first = square_product(c, left_factor, d[j], zero)
            second = square_product(c, d[i], right_factor, zero)
            for k in range(n):
                for l in range(n):
                    value = lhs[k][l] - first[k][l] - second[k][l]
                    if k == i and l == j:
                        value = value + theta
                    yield label, (i + 1, j + 1, k + 1, l + 1), value


# Checkers on exact tensors.


def _nonzero(components: Iterator[Component]) -> List[Residual]:
    return [Residual(label, index, value) for label, index, value in components if value]


def _require_same(*items: Any) -> Field:
    dims = {item.dim for item in items}
    if len(dims) != 1:
        raise StructureError(f"Dimension mismatch: {sorted(dims)}")
    fields = {item.field for item in items}
    if len(fields) != 1:
        raise FieldError(f"Field mismatch: {sorted(str(f) for f in fields)}")
    return fields.pop()


def _resolve_unit(t: MultTensor, unit: Optional[Sequence[Scalar]]) -> Tuple[Scalar, ...]:
    vector = tuple(unit) if unit is not None else t.unit
    if vector is None:
        raise StructureError("No unit vector given and the multiplication carries none")
    if len(vector) != t.dim:
        raise StructureError(f"Unit vector has length {len(vector)}, expected {t.dim}")
    return tuple(t.field(v) for v in vector)


def check_algebra(t: MultTensor, unit: Optional[Sequence[Scalar]] = None) -> CheckReport:
    """Associativity and two-sided unit residuals against the given unit vector."""
    u = _resolve_unit(t, unit)
    zero, one = t.field.zero, t.field.one
    residuals = _nonzero(associativity_components(t.c, zero))
    residuals += _nonzero(unit_components(t.c, u, zero, one))
    logger.debug(f"check_algebra: {len(residuals)} residuals")
    return CheckReport(tuple(residuals), "algebra" if residuals else None)


def check_coalgebra(t: ComultTensor, counital: bool = True) -> CheckReport:
    """Coassociativity and, when counital, both counit residuals."""
    zero, one = t.field.zero, t.field.one
    residuals = _nonzero(coassociativity_components(t.d, zero))
    if counital:
        if t.counit is None:
            raise StructureError("Comultiplication carries no counit")
        residuals += _nonzero(counit_components(t.d, t.counit, zero, one))
    logger.debug(f"check_coalgebra: {len(residuals)} residuals")
    return CheckReport(tuple(residuals), "coalgebra" if residuals else None)


def _prechecks(
    m: MultTensor, c: ComultTensor, unit: Tuple[Scalar, ...], counital: bool
) -> Optional[CheckReport]:
    algebra = check_algebra(m, unit)
    coalgebra = check_coalgebra(c, counital)
    failing = [name for name, report in (("algebra", algebra), ("coalgebra", coalgebra)) if not report.passed]
    if not failing:
        return None
    return CheckReport(algebra.residuals + coalgebra.residuals, "+".join(failing))


def check_bialgebra(m: MultTensor, c: ComultTensor, unit: Optional[Sequence[Scalar]] = None) -> CheckReport:
    """Δ and ε are algebra morphisms; prechecks first, compatibility only if they pass."""
    fld = _require_same(m, c)
    u = _resolve_unit(m, unit)
    failed = _prechecks(m, c, u, counital=True)
    if failed is not None:
        return failed
    assert c.counit is not None
    zero, one = fld.zero, fld.one
    residuals = _nonzero(compat_mult_components(m.c, c.d, zero))
    residuals += _nonzero(compat_counit_components(m.c, c.counit, u, zero, one))
    residuals += _nonzero(unit_image_components(c.d, u, zero))
    return CheckReport(tuple(residuals))


def check_infinitesimal(
    m: MultTensor,
    c: ComultTensor,
    unit: Optional[Sequence[Scalar]] = None,
    theta: object = 1,
) -> CheckReport:
    """
    The θ-infinitesimal relation Δ(xy) = (x⊗1)•Δ(y) + Δ(x)•(1⊗y) − θ x⊗y.

    Counit laws are part of the precheck only for θ = 1.
    """
    fld = _require_same(m, c)
    u = _resolve_unit(m, unit)
    th = fld(theta)
    counital = th == fld.one
    failed = _prechecks(m, c, u, counital=counital)
    if failed is not None:
        return failed
    zero = fld.zero
    label = infinitesimal_label(format_scalar(th))
    residuals = _nonzero(infinitesimal_components(m.c, c.d, u, th, zero, label))
    if counital:
        residuals += _nonzero(unit_image_components(c.d, u, zero))
    return CheckReport(tuple(residuals))


# Bundle plans: which sub-checks a kind consists of. Shared by check_bundle and
# export_system.


@dataclass(frozen=True)
class SubCheck:
    """One (multiplication, comultiplication) condition inside a bundle."""

    check: str  # "algebra", "coalgebra", "bialgebra" or "infinitesimal"
    mult: Optional[int]
    comult: Optional[int]

    @property
    def scope(self) -> str:
        parts = []
        if self.mult is not None:
            parts.append(f"mu{self.mult + 1}")
        if self.comult is not None:
            parts.append(f"delta{self.comult + 1}")
        return f"{self.check}({','.join(parts)})"


_PLANS: Dict[BundleKind, Tuple[SubCheck, ...]] = {
    BundleKind.ALGEBRA: (SubCheck("algebra", 0, None),),
    BundleKind.COALGEBRA: (SubCheck("coalgebra", None, 0),),
    BundleKind.BIALGEBRA: (SubCheck("bialgebra", 0, 0),),
    BundleKind.INFINITESIMAL: (SubCheck("infinitesimal", 0, 0),),
    BundleKind.TWO_AS: (SubCheck("bialgebra", 0, 0), SubCheck("infinitesimal", 1, 0)),
    BundleKind.TWO_B: (
        SubCheck("bialgebra", 0, 0),
        SubCheck("bialgebra", 0, 1),
        SubCheck("bialgebra", 1, 0),
        SubCheck("bialgebra", 1, 1),
    ),
    BundleKind.TWO_TWO_B: (
        SubCheck("bialgebra", 0, 0),
        SubCheck("bialgebra", 1, 1),
        SubCheck("infinitesimal", 0, 1),
        SubCheck("infinitesimal", 1, 0),
    ),
}


def bundle_plan(kind: BundleKind) -> Tuple[SubCheck, ...]:
    return _PLANS[kind]


def bundle_subchecks(b: Bundle) -> List[SubCheck]:
    """The plan for b's kind, with sub-checks on identical data collapsed."""
    seen = set()
    result = []
    for sub in bundle_plan(b.kind):
        key = (
            sub.check,
            b.mults[sub.mult] if sub.mult is not None else None,
            b.comults[sub.comult] if sub.comult is not None else None,
        )
        if key in seen:
            continue
        seen.add(key)
        result.append(sub)
    return result


def check_bundle(b: Bundle) -> CheckReport:
    """Run every sub-check of the bundle's kind and concatenate the labelled reports."""
    reports = []
    for sub in bundle_subchecks(b):
        if sub.check == "algebra":
            assert sub.mult is not None
            report = check_algebra(b.mults[sub.mult])
        elif sub.check == "coalgebra":
            assert sub.comult is not None
            comult = b.comults[sub.comult]
            report = check_coalgebra(comult, counital=comult.counit is not None)
        elif sub.check == "bialgebra":
            assert sub.mult is not None and sub.comult is not None
            report = check_bialgebra(b.mults[sub.mult], b.comults[sub.comult])
        else:
            assert sub.mult is not None and sub.comult is not None
            theta = b.theta if b.kind is BundleKind.INFINITESIMAL else 1
            report = check_infinitesimal(b.mults[sub.mult], b.comults[sub.comult], theta=theta)
        reports.append(report.scoped(sub.scope))
    merged = CheckReport.merge(reports)
    logger.debug(f"check_bundle({b.kind.value}): {merged.summary()}")
    return merged


# Polynomial export.

_MULT_NAMES = ("C", "Ct")
_COMULT_NAMES = ("D", "Dt")
_COUNIT_NAMES = ("xi", "xit")

_EXPORT_KINDS = {
    "2as": BundleKind.TWO_AS,
    "2b": BundleKind.TWO_B,
    "22b": BundleKind.TWO_TWO_B,
}


def _symbols_cube(name: str, n: int) -> List[List[List[sympy.Symbol]]]:
    return [
        [[sympy.Symbol(f"{name}[{i + 1},{j + 1},{k + 1}]") for k in range(n)] for j in range(n)]
        for i in range(n)
    ]


def _symbols_vector(name: str, n: int) -> List[sympy.Symbol]:
    return [sympy.Symbol(f"{name}[{i + 1}]") for i in range(n)]


def _format_polynomial(expr: Any, gens: Sequence[sympy.Symbol]) -> str:
    expr = sympy.expand(expr)
    if expr == 0:
        return "0"
    poly = sympy.Poly(expr, *gens)
    terms = []
    for monom, coeff in poly.terms():
        factors = [str(coeff)]
        for gen, power in zip(gens, monom):
            factors.extend([gen.name] * power)
        terms.append("*".join(factors))
    return " + ".join(terms)


def _member_components(
    cubes: Dict[str, Any], mult_count: int, comult_count: int, n: int, zero: Any, one: Any
) -> Iterator[Tuple[str, Component]]:
    """Each multiplication and comultiplication once, whatever the number of sub-checks using it."""
    unit = [one] + [zero] * (n - 1)
    for index in range(mult_count):
        c = cubes[_MULT_NAMES[index]]
        scope = f"mu{index + 1}"
        for component in associativity_components(c, zero):
            yield scope, component
        for component in unit_components(c, unit, zero, one):
            yield scope, component
    for index in range(comult_count):
        d, xi = cubes[_COMULT_NAMES[index]], cubes[_COUNIT_NAMES[index]]
        scope = f"delta{index + 1}"
        for component in coassociativity_components(d, zero):
            yield scope, component
        for component in counit_components(d, xi, zero, one):
            yield scope, component


def _compat_components(
    sub: SubCheck, cubes: Dict[str, Any], n: int, zero: Any, one: Any
) -> Iterator[Component]:
    assert sub.mult is not None and sub.comult is not None
    unit = [one] + [zero] * (n - 1)
    c = cubes[_MULT_NAMES[sub.mult]]
    d = cubes[_COMULT_NAMES[sub.comult]]
    xi = cubes[_COUNIT_NAMES[sub.comult]]
    if sub.check == "bialgebra":
        yield from compat_mult_components(c, d, zero)
        yield from compat_counit_components(c, xi, unit, zero, one)
        yield from unit_image_components(d, unit, zero)
    else:
        yield from infinitesimal_components(c, d, unit, one, zero, infinitesimal_label(1))
        yield from unit_image_components(d, unit, zero)


def export_system(n: int, kind: object) -> str:
    """
    Emit the polynomial system of a bundle kind in dimension n with unit e1.

    One polynomial per component equation. Member axioms come first, once per
    multiplication and comultiplication, then the compatibility families of each
    sub-check.
    Terms are written coef*Var[...]*Var[...] and joined by " + ".
    """
    if n < 1:
        raise StructureError(f"Dimension must be positive, got {n}")
    bundle_kind = kind if isinstance(kind, BundleKind) else _EXPORT_KINDS.get(str(kind).lower())
    if bundle_kind not in _EXPORT_KINDS.values():
        raise StructureError(f"Unsupported kind for export: {kind}")
    assert isinstance(bundle_kind, BundleKind)

    plan = bundle_plan(bundle_kind)
    mult_count = max(s.mult for s in plan if s.mult is not None) + 1
    comult_count = max(s.comult for s in plan if s.comult is not None) + 1

    cubes: Dict[str, Any] = {}
    gens: List[sympy.Symbol] = []
    for name in _MULT_NAMES[:mult_count]:
        cubes[name] = _symbols_cube(name, n)
        gens.extend(s for plane in cubes[name] for row in plane for s in row)
    for index in range(comult_count):
        cube_name, vector_name = _COMULT_NAMES[index], _COUNIT_NAMES[index]
        cubes[cube_name] = _symbols_cube(cube_name, n)
        cubes[vector_name] = _symbols_vector(vector_name, n)
        gens.extend(s for plane in cubes[cube_name] for row in plane for s in row)
        gens.extend(cubes[vector_name])

    zero, one = sympy.Integer(0), sympy.Integer(1)
    lines = [
        f"# bialg polynomial system: kind={bundle_kind.value} dim={n} unit=e1",
        f"# variables: {', '.join(sorted({g.name.split('[')[0] for g in gens}))}",
    ]
    blocks: List[Tuple[str, Component]] = list(_member_components(cubes, mult_count, comult_count, n, zero, one))
    for sub in plan:
        blocks.extend((sub.scope, component) for component in _compat_components(sub, cubes, n, zero, one))

    heading: Optional[Tuple[str, str]] = None
    for scope, (label, _, value) in blocks:
        if (scope, label) != heading:
            heading = (scope, label)
            lines.append(f"# {scope} {label}")
        lines.append(_format_polynomial(value, gens))
    logger.info(f"Exported {len(blocks)} polynomials for {bundle_kind.value} in dimension {n}")
    return "\n".join(lines) + "\n"


_FACTOR = re.compile(r"^([A-Za-z]+)\[(\d+(?:,\d+)*)\]$")


def system_values(b: Bundle) -> Dict[str, Scalar]:
    """Variable assignment for a bundle, keyed by exported variable names."""
    values: Dict[str, Scalar] = {}
    n = b.dim
    for name, m in zip(_MULT_NAMES, b.mults):
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    values[f"{name}[{i + 1},{j + 1},{k + 1}]"] = m.c[i][j][k]
    for index, c in enumerate(b.comults):
        name, counit_name = _COMULT_NAMES[index], _COUNIT_NAMES[index]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    values[f"{name}[{i + 1},{j + 1},{k + 1}]"] = c.d[i][j][k]
        if c.counit is not None:
            for i in range(n):
                values[f"{counit_name}[{i + 1}]"] = c.counit[i]
    return values


def evaluate_system(text: str, b: Bundle) -> List[Scalar]:
    """Evaluate every exported polynomial on the bundle's structure constants."""
    fld = b.field
    values = system_values(b)
    results = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        total = fld.zero
        for term in line.split(" + "):
            factors = term.strip().split("*")
            product = fld.parse_scalar(factors[0])
            for factor in factors[1:]:
                if not _FACTOR.match(factor):
                    raise StructureError(f"Line {number}: bad factor {factor!r}")
                if factor not in values:
                    raise StructureError(f"Line {number}: bundle has no value for {factor}")
                product = product * values[factor]
            total = total + product
        results.append(total)
    return results
