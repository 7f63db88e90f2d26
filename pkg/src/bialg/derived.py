"""Convolution on End(V), Rota–Baxter residuals and the preLie product of an infinitesimal pair."""

import logging
from dataclasses import dataclass
from typing import Iterator, List, Optional

from .axioms import (
    ANTISYMMETRY,
    JACOBI,
    PRELIE,
    CheckReport,
    Component,
    Residual,
    check_bialgebra,
    check_infinitesimal,
)
from .core import ComultTensor, LinearEndo, MultTensor, StructureError, mult_apply
from .scalars import Scalar

logger = logging.getLogger(__name__)

LEFT = "left"
RIGHT = "right"


@dataclass(frozen=True)
class EndoAlgebraContext:
    """
    A validated (μ, Δ) pair on which End(V) gets the convolution product.

    With theta None the pair must be a bialgebra, otherwise a θ-infinitesimal
    bialgebra.
    """

    m: MultTensor
    c: ComultTensor
    theta: Optional[Scalar] = None

    def __post_init__(self) -> None:
        if self.m.dim != self.c.dim:
            raise StructureError(f"Dimension mismatch: {self.m.dim} vs {self.c.dim}")
        if self.theta is None:
            report = check_bialgebra(self.m, self.c)
            what = "bialgebra"
        else:
            object.__setattr__(self, "theta", self.m.field(self.theta))
            report = check_infinitesimal(self.m, self.c, theta=self.theta)
            what = f"infinitesimal({self.theta})"
        if not report.passed:
            raise StructureError(f"Context is not a {what} pair: {report.summary()}")

    @property
    def dim(self) -> int:
        return self.m.dim


def _require_dim(ctx: EndoAlgebraContext, *maps: LinearEndo) -> None:
    for f in maps:
        if f.dim != ctx.dim or f.field != ctx.m.field:
            raise StructureError(f"Endomorphism of dim {f.dim} over {f.field} does not fit the context")


def convolution(ctx: EndoAlgebraContext, f: LinearEndo, g: LinearEndo) -> LinearEndo:
    """f⋆g = μ∘(f⊗g)∘Δ."""
    _require_dim(ctx, f, g)
    n = ctx.dim
    zero = ctx.m.field.zero
    images = []
    for i in range(n):
        out = [zero] * n
        for a in range(n):
            for b in range(n):
                weight = ctx.c.d[i][a][b]
                if not weight:
                    continue
                product = mult_apply(ctx.m.c, f.image(a + 1), g.image(b + 1), zero)
                out = [o + weight * p for o, p in zip(out, product)]
        images.append(out)
    return LinearEndo.from_images(images, ctx.m.field)


def convolution_unit(ctx: EndoAlgebraContext) -> LinearEndo:
    """η∘ε: x ↦ ε(x)·1."""
    if ctx.c.counit is None or ctx.m.unit is None:
        raise StructureError("Convolution unit needs both a unit and a counit")
    unit = ctx.m.unit
    return LinearEndo.from_images([[xi * u for u in unit] for xi in ctx.c.counit], ctx.m.field)


def phi(ctx: EndoAlgebraContext, side: str, f: LinearEndo) -> LinearEndo:
    """id⋆f on the left side, f⋆id on the right."""
    identity = LinearEndo.identity(ctx.dim, ctx.m.field)
    if side == LEFT:
        return convolution(ctx, identity, f)
    if side == RIGHT:
        return convolution(ctx, f, identity)
    raise StructureError(f"Unknown side: {side!r}")


def rota_baxter_residual(ctx: EndoAlgebraContext, side: str, f: LinearEndo, g: LinearEndo) -> LinearEndo:
    """φ(f)∘φ(g) − φ(f∘g) − φ(φ(f)∘g + f∘φ(g))."""
    _require_dim(ctx, f, g)
    pf = phi(ctx, side, f)
    pg = phi(ctx, side, g)
    return pf.compose(pg) - phi(ctx, side, f.compose(g)) - phi(ctx, side, pf.compose(g) + f.compose(pg))


def elementary_maps(ctx: EndoAlgebraContext) -> List[LinearEndo]:
    """All E_rc in row-major order."""
    n = ctx.dim
    return [LinearEndo.elementary(n, r, c, ctx.m.field) for r in range(1, n + 1) for c in range(1, n + 1)]


def prelie_mult(m: MultTensor, c: ComultTensor) -> MultTensor:
    """m(x, y) = Σ μ(μ(y_(1)⊗x)⊗y_(2)), i.e. M_ij^k = Σ D_j^ab C_ai^t C_tb^k."""
    if m.dim != c.dim:
        raise StructureError(f"Dimension mismatch: {m.dim} vs {c.dim}")
    if m.field != c.field:
        raise StructureError(f"Field mismatch: {m.field} vs {c.field}")
    n = m.dim
    zero = m.field.zero
    raw = []
    for i in range(n):
        plane = []
        for j in range(n):
            out = [zero] * n
            for a in range(n):
                for b in range(n):
                    weight = c.d[j][a][b]
                    if not weight:
                        continue
                    for t in range(n):
                        inner = m.c[a][i][t]
                        if not inner:
                            continue
                        for k in range(n):
                            out[k] = out[k] + weight * inner * m.c[t][b][k]
            plane.append(tuple(out))
        raw.append(tuple(plane))
    return MultTensor(tuple(raw), m.field)


def commutator_bracket(t: MultTensor) -> MultTensor:
    """[x, y] = m(x, y) − m(y, x)."""
    n = t.dim
    raw = tuple(
        tuple(tuple(t.c[i][j][k] - t.c[j][i][k] for k in range(n)) for j in range(n))
        for i in range(n)
    )
    return MultTensor(raw, t.field)


def _left_nested(c: MultTensor, x: int, y: int, z: int) -> List[Scalar]:
    """(e_x e_y) e_z as a coefficient list."""
    return mult_apply(c.c, c.c[x][y], [c.field.one if k == z else c.field.zero for k in range(c.dim)], c.field.zero)


def _right_nested(c: MultTensor, x: int, y: int, z: int) -> List[Scalar]:
    """e_x (e_y e_z) as a coefficient list."""
    return mult_apply(c.c, [c.field.one if k == x else c.field.zero for k in range(c.dim)], c.c[y][z], c.field.zero)


def prelie_components(t: MultTensor) -> Iterator[Component]:
    """x(yz) − (xy)z − y(xz) + (yx)z, coefficient of e_s."""
    n = t.dim
    for x in range(n):
        for y in range(n):
            for z in range(n):
                x_yz = _right_nested(t, x, y, z)
                xy_z = _left_nested(t, x, y, z)
                y_xz = _right_nested(t, y, x, z)
                yx_z = _left_nested(t, y, x, z)
                for s in range(n):
                    yield PRELIE, (x + 1, y + 1, z + 1, s + 1), x_yz[s] - xy_z[s] - y_xz[s] + yx_z[s]


def bracket_components(bracket: MultTensor) -> Iterator[Component]:
    """Antisymmetry [x,y] + [y,x] and Jacobi residuals of a bracket tensor."""
    n = bracket.dim
    for x in range(n):
        for y in range(n):
            for s in range(n):
                yield ANTISYMMETRY, (x + 1, y + 1, s + 1), bracket.c[x][y][s] + bracket.c[y][x][s]
    for x in range(n):
        for y in range(n):
            for z in range(n):
                first = _right_nested(bracket, x, y, z)
                second = _right_nested(bracket, y, z, x)
                third = _right_nested(bracket, z, x, y)
                for s in range(n):
                    yield JACOBI, (x + 1, y + 1, z + 1, s + 1), first[s] + second[s] + third[s]


def check_prelie(t: MultTensor) -> CheckReport:
    """PreLie identity over all basis triples, plus antisymmetry and Jacobi of the commutator."""
    residuals = [
        Residual(label, index, value)
        for label, index, value in prelie_components(t)
        if value
    ]
    residuals += [
        Residual(label, index, value)
        for label, index, value in bracket_components(commutator_bracket(t))
        if value
    ]
    logger.debug(f"check_prelie: {len(residuals)} residuals")
    return CheckReport(tuple(residuals))
