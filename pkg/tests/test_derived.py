"""Tests for convolution, the Rota–Baxter residual and the preLie product."""

from fractions import Fraction
from typing import List, Sequence

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bialg import catalog
from bialg.axioms import PRELIE, Residual, check_infinitesimal
from bialg.classify import discover_fp
from bialg.core import LinearEndo, MultTensor, StructureError
from bialg.derived import (
    LEFT,
    RIGHT,
    EndoAlgebraContext,
    check_prelie,
    commutator_bracket,
    convolution,
    convolution_unit,
    elementary_maps,
    phi,
    prelie_mult,
    rota_baxter_residual,
)
from bialg.scalars import Field, Scalar

F2 = Field.prime(2)

COMULT_IDS: List[object] = [
    *catalog.ids(2, "comult"),
    *(pytest.param(i, marks=pytest.mark.slow) for i in catalog.ids(3, "comult")),
]


def _contexts(comult_id: str) -> List[EndoAlgebraContext]:
    """The bialgebra context of a catalog pair, plus its θ = 1 context when the pair is infinitesimal."""
    entry = catalog.get(comult_id)
    m = catalog.get(entry.family).data
    contexts = [EndoAlgebraContext(m, entry.data)]
    if check_infinitesimal(m, entry.data, theta=1).passed:
        contexts.append(EndoAlgebraContext(m, entry.data, theta=1))
    return contexts


def _apply(images: Sequence[Sequence[Scalar]], v: Sequence[Scalar], zero: Scalar) -> List[Scalar]:
    out = [zero] * len(v)
    for j, coefficient in enumerate(v):
        if coefficient:
            out = [o + coefficient * x for o, x in zip(out, images[j])]
    return out


def _phi_by_hand(ctx: EndoAlgebraContext, side: str, f: List[List[Scalar]]) -> List[List[Scalar]]:
    """φ(f)(e_i) = Σ D_i^ab μ(e_a, f(e_b)) on the left and Σ D_i^ab μ(f(e_a), e_b) on the right."""
    n, zero = ctx.dim, ctx.m.field.zero
    identity = [[ctx.m.field.one if r == c else zero for r in range(n)] for c in range(n)]
    first, second = (identity, f) if side == LEFT else (f, identity)
    result = []
    for i in range(n):
        out = [zero] * n
        for a in range(n):
            for b in range(n):
                weight = ctx.c.d[i][a][b]
                for p in range(n):
                    for q in range(n):
                        scale = weight * first[a][p] * second[b][q]
                        if scale:
                            out = [o + scale * ctx.m.c[p][q][k] for k, o in enumerate(out)]
        result.append(out)
    return result


def _residual_by_hand(ctx: EndoAlgebraContext, side: str, f: LinearEndo, g: LinearEndo) -> LinearEndo:
    zero = ctx.m.field.zero
    n = ctx.dim

    def compose(a: List[List[Scalar]], b: List[List[Scalar]]) -> List[List[Scalar]]:
        return [_apply(a, column, zero) for column in b]

    def combine(*terms: List[List[Scalar]], signs: Sequence[int]) -> List[List[Scalar]]:
        return [[sum((s * t[j][k] for s, t in zip(signs, terms)), zero) for k in range(n)] for j in range(n)]

    fi = [list(f.image(j + 1)) for j in range(n)]
    gi = [list(g.image(j + 1)) for j in range(n)]
    pf, pg = _phi_by_hand(ctx, side, fi), _phi_by_hand(ctx, side, gi)
    inner = combine(compose(pf, gi), compose(fi, pg), signs=(1, 1))
    images = combine(
        compose(pf, pg), _phi_by_hand(ctx, side, compose(fi, gi)), _phi_by_hand(ctx, side, inner), signs=(1, -1, -1)
    )
    return LinearEndo.from_images(images, ctx.m.field)


@pytest.fixture
def infinitesimal_ctx() -> EndoAlgebraContext:
    return EndoAlgebraContext(*catalog.pair("mu1_2", "delta_1_2_2"), theta=1)


@pytest.fixture
def bialgebra_ctx() -> EndoAlgebraContext:
    return EndoAlgebraContext(*catalog.pair("mu1_3", "delta_1_5_3"))


class TestContext:
    def test_rejects_failing_pair(self) -> None:
        with pytest.raises(StructureError):
            EndoAlgebraContext(*catalog.pair("mu1_2", "delta_1_1_2"), theta=1)

    def test_theta_coerced(self, infinitesimal_ctx: EndoAlgebraContext) -> None:
        assert infinitesimal_ctx.theta == Fraction(1)
        assert infinitesimal_ctx.dim == 2


class TestConvolution:
    def test_unit_is_neutral(self, bialgebra_ctx: EndoAlgebraContext) -> None:
        unit = convolution_unit(bialgebra_ctx)
        for f in elementary_maps(bialgebra_ctx):
            assert convolution(bialgebra_ctx, f, unit) == f
            assert convolution(bialgebra_ctx, unit, f) == f

    def test_associative(self, bialgebra_ctx: EndoAlgebraContext) -> None:
        maps = elementary_maps(bialgebra_ctx)
        f, g, h = maps[1], maps[4], maps[8]
        left = convolution(bialgebra_ctx, convolution(bialgebra_ctx, f, g), h)
        right = convolution(bialgebra_ctx, f, convolution(bialgebra_ctx, g, h))
        assert left == right

    @pytest.mark.parametrize("comult_id", COMULT_IDS)
    def test_associative_on_every_elementary_triple(self, comult_id: str) -> None:
        for ctx in _contexts(comult_id):
            maps = elementary_maps(ctx)
            products = {(x, y): convolution(ctx, f, g) for x, f in enumerate(maps) for y, g in enumerate(maps)}
            for x, f in enumerate(maps):
                for y in range(len(maps)):
                    for z, h in enumerate(maps):
                        left = convolution(ctx, products[x, y], h)
                        right = convolution(ctx, f, products[y, z])
                        assert left == right, (ctx.theta, x, y, z)

    @pytest.mark.parametrize("comult_id", COMULT_IDS)
    def test_unit_laws_on_every_context(self, comult_id: str) -> None:
        for ctx in _contexts(comult_id):
            unit = convolution_unit(ctx)
            for f in elementary_maps(ctx) + [LinearEndo.identity(ctx.dim)]:
                assert convolution(ctx, unit, f) == f
                assert convolution(ctx, f, unit) == f

    def test_unit_images(self, infinitesimal_ctx: EndoAlgebraContext) -> None:
        # ε = (1, 1) and the unit is e1
        assert convolution_unit(infinitesimal_ctx) == LinearEndo.from_images([[1, 0], [1, 0]])

    def test_dimension_mismatch(self, infinitesimal_ctx: EndoAlgebraContext) -> None:
        with pytest.raises(StructureError):
            convolution(infinitesimal_ctx, LinearEndo.identity(3), LinearEndo.identity(2))


class TestRotaBaxter:
    def test_phi_left_of_e12(self, infinitesimal_ctx: EndoAlgebraContext) -> None:
        assert phi(infinitesimal_ctx, LEFT, LinearEndo.elementary(2, 1, 2)) == LinearEndo.elementary(2, 2, 2)

    def test_residual_vanishes(self, infinitesimal_ctx: EndoAlgebraContext) -> None:
        e12 = LinearEndo.elementary(2, 1, 2)
        assert rota_baxter_residual(infinitesimal_ctx, LEFT, e12, e12).is_zero()

    def test_right_side_runs(self, infinitesimal_ctx: EndoAlgebraContext) -> None:
        maps = elementary_maps(infinitesimal_ctx)
        assert len(maps) == 4
        assert maps[0] == LinearEndo.elementary(2, 1, 1)
        residual = rota_baxter_residual(infinitesimal_ctx, RIGHT, maps[0], maps[3])
        assert residual.dim == 2

    @settings(max_examples=30, deadline=None)
    @given(
        st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=4), min_size=16, max_size=16),
        st.fractions(min_value=-3, max_value=3, max_denominator=4),
        st.sampled_from([LEFT, RIGHT]),
    )
    def test_residual_is_bilinear(self, entries: List[Fraction], scale: Fraction, side: str) -> None:
        ctx = EndoAlgebraContext(*catalog.pair("mu1_2", "delta_1_2_2"), theta=1)
        f, f2, g, g2 = (LinearEndo.from_rows([entries[k : k + 2], entries[k + 2 : k + 4]]) for k in (0, 4, 8, 12))
        combined = rota_baxter_residual(ctx, side, f.scaled(scale) + f2, g)
        assert combined == rota_baxter_residual(ctx, side, f, g).scaled(scale) + rota_baxter_residual(ctx, side, f2, g)
        combined = rota_baxter_residual(ctx, side, f, g.scaled(scale) - g2)
        assert combined == rota_baxter_residual(ctx, side, f, g).scaled(scale) - rota_baxter_residual(ctx, side, f, g2)

    @pytest.mark.parametrize("side", [LEFT, RIGHT])
    @pytest.mark.parametrize("comult_id", COMULT_IDS)
    def test_residual_matches_direct_computation(self, comult_id: str, side: str) -> None:
        for ctx in _contexts(comult_id):
            maps = elementary_maps(ctx)
            for f in maps:
                for g in maps:
                    assert rota_baxter_residual(ctx, side, f, g) == _residual_by_hand(ctx, side, f, g)

    def test_catalog_has_infinitesimal_contexts(self) -> None:
        thetas = [ctx.theta for comult_id in catalog.ids(2, "comult") for ctx in _contexts(comult_id)]
        assert thetas.count(Fraction(1)) == 2
        assert thetas.count(None) == 3

    def test_unknown_side(self, infinitesimal_ctx: EndoAlgebraContext) -> None:
        with pytest.raises(StructureError):
            phi(infinitesimal_ctx, "middle", LinearEndo.identity(2))


class TestPreLie:
    def test_discovered_pairs_give_prelie(self) -> None:
        m = catalog.get("mu1_2", fld=F2).data
        found = discover_fp(m, 2, theta=0)
        assert found
        for c in found:
            assert check_prelie(prelie_mult(m, c)).passed

    @pytest.mark.slow
    @pytest.mark.parametrize("mult_id", catalog.ids(3, "mult"))
    def test_dimension_three_mod_two(self, mult_id: str) -> None:
        m = catalog.get(mult_id, fld=F2).data
        for c in discover_fp(m, 2, theta=0):
            t = prelie_mult(m, c)
            assert t.field == F2
            assert check_prelie(t).passed, c

    def test_counterexample(self) -> None:
        t = MultTensor.from_products(2, {(1, 2): {1: 1}}, unit_index=None)
        report = check_prelie(t)
        assert report.axioms() == {PRELIE}
        assert Residual(PRELIE, (1, 2, 2, 1), Fraction(-1)) in report.residuals
        assert Residual(PRELIE, (2, 1, 2, 1), Fraction(1)) in report.residuals

    def test_commutator_of_commutative(self) -> None:
        bracket = commutator_bracket(catalog.get("mu1_3").data)
        assert all(v == 0 for plane in bracket.c for row in plane for v in row)

    def test_mismatch(self) -> None:
        with pytest.raises(StructureError):
            prelie_mult(catalog.get("mu1_3").data, catalog.get("delta_1_2_2").data)
