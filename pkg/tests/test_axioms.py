"""Tests for residual checks, bundle plans and polynomial export."""

from fractions import Fraction
from functools import lru_cache
from typing import Callable

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bialg import catalog
from bialg.axioms import (
    ASSOC,
    COASSOC,
    COUNIT_LEFT,
    COUNIT_RIGHT,
    UNIT,
    CheckReport,
    Residual,
    bundle_subchecks,
    check_algebra,
    check_bialgebra,
    check_bundle,
    check_coalgebra,
    check_infinitesimal,
    evaluate_system,
    export_system,
)
from bialg.constructions import diagonal_2b, opposite_2b
from bialg.core import Bundle, BundleKind, ComultTensor, MultTensor, StructureError
from bialg.scalars import Field, FieldError

F2 = Field.prime(2)


@lru_cache(maxsize=None)
def _system(n: int, kind: str) -> str:
    return export_system(n, kind)


def _left_unit_broken() -> MultTensor:
    # e2·e1 = 0, everything else as in mu1_2 without e2·e2
    return MultTensor.from_products(2, {(2, 1): {}}, unit_index=1, strict=False)


class TestCheckAlgebra:
    def test_catalog_algebras(self) -> None:
        for entry in catalog.entries(kind="mult"):
            assert check_algebra(entry.data).passed, entry.id

    def test_unit_residual(self) -> None:
        report = check_algebra(_left_unit_broken())
        assert report.residuals == (Residual(UNIT, (2, 2, 2), Fraction(-1)),)
        assert report.precondition == "algebra"

    def test_non_associative(self) -> None:
        m = MultTensor.from_products(3, {(2, 3): {2: 1}})
        report = check_algebra(m)
        assert Residual(ASSOC, (2, 3, 3, 2), Fraction(1)) in report.residuals
        assert report.axioms() == {ASSOC}

    def test_explicit_unit_required(self) -> None:
        with pytest.raises(StructureError):
            check_algebra(MultTensor.zero(2))


class TestCheckCoalgebra:
    def test_counit_failure(self) -> None:
        c = ComultTensor.from_images(2, {1: {(1, 1): 1}, 2: {(2, 1): 1}}, counit=(1, 1))
        report = check_coalgebra(c)
        assert report.axioms() == {COUNIT_LEFT}
        assert report.precondition == "coalgebra"

    def test_non_counital(self) -> None:
        c = ComultTensor.from_images(2, {2: {(2, 2): 1}})
        assert check_coalgebra(c, counital=False).passed
        with pytest.raises(StructureError):
            check_coalgebra(c)


class TestCheckBialgebra:
    @pytest.mark.parametrize("comult_id", ["delta_1_1_2", "delta_1_2_2", "delta_1_3_2"])
    def test_dimension_two(self, comult_id: str) -> None:
        assert check_bialgebra(*catalog.pair("mu1_2", comult_id)).passed

    def test_catalog_dimension_three(self) -> None:
        for mult_id in catalog.ids(3, "mult"):
            for entry in catalog.family(mult_id):
                assert check_bialgebra(catalog.get(mult_id).data, entry.data).passed, entry.id

    def test_precondition_short_circuits(self) -> None:
        _, c = catalog.pair("mu1_2", "delta_1_2_2")
        report = check_bialgebra(_left_unit_broken(), c)
        assert report.precondition == "algebra"
        assert report.axioms() == {UNIT}

    def test_compatibility_residuals(self) -> None:
        m, _ = catalog.pair("mu1_2", "delta_1_2_2")
        c = ComultTensor.from_images(2, {1: {(1, 1): 1}, 2: {(2, 2): 2}}, counit=(1, Fraction(1, 2)))
        report = check_bialgebra(m, c)
        assert report.precondition is None
        assert not report.passed
        assert "compat_mult" in report.axioms()

    def test_mismatches(self) -> None:
        m, c = catalog.pair("mu1_2", "delta_1_2_2")
        with pytest.raises(StructureError):
            check_bialgebra(catalog.get("mu1_3").data, c)
        with pytest.raises(FieldError):
            check_bialgebra(m, c.over(F2))


class TestCheckInfinitesimal:
    @pytest.mark.parametrize("comult_id", ["delta_1_2_2", "delta_1_3_2"])
    def test_passing(self, comult_id: str) -> None:
        assert check_infinitesimal(*catalog.pair("mu1_2", comult_id), theta=1).passed

    def test_single_residual(self) -> None:
        report = check_infinitesimal(*catalog.pair("mu1_2", "delta_1_1_2"))
        assert report.residuals == (Residual("infinitesimal(1)", (2, 2, 2, 2), Fraction(1)),)
        assert report.precondition is None

    def test_theta_zero_skips_counit(self) -> None:
        m, _ = catalog.pair("mu1_2", "delta_1_2_2")
        c = ComultTensor.from_images(2, {})
        # the zero comultiplication solves Δ(xy) = x·Δ(y) + Δ(x)·y exactly
        assert check_infinitesimal(m, c, theta=0).passed
        with pytest.raises(StructureError):
            check_infinitesimal(m, c, theta=1)

    def test_theta_string(self) -> None:
        report = check_infinitesimal(*catalog.pair("mu1_2", "delta_1_1_2"), theta="2")
        assert all(r.axiom == "infinitesimal(2)" for r in report.residuals)


class TestCheckReport:
    def test_scoped_and_merge(self) -> None:
        a = CheckReport((Residual(UNIT, (1,), Fraction(1)),), "algebra").scoped("bialgebra(mu1,delta1)")
        b = CheckReport().scoped("bialgebra(mu2,delta1)")
        merged = CheckReport.merge([a, b])
        assert merged.residuals[0].scope == "bialgebra(mu1,delta1)"
        assert merged.precondition == "bialgebra(mu1,delta1): algebra"
        assert not merged.passed

    def test_to_dict(self) -> None:
        report = CheckReport((Residual(UNIT, (1, 2), Fraction(-1, 2), "s"),))
        assert report.to_dict() == {
            "passed": False,
            "precondition": None,
            "residuals": [{"scope": "s", "axiom": "unit", "index": [1, 2], "value": "-1/2"}],
        }
        assert report.summary() == "failed (1 residuals: unit)"
        assert CheckReport().summary() == "passed"


class TestCheckBundle:
    def test_twotwob_example(self) -> None:
        assert check_bundle(catalog.get("twotwob_3").bundle).passed

    def test_xy_example_needs_characteristic_two(self) -> None:
        report = check_bundle(catalog.get("twob_xy_3").bundle)
        assert not report.passed
        assert all(r.scope.startswith("bialgebra(") for r in report.residuals)
        assert check_bundle(catalog.get("twob_xy_3", fld=F2).bundle).passed

    def test_failing_2as_labels_sub_check(self) -> None:
        m, c = catalog.pair("mu1_2", "delta_1_1_2")
        report = check_bundle(Bundle(BundleKind.TWO_AS, (m, m), (c,)))
        assert {r.scope for r in report.residuals} == {"infinitesimal(mu2,delta1)"}

    def test_subchecks_collapse_duplicates(self) -> None:
        m, c = catalog.pair("mu1_2", "delta_1_2_2")
        assert len(bundle_subchecks(Bundle(BundleKind.TWO_B, (m, m), (c, c)))) == 1
        b = catalog.get("twotwob_3").bundle
        assert [s.scope for s in bundle_subchecks(b)] == [
            "bialgebra(mu1,delta1)",
            "bialgebra(mu2,delta2)",
            "infinitesimal(mu1,delta2)",
            "infinitesimal(mu2,delta1)",
        ]

    def test_infinitesimal_bundle_theta(self) -> None:
        m, c = catalog.pair("mu1_2", "delta_1_1_2")
        assert not check_bundle(Bundle(BundleKind.INFINITESIMAL, (m,), (c,), Fraction(1))).passed


class TestExportSystem:
    def test_layout(self) -> None:
        lines = _system(2, "2as").splitlines()
        assert lines[0] == "# bialg polynomial system: kind=2as dim=2 unit=e1"
        assert "# mu1 assoc" in lines
        assert "# delta1 coassoc" in lines
        assert "# bialgebra(mu1,delta1) compat_mult" in lines
        assert "# infinitesimal(mu2,delta1) infinitesimal(1)" in lines
        assert "1*C[1,2,2] + -1" in lines

    @pytest.mark.parametrize("kind, count", [("2as", 117), ("2b", 196), ("22b", 186)])
    def test_polynomial_count(self, kind: str, count: int) -> None:
        polynomials = [line for line in _system(2, kind).splitlines() if line and not line.startswith("#")]
        assert len(polynomials) == count

    @pytest.mark.parametrize("kind", ["2as", "2b", "22b"])
    def test_member_axioms_emitted_once(self, kind: str) -> None:
        headers = [line[2:].split(" ") for line in _system(2, kind).splitlines()[2:] if line.startswith("#")]
        member = [(scope, label) for scope, label in headers if label in {ASSOC, UNIT, COASSOC, COUNIT_LEFT, COUNIT_RIGHT}]
        assert len(member) == len(set(member))
        assert {scope for scope, _ in member} == (
            {"mu1", "mu2", "delta1"} if kind == "2as" else {"mu1", "mu2", "delta1", "delta2"}
        )
        assert all(not scope.startswith(("bialgebra(", "infinitesimal(")) for scope, _ in member)

    def test_dimension_one(self) -> None:
        text = _system(1, "2as")
        polynomials = [line for line in text.splitlines() if line and not line.startswith("#")]
        assert len(polynomials) == 15
        m = MultTensor.from_products(1, {})
        c = ComultTensor.from_images(1, {1: {(1, 1): 1}}, counit=(1,))
        b = Bundle(BundleKind.TWO_AS, (m, m), (c,))
        assert check_bundle(b).passed
        assert all(v == 0 for v in evaluate_system(text, b))
        broken = ComultTensor.from_images(1, {1: {(1, 1): 2}}, counit=(1,))
        assert any(v != 0 for v in evaluate_system(text, Bundle(BundleKind.TWO_AS, (m, m), (broken,))))

    @pytest.mark.parametrize("build", [diagonal_2b, opposite_2b])
    @pytest.mark.parametrize("comult_id", ["delta_1_1_2", "delta_1_2_2", "delta_1_3_2"])
    def test_2b_constructions_give_zeros(self, build: Callable[..., Bundle], comult_id: str) -> None:
        b = build(*catalog.pair("mu1_2", comult_id))
        values = evaluate_system(_system(2, "2b"), b)
        assert len(values) == 196
        assert all(v == 0 for v in values)

    def test_2b_mixed_algebras_nonzero(self) -> None:
        m1, c = catalog.pair("mu1_2", "delta_1_2_2")
        m2 = catalog.get("mu2_2").data
        b = Bundle(BundleKind.TWO_B, (m1, m2), (c, c))
        assert not check_bundle(b).passed
        assert any(v != 0 for v in evaluate_system(_system(2, "2b"), b))

    @pytest.mark.parametrize("kind", [BundleKind.TWO_AS, BundleKind.TWO_B, BundleKind.TWO_TWO_B])
    def test_catalog_bundles_agree_with_checks(self, kind: BundleKind) -> None:
        mults = [entry.data for entry in catalog.entries(2, "mult")]
        comults = [entry.data for entry in catalog.entries(2, "comult")]
        comult_tuples = [(c,) for c in comults] if kind is BundleKind.TWO_AS else [(c, d) for c in comults for d in comults]
        text = _system(2, kind.value)
        verdicts = set()
        for m1 in mults:
            for m2 in mults:
                for cs in comult_tuples:
                    b = Bundle(kind, (m1, m2), cs)
                    passed = check_bundle(b).passed
                    verdicts.add(passed)
                    assert passed == all(v == 0 for v in evaluate_system(text, b))
        assert verdicts == {True, False}

    @pytest.mark.slow
    def test_xy_2b_needs_characteristic_two(self) -> None:
        text = _system(3, "2b")
        assert any(v != 0 for v in evaluate_system(text, catalog.get("twob_xy_3").bundle))
        assert all(v == 0 for v in evaluate_system(text, catalog.get("twob_xy_3", fld=F2).bundle))

    @pytest.mark.parametrize("n, kind", [(0, "2as"), (2, "3b"), (2, "bialgebra")])
    def test_rejects(self, n: int, kind: str) -> None:
        with pytest.raises(StructureError):
            export_system(n, kind)

    def test_passing_bundle_gives_zeros(self) -> None:
        m, c = catalog.pair("mu1_2", "delta_1_2_2")
        values = evaluate_system(_system(2, "2as"), Bundle(BundleKind.TWO_AS, (m, m), (c,)))
        assert values and all(v == 0 for v in values)

    @pytest.mark.slow
    def test_twotwob_zeros(self) -> None:
        b = catalog.get("twotwob_3").bundle
        assert all(v == 0 for v in evaluate_system(_system(3, "22b"), b))

    def test_failing_bundle_nonzero(self) -> None:
        m, c = catalog.pair("mu1_2", "delta_1_1_2")
        values = evaluate_system(_system(2, "2as"), Bundle(BundleKind.TWO_AS, (m, m), (c,)))
        assert any(v != 0 for v in values)

    def test_bad_factor(self) -> None:
        b = catalog.get("twotwob_3").bundle
        with pytest.raises(StructureError):
            evaluate_system("1*foo", b)
        with pytest.raises(StructureError):
            evaluate_system("1*Q[1]", b)

    @settings(max_examples=100, deadline=None)
    @given(
        st.integers(min_value=0, max_value=7),
        st.integers(min_value=0, max_value=7),
        st.fractions(min_value=-2, max_value=2, max_denominator=3),
    )
    def test_verdict_matches_check(self, mult_entry: int, comult_entry: int, delta: Fraction) -> None:
        m, c = catalog.pair("mu1_2", "delta_1_2_2")
        raw_c = [[list(col) for col in row] for row in m.c]
        i, j, k = mult_entry // 4, mult_entry // 2 % 2, mult_entry % 2
        raw_c[i][j][k] += delta
        perturbed = MultTensor(tuple(tuple(tuple(col) for col in row) for row in raw_c), m.field, m.unit, strict=False)
        raw_d = [[list(col) for col in row] for row in c.d]
        i, j, k = comult_entry // 4, comult_entry // 2 % 2, comult_entry % 2
        raw_d[i][j][k] -= delta
        comult = ComultTensor(tuple(tuple(tuple(col) for col in row) for row in raw_d), c.field, c.counit)

        b = Bundle(BundleKind.TWO_AS, (m, perturbed), (comult,))
        values = evaluate_system(_system(2, "2as"), b)
        assert check_bundle(b).passed == all(v == 0 for v in values)
