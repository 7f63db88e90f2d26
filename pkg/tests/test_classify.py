"""Tests for fingerprints, F_p isomorphism search and discovery."""

import pytest

from bialg import catalog
from bialg.axioms import check_bialgebra, check_infinitesimal
from bialg.classify import (
    BudgetExceededError,
    PrimeComparison,
    SearchError,
    compare_over_primes,
    discover_fp,
    fingerprint,
    isom_search_fp,
)
from bialg.core import Bundle, BundleKind, LinearEndo, MultTensor, is_morphism, transport
from bialg.scalars import Field, FieldError
from bialg.settings import get_settings

F2 = Field.prime(2)
F3 = Field.prime(3)


def bialgebra(mult_id: str, comult_id: str, fld: Field = Field(0)) -> Bundle:
    m, c = catalog.pair(mult_id, comult_id, fld)
    return Bundle(BundleKind.BIALGEBRA, (m,), (c,))


class TestFingerprint:
    def test_cocommutativity_separates(self) -> None:
        a = fingerprint(bialgebra("mu3_3", "delta_3_1_3"))
        b = fingerprint(bialgebra("mu3_3", "delta_3_2_3"))
        assert a.cocommutative == (True,)
        assert b.cocommutative == (False,)
        assert a != b

    def test_values(self) -> None:
        fp = fingerprint(bialgebra("mu5_3", "delta_5_1_3"))
        assert fp.commutative == (False,)
        assert fp.dim_commutator == (1,)
        assert fp.dim_annihilator == (0,)

    def test_invariant_under_transport(self) -> None:
        b = bialgebra("mu1_3", "delta_1_13_3")
        f = LinearEndo.from_rows([[1, 2, 0], [0, 1, 0], [1, 1, 1]])
        assert fingerprint(transport(b, f)) == fingerprint(b)

    def test_primitives_need_unit(self) -> None:
        b = Bundle(BundleKind.COALGEBRA, (), (catalog.get("delta_1_2_2").data,))
        assert fingerprint(b).dim_primitives == (None,)
        assert fingerprint(b).to_dict()["dim_primitives"] == [None]


class TestIsomorphismSearch:
    def test_identity_first(self) -> None:
        b = bialgebra("mu1_2", "delta_1_2_2", F3)
        assert isom_search_fp(b, b, 3) == LinearEndo.identity(2, F3)

    @pytest.mark.parametrize("p, image", [(2, (1, 1)), (3, (1, 2))])
    def test_idempotent_swap(self, p: int, image: tuple) -> None:
        fld = Field.prime(p)
        b1 = bialgebra("mu1_2", "delta_1_2_2", fld)
        b2 = bialgebra("mu1_2", "delta_1_3_2", fld)
        f = isom_search_fp(b1, b2, p)
        assert f is not None
        assert f.image(2) == tuple(fld(v) for v in image)
        assert is_morphism(b1, b2, f)

    def test_none(self) -> None:
        b1 = bialgebra("mu1_2", "delta_1_2_2", F3)
        b2 = bialgebra("mu1_2", "delta_1_1_2", F3)
        assert isom_search_fp(b1, b2, 3) is None

    def test_budget(self) -> None:
        b = bialgebra("mu1_2", "delta_1_2_2", F3)
        with pytest.raises(BudgetExceededError) as excinfo:
            isom_search_fp(b, b, 3, budget=1)
        assert excinfo.value.candidates == 9
        with pytest.raises(BudgetExceededError):
            isom_search_fp(b, b, 3, budget=0)

    def test_budget_from_settings(self) -> None:
        get_settings().search.budget = 8
        b = bialgebra("mu1_2", "delta_1_2_2", F3)
        with pytest.raises(BudgetExceededError):
            isom_search_fp(b, b, 3)

    def test_rejects_rationals(self) -> None:
        b = bialgebra("mu1_2", "delta_1_2_2")
        with pytest.raises(FieldError):
            isom_search_fp(b, b, 3)

    def test_rejects_wrong_prime(self) -> None:
        b = bialgebra("mu1_2", "delta_1_2_2", F2)
        with pytest.raises(FieldError):
            isom_search_fp(b, b, 3)

    def test_small_chunks(self) -> None:
        get_settings().search.chunk_size = 1
        get_settings().search.max_workers = 3
        b1 = bialgebra("mu1_2", "delta_1_2_2", F3)
        b2 = bialgebra("mu1_2", "delta_1_3_2", F3)
        f = isom_search_fp(b1, b2, 3)
        assert f is not None and f.image(2) == (F3(1), F3(2))

    @pytest.mark.parametrize("chunk_size, workers", [(1024, 1), (1, 3), (2, 4)])
    def test_returns_first_isomorphism_in_offset_order(self, chunk_size: int, workers: int) -> None:
        get_settings().search.chunk_size = chunk_size
        get_settings().search.max_workers = workers
        b1 = bialgebra("mu1_2", "delta_1_2_2", F3)
        b2 = bialgebra("mu1_2", "delta_1_3_2", F3)
        # unit column is pinned; the free entries are (1,2) then (2,2), offset from the identity
        expected = None
        for d0 in range(3):
            for d1 in range(3):
                f = LinearEndo.from_rows([[1, d0], [0, 1 + d1]], F3)
                if f.is_invertible() and is_morphism(b1, b2, f):
                    expected = f
                    break
            if expected is not None:
                break
        assert expected is not None
        assert isom_search_fp(b1, b2, 3) == expected


class TestDiscovery:
    def test_bialgebras_mod_two(self) -> None:
        m = catalog.get("mu1_2", fld=F2).data
        found = discover_fp(m, 2)
        assert found
        for c in found:
            assert check_bialgebra(m, c).passed
        for entry in catalog.family("mu1_2", fld=F2):
            assert entry.data in found
        assert found == sorted(found, key=lambda c: [int(v) for p in c.d for r in p for v in r])

    def test_infinitesimal_mode(self) -> None:
        m = catalog.get("mu1_2", fld=F3).data
        found = discover_fp(m, 3, theta=1)
        assert catalog.get("delta_1_2_2", fld=F3).data in found
        assert catalog.get("delta_1_1_2", fld=F3).data not in found
        for c in found:
            assert check_infinitesimal(m, c, theta=1).passed

    def test_theta_zero_has_no_counit(self) -> None:
        m = catalog.get("mu2_2", fld=F2).data
        found = discover_fp(m, 2, theta=0)
        assert all(c.counit is None for c in found)

    def test_budget_checked_up_front(self) -> None:
        m = catalog.get("mu1_3", fld=F3).data
        with pytest.raises(BudgetExceededError):
            discover_fp(m, 3)

    def test_needs_unit_e1(self) -> None:
        m = MultTensor.from_products(2, {(1, 1): {1: 1}}, F2, unit_index=2)
        with pytest.raises(SearchError):
            discover_fp(m, 2)

    def test_dimension_cap(self) -> None:
        m = MultTensor.from_products(4, {}, F2)
        with pytest.raises(SearchError):
            discover_fp(m, 2)

    def test_rejects_rationals(self) -> None:
        with pytest.raises(FieldError):
            discover_fp(catalog.get("mu1_2").data, 2)


class TestCompareOverPrimes:
    def test_heuristic_isomorphic(self) -> None:
        result = compare_over_primes(bialgebra("mu1_2", "delta_1_2_2"), bialgebra("mu1_2", "delta_1_3_2"))
        assert result.fingerprints_equal
        assert result.isomorphic_mod == {2: True, 3: True}
        assert result.verdict.startswith("undecided over Q (heuristic")

    def test_fingerprints_differ(self) -> None:
        result = compare_over_primes(bialgebra("mu3_3", "delta_3_1_3"), bialgebra("mu3_3", "delta_3_2_3"))
        assert result.verdict == "not isomorphic over Q (fingerprints differ)"
        assert result.to_dict()["fingerprints_equal"] is False

    def test_unreducible_prime(self) -> None:
        m, c = catalog.pair("mu1_2", "delta_1_2_2")
        b = Bundle(BundleKind.INFINITESIMAL, (m,), (c,), c.field("1/2"))
        result = compare_over_primes(b, b, primes=(2, 3))
        assert result.isomorphic_mod[2] is None
        assert result.isomorphic_mod[3] is True

    def test_verdicts(self) -> None:
        assert "likely non-isomorphic" in PrimeComparison(True, {2: False, 3: False}).verdict
        assert PrimeComparison(True, {2: False, 3: True}).verdict == "undecided over Q (heuristic)"
        assert PrimeComparison(True, {}).verdict == "undecided over Q (heuristic)"
