"""
Embedded catalog of the low-dimensional unital algebras, their compatible
comultiplications and two worked bundle examples, together with the census
engine that recounts bialgebras, 2-associative bialgebras, 2-bialgebras and
2-2-bialgebras from raw axiom checks.
"""

import logging
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from .axioms import CheckReport, check_algebra, check_bialgebra, check_bundle, check_coalgebra, check_infinitesimal
from .core import Bundle, BundleKind, ComultTensor, MultTensor
from .scalars import RATIONALS, Field, FieldError

logger = logging.getLogger(__name__)


class CatalogError(Exception):
    """Raised for unknown ids, bad parameter bindings or integrity failures."""

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(self.message)


# Raw data. Products are 1-based {(i, j): {k: coefficient}} beyond the unit e1;
# comultiplications are {i: {(j, k): coefficient}} and carry their counit.
# The string "lambda" marks a parameter slot.

_E1 = {(1, 1): 1}
_GROUP_2 = {(1, 2): 1, (2, 1): 1, (2, 2): -1}

_MULTS: Dict[str, Tuple[int, Dict[Tuple[int, int], Dict[int, Any]], str]] = {
    "mu1_2": (2, {(2, 2): {2: 1}}, "dimension 2, first unital algebra: e2·e2 = e2"),
    "mu2_2": (2, {(2, 2): {}}, "dimension 2, second unital algebra: e2·e2 = 0"),
    "mu1_3": (
        3,
        {(2, 2): {2: 1}, (2, 3): {3: 1}, (3, 2): {3: 1}, (3, 3): {3: 1}},
        "dimension 3, first unital algebra: e2 acts as identity on span(e2, e3), e3·e3 = e3",
    ),
    "mu2_3": (
        3,
        {(2, 2): {2: 1}, (2, 3): {3: 1}, (3, 2): {3: 1}},
        "dimension 3, second unital algebra: e2 acts as identity on span(e2, e3), e3·e3 = 0",
    ),
    "mu3_3": (3, {(2, 2): {2: 1}}, "dimension 3, third unital algebra: e2·e2 = e2"),
    "mu4_3": (3, {}, "dimension 3, fourth unital algebra: only unit products"),
    "mu5_3": (
        3,
        {(2, 2): {2: 1}, (2, 3): {3: 1}},
        "dimension 3, fifth unital algebra: e2·e2 = e2, e2·e3 = e3, e3·e2 = 0",
    ),
}

_COMULTS: Dict[str, Tuple[str, Dict[int, Dict[Tuple[int, int], Any]], Tuple[int, ...], str]] = {
    "delta_1_1_2": (
        "mu1_2",
        {1: _E1, 2: {(1, 2): 1, (2, 1): 1, (2, 2): -2}},
        (1, 0),
        "bialgebra comultiplication 1 for mu1_2",
    ),
    "delta_1_2_2": ("mu1_2", {1: _E1, 2: {(2, 2): 1}}, (1, 1), "bialgebra comultiplication 2 for mu1_2"),
    "delta_1_3_2": ("mu1_2", {1: _E1, 2: _GROUP_2}, (1, 0), "bialgebra comultiplication 3 for mu1_2"),
    "delta_1_1_3": (
        "mu1_3",
        {1: _E1, 2: _GROUP_2, 3: {(1, 3): 1, (3, 1): 1, (3, 3): -2}},
        (1, 0, 0),
        "bialgebra comultiplication 1 for mu1_3",
    ),
    "delta_1_2_3": (
        "mu1_3",
        {1: _E1, 2: _GROUP_2, 3: {(1, 3): 1, (3, 1): 1, (3, 3): -1}},
        (1, 0, 0),
        "bialgebra comultiplication 2 for mu1_3",
    ),
    "delta_1_3_3": (
        "mu1_3",
        {1: _E1, 2: _GROUP_2, 3: {(1, 3): 1, (2, 3): -1, (3, 1): 1, (3, 2): -1, (3, 3): -1}},
        (1, 0, 0),
        "bialgebra comultiplication 3 for mu1_3",
    ),
    "delta_1_4_3": (
        "mu1_3",
        {1: _E1, 2: _GROUP_2, 3: {(1, 3): 1, (2, 3): -1, (3, 1): 1, (3, 2): -1}},
        (1, 0, 0),
        "bialgebra comultiplication 4 for mu1_3",
    ),
    "delta_1_5_3": (
        "mu1_3",
        {1: _E1, 2: _GROUP_2, 3: {(1, 3): 1, (3, 1): 1, (2, 3): -1}},
        (1, 0, 0),
        "bialgebra comultiplication 5 for mu1_3",
    ),
    "delta_1_6_3": (
        "mu1_3",
        {1: _E1, 2: _GROUP_2, 3: {(1, 3): 1, (3, 1): 1, (3, 2): -1}},
        (1, 0, 0),
        "bialgebra comultiplication 6 for mu1_3",
    ),
    "delta_1_7_3": (
        "mu1_3",
        {1: _E1, 2: {(2, 2): 1}, 3: {(2, 3): 1, (3, 2): 1, (3, 3): -2}},
        (1, 1, 0),
        "bialgebra comultiplication 7 for mu1_3",
    ),
    "delta_1_8_3": (
        "mu1_3",
        {1: _E1, 2: {(2, 2): 1}, 3: {(2, 3): 1, (3, 2): 1, (3, 3): -1}},
        (1, 1, 0),
        "bialgebra comultiplication 8 for mu1_3",
    ),
    "delta_1_9_3": (
        "mu1_3",
        {
            1: _E1,
            2: {(1, 3): 1, (2, 2): 1, (2, 3): -1, (3, 1): 1, (3, 2): -1},
            3: {(1, 3): 1, (3, 1): 1, (3, 3): -1},
        },
        (1, 1, 0),
        "bialgebra comultiplication 9 for mu1_3",
    ),
    "delta_1_10_3": (
        "mu1_3",
        {
            1: _E1,
            2: {(1, 3): 1, (2, 2): 1, (2, 3): -1, (3, 1): 1, (3, 2): -1, (3, 3): 1},
            3: {(1, 3): 1, (3, 1): 1, (3, 3): -2},
        },
        (1, 1, 0),
        "bialgebra comultiplication 10 for mu1_3",
    ),
    "delta_1_11_3": (
        "mu1_3",
        {1: _E1, 2: {(2, 2): 1, (3, 1): 1, (3, 2): -1}, 3: {(2, 3): 1, (3, 1): 1, (3, 3): -1}},
        (1, 1, 0),
        "bialgebra comultiplication 11 for mu1_3",
    ),
    "delta_1_12_3": (
        "mu1_3",
        {1: _E1, 2: {(1, 3): 1, (2, 2): 1, (2, 3): -1}, 3: {(1, 3): 1, (3, 2): 1, (3, 3): -1}},
        (1, 1, 0),
        "bialgebra comultiplication 12 for mu1_3",
    ),
    "delta_1_13_3": (
        "mu1_3",
        {
            1: _E1,
            2: {
                (1, 2): 1,
                (1, 3): -1,
                (2, 1): 1,
                (2, 2): -2,
                (2, 3): 2,
                (3, 1): -1,
                (3, 2): 2,
                (3, 3): -1,
            },
            3: {(2, 3): 1, (3, 2): 1, (3, 3): -2},
        },
        (1, 1, 1),
        "bialgebra comultiplication 13 for mu1_3",
    ),
    "delta_1_14_3": (
        "mu1_3",
        {
            1: _E1,
            2: {(1, 2): 1, (1, 3): -1, (2, 1): 1, (2, 2): -1, (2, 3): 1, (3, 1): -1, (3, 2): 1},
            3: {(2, 3): 1, (3, 2): 1, (3, 3): -1},
        },
        (1, 1, 1),
        "bialgebra comultiplication 14 for mu1_3",
    ),
    "delta_1_15_3": (
        "mu1_3",
        {1: _E1, 2: {(2, 2): 1}, 3: {(3, 3): 1}},
        (1, 1, 1),
        "bialgebra comultiplication 15 for mu1_3",
    ),
    "delta_1_16_3": (
        "mu1_3",
        {1: _E1, 2: {(2, 2): 1}, 3: {(2, 2): 1, (2, 3): -1, (3, 2): -1, (3, 3): 2}},
        (1, 1, 1),
        "bialgebra comultiplication 16 for mu1_3",
    ),
    "delta_1_17_3": (
        "mu1_3",
        {1: _E1, 2: {(2, 3): 1, (3, 2): 1, (3, 3): -1}, 3: {(3, 3): 1}},
        (1, 1, 1),
        "bialgebra comultiplication 17 for mu1_3",
    ),
    "delta_1_18_3": (
        "mu1_3",
        {1: _E1, 2: {(2, 1): 1, (3, 1): -1, (3, 2): 1}, 3: {(3, 3): 1}},
        (1, 1, 1),
        "bialgebra comultiplication 18 for mu1_3",
    ),
    "delta_2_1_3": (
        "mu2_3",
        {1: _E1, 2: _GROUP_2, 3: {(1, 3): 1, (3, 1): 1, (3, 2): -1}},
        (1, 0, 0),
        "bialgebra comultiplication 1 for mu2_3",
    ),
    # Published with +e2⊗e3, which is not coassociative; the sign is corrected.
    "delta_2_2_3": (
        "mu2_3",
        {1: _E1, 2: _GROUP_2, 3: {(1, 3): 1, (2, 3): -1, (3, 1): 1}},
        (1, 0, 0),
        "bialgebra comultiplication 2 for mu2_3 (sign of e2⊗e3 corrected)",
    ),
    "delta_2_3_3": (
        "mu2_3",
        {1: _E1, 2: _GROUP_2, 3: {(1, 3): 1, (2, 3): -1, (3, 1): 1, (3, 2): -1, (3, 3): "lambda"}},
        (1, 0, 0),
        "bialgebra comultiplication 3 for mu2_3, one-parameter family in lambda",
    ),
    "delta_3_1_3": (
        "mu3_3",
        {1: _E1, 2: {(2, 2): 1}, 3: {(2, 3): 1, (3, 2): 1}},
        (1, 1, 0),
        "bialgebra comultiplication 1 for mu3_3",
    ),
    "delta_3_2_3": (
        "mu3_3",
        {1: _E1, 2: {(2, 2): 1}, 3: {(1, 3): 1, (3, 2): 1}},
        (1, 1, 0),
        "bialgebra comultiplication 2 for mu3_3",
    ),
    "delta_3_3_3": (
        "mu3_3",
        {1: _E1, 2: {(2, 2): 1}, 3: {(2, 3): 1, (3, 1): 1}},
        (1, 1, 0),
        "bialgebra comultiplication 3 for mu3_3",
    ),
    "delta_5_1_3": (
        "mu5_3",
        {1: _E1, 2: {(2, 2): 1}, 3: {(2, 3): 1, (3, 2): 1}},
        (1, 1, 0),
        "bialgebra comultiplication 1 for mu5_3",
    ),
}

_PARAMETERS: Dict[str, Dict[str, int]] = {"delta_2_3_3": {"lambda": 0}}

# Bundles, in the basis e1 = 1, e2 = x, e3 = y for the first one.
_BUNDLES: Dict[str, Tuple[BundleKind, int, Tuple[str, ...], Tuple[str, ...], str]] = {
    "twob_xy_3": (
        BundleKind.TWO_B,
        3,
        ("_xy_mu1", "_xy_mu2"),
        ("_xy_delta", "_xy_delta"),
        "2-bialgebra example on span(1, x, y) with Δ(x) = x⊗x and Δ(y) = y⊗1 + 1⊗y",
    ),
    "twotwob_3": (
        BundleKind.TWO_TWO_B,
        3,
        ("mu1_3", "mu2_3"),
        ("delta_1_5_3", "delta_2_1_3"),
        "type (2,2) 2-2-bialgebra example on K^3",
    ),
}

_BUNDLE_MEMBERS_MULTS: Dict[str, Dict[Tuple[int, int], Dict[int, Any]]] = {
    "_xy_mu1": {(2, 2): {2: 1}, (3, 3): {3: 1}},
    "_xy_mu2": {(2, 2): {2: 1}},
}
_BUNDLE_MEMBERS_COMULTS: Dict[str, Tuple[Dict[int, Dict[Tuple[int, int], Any]], Tuple[int, ...]]] = {
    "_xy_delta": ({1: _E1, 2: {(2, 2): 1}, 3: {(3, 1): 1, (1, 3): 1}}, (1, 1, 0)),
}


@dataclass(frozen=True)
class CatalogEntry:
    """One catalog structure, instantiated over a field."""

    id: str
    dim: int
    kind: str  # "mult", "comult" or "bundle"
    data: Any
    provenance: str
    family: Optional[str] = None
    parameters: Mapping[str, Any] = field(default_factory=dict)

    @property
    def bundle(self) -> Bundle:
        """The entry as a bundle (algebra, coalgebra or the stored bundle)."""
        if isinstance(self.data, Bundle):
            return self.data
        if isinstance(self.data, MultTensor):
            return Bundle(BundleKind.ALGEBRA, (self.data,))
        return Bundle(BundleKind.COALGEBRA, (), (self.data,))


def _resolve_bindings(entry_id: str, bindings: Optional[Mapping[str, object]], fld: Field) -> Dict[str, Any]:
    defaults = _PARAMETERS.get(entry_id, {})
    bindings = dict(bindings or {})
    unknown = sorted(set(bindings) - set(defaults))
    if unknown:
        raise CatalogError(f"{entry_id} has no parameter(s) {', '.join(unknown)}")
    resolved = {}
    for name, default in defaults.items():
        try:
            resolved[name] = fld(bindings.get(name, default))
        except FieldError as e:
            raise CatalogError(f"Bad binding for {name} in {entry_id}: {e.message}") from e
    return resolved


def _substitute(images: Mapping[int, Mapping[Tuple[int, int], Any]], values: Mapping[str, Any]) -> Dict[int, Dict[Tuple[int, int], Any]]:
    out: Dict[int, Dict[Tuple[int, int], Any]] = {}
    for i, image in images.items():
        row = {}
        for key, coefficient in image.items():
            if isinstance(coefficient, str):
                if coefficient not in values:
                    raise CatalogError(f"Missing binding for parameter {coefficient}")
                coefficient = values[coefficient]
            row[key] = coefficient
        out[i] = row
    return out


def _mult(dim: int, products: Mapping[Tuple[int, int], Mapping[int, Any]], fld: Field) -> MultTensor:
    return MultTensor.from_products(dim, products, fld)


def ids(dim: Optional[int] = None, kind: Optional[str] = None) -> List[str]:
    """Catalog ids in their listing order, optionally filtered."""
    result = []
    for entry_id, (n, _, _) in _MULTS.items():
        if kind in (None, "mult") and dim in (None, n):
            result.append(entry_id)
    for entry_id, (family_id, _, counit, _) in _COMULTS.items():
        if kind in (None, "comult") and dim in (None, len(counit)):
            result.append(entry_id)
    for entry_id, (_, n, _, _, _) in _BUNDLES.items():
        if kind in (None, "bundle") and dim in (None, n):
            result.append(entry_id)
    return result


def get(entry_id: str, bindings: Optional[Mapping[str, object]] = None, fld: Field = RATIONALS) -> CatalogEntry:
    """Instantiate a catalog entry; parameterized entries default to their listed binding."""
    values = _resolve_bindings(entry_id, bindings, fld) if entry_id in _COMULTS else {}
    if bindings and entry_id not in _COMULTS:
        raise CatalogError(f"{entry_id} takes no parameters")

    try:
        if entry_id in _MULTS:
            dim, products, provenance = _MULTS[entry_id]
            return CatalogEntry(entry_id, dim, "mult", _mult(dim, products, fld), provenance, family=entry_id)

        if entry_id in _COMULTS:
            family_id, images, counit, provenance = _COMULTS[entry_id]
            dim = len(counit)
            tensor = ComultTensor.from_images(dim, _substitute(images, values), counit, fld)
            return CatalogEntry(entry_id, dim, "comult", tensor, provenance, family_id, values)

        if entry_id in _BUNDLES:
            kind, dim, mult_ids, comult_ids, provenance = _BUNDLES[entry_id]
            mults = tuple(
                _mult(dim, _BUNDLE_MEMBERS_MULTS[m], fld) if m in _BUNDLE_MEMBERS_MULTS else get(m, fld=fld).data
                for m in mult_ids
            )
            comults = tuple(
                ComultTensor.from_images(dim, _BUNDLE_MEMBERS_COMULTS[c][0], _BUNDLE_MEMBERS_COMULTS[c][1], fld)
                if c in _BUNDLE_MEMBERS_COMULTS
                else get(c, fld=fld).data
                for c in comult_ids
            )
            return CatalogEntry(entry_id, dim, "bundle", Bundle(kind, mults, comults), provenance)
    except FieldError as e:
        raise CatalogError(f"{entry_id} cannot be instantiated over {fld}: {e.message}") from e

    raise CatalogError(f"Unknown catalog id: {entry_id}")


def entries(dim: Optional[int] = None, kind: Optional[str] = None, fld: Field = RATIONALS) -> List[CatalogEntry]:
    return [get(entry_id, fld=fld) for entry_id in ids(dim, kind)]


def family(mult_id: str, fld: Field = RATIONALS) -> List[CatalogEntry]:
    """The comultiplications listed for one multiplication."""
    if mult_id not in _MULTS:
        raise CatalogError(f"Unknown multiplication id: {mult_id}")
    return [get(entry_id, fld=fld) for entry_id, row in _COMULTS.items() if row[0] == mult_id]


def pair(mult_id: str, comult_id: str, fld: Field = RATIONALS) -> Tuple[MultTensor, ComultTensor]:
    """A (multiplication, comultiplication) pair from the catalog."""
    m, c = get(mult_id, fld=fld), get(comult_id, fld=fld)
    if m.kind != "mult" or c.kind != "comult":
        raise CatalogError(f"Expected a multiplication and a comultiplication, got {mult_id}, {comult_id}")
    if m.dim != c.dim:
        raise CatalogError(f"Dimension mismatch: {mult_id} is {m.dim}-dimensional, {comult_id} is {c.dim}")
    return m.data, c.data


def verify_entry(entry: CatalogEntry) -> CheckReport:
    """The structural precheck of one entry."""
    if entry.kind == "mult":
        return check_algebra(entry.data)
    if entry.kind == "comult":
        return check_coalgebra(entry.data)
    b = entry.data
    if entry.id == "twob_xy_3":
        # The bundle itself only passes in characteristic 2; members are checked here.
        reports = [check_algebra(m).scoped(f"algebra(mu{i + 1})") for i, m in enumerate(b.mults)]
        reports.append(check_coalgebra(b.comults[0]).scoped("coalgebra(delta1)"))
        return CheckReport.merge(reports)
    return check_bundle(b)


@lru_cache(maxsize=8)
def verify_catalog(fld: Field = RATIONALS) -> Tuple[Tuple[str, CheckReport], ...]:
    """Check every entry once per field; raise CatalogError on any failure."""
    results = tuple((entry.id, verify_entry(entry)) for entry in entries(fld=fld))
    failed = [entry_id for entry_id, report in results if not report.passed]
    if failed:
        raise CatalogError(f"Catalog integrity failure over {fld}: {', '.join(failed)}")
    logger.debug(f"Catalog verified over {fld}: {len(results)} entries")
    return results


def write_entry(entry: CatalogEntry, path: Path) -> Optional[Path]:
    """Write one entry as a structure file."""
    from .structfile import StructureFile, save

    return save(StructureFile.from_data(entry.id, entry.data), path)


def export_all(directory: Path, fld: Field = RATIONALS) -> List[Path]:
    """Write a structure file for every catalog entry into a directory."""
    from .fsutils import ensure_directory_exists

    ensure_directory_exists(directory)
    written = [
        path
        for path in (write_entry(entry, directory / f"{entry.id}.json") for entry in entries(fld=fld))
        if path is not None
    ]
    logger.info(f"Exported {len(written)} catalog entries to {directory}")
    return written


# Census.

PUBLISHED: Dict[int, Dict[str, Any]] = {
    2: {
        "bialgebra": {"mu1_2": 3, "mu2_2": 0},
        "infinitesimal": {"mu1_2": 1, "mu2_2": 0},
        "trivial_2as": 1,
        "nontrivial_2as": 0,
        "types": {"1,1": 3, "1,2": 3, "2,1": 0, "2,2": 0},
        "twotwob": 1,
    },
    3: {
        "bialgebra": {"mu1_3": 18, "mu2_3": 3, "mu3_3": 3, "mu4_3": 0, "mu5_3": 1},
        "infinitesimal": {"mu1_3": 8, "mu2_3": 2, "mu3_3": 2, "mu4_3": 0, "mu5_3": 1},
        "trivial_2as": 13,
        "nontrivial_2as": 3,
        "types": {"1,1": 25, "1,2": 159, "2,1": 1, "2,2": 3},
        "twotwob": 1,
    },
}


@dataclass(frozen=True)
class PoolComult:
    """A comultiplication in a census pool with every catalog id it equals."""

    ids: Tuple[str, ...]
    tensor: ComultTensor

    @property
    def name(self) -> str:
        return "=".join(self.ids)


@dataclass(frozen=True)
class Combination:
    """Multiplication and comultiplication ids of one passing combination."""

    mults: Tuple[str, ...]
    comults: Tuple[Tuple[str, ...], ...]

    def matches(self, mults: Sequence[str], comults: Sequence[str]) -> bool:
        """Check ids position by position; comultiplication ids may be any alias."""
        return tuple(mults) == self.mults and all(
            c in group for c, group in zip(comults, self.comults)
        ) and len(comults) == len(self.comults)

    def label(self) -> str:
        return f"({', '.join(self.mults)}; {', '.join('='.join(g) for g in self.comults)})"


@dataclass
class CensusTable:
    """Recomputed counts for one dimension, next to the published numbers."""

    dim: int
    bialgebra: Dict[str, int] = field(default_factory=dict)
    infinitesimal: Dict[str, int] = field(default_factory=dict)
    trivial_2as: List[Combination] = field(default_factory=list)
    nontrivial_2as: List[Combination] = field(default_factory=list)
    types: Dict[str, List[Combination]] = field(default_factory=dict)
    twotwob_trivial: List[Combination] = field(default_factory=list)
    twotwob_nontrivial: List[Combination] = field(default_factory=list)
    lambda_sweep: Dict[str, Dict[str, bool]] = field(default_factory=dict)
    deviations: List[str] = field(default_factory=list)

    @property
    def type_counts(self) -> Dict[str, int]:
        return {key: len(value) for key, value in self.types.items()}

    @property
    def twotwob(self) -> List[Combination]:
        return self.twotwob_trivial + self.twotwob_nontrivial

    def to_dict(self) -> Dict[str, Any]:
        return {
            "dim": self.dim,
            "bialgebra": self.bialgebra,
            "infinitesimal": self.infinitesimal,
            "trivial_2as": [c.label() for c in self.trivial_2as],
            "nontrivial_2as": [c.label() for c in self.nontrivial_2as],
            "types": {key: [c.label() for c in value] for key, value in self.types.items()},
            "type_counts": self.type_counts,
            "twotwob_trivial": [c.label() for c in self.twotwob_trivial],
            "twotwob_nontrivial": [c.label() for c in self.twotwob_nontrivial],
            "lambda_sweep": self.lambda_sweep,
            "published": PUBLISHED.get(self.dim, {}),
            "deviations": self.deviations,
        }


def _pool(comult_ids: Sequence[str]) -> List[PoolComult]:
    """Deduplicate comultiplications entrywise (data and counit), keeping first-seen order."""
    groups: List[Tuple[List[str], ComultTensor]] = []
    for entry_id in comult_ids:
        tensor = get(entry_id).data
        for ids_so_far, seen in groups:
            if seen == tensor:
                ids_so_far.append(entry_id)
                break
        else:
            groups.append(([entry_id], tensor))
    return [PoolComult(tuple(g), t) for g, t in groups]


def _combo(mults: Sequence[str], comults: Sequence[PoolComult]) -> Combination:
    return Combination(tuple(mults), tuple(c.ids for c in comults))


def census(dim: int) -> CensusTable:
    """Recount every structure kind over the catalog representatives of one dimension."""
    if dim not in PUBLISHED:
        raise CatalogError(f"No catalog for dimension {dim}")
    from .settings import get_settings

    mult_ids = ids(dim, "mult")
    mults = {m: get(m).data for m in mult_ids}
    own = {m: _pool([e.id for e in family(m)]) for m in mult_ids}
    everything = _pool(ids(dim, "comult"))

    bialg: Dict[Tuple[str, str], bool] = {}
    inf: Dict[Tuple[str, str], bool] = {}
    for m in mult_ids:
        for c in everything:
            bialg[(m, c.name)] = check_bialgebra(mults[m], c.tensor).passed
            inf[(m, c.name)] = check_infinitesimal(mults[m], c.tensor, theta=1).passed

    def key_of(c: PoolComult) -> str:
        return next(p.name for p in everything if set(c.ids) <= set(p.ids))

    def is_bialg(m: str, c: PoolComult) -> bool:
        return bialg[(m, key_of(c))]

    def is_inf(m: str, c: PoolComult) -> bool:
        return inf[(m, key_of(c))]

    table = CensusTable(dim)
    for m in mult_ids:
        table.bialgebra[m] = sum(1 for c in own[m] if is_bialg(m, c))
        table.infinitesimal[m] = sum(1 for c in own[m] if is_inf(m, c))
        table.trivial_2as += [_combo((m, m), (c,)) for c in own[m] if is_bialg(m, c) and is_inf(m, c)]

    types: Dict[str, List[Combination]] = {"1,1": [], "1,2": [], "2,1": [], "2,2": []}
    for m in mult_ids:
        passing = [c for c in own[m] if is_bialg(m, c)]
        types["1,1"] += [_combo((m, m), (c, c)) for c in passing]
        types["1,2"] += [_combo((m, m), (c, d)) for c, d in combinations(passing, 2)]

    for a, b in combinations(mult_ids, 2):
        union = _pool([i for c in own[a] + own[b] for i in c.ids])
        for first, second in ((a, b), (b, a)):
            table.nontrivial_2as += [
                _combo((first, second), (c,)) for c in union if is_bialg(first, c) and is_inf(second, c)
            ]
        shared = [c for c in union if is_bialg(a, c) and is_bialg(b, c)]
        types["2,1"] += [_combo((a, b), (c, c)) for c in shared]
        types["2,2"] += [_combo((a, b), (c, d)) for c, d in combinations(shared, 2)]
    table.types = types

    for a in mult_ids:
        for b in mult_ids:
            pool = own[a] if a == b else _pool([i for c in own[a] + own[b] for i in c.ids])
            found = [
                _combo((a, b), (c, d))
                for c in pool
                for d in pool
                if is_bialg(a, c) and is_bialg(b, d) and is_inf(a, d) and is_inf(b, c)
            ]
            if a == b:
                table.twotwob_trivial += found
            else:
                table.twotwob_nontrivial += found

    for entry_id, params in _PARAMETERS.items():
        entry = get(entry_id)
        if entry.dim != dim:
            continue
        for name in params:
            for value in get_settings().checks.lambda_sweep:
                tensor = get(entry_id, {name: value}).data
                m = mults[entry.family]  # type: ignore[index]
                table.lambda_sweep[f"{entry_id}[{name}={value}]"] = {
                    "bialgebra": check_bialgebra(m, tensor).passed,
                    "infinitesimal": check_infinitesimal(m, tensor, theta=1).passed,
                }

    table.deviations = _deviations(table)
    for message in table.deviations:
        logger.warning(f"census({dim}): {message}")
    logger.info(
        f"census({dim}): bialgebra {table.bialgebra}, types {table.type_counts}, "
        f"2as trivial {len(table.trivial_2as)}, 2-2 {len(table.twotwob)}"
    )
    return table


def _deviations(table: CensusTable) -> List[str]:
    published = PUBLISHED[table.dim]
    notes = []
    for column in ("bialgebra", "infinitesimal"):
        for m, expected in published[column].items():
            got = getattr(table, column)[m]
            if got != expected:
                notes.append(f"{column} count for {m}: computed {got}, published {expected}")
    checks = [
        ("trivial 2-associative bialgebras", len(table.trivial_2as), published["trivial_2as"]),
        ("non-trivial 2-associative bialgebras", len(table.nontrivial_2as), published["nontrivial_2as"]),
        ("2-2-bialgebras", len(table.twotwob), published["twotwob"]),
    ]
    checks += [(f"2-bialgebras of type ({key})", len(table.types[key]), n) for key, n in published["types"].items()]
    for label, got, expected in checks:
        if got != expected:
            notes.append(f"{label}: computed {got}, published {expected}")
    return notes
