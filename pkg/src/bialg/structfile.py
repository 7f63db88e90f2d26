"""
JSON structure files.

A file holds one bundle: sparse 1-based structure constants with coefficient
strings ("3", "-1/2"), so loading and saving never loses exactness.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

from .core import Bundle, BundleKind, ComultTensor, MultTensor, StructureError, basis_vector
from .fsutils import OverwritePolicy, ValidationError, ensure_directory_exists
from .scalars import Field, FieldError, Scalar, format_scalar
from .settings import get_settings

logger = logging.getLogger(__name__)

_MULT_KEYS = ("mult", "mult2")
_COMULT_KEYS = ("comult", "comult2")
_COUNIT_KEYS = ("counit", "counit2")


class StructureFileError(Exception):
    """Raised when a structure file cannot be parsed or violates the schema."""

    def __init__(self, message: str, path: Optional[Path] = None) -> None:
        self.message = f"{path}: {message}" if path is not None else message
        self.path = path
        super().__init__(self.message)


@dataclass(frozen=True)
class StructureFile:
    """A named bundle as stored on disk."""

    name: str
    bundle: Bundle

    @classmethod
    def from_data(cls, name: str, data: Union[MultTensor, ComultTensor, Bundle]) -> "StructureFile":
        if isinstance(data, MultTensor):
            data = Bundle(BundleKind.ALGEBRA, (data,))
        elif isinstance(data, ComultTensor):
            data = Bundle(BundleKind.COALGEBRA, (), (data,))
        return cls(name, data)

    def to_dict(self) -> Dict[str, Any]:
        b = self.bundle
        fld = b.field
        data: Dict[str, Any] = {"name": self.name, "kind": b.kind.value, "dim": b.dim}
        if fld.is_rational:
            data["field"] = "Q"
        else:
            data["field"] = "Fp"
            data["p"] = fld.characteristic
        if b.unit is not None:
            index = b.mults[0].unit_index
            data["unit"] = index if index is not None else [format_scalar(v) for v in b.unit]
        for key, m in zip(_MULT_KEYS, b.mults):
            data[key] = _sparse(m.c)
        for key, counit_key, c in zip(_COMULT_KEYS, _COUNIT_KEYS, b.comults):
            data[key] = _sparse(c.d)
            if c.counit is not None:
                data[counit_key] = [format_scalar(v) for v in c.counit]
        if b.theta is not None:
            data["theta"] = format_scalar(b.theta)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "StructureFile":
        if not isinstance(data, dict):
            raise StructureFileError("Top level must be an object")
        try:
            kind = BundleKind(data["kind"])
            dim = data["dim"]
            if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
                raise StructureFileError(f"dim must be a positive integer, got {dim!r}")
            limit = get_settings().arithmetic.max_dimension
            if dim > limit:
                raise StructureFileError(f"dim {dim} exceeds the configured maximum of {limit}")
            fld = _parse_field(data)

            unit = _parse_unit(data.get("unit"), dim, fld)
            mults = []
            for key in _MULT_KEYS:
                if key in data:
                    mults.append(MultTensor(_dense(data[key], dim, fld, key), fld, unit, strict=False))
            comults = []
            for key, counit_key in zip(_COMULT_KEYS, _COUNIT_KEYS):
                if key in data:
                    counit = None
                    if counit_key in data:
                        counit = _parse_vector(data[counit_key], dim, fld, counit_key)
                    comults.append(ComultTensor(_dense(data[key], dim, fld, key), fld, counit))
            if mults and unit is None:
                raise StructureFileError("Multiplications need a unit")

            theta: Optional[Scalar] = None
            if kind is BundleKind.INFINITESIMAL:
                theta = fld(str(data.get("theta", get_settings().checks.default_theta)))
            elif "theta" in data:
                raise StructureFileError(f"theta is only allowed for kind infinitesimal, not {kind.value}")

            name = str(data.get("name", ""))
            return cls(name, Bundle(kind, tuple(mults), tuple(comults), theta))
        except KeyError as e:
            raise StructureFileError(f"Missing field {e.args[0]!r}") from e
        except ValueError as e:
            raise StructureFileError(str(e)) from e
        except (StructureError, FieldError) as e:
            raise StructureFileError(e.message) from e


def _sparse(cube: Sequence[Sequence[Sequence[Scalar]]]) -> List[List[Any]]:
    n = len(cube)
    return [
        [i + 1, j + 1, k + 1, format_scalar(cube[i][j][k])]
        for i in range(n)
        for j in range(n)
        for k in range(n)
        if cube[i][j][k]
    ]


def _parse_field(data: Dict[str, Any]) -> Field:
    tag = data.get("field", "Q")
    if tag == "Q":
        return Field(0)
    if tag == "Fp":
        p = data.get("p")
        if not isinstance(p, int) or isinstance(p, bool):
            raise StructureFileError(f"Field Fp needs an integer p, got {p!r}")
        return Field.prime(p)
    raise StructureFileError(f"Unknown field {tag!r}")


def _parse_coefficient(value: Any, fld: Field, where: str) -> Scalar:
    if isinstance(value, int) and not isinstance(value, bool):
        return fld(value)
    if not isinstance(value, str):
        raise StructureFileError(f"{where}: coefficient must be a string, got {value!r}")
    return fld.parse_scalar(value)


def _parse_vector(raw: Any, dim: int, fld: Field, where: str) -> tuple[Scalar, ...]:
    if not isinstance(raw, list) or len(raw) != dim:
        raise StructureFileError(f"{where} must be a list of {dim} coefficients")
    return tuple(_parse_coefficient(v, fld, where) for v in raw)


def _parse_unit(raw: Any, dim: int, fld: Field) -> Optional[tuple[Scalar, ...]]:
    if raw is None:
        return None
    if isinstance(raw, int) and not isinstance(raw, bool):
        return basis_vector(dim, raw, fld)
    return _parse_vector(raw, dim, fld, "unit")


def _dense(entries: Any, dim: int, fld: Field, where: str) -> tuple:
    if not isinstance(entries, list):
        raise StructureFileError(f"{where} must be a list of [i, j, k, coefficient] entries")
    raw = [[[fld.zero] * dim for _ in range(dim)] for _ in range(dim)]
    for entry in entries:
        if not isinstance(entry, list) or len(entry) != 4:
            raise StructureFileError(f"{where}: bad entry {entry!r}")
        i, j, k, coefficient = entry
        for index in (i, j, k):
            if not isinstance(index, int) or isinstance(index, bool) or not 1 <= index <= dim:
                raise StructureFileError(f"{where}: index {index!r} out of range 1..{dim}")
        raw[i - 1][j - 1][k - 1] = raw[i - 1][j - 1][k - 1] + _parse_coefficient(coefficient, fld, where)
    return tuple(tuple(tuple(col) for col in row) for row in raw)


def loads(text: str) -> StructureFile:
    """Parse a structure file from text."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise StructureFileError(f"Invalid JSON: {e}") from e
    return StructureFile.from_dict(data)


def dumps(sf: StructureFile) -> str:
    return json.dumps(sf.to_dict(), indent=2, ensure_ascii=False) + "\n"


def load(path: Path) -> StructureFile:
    """Read a structure file; unit-law failures are left for the checkers to report."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise StructureFileError(f"Cannot read file: {e}", Path(path)) from e
    try:
        sf = loads(text)
    except StructureFileError as e:
        raise StructureFileError(e.message, Path(path)) from e
    logger.debug(f"Loaded {sf.bundle.kind.value} structure {sf.name!r} from {path}")
    return sf


def save(sf: StructureFile, path: Path, policy: str = OverwritePolicy.REPLACE) -> Optional[Path]:
    """Write a structure file; returns the written path, or None when skipped."""
    path = Path(path)
    ensure_directory_exists(path.parent)
    target, skip = OverwritePolicy.resolve_output_path(path, policy)
    if skip:
        logger.info(f"Skipping existing file {target}")
        return None
    try:
        target.write_text(dumps(sf), encoding="utf-8")
    except OSError as e:
        raise ValidationError(f"Failed to write {target}: {e}") from e
    logger.info(f"Wrote {sf.bundle.kind.value} structure {sf.name!r} to {target}")
    return target
