"""Exact scalars: rationals via fractions.Fraction and residues modulo a small prime."""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from sympy import isprime

logger = logging.getLogger(__name__)


class FieldError(Exception):
    """Raised when scalars from different fields meet or a value cannot be represented."""

    def __init__(self, message: str) -> None:
        self.message = message
        super().__init__(self.message)


@lru_cache(maxsize=64)
def _checked_prime(p: int) -> int:
    if p < 2 or not isprime(p):
        raise FieldError(f"Modulus is not a prime: {p}")
    return p


class Fp:
    """Residue class modulo a prime p, stored canonically in [0, p)."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int) -> None:
        self.p = _checked_prime(p)
        self.value = value % p

    def _coerce(self, other: object) -> "Fp":
        if isinstance(other, Fp):
            if other.p != self.p:
                raise FieldError(f"Cannot combine F{self.p} and F{other.p}")
            return other
        if isinstance(other, bool) or not isinstance(other, int):
            raise FieldError(f"Cannot combine F{self.p} with {type(other).__name__}")
        return Fp(other, self.p)

    def __add__(self, other: object) -> "Fp":
        return Fp(self.value + self._coerce(other).value, self.p)

    __radd__ = __add__

    def __sub__(self, other: object) -> "Fp":
        return Fp(self.value - self._coerce(other).value, self.p)

    def __rsub__(self, other: object) -> "Fp":
        return Fp(self._coerce(other).value - self.value, self.p)

    def __mul__(self, other: object) -> "Fp":
        return Fp(self.value * self._coerce(other).value, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other: object) -> "Fp":
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other: object) -> "Fp":
        return self._coerce(other) * self.inverse()

    def __neg__(self) -> "Fp":
        return Fp(-self.value, self.p)

    def __pow__(self, exponent: int) -> "Fp":
        if exponent < 0:
            return self.inverse() ** (-exponent)
        return Fp(pow(self.value, exponent, self.p), self.p)

    def inverse(self) -> "Fp":
        """Multiplicative inverse; raises ZeroDivisionError on zero."""
        if self.value == 0:
            raise ZeroDivisionError(f"0 is not invertible in F{self.p}")
        return Fp(pow(self.value, -1, self.p), self.p)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Fp):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int) and not isinstance(other, bool):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.value, self.p))

    def __bool__(self) -> bool:
        return self.value != 0

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"F{self.p}({self.value})"

    def __str__(self) -> str:
        return str(self.value)


Scalar = Union[Fraction, Fp]

_COEFFICIENT_PATTERN = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


@dataclass(frozen=True)
class Field:
    """The ground field: Q when characteristic is 0, otherwise F_p."""

    characteristic: int = 0

    def __post_init__(self) -> None:
        if self.characteristic != 0:
            _checked_prime(self.characteristic)

    @classmethod
    def prime(cls, p: int) -> "Field":
        """Get the prime field F_p."""
        return cls(p)

    @classmethod
    def parse(cls, text: str) -> "Field":
        """Parse a field tag such as "Q", "F5", "Fp5" or "GF(5)"."""
        tag = text.strip().upper().replace(" ", "")
        if tag in ("Q", "QQ"):
            return RATIONALS
        match = re.fullmatch(r"(?:GF\(|FP|F)(\d+)\)?", tag)
        if not match:
            raise FieldError(f"Unknown field tag: {text!r}")
        return cls(int(match.group(1)))

    @property
    def is_rational(self) -> bool:
        return self.characteristic == 0

    @property
    def tag(self) -> str:
        return "Q" if self.is_rational else f"F{self.characteristic}"

    @property
    def zero(self) -> Scalar:
        return self(0)

    @property
    def one(self) -> Scalar:
        return self(1)

    def __call__(self, value: object) -> Scalar:
        """Coerce an int, Fraction, Fp or coefficient string into this field."""
        if isinstance(value, str):
            return self.parse_scalar(value)
        if isinstance(value, bool):
            raise FieldError("Booleans are not field elements")
        if self.is_rational:
            if isinstance(value, Fp):
                raise FieldError(f"Cannot lift F{value.p} element {value} to Q")
            if isinstance(value, (int, Fraction)):
                return Fraction(value)
            raise FieldError(f"Not an exact rational: {value!r}")
        p = self.characteristic
        if isinstance(value, Fp):
            if value.p != p:
                raise FieldError(f"Cannot combine F{value.p} and F{p}")
            return value
        if isinstance(value, int):
            return Fp(value, p)
        if isinstance(value, Fraction):
            if value.denominator % p == 0:
                raise FieldError(f"Denominator of {value} vanishes mod {p}")
            return Fp(value.numerator, p) * Fp(value.denominator, p).inverse()
        raise FieldError(f"Not an exact scalar: {value!r}")

    def parse_scalar(self, text: str) -> Scalar:
        """Parse an integer or "a/b" coefficient string."""
        match = _COEFFICIENT_PATTERN.match(text)
        if not match:
            raise FieldError(f"Invalid coefficient: {text!r}")
        numerator = int(match.group(1))
        denominator = int(match.group(2)) if match.group(2) else 1
        if denominator == 0:
            raise FieldError(f"Zero denominator in coefficient: {text!r}")
        return self(Fraction(numerator, denominator))

    def contains(self, value: object) -> bool:
        """Check whether value already is an element of this field."""
        if self.is_rational:
            return isinstance(value, Fraction)
        return isinstance(value, Fp) and value.p == self.characteristic

    def elements(self) -> list[Scalar]:
        """All elements of a finite field, in canonical order 0..p-1."""
        if self.is_rational:
            raise FieldError("Q is infinite")
        return [Fp(v, self.characteristic) for v in range(self.characteristic)]

    def __str__(self) -> str:
        return self.tag


RATIONALS = Field(0)


def field_of(value: Scalar) -> Field:
    """Get the field a scalar lives in."""
    if isinstance(value, Fp):
        return Field(value.p)
    if isinstance(value, Fraction):
        return RATIONALS
    raise FieldError(f"Not a scalar: {value!r}")


def format_scalar(value: Scalar) -> str:
    """Format a scalar as a coefficient string ("3", "-1/2")."""
    return str(value)
