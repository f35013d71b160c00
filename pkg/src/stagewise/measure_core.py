"""Exact dyadic arithmetic and the geometry of binary strings.

Bit strings are plain ``str`` objects over ``"0"``/``"1"``; the empty string
plays the role of the empty word.  Every measure in the package is a
:class:`Dyadic`, so no float ever enters a computation.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from typing import Iterable, Union

BitString = str

_DYADIC_RE = re.compile(r"^\s*(-?\d+)\s*/\s*2\^(\d+)\s*$")


@total_ordering
@dataclass(frozen=True)
class Dyadic:
    """The exact rational ``numerator / 2**log_denominator``.

    Instances are always canonical: the numerator is odd unless the
    denominator exponent is zero.  Equality is therefore structural.
    """

    numerator: int
    log_denominator: int = 0

    def __post_init__(self):
        n, k = self.numerator, self.log_denominator
        if not isinstance(n, int) or not isinstance(k, int):
            raise TypeError("Dyadic needs integer numerator and exponent")
        if k < 0:
            n, k = n << -k, 0
        if n == 0:
            k = 0
        else:
            # strip common factors of two
            tz = (n & -n).bit_length() - 1
            shift = min(tz, k)
            n >>= shift
            k -= shift
        object.__setattr__(self, "numerator", n)
        object.__setattr__(self, "log_denominator", k)

    # -- construction -------------------------------------------------
    @classmethod
    def of(cls, value: Union["Dyadic", int, Fraction, str]) -> "Dyadic":
        if isinstance(value, Dyadic):
            return value
        if isinstance(value, bool):
            raise TypeError("refusing to coerce bool to Dyadic")
        if isinstance(value, int):
            return cls(value, 0)
        if isinstance(value, Fraction):
            den = value.denominator
            if den & (den - 1):
                raise ValueError(f"{value} is not dyadic")
            return cls(value.numerator, den.bit_length() - 1)
        if isinstance(value, str):
            return cls.parse(value)
        raise TypeError(f"cannot make a Dyadic from {type(value).__name__}")

    @classmethod
    def parse(cls, text: str) -> "Dyadic":
        """Parse the ``"num/2^k"`` text form (a bare integer is accepted too)."""
        m = _DYADIC_RE.match(text)
        if m:
            return cls(int(m.group(1)), int(m.group(2)))
        if re.fullmatch(r"\s*-?\d+\s*", text):
            return cls(int(text), 0)
        raise ValueError(f"not a dyadic literal: {text!r}")

    @classmethod
    def power(cls, k: int) -> "Dyadic":
        """``2**-k``."""
        return cls(1, k)

    # -- arithmetic ---------------------------------------------------
    def _aligned(self, other: "Dyadic"):
        k = max(self.log_denominator, other.log_denominator)
        return (self.numerator << (k - self.log_denominator),
                other.numerator << (k - other.log_denominator), k)

    def __add__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b, k = self._aligned(other)
        return Dyadic(a + b, k)

    __radd__ = __add__

    def __neg__(self):
        return Dyadic(-self.numerator, self.log_denominator)

    def __sub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        return Dyadic(self.numerator * other.numerator,
                      self.log_denominator + other.log_denominator)

    __rmul__ = __mul__

    def scale(self, e: int) -> "Dyadic":
        """Multiply by ``2**-e``."""
        if e < 0:
            raise ValueError("scale exponent must be non-negative")
        return Dyadic(self.numerator, self.log_denominator + e)

    # -- comparison ---------------------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return False
        return (self.numerator == other.numerator
                and self.log_denominator == other.log_denominator)

    def __hash__(self):
        return hash((self.numerator, self.log_denominator))

    def __lt__(self, other):
        other = _coerce(other)
        if other is NotImplemented:
            return other
        a, b, _ = self._aligned(other)
        return a < b

    def __bool__(self):
        return self.numerator != 0

    # -- conversion ---------------------------------------------------
    def to_fraction(self) -> Fraction:
        return Fraction(self.numerator, 1 << self.log_denominator)

    def binary_powers(self) -> list[int]:
        """Exponents ``k`` with ``self == sum(2**-k)``, smallest first.

        Only defined for values in ``[0, 1)``.
        """
        if not 0 <= self < 1:
            raise ValueError("binary_powers needs a value in [0, 1)")
        n, m = self.numerator, self.log_denominator
        return [m - i for i in range(n.bit_length() - 1, -1, -1) if n >> i & 1]

    def __str__(self):
        return f"{self.numerator}/2^{self.log_denominator}"

    def __repr__(self):
        return f"Dyadic({self})"


def _coerce(value):
    if isinstance(value, Dyadic):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return Dyadic(value, 0)
    return NotImplemented


ZERO = Dyadic(0)
ONE = Dyadic(1)


def dyadic_add(a: Dyadic, b: Dyadic) -> Dyadic:
    return a + b


def dyadic_scale(a: Dyadic, e: int) -> Dyadic:
    return a.scale(e)


def dyadic_sum(values: Iterable[Dyadic]) -> Dyadic:
    total = ZERO
    for v in values:
        total = total + v
    return total


# -- strings and cylinders ---------------------------------------------

def is_bitstring(s: str) -> bool:
    return isinstance(s, str) and all(c in "01" for c in s)


def check_bitstring(s: str) -> BitString:
    if not is_bitstring(s):
        raise ValueError(f"not a binary string: {s!r}")
    return s


def is_prefix(a: BitString, b: BitString) -> bool:
    """``a`` is a (not necessarily proper) prefix of ``b``."""
    return b.startswith(a)


def compatible(a: BitString, b: BitString) -> bool:
    """True iff the strings are equal or one extends the other."""
    return a.startswith(b) or b.startswith(a)


def all_strings(n: int) -> Iterable[BitString]:
    """All strings of length ``n`` in lexicographic order."""
    if n == 0:
        yield ""
        return
    fmt = f"0{n}b"
    for i in range(1 << n):
        yield format(i, fmt)


def strings_up_to(n: int) -> Iterable[BitString]:
    for k in range(n + 1):
        yield from all_strings(k)


@dataclass(frozen=True)
class Cylinder:
    """The set of streams extending ``base``."""

    base: BitString

    def __post_init__(self):
        check_bitstring(self.base)

    @property
    def measure(self) -> Dyadic:
        return Dyadic.power(len(self.base))

    def __contains__(self, prefix: BitString) -> bool:
        # a finite prefix lies inside the cylinder once it extends the base
        return prefix.startswith(self.base)


def cylinder_measure(c: Cylinder) -> Dyadic:
    return c.measure
