"""Exact rational helpers: ingestion, an infinite likelihood ratio, decimal rendering."""
from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from typing import Union

from .errors import Unrealizable

HALF = Fraction(1, 2)
ZERO = Fraction(0)
ONE = Fraction(1)


class _Infinity:
    """Positive infinity, used only as a likelihood ratio with zero denominator."""

    __slots__ = ()

    def __repr__(self):
        return "INF"

    def __str__(self):
        return "inf"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("persuasion.INF")

    def __lt__(self, other):
        return False

    def __le__(self, other):
        return other is self

    def __gt__(self, other):
        return other is not self

    def __ge__(self, other):
        return True

    def __reduce__(self):
        return "INF"


INF = _Infinity()

Ratio = Union[Fraction, _Infinity]


def to_fraction(value) -> Fraction:
    """Convert a decimal string, int, Fraction or float to an exact Fraction.

    Floats go through ``repr`` so that ``0.3`` becomes 3/10 rather than the
    nearest binary double.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not probabilities")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"cannot convert {type(value).__name__} to a rational")


def ratio(num: Fraction, den: Fraction) -> Ratio:
    """Likelihood ratio num/den; INF when only the denominator vanishes."""
    if den == 0:
        if num == 0:
            raise Unrealizable("both numerator and denominator masses are zero")
        return INF
    return Fraction(num) / Fraction(den)


def posterior_from_ratio(r: Ratio) -> Fraction:
    """Map a likelihood ratio r to the probability r/(1+r)."""
    if r is INF:
        return ONE
    return r / (1 + r)


def is_inf(r) -> bool:
    return r is INF


def format_decimal(value: Fraction, places: int = 12) -> str:
    """Round half-even to ``places`` digits and render without exponent."""
    value = Fraction(value)
    scaled = round(value * 10**places)
    sign = "-" if scaled < 0 else ""
    digits = str(abs(scaled)).rjust(places + 1, "0")
    return f"{sign}{digits[:-places]}.{digits[-places:]}"


def format_fraction(value: Fraction) -> str:
    value = Fraction(value)
    return f"{value.numerator}/{value.denominator}"


def parse_fraction(text: str) -> Fraction:
    return Fraction(text)
