from __future__ import annotations

from decimal import Decimal
from fractions import Fraction
from typing import Annotated

from pydantic import BeforeValidator, PlainSerializer


def to_fraction(value: object) -> Fraction:
    """Coerce ints, decimal/fraction strings, Decimals and floats to an exact Fraction.

    Floats are converted through their shortest repr so that `0.1` becomes `1/10`.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        msg = f"Expected a number, got {value!r}"
        raise TypeError(msg)
    if isinstance(value, int | Decimal):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except ValueError as e:
            msg = f"Not a decimal or p/q literal: {value!r}"
            raise ValueError(msg) from e
    msg = f"Cannot interpret {value!r} as a rational number"
    raise TypeError(msg)


def format_fraction(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


Rational = Annotated[
    Fraction,
    BeforeValidator(to_fraction),
    PlainSerializer(format_fraction, return_type=str, when_used="json"),
]
