"""Exact rational scalars and their "num/den" string form."""

from fractions import Fraction
from typing import Annotated, Union

from pydantic import PlainSerializer, PlainValidator

RationalLike = Union[int, Fraction, str]


def parse_rational(value) -> Fraction:
    """
    Parse a rational from a "num/den" string, an integer or a Fraction.

    Floats are accepted through their shortest decimal representation, so a JSON
    number 0.1 reads as 1/10 rather than its binary expansion.

    Args:
        value: The value to parse.

    Returns:
        The value as a Fraction in lowest terms.

    Raises:
        ValueError: If the value is not a rational.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"Invalid rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as e:
            raise ValueError(f"Invalid rational: {value!r}") from e
    raise ValueError(f"Invalid rational: {value!r}")


def format_rational(value: Fraction) -> str:
    """Format a rational as "num/den", or as a bare integer when den = 1."""
    return str(value)


# Exact scalar field for pydantic models, serialized as "num/den"
Rational = Annotated[
    Fraction,
    PlainValidator(parse_rational),
    PlainSerializer(format_rational, return_type=str),
]
