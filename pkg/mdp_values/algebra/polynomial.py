"""Exact univariate polynomials in the discount variable λ."""

from fractions import Fraction
from typing import Iterable, List, Tuple, Union

from pydantic_core import core_schema

from mdp_values.algebra.rational import RationalLike, format_rational, parse_rational
from mdp_values.exceptions import ZeroPolynomialError

_SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


class Polynomial:
    """
    Immutable polynomial with exact rational coefficients.

    Coefficients are stored in ascending degree order with trailing zeros
    stripped, so the zero polynomial has no coefficients and degree -1.
    """

    __slots__ = ("_coefficients",)

    def __init__(self, coefficients: Iterable[RationalLike] = ()):
        coefficients = [parse_rational(c) for c in coefficients]
        while coefficients and coefficients[-1] == 0:
            coefficients.pop()
        self._coefficients: Tuple[Fraction, ...] = tuple(coefficients)

    @classmethod
    def constant(cls, value: RationalLike) -> "Polynomial":
        return cls([value])

    @classmethod
    def monomial(cls, degree: int, coefficient: RationalLike = 1) -> "Polynomial":
        """Return coefficient·λ^degree."""
        return cls([0] * degree + [coefficient])

    @classmethod
    def one(cls) -> "Polynomial":
        return cls([1])

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls()

    @classmethod
    def lam(cls) -> "Polynomial":
        """Return the polynomial λ."""
        return cls([0, 1])

    @classmethod
    def coerce(cls, value) -> "Polynomial":
        """
        Build a polynomial from a Polynomial, a scalar, or a coefficient list.

        Raises:
            ValueError: If the value cannot be read as a polynomial.
        """
        if isinstance(value, Polynomial):
            return value
        if isinstance(value, (list, tuple)):
            return cls(value)
        if isinstance(value, (int, Fraction, str)) and not isinstance(value, bool):
            return cls.constant(value)
        raise ValueError(f"Invalid polynomial: {value!r}")

    @classmethod
    def __get_pydantic_core_schema__(cls, source_type, handler):
        return core_schema.no_info_plain_validator_function(
            cls.coerce,
            serialization=core_schema.plain_serializer_function_ser_schema(
                lambda value: value.to_json()
            ),
        )

    @property
    def coefficients(self) -> Tuple[Fraction, ...]:
        return self._coefficients

    @property
    def degree(self) -> int:
        return len(self._coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not self._coefficients

    @property
    def leading(self) -> Fraction:
        if self.is_zero:
            return Fraction(0)
        return self._coefficients[-1]

    def coefficient(self, degree: int) -> Fraction:
        if 0 <= degree < len(self._coefficients):
            return self._coefficients[degree]
        return Fraction(0)

    def __call__(self, x):
        """Evaluate by Horner's scheme; exact for Fraction arguments."""
        result = 0
        for c in reversed(self._coefficients):
            result = result * x + c
        return result

    def evaluate_float(self, x: float) -> float:
        result = 0.0
        for c in reversed(self._coefficients):
            result = result * x + float(c)
        return result

    def __bool__(self) -> bool:
        return not self.is_zero

    def __eq__(self, other) -> bool:
        if isinstance(other, Polynomial):
            return self._coefficients == other._coefficients
        if isinstance(other, (int, Fraction)):
            return self._coefficients == Polynomial.constant(other)._coefficients
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._coefficients)

    def __neg__(self) -> "Polynomial":
        return Polynomial(-c for c in self._coefficients)

    def __add__(self, other) -> "Polynomial":
        other = _as_polynomial(other)
        if other is NotImplemented:
            return NotImplemented
        size = max(len(self._coefficients), len(other._coefficients))
        return Polynomial(self.coefficient(i) + other.coefficient(i) for i in range(size))

    __radd__ = __add__

    def __sub__(self, other) -> "Polynomial":
        other = _as_polynomial(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Polynomial":
        return (-self) + other

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            return Polynomial(c * other for c in self._coefficients)
        other = _as_polynomial(other)
        if other is NotImplemented:
            return NotImplemented
        if self.is_zero or other.is_zero:
            return Polynomial()
        product = [Fraction(0)] * (len(self._coefficients) + len(other._coefficients) - 1)
        for i, a in enumerate(self._coefficients):
            if a == 0:
                continue
            for j, b in enumerate(other._coefficients):
                if b:
                    product[i + j] += a * b
        return Polynomial(product)

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Polynomial":
        if isinstance(scalar, Polynomial):
            return self.exact_div(scalar)
        scalar = parse_rational(scalar)
        if scalar == 0:
            raise ZeroDivisionError("Polynomial division by zero scalar")
        return Polynomial(c / scalar for c in self._coefficients)

    def __pow__(self, exponent: int) -> "Polynomial":
        result = Polynomial.one()
        base = self
        while exponent > 0:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __divmod__(self, other: "Polynomial") -> Tuple["Polynomial", "Polynomial"]:
        return poly_divrem(self, other)

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return poly_divrem(self, other)[0]

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return poly_divrem(self, other)[1]

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        """
        Divide by a polynomial that is known to divide self.

        Raises:
            ArithmeticError: If the remainder is nonzero.
        """
        quotient, remainder = poly_divrem(self, other)
        if not remainder.is_zero:
            raise ArithmeticError(f"{other} does not divide {self}")
        return quotient

    def monic(self) -> "Polynomial":
        if self.is_zero:
            return self
        return self / self.leading

    def derivative(self) -> "Polynomial":
        return Polynomial(i * c for i, c in enumerate(self._coefficients) if i > 0)

    def scale_argument(self, factor: RationalLike) -> "Polynomial":
        """Return p(factor·λ)."""
        factor = parse_rational(factor)
        return Polynomial(c * factor**i for i, c in enumerate(self._coefficients))

    def negate_argument(self) -> "Polynomial":
        """Return p(−λ)."""
        return self.scale_argument(-1)

    def power_argument(self, n: int) -> "Polynomial":
        """Return p(λⁿ)."""
        if self.is_zero:
            return self
        spread = [Fraction(0)] * (self.degree * n + 1)
        for i, c in enumerate(self._coefficients):
            spread[i * n] = c
        return Polynomial(spread)

    def reversed(self) -> "Polynomial":
        """Return λ^deg·p(1/λ), the coefficient-reversed polynomial."""
        return Polynomial(reversed(self._coefficients))

    def nonzero_terms(self) -> List[Tuple[int, Fraction]]:
        return [(i, c) for i, c in enumerate(self._coefficients) if c != 0]

    def to_json(self) -> List[str]:
        return [format_rational(c) for c in self._coefficients]

    @classmethod
    def from_json(cls, data: List[Union[str, int]]) -> "Polynomial":
        return cls(data)

    def __repr__(self) -> str:
        return f"Polynomial({self.to_json()})"

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        terms = []
        for i, c in self.nonzero_terms():
            if i == 0:
                body = format_rational(abs(c))
            else:
                power = "λ" if i == 1 else "λ" + str(i).translate(_SUPERSCRIPTS)
                body = power if abs(c) == 1 else f"({format_rational(abs(c))})" + power
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        first_sign, first_body = terms[0]
        text = ("-" if first_sign == "-" else "") + first_body
        for sign, body in terms[1:]:
            text += f" {sign} {body}"
        return text


def _as_polynomial(value):
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return Polynomial.constant(value)
    return NotImplemented


def poly_mul(a: Polynomial, b: Polynomial) -> Polynomial:
    """Return the exact product a·b."""
    return a * b


def poly_divrem(a: Polynomial, b: Polynomial) -> Tuple[Polynomial, Polynomial]:
    """
    Divide a by b with remainder.

    Args:
        a: The dividend.
        b: The divisor.

    Returns:
        (quotient, remainder) with a = quotient·b + remainder and deg remainder < deg b.

    Raises:
        ZeroPolynomialError: If b is the zero polynomial.
    """
    if b.is_zero:
        raise ZeroPolynomialError("Division by the zero polynomial")
    remainder = list(a.coefficients)
    divisor = b.coefficients
    shift_count = len(remainder) - len(divisor)
    if shift_count < 0:
        return Polynomial(), a
    lead = divisor[-1]
    quotient = [Fraction(0)] * (shift_count + 1)
    for shift in range(shift_count, -1, -1):
        factor = remainder[shift + len(divisor) - 1] / lead
        quotient[shift] = factor
        if factor:
            for i, d in enumerate(divisor):
                remainder[shift + i] -= factor * d
    return Polynomial(quotient), Polynomial(remainder[: len(divisor) - 1])


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """
    Return the monic greatest common divisor of a and b.

    Raises:
        ZeroPolynomialError: If both inputs are zero.
    """
    if a.is_zero and b.is_zero:
        raise ZeroPolynomialError("gcd of two zero polynomials is undefined")
    a, b = a.monic(), b.monic()
    while not b.is_zero:
        a, b = b, (a % b).monic()
    return a


def poly_lcm(a: Polynomial, b: Polynomial) -> Polynomial:
    """Return the monic least common multiple of two nonzero polynomials."""
    return (a * b).exact_div(poly_gcd(a, b)).monic()
