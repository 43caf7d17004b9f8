"""Reduced rational functions P/Q in the discount variable λ."""

from fractions import Fraction
from typing import Dict, List, Optional

from pydantic_core import core_schema

from mdp_values.algebra.polynomial import Polynomial, poly_gcd
from mdp_values.algebra.rational import RationalLike, parse_rational
from mdp_values.exceptions import PoleError, ZeroPolynomialError


class RationalFunction:
    """
    Immutable rational function in canonical form.

    The numerator and denominator are coprime and the denominator is monic,
    so two representations of the same function compare equal.
    """

    __slots__ = ("_numerator", "_denominator")

    def __init__(self, numerator, denominator=None):
        numerator = Polynomial.coerce(numerator)
        denominator = Polynomial.one() if denominator is None else Polynomial.coerce(denominator)
        if denominator.is_zero:
            raise ZeroPolynomialError("Rational function with zero denominator")
        if numerator.is_zero:
            self._numerator = numerator
            self._denominator = Polynomial.one()
            return
        if denominator.degree > 0:
            common = poly_gcd(numerator, denominator)
            if common.degree > 0:
                numerator = numerator.exact_div(common)
                denominator = denominator.exact_div(common)
        lead = denominator.leading
        if lead != 1:
            numerator = numerator / lead
            denominator = denominator / lead
        self._numerator = numerator
        self._denominator = denominator

    @classmethod
    def constant(cls, value: RationalLike) -> "RationalFunction":
        return cls(Polynomial.constant(value))

    @classmethod
    def coerce(cls, value) -> "RationalFunction":
        """
        Build a rational function from a RationalFunction, a polynomial, or {"num", "den"}.

        Raises:
            ValueError: If the value cannot be read as a rational function.
        """
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, dict):
            try:
                return cls.from_json(value)
            except (KeyError, ZeroDivisionError) as e:
                raise ValueError(f"Invalid rational function: {value!r}") from e
        return cls(Polynomial.coerce(value))

    @classmethod
    def __get_pydantic_core_schema__(cls, source_type, handler):
        return core_schema.no_info_plain_validator_function(
            cls.coerce,
            serialization=core_schema.plain_serializer_function_ser_schema(
                lambda value: value.to_json()
            ),
        )

    @property
    def numerator(self) -> Polynomial:
        return self._numerator

    @property
    def denominator(self) -> Polynomial:
        return self._denominator

    @property
    def is_zero(self) -> bool:
        return self._numerator.is_zero

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Polynomial)) and not isinstance(other, bool):
            other = RationalFunction(Polynomial.coerce(other))
        if not isinstance(other, RationalFunction):
            return NotImplemented
        return (
            self._numerator == other._numerator
            and self._denominator == other._denominator
        )

    def __hash__(self) -> int:
        return hash((self._numerator, self._denominator))

    def __neg__(self) -> "RationalFunction":
        return _reduced(-self._numerator, self._denominator)

    def __add__(self, other) -> "RationalFunction":
        other = _as_rational_function(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            return self
        if self.is_zero:
            return other
        if self._denominator == other._denominator:
            return RationalFunction(self._numerator + other._numerator, self._denominator)
        common = poly_gcd(self._denominator, other._denominator)
        left = other._denominator.exact_div(common)
        right = self._denominator.exact_div(common)
        return RationalFunction(
            self._numerator * left + other._numerator * right,
            self._denominator * left,
        )

    __radd__ = __add__

    def __sub__(self, other) -> "RationalFunction":
        other = _as_rational_function(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "RationalFunction":
        return (-self) + other

    def __mul__(self, other) -> "RationalFunction":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                return RationalFunction(Polynomial())
            return _reduced(self._numerator * other, self._denominator)
        other = _as_rational_function(other)
        if other is NotImplemented:
            return NotImplemented
        return RationalFunction(
            self._numerator * other._numerator, self._denominator * other._denominator
        )

    __rmul__ = __mul__

    def __truediv__(self, other) -> "RationalFunction":
        if isinstance(other, (int, Fraction)) and not isinstance(other, bool):
            if other == 0:
                raise ZeroDivisionError("Rational function division by zero")
            return _reduced(self._numerator / other, self._denominator)
        other = _as_rational_function(other)
        if other is NotImplemented:
            return NotImplemented
        if other.is_zero:
            raise ZeroPolynomialError("Division by the zero rational function")
        return RationalFunction(
            self._numerator * other._denominator, self._denominator * other._numerator
        )

    def __call__(self, x: RationalLike) -> Fraction:
        return ratfunc_eval(self, parse_rational(x))

    def evaluate_float(self, x: float) -> float:
        """Evaluate in floating point; exact evaluation is preferred where it matters."""
        denominator = self._denominator.evaluate_float(x)
        if denominator == 0.0:
            raise PoleError(x)
        return self._numerator.evaluate_float(x) / denominator

    def scale_argument(self, factor: RationalLike) -> "RationalFunction":
        """Return f(factor·λ)."""
        factor = parse_rational(factor)
        if factor == 0:
            return RationalFunction.constant(ratfunc_eval(self, Fraction(0)))
        return RationalFunction(
            self._numerator.scale_argument(factor),
            self._denominator.scale_argument(factor),
        )

    def negate_argument(self) -> "RationalFunction":
        """Return f(−λ)."""
        return self.scale_argument(-1)

    def power_argument(self, n: int) -> "RationalFunction":
        """Return f(λⁿ)."""
        return RationalFunction(
            self._numerator.power_argument(n), self._denominator.power_argument(n)
        )

    def taylor_coefficients(self, count: int) -> List[Fraction]:
        return taylor_coefficients(self, count)

    def to_json(self) -> Dict[str, List[str]]:
        return {"num": self._numerator.to_json(), "den": self._denominator.to_json()}

    @classmethod
    def from_json(cls, data: Dict[str, List[str]]) -> "RationalFunction":
        return cls(Polynomial(data["num"]), Polynomial(data["den"]))

    def __repr__(self) -> str:
        return f"RationalFunction({self._numerator!r}, {self._denominator!r})"

    def __str__(self) -> str:
        if self._denominator == 1:
            return str(self._numerator)
        return f"({self._numerator}) / ({self._denominator})"


def _reduced(numerator: Polynomial, denominator: Polynomial) -> RationalFunction:
    """Wrap an already reduced pair without recomputing the gcd."""
    function = RationalFunction.__new__(RationalFunction)
    function._numerator = numerator
    function._denominator = denominator if not numerator.is_zero else Polynomial.one()
    return function


def _as_rational_function(value) -> Optional[RationalFunction]:
    if isinstance(value, RationalFunction):
        return value
    if isinstance(value, Polynomial):
        return _reduced(value, Polynomial.one())
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        return _reduced(Polynomial.constant(value), Polynomial.one())
    return NotImplemented


def ratfunc_eval(f: RationalFunction, x: Fraction) -> Fraction:
    """
    Evaluate f exactly at a rational point.

    Args:
        f: The rational function.
        x: The evaluation point.

    Returns:
        P(x)/Q(x) as an exact rational.

    Raises:
        PoleError: If Q(x) = 0.
    """
    denominator = f.denominator(x)
    if denominator == 0:
        raise PoleError(x)
    return Fraction(f.numerator(x)) / denominator


def taylor_coefficients(f: RationalFunction, count: int) -> List[Fraction]:
    """
    Return the first ``count`` power-series coefficients of f at λ = 0.

    Computed by exact series division; the coefficient of λ^(n-1) of a policy
    value is the expected payoff of stage n.

    Raises:
        PoleError: If f has a pole at 0.
    """
    denominator = f.denominator
    d0 = denominator.coefficient(0)
    if d0 == 0:
        raise PoleError(Fraction(0))
    series: List[Fraction] = []
    for n in range(count):
        value = f.numerator.coefficient(n)
        for j in range(1, min(n, denominator.degree) + 1):
            value -= denominator.coefficient(j) * series[n - j]
        series.append(value / d0)
    return series
