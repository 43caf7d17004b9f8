"""
Unit tests for exact polynomial arithmetic.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mdp_values.algebra import Polynomial, poly_divrem, poly_gcd, poly_lcm, poly_mul
from mdp_values.exceptions import ZeroPolynomialError
from tests.strategies import polynomials

LAM = Polynomial.lam()


def test_trailing_zeros_are_stripped():
    """Test that coefficient lists are canonical."""
    assert Polynomial([1, 2, 0, 0]) == Polynomial([1, 2])
    assert Polynomial([0, 0]).is_zero
    assert Polynomial([0, 0]).degree == -1
    assert Polynomial([5]).degree == 0


def test_coefficients_parse_rational_strings():
    """Test that "num/den" coefficients are read exactly."""
    p = Polynomial(["1/3", "-2", 4])
    assert p.coefficients == (Fraction(1, 3), Fraction(-2), Fraction(4))
    assert p.leading == 4


def test_invalid_coefficient_raises():
    """Test that unparseable coefficients are rejected."""
    with pytest.raises(ValueError):
        Polynomial(["1/x"])


def test_product_of_linear_factors():
    """Test (λ + 1)(λ − 1) = λ² − 1."""
    assert (LAM + 1) * (LAM - 1) == Polynomial([-1, 0, 1])


def test_horner_evaluation_is_exact():
    """Test exact evaluation at a rational point."""
    p = Polynomial([1, -3, 2])
    assert p(Fraction(1, 2)) == 0
    assert p(Fraction(1, 3)) == Fraction(2, 9)


def test_divmod_by_linear_factor():
    """Test λ³ − 1 = (λ² + λ + 1)(λ − 1)."""
    quotient, remainder = divmod(Polynomial.monomial(3) - 1, LAM - 1)
    assert quotient == Polynomial([1, 1, 1])
    assert remainder.is_zero


def test_divrem_with_remainder():
    """Test a division that leaves a remainder of lower degree."""
    quotient, remainder = poly_divrem(Polynomial([1, 0, 1]), Polynomial([1, 1]))
    assert quotient == Polynomial([-1, 1])
    assert remainder == Polynomial([2])


def test_division_by_zero_polynomial():
    """Test that dividing by zero raises ZeroPolynomialError."""
    with pytest.raises(ZeroPolynomialError):
        poly_divrem(LAM, Polynomial())
    with pytest.raises(ZeroDivisionError):
        LAM % Polynomial()


def test_exact_div_rejects_non_divisors():
    """Test that exact_div refuses a division with remainder."""
    with pytest.raises(ArithmeticError):
        Polynomial([1, 0, 1]).exact_div(LAM - 1)


def test_gcd_is_monic():
    """Test gcd((2λ − 2)(λ − 2), (λ − 1)(λ + 3)) = λ − 1."""
    a = (LAM * 2 - 2) * (LAM - 2)
    b = (LAM - 1) * (LAM + 3)
    assert poly_gcd(a, b) == LAM - 1


def test_gcd_of_zeros_raises():
    """Test that gcd(0, 0) is undefined."""
    with pytest.raises(ZeroPolynomialError):
        poly_gcd(Polynomial(), Polynomial())


def test_gcd_with_zero_is_monic_input():
    """Test gcd(p, 0) = monic(p)."""
    assert poly_gcd(LAM * 3 + 6, Polynomial()) == LAM + 2


def test_lcm():
    """Test lcm((λ − 1)(λ + 1), (λ + 1)(λ + 2))."""
    assert poly_lcm((LAM - 1) * (LAM + 1), (LAM + 1) * (LAM + 2)) == (LAM - 1) * (
        LAM + 1
    ) * (LAM + 2)


def test_argument_transformations():
    """Test p(cλ), p(−λ), p(λⁿ) and coefficient reversal."""
    p = Polynomial([1, 2, 3])
    assert p.scale_argument(Fraction(1, 2)) == Polynomial([1, 1, Fraction(3, 4)])
    assert p.negate_argument() == Polynomial([1, -2, 3])
    assert p.power_argument(2) == Polynomial([1, 0, 2, 0, 3])
    assert p.reversed() == Polynomial([3, 2, 1])


def test_derivative_and_monic():
    """Test formal derivative and monic normalization."""
    p = Polynomial([1, 2, 4])
    assert p.derivative() == Polynomial([2, 8])
    assert p.monic() == Polynomial([Fraction(1, 4), Fraction(1, 2), 1])


def test_power():
    """Test repeated squaring against repeated multiplication."""
    p = LAM + 1
    assert p**3 == p * p * p
    assert p**0 == 1


def test_pretty_string():
    """Test the human-readable rendering."""
    assert str(Polynomial([1, 0, 1])) == "1 + λ²"
    assert str(Polynomial([0, -1])) == "-λ"
    assert str(Polynomial([Fraction(-1, 2), 0, 0, 3])) == "-1/2 + (3)λ³"
    assert str(Polynomial()) == "0"


def test_json_form():
    """Test the coefficient-string JSON form."""
    p = Polynomial([Fraction(1, 2), 0, -3])
    assert p.to_json() == ["1/2", "0", "-3"]
    assert Polynomial.from_json(p.to_json()) == p


@settings(max_examples=50, deadline=None)
@given(a=polynomials, b=polynomials.filter(lambda p: not p.is_zero))
def test_division_identity(a, b):
    """Test a = q·b + r with deg r < deg b."""
    quotient, remainder = poly_divrem(a, b)
    assert poly_mul(quotient, b) + remainder == a
    assert divmod(a, b) == (quotient, remainder)
    assert remainder.degree < b.degree


@settings(max_examples=50, deadline=None)
@given(a=polynomials, b=polynomials, x=st.fractions(min_value=-3, max_value=3, max_denominator=9))
def test_ring_operations_commute_with_evaluation(a, b, x):
    """Test that evaluation is a ring homomorphism."""
    assert (a * b)(x) == a(x) * b(x)
    assert (a + b)(x) == a(x) + b(x)
    assert (a - b)(x) == a(x) - b(x)
