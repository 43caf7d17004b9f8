"""
Unit tests for custom exceptions.
"""

from fractions import Fraction

import pytest

from mdp_values.exceptions import (
    CapExceededError,
    GadgetSearchExhaustedError,
    MdpValuesError,
    ParseError,
    PoleError,
    RootFindingError,
    TierMismatchError,
    ValidationError,
    ZeroPolynomialError,
)


def test_mdp_values_error():
    """Test the base MdpValuesError exception."""
    with pytest.raises(MdpValuesError) as exc_info:
        raise MdpValuesError("Test error")
    assert str(exc_info.value) == "Test error"
    assert exc_info.value.exit_code == 1
    assert exc_info.value.original_error is None


def test_original_error_is_kept():
    """Test that the causing exception is attached."""
    cause = ValueError("bad")
    error = ParseError("could not read", original_error=cause)
    assert error.original_error is cause


def test_validation_error():
    """Test the ValidationError exception."""
    with pytest.raises(ValidationError) as exc_info:
        raise ValidationError("Invalid input")
    assert str(exc_info.value) == "Invalid input"
    assert exc_info.value.exit_code == 2
    assert isinstance(exc_info.value, MdpValuesError)


def test_validation_error_parameter_and_violations():
    """Test the parameter hint and the itemized violations."""
    error = ValidationError(
        "Discount factor out of range.",
        parameter="lambda",
        valid_values="[0, 1)",
        violations=["row_sum: s0|a0 sums to 1/2", "negative: s1|a0 -> s0"],
    )
    assert error.parameter == "lambda"
    assert error.violations == ["row_sum: s0|a0 sums to 1/2", "negative: s1|a0 -> s0"]
    assert str(error) == (
        "Discount factor out of range. Valid values for 'lambda': [0, 1)"
        "\n- row_sum: s0|a0 sums to 1/2"
        "\n- negative: s1|a0 -> s0"
    )
    assert str(ValidationError("Bad value.", parameter="bound")) == "Bad value. Parameter: 'bound'"


def test_parse_error():
    """Test that the source is prefixed to the message."""
    error = ParseError("not valid JSON", source="spec.json")
    assert str(error) == "spec.json: not valid JSON"
    assert error.source == "spec.json"
    assert error.exit_code == 3
    assert str(ParseError("bad rational")) == "bad rational"


def test_pole_error():
    """Test the PoleError exception."""
    error = PoleError(Fraction(1, 2))
    assert error.point == Fraction(1, 2)
    assert str(error) == "Rational function has a pole at 1/2"
    assert isinstance(error, ZeroDivisionError)
    assert isinstance(error, MdpValuesError)


def test_zero_polynomial_error():
    """Test that the zero-polynomial error is also a ZeroDivisionError."""
    with pytest.raises(ZeroDivisionError):
        raise ZeroPolynomialError("division by the zero polynomial")


def test_gadget_search_exhausted_error():
    """Test the GadgetSearchExhaustedError exception."""
    error = GadgetSearchExhaustedError(Fraction(0), Fraction(4), 3)
    assert (error.b, error.c, error.bound) == (0, 4, 3)
    assert error.exit_code == 4
    assert "λ² + (0)λ + (4)" in str(error)
    assert "--gadget-bound" in str(error)


def test_cap_exceeded_error():
    """Test the CapExceededError exception."""
    error = CapExceededError(8192, 4096)
    assert error.exit_code == 5
    assert str(error) == "Enumeration of 8192 policies exceeds the cap of 4096"
    profiles = CapExceededError(27, 9, what="joint profiles")
    assert str(profiles) == "Enumeration of 27 joint profiles exceeds the cap of 9"


@pytest.mark.parametrize("error_class", [RootFindingError, TierMismatchError])
def test_default_exit_code(error_class):
    """Test that the remaining errors exit with code 1."""
    error = error_class("failure")
    assert error.exit_code == 1
    assert isinstance(error, MdpValuesError)
