"""
Unit tests for the quadratic root-gadget certificate search.
"""

from fractions import Fraction

import pytest

from mdp_values.algebra import Polynomial
from mdp_values.exceptions import GadgetSearchExhaustedError, ValidationError
from mdp_values.synthesis import GadgetCertificate, gadget_search
from mdp_values.synthesis.specs import quadratic

LAM = Polynomial.lam()


def test_certificate_for_roots_at_two_i():
    """Test the first certificate for λ² + 4: exponents (1, 2, 4), α = (0, 3/4, 1/4)."""
    certificate = gadget_search(0, 4, 200)
    assert certificate.exponents == (1, 2, 4)
    assert certificate.alpha == (Fraction(0), Fraction(3, 4), Fraction(1, 4))


def test_certificate_polynomial_divides_exactly():
    """Test 1 − (3/4)λ² − (1/4)λ⁴ = (λ² + 4)·(1 − λ²)/4."""
    certificate = gadget_search(0, 4)
    assert certificate.polynomial() == Polynomial([1, 0, Fraction(-3, 4), 0, Fraction(-1, 4)])
    cofactor = certificate.cofactor(Fraction(0), Fraction(4))
    assert cofactor == (1 - LAM * LAM) / 4
    assert cofactor * quadratic(Fraction(0), Fraction(4)) == certificate.polynomial()


def test_rescaled_quadratic_certificate():
    """Test the certificate for λ² + 16/9."""
    certificate = gadget_search(0, Fraction(16, 9))
    assert certificate.exponents == (1, 2, 4)
    assert certificate.alpha == (Fraction(0), Fraction(7, 16), Fraction(9, 16))


def test_certificate_with_linear_term():
    """Test λ² + λ + 2, whose root satisfies ω³ + ω = 2."""
    certificate = gadget_search(1, 2)
    assert certificate.exponents == (1, 2, 3)
    assert certificate.alpha == (Fraction(1, 2), Fraction(0), Fraction(1, 2))
    assert (certificate.polynomial() % quadratic(Fraction(1), Fraction(2))).is_zero


def test_probabilities_form_a_distribution():
    """Test that every returned α is nonnegative and sums to 1."""
    for b, c in [(0, 2), (1, 3), (Fraction(-1, 2), 5), (Fraction(1, 2), 4)]:
        certificate = gadget_search(b, c)
        assert min(certificate.alpha) >= 0
        assert sum(certificate.alpha) == 1
        assert certificate.k < certificate.l < certificate.m


def test_search_exhausted():
    """Test that a bound too small for any certificate raises."""
    with pytest.raises(GadgetSearchExhaustedError) as exc_info:
        gadget_search(0, 4, bound=3)
    assert exc_info.value.bound == 3
    assert exc_info.value.exit_code == 4
    assert "--gadget-bound" in str(exc_info.value)


@pytest.mark.parametrize("b, c", [(2, 1), (0, 1), (3, 2), (0, Fraction(1, 2))])
def test_rejects_real_or_inner_roots(b, c):
    """Test that the quadratic needs complex roots outside the unit disk."""
    with pytest.raises(ValidationError):
        gadget_search(b, c)


def test_certificate_json_form():
    """Test that α is written as rational strings."""
    certificate = GadgetCertificate(k=1, l=2, m=4, alpha=("0", "3/4", "1/4"))
    assert certificate.model_dump(mode="json") == {
        "k": 1,
        "l": 2,
        "m": 4,
        "alpha": ["0", "3/4", "1/4"],
    }
