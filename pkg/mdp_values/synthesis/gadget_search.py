"""Exact search for the exponent/probability certificate of a quadratic root gadget."""

import logging
from fractions import Fraction
from typing import List, Optional, Tuple

from pydantic import BaseModel

from mdp_values import constants
from mdp_values.algebra import Polynomial, Rational, parse_rational
from mdp_values.exceptions import GadgetSearchExhaustedError, MdpValuesError, ValidationError
from mdp_values.synthesis.specs import quadratic

logger = logging.getLogger(__name__)


class GadgetCertificate(BaseModel):
    """
    Exponents k < l < m and probabilities α with 1 = Σ α_j ω^(e_j) at a root ω.

    Equivalently 1 − α₁λ^k − α₂λ^l − α₃λ^m is divisible by the target quadratic.
    """

    model_config = {"frozen": True}

    k: int
    l: int  # noqa: E741
    m: int
    alpha: Tuple[Rational, Rational, Rational]

    @property
    def exponents(self) -> Tuple[int, int, int]:
        return self.k, self.l, self.m

    def polynomial(self) -> Polynomial:
        """Return 1 − α₁λ^k − α₂λ^l − α₃λ^m."""
        result = Polynomial.one()
        for exponent, weight in zip(self.exponents, self.alpha):
            result = result - Polynomial.monomial(exponent, weight)
        return result

    def cofactor(self, b: Fraction, c: Fraction) -> Polynomial:
        """Return the exact quotient of :meth:`polynomial` by λ² + bλ + c."""
        return self.polynomial().exact_div(quadratic(b, c))


def _powers(b: Fraction, c: Fraction, bound: int) -> Tuple[List[Fraction], List[Fraction]]:
    # ω^j = u_j + v_j·ω, using ω² = −bω − c
    u = [Fraction(1), Fraction(0)]
    v = [Fraction(0), Fraction(1)]
    for _ in range(2, bound + 1):
        u.append(-c * v[-1])
        v.append(u[-2] - b * v[-1])
    return u, v


def _det3(a, b, c) -> Fraction:
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


def _solve(
    u: Tuple[Fraction, Fraction, Fraction], v: Tuple[Fraction, Fraction, Fraction]
) -> Optional[Tuple[Fraction, Fraction, Fraction]]:
    """Cramer's rule for Σα·u = 1, Σα·v = 0, Σα = 1 (columns are the unknowns)."""
    ones = (Fraction(1),) * 3
    rhs = (Fraction(1), Fraction(0), Fraction(1))
    rows = (u, v, ones)
    determinant = _det3(*rows)
    if determinant == 0:
        return None
    alpha = []
    for column in range(3):
        replaced = [
            tuple(rhs[r] if j == column else rows[r][j] for j in range(3)) for r in range(3)
        ]
        alpha.append(_det3(*replaced) / determinant)
    return tuple(alpha)


def gadget_search(b, c, bound: int = constants.GADGET_BOUND) -> GadgetCertificate:
    """
    Find the lexicographically first certificate for the quadratic λ² + bλ + c.

    Powers of a root ω are kept exactly in the basis {1, ω} of the quadratic
    extension, so each candidate triple (k, l, m) costs one rational 3×3
    solve. Singular systems are skipped and the first solution with all
    α_j ≥ 0 is returned, after its divisibility is checked.

    Args:
        b: Linear coefficient, with b² < 4c.
        c: Constant coefficient, with c > 1.
        bound: Largest exponent m searched.

    Returns:
        The certificate.

    Raises:
        ValidationError: If the roots are real or not outside the unit disk.
        GadgetSearchExhaustedError: If no triple up to ``bound`` works.
    """
    b, c = parse_rational(b), parse_rational(c)
    if b * b >= 4 * c or c <= 1:
        raise ValidationError(
            f"Quadratic λ² + ({b})λ + ({c}) needs a complex root pair outside the unit disk.",
            parameter="(b, c)",
            valid_values="b² < 4c and c > 1",
        )
    u, v = _powers(b, c, bound)
    for k in range(1, bound - 1):
        for l in range(k + 1, bound):  # noqa: E741
            for m in range(l + 1, bound + 1):
                alpha = _solve((u[k], u[l], u[m]), (v[k], v[l], v[m]))
                if alpha is None or min(alpha) < 0:
                    continue
                certificate = GadgetCertificate(k=k, l=l, m=m, alpha=alpha)
                if not (certificate.polynomial() % quadratic(b, c)).is_zero:
                    raise MdpValuesError(
                        f"Certificate {certificate.exponents} fails the divisibility check"
                    )
                logger.info(
                    "Gadget for λ² + (%s)λ + (%s): exponents %s, α = %s",
                    b,
                    c,
                    certificate.exponents,
                    [str(a) for a in alpha],
                )
                return certificate
    raise GadgetSearchExhaustedError(b, c, bound)
