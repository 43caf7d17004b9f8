"""Root classification: unit roots, the unit disk, numeric roots and real root isolation."""

import logging
import math
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, field_validator

from mdp_values import constants
from mdp_values.algebra.polynomial import Polynomial, poly_gcd
from mdp_values.exceptions import RootFindingError, ValidationError, ZeroPolynomialError

logger = logging.getLogger(__name__)

RootInterval = Tuple[Fraction, Fraction]


class DiskVerdict(str, Enum):
    """Outcome of the outside-unit-disk test."""

    YES = "yes"
    NO = "no"
    BOUNDARY = "boundary"


class CyclotomicSplit(BaseModel):
    """A polynomial split into its unit-root part and the remainder."""

    model_config = {"frozen": True}

    indices: List[int]
    remainder: Polynomial
    multiplicity_violation: bool = False


class ComplexPoint(BaseModel):
    """A numeric root, used for diagnostics only."""

    model_config = {"frozen": True}

    re: float
    im: float

    @field_validator("re", "im")
    @classmethod
    def check_finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("complex point components must be finite")
        return v

    @classmethod
    def from_complex(cls, z: complex) -> "ComplexPoint":
        return cls(re=float(z.real), im=float(z.imag))

    @property
    def modulus(self) -> float:
        return math.hypot(self.re, self.im)

    def __complex__(self) -> complex:
        return complex(self.re, self.im)


def euler_phi(n: int) -> int:
    """Return Euler's totient φ(n)."""
    result = n
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


@lru_cache(maxsize=None)
def cyclotomic(d: int) -> Polynomial:
    """
    Return the d-th cyclotomic polynomial Φ_d.

    Computed by dividing λ^d − 1 by Φ_e for every proper divisor e of d.

    Raises:
        ValidationError: If d < 1.
    """
    if d < 1:
        raise ValidationError("Cyclotomic index must be positive.", parameter="d")
    result = Polynomial.monomial(d) - 1
    for e in range(1, d):
        if d % e == 0:
            result = result.exact_div(cyclotomic(e))
    return result


def extract_cyclotomic_part(q: Polynomial) -> CyclotomicSplit:
    """
    Trial-divide every cyclotomic factor out of q.

    One copy of each dividing Φ_d is removed, so q equals the remainder times
    the product of the returned Φ_d. Indices d are enumerated up to 2·deg(q)²,
    which covers every d with φ(d) ≤ deg(q).

    Args:
        q: A nonzero polynomial.

    Returns:
        The split, with ``multiplicity_violation`` set when some Φ_d divides q twice.

    Raises:
        ZeroPolynomialError: If q is zero.
    """
    if q.is_zero:
        raise ZeroPolynomialError("Cannot extract unit roots of the zero polynomial")
    remainder = q
    indices: List[int] = []
    violation = False
    for d in range(1, 2 * q.degree * q.degree + 1):
        if remainder.degree < 1:
            break
        if euler_phi(d) > remainder.degree:
            continue
        quotient, rest = divmod(remainder, cyclotomic(d))
        if not rest.is_zero:
            continue
        indices.append(d)
        remainder = quotient
        if remainder.degree >= 1 and (remainder % cyclotomic(d)).is_zero:
            violation = True
    return CyclotomicSplit(
        indices=indices, remainder=remainder, multiplicity_violation=violation
    )


def all_roots_outside_unit_disk(q: Polynomial) -> DiskVerdict:
    """
    Decide exactly whether every root of q lies strictly outside the unit circle.

    Runs the Schur-Cohn recursion on the reversed polynomial, whose roots are
    the reciprocals of the roots of q. The recursion degenerates exactly when
    the leading and constant coefficients have equal modulus, which is
    reported as a boundary verdict.

    Raises:
        ZeroPolynomialError: If q is zero.
    """
    if q.is_zero:
        raise ZeroPolynomialError("Cannot classify the roots of the zero polynomial")
    if q.degree == 0:
        return DiskVerdict.YES
    if q.coefficient(0) == 0:
        return DiskVerdict.NO
    p = q.reversed()
    while p.degree > 0:
        lead = p.leading
        const = p.coefficient(0)
        if abs(const) == abs(lead):
            return DiskVerdict.BOUNDARY
        if abs(const) > abs(lead):
            return DiskVerdict.NO
        shrunk = p * lead - p.reversed() * const
        p = Polynomial(shrunk.coefficients[1:])
    return DiskVerdict.YES


def roots_numeric(
    q: Polynomial,
    iteration_cap: int = constants.ROOT_ITERATION_CAP,
    tolerance: float = constants.ROOT_TOLERANCE,
) -> List[ComplexPoint]:
    """
    List all complex roots of q with multiplicity.

    Starts from companion-matrix eigenvalues and polishes each with Newton steps.

    Args:
        q: Polynomial of degree at least 1.
        iteration_cap: Maximum Newton steps per root.
        tolerance: Relative step size at which polishing stops.

    Returns:
        Roots sorted by real then imaginary part.

    Raises:
        ValidationError: If q is constant.
        RootFindingError: If a root misses the residual bound after polishing.
    """
    if q.degree < 1:
        raise ValidationError("Root finding needs a polynomial of degree >= 1.", parameter="q")
    coefficients = np.array([float(c) for c in reversed(q.coefficients)])
    derivative = np.polyder(coefficients)
    scale = max(abs(float(c)) for c in q.coefficients)
    roots = []
    for estimate in np.roots(coefficients):
        z = _newton_polish(coefficients, derivative, complex(estimate), iteration_cap, tolerance)
        residual = abs(np.polyval(coefficients, z))
        bound = constants.ROOT_RESIDUAL_FACTOR * (1 + abs(z)) ** q.degree * scale
        if residual > bound:
            raise RootFindingError(
                f"Root near {z} of {q} has residual {residual:.3e} above {bound:.3e} "
                f"after {iteration_cap} iterations"
            )
        if abs(z.imag) <= tolerance * (1 + abs(z)):
            z = complex(z.real, 0.0)
        roots.append(ComplexPoint.from_complex(z))
    return sorted(roots, key=lambda point: (round(point.re, 9), round(point.im, 9)))


def _newton_polish(coefficients, derivative, z: complex, cap: int, tolerance: float) -> complex:
    value = np.polyval(coefficients, z)
    for _ in range(cap):
        slope = np.polyval(derivative, z)
        if slope == 0:
            break
        candidate = z - value / slope
        candidate_value = np.polyval(coefficients, candidate)
        if abs(candidate_value) >= abs(value):
            break
        step = abs(candidate - z)
        z, value = complex(candidate), candidate_value
        if step <= tolerance * (1 + abs(z)):
            break
    return z


def sturm_sequence(p: Polynomial) -> List[Polynomial]:
    """Return the Sturm chain p, p', −rem(p, p'), ..."""
    chain = [p, p.derivative()]
    while not chain[-1].is_zero:
        remainder = -(chain[-2] % chain[-1])
        if remainder.is_zero:
            break
        chain.append(remainder)
    if chain[-1].is_zero:
        chain.pop()
    return chain


def _sign_variations(chain: List[Polynomial], x: Fraction) -> int:
    variations = 0
    previous = 0
    for p in chain:
        value = p(x)
        if value == 0:
            continue
        sign = 1 if value > 0 else -1
        if previous and sign != previous:
            variations += 1
        previous = sign
    return variations


def sturm_isolate(
    q: Polynomial,
    lo: Fraction,
    hi: Fraction,
    width: Fraction = constants.SWITCHPOINT_WIDTH,
) -> List[RootInterval]:
    """
    Isolate the distinct real roots of q in [lo, hi).

    Sturm sign counts locate the roots and bisection narrows each interval
    below ``width``. Roots hit exactly by an endpoint or a midpoint come back
    as degenerate intervals (r, r).

    Args:
        q: A nonzero polynomial.
        lo: Left end, included.
        hi: Right end, excluded.
        width: Maximum interval width.

    Returns:
        Disjoint intervals sorted by left end, each containing exactly one root.

    Raises:
        ZeroPolynomialError: If q is zero.
        ValidationError: If lo >= hi.
    """
    if q.is_zero:
        raise ZeroPolynomialError("Cannot isolate the roots of the zero polynomial")
    lo, hi = Fraction(lo), Fraction(hi)
    if lo >= hi:
        raise ValidationError("Isolation interval must satisfy lo < hi.", parameter="lo")
    if q.degree < 1:
        return []
    squarefree = q.exact_div(poly_gcd(q, q.derivative()))
    chain = sturm_sequence(squarefree)

    def count(a: Fraction, b: Fraction) -> int:
        # distinct roots in (a, b]
        return _sign_variations(chain, a) - _sign_variations(chain, b)

    intervals: List[RootInterval] = []
    if squarefree(lo) == 0:
        intervals.append((lo, lo))
    inside = count(lo, hi) - (1 if squarefree(hi) == 0 else 0)
    pending = [(lo, hi, inside)]
    while pending:
        a, b, n = pending.pop()
        if n == 0:
            continue
        if n == 1 and b - a < width:
            intervals.append((a, b))
            continue
        mid = (a + b) / 2
        left = count(a, mid)
        left_open = left
        if squarefree(mid) == 0:
            intervals.append((mid, mid))
            left_open -= 1
        pending.append((a, mid, left_open))
        pending.append((mid, b, n - left))
    intervals.sort()
    logger.debug("Isolated %d roots of %s in [%s, %s)", len(intervals), q, lo, hi)
    return intervals
