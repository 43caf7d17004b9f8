"""Target specifications: maxima of rational functions with factored denominators."""

import logging
from collections import Counter
from fractions import Fraction
from typing import List, Tuple, Union

from pydantic import BaseModel, Field

from mdp_values import constants
from mdp_values.algebra import (
    Polynomial,
    Rational,
    RationalFunction,
    cyclotomic,
    extract_cyclotomic_part,
    roots_numeric,
)
from mdp_values.exceptions import MdpValuesError, ValidationError

logger = logging.getLogger(__name__)


def quadratic(b: Fraction, c: Fraction) -> Polynomial:
    """Return the monic quadratic λ² + bλ + c."""
    return Polynomial([c, b, 1])


def linear_factor(omega: Fraction) -> Polynomial:
    """Return ω − λ."""
    return Polynomial([omega, -1])


class FactoredDenominator(BaseModel):
    """
    A denominator in factored form with exact rational data.

    ``cyclotomic`` lists the indices d of the unit-root factors Φ_d,
    ``real_roots`` the pairs (ω, multiplicity) contributing (ω − λ)^multiplicity,
    and ``quadratics`` the triples (b, c, multiplicity) contributing
    (λ² + bλ + c)^multiplicity.
    """

    model_config = {"extra": "forbid"}

    cyclotomic: List[int] = Field(default_factory=list)
    real_roots: List[Tuple[Rational, int]] = Field(default_factory=list)
    quadratics: List[Tuple[Rational, Rational, int]] = Field(default_factory=list)

    @property
    def cyclotomic_indices(self) -> List[int]:
        return self.cyclotomic

    def polynomial(self) -> Polynomial:
        """Multiply the factors out."""
        result = Polynomial.one()
        for d in self.cyclotomic:
            result = result * cyclotomic(d)
        for omega, multiplicity in self.real_roots:
            result = result * linear_factor(omega) ** multiplicity
        for b, c, multiplicity in self.quadratics:
            result = result * quadratic(b, c) ** multiplicity
        return result

    def violations(self) -> List[str]:
        """Itemize every broken invariant of the factorization."""
        problems = []
        for d in self.cyclotomic:
            if d < 1:
                problems.append(f"cyclotomic index {d} must be positive")
        for d, count in sorted(Counter(self.cyclotomic).items()):
            if count > 1:
                problems.append(
                    f"cyclotomic index {d} repeated {count} times; unit roots must be simple"
                )
        for omega, multiplicity in self.real_roots:
            if abs(omega) <= 1:
                problems.append(f"real root {omega} must satisfy |ω| > 1")
            if multiplicity < 1:
                problems.append(f"real root {omega} has multiplicity {multiplicity} < 1")
        for b, c, multiplicity in self.quadratics:
            if b * b >= 4 * c:
                problems.append(f"quadratic ({b}, {c}) must satisfy b² < 4c")
            if c <= 1:
                problems.append(f"quadratic ({b}, {c}) must satisfy c > 1")
            if multiplicity < 1:
                problems.append(f"quadratic ({b}, {c}) has multiplicity {multiplicity} < 1")
        return problems


class SpecBranch(BaseModel):
    """One branch numerator / denominator of a target maximum."""

    model_config = {"extra": "forbid"}

    numerator: Polynomial = Field(default_factory=Polynomial.one)
    denominator: FactoredDenominator = Field(default_factory=FactoredDenominator)

    def target(self) -> RationalFunction:
        """The branch as a reduced rational function."""
        return RationalFunction(self.numerator, self.denominator.polynomial())


class RawSpecBranch(BaseModel):
    """A branch whose denominator is an unfactored polynomial."""

    model_config = {"extra": "forbid"}

    numerator: Polynomial = Field(default_factory=Polynomial.one)
    denominator_poly: Polynomial

    def target(self) -> RationalFunction:
        return RationalFunction(self.numerator, self.denominator_poly)


class MaxFSpec(BaseModel):
    """The pointwise maximum of finitely many branches."""

    model_config = {"extra": "forbid"}

    branches: List[Union[SpecBranch, RawSpecBranch]]

    @property
    def factored(self) -> bool:
        return all(isinstance(branch, SpecBranch) for branch in self.branches)

    def targets(self) -> List[RationalFunction]:
        return [branch.target() for branch in self.branches]

    def value_at(self, lam) -> Fraction:
        """Evaluate the maximum exactly at a rational λ."""
        return max(target(lam) for target in self.targets())


def check_spec(spec: MaxFSpec, allow_raw: bool = False) -> List[str]:
    """
    Itemize every violation of a target specification.

    Args:
        spec: The specification.
        allow_raw: Whether unfactored denominators are acceptable; they are
            checked through their :func:`factor_denominator_approx` form.

    Returns:
        The violations, empty when the spec can be synthesized.
    """
    problems = []
    if not spec.branches:
        problems.append("specification has no branches")
    for i, branch in enumerate(spec.branches):
        if isinstance(branch, RawSpecBranch):
            if not allow_raw:
                problems.append(
                    f"branch {i}: unfactored denominator needs --approx-factor"
                )
            elif branch.denominator_poly.is_zero:
                problems.append(f"branch {i}: denominator is the zero polynomial")
            else:
                problems.extend(f"branch {i}: {p}" for p in _approximation_violations(branch))
            continue
        problems.extend(f"branch {i}: {p}" for p in branch.denominator.violations())
    return problems


def _approximation_violations(branch: RawSpecBranch) -> List[str]:
    """Violations of the approximate factorization of a raw branch."""
    try:
        factored = factor_denominator_approx(branch.numerator, branch.denominator_poly)
    except MdpValuesError as e:
        return [f"approximate factorization failed: {e}"]
    return factored.denominator.violations()


def require_spec(spec: MaxFSpec) -> None:
    """Raise ValidationError if spec is not a synthesizable factored spec."""
    problems = check_spec(spec)
    if problems:
        raise ValidationError("Invalid target specification.", violations=problems)


def _rationalize(x: float) -> Fraction:
    return Fraction(x).limit_denominator(constants.APPROX_DENOMINATOR_LIMIT)


def factor_denominator_approx(numerator: Polynomial, q: Polynomial) -> SpecBranch:
    """
    Factor a raw denominator into cyclotomic, real and quadratic parts.

    The unit-root part is extracted exactly; the remainder is factored from
    its numeric roots, whose coefficients are rationalized with bounded
    denominators. The constant factor is folded into the numerator, so the
    result equals numerator / q only up to that rationalization.

    Args:
        numerator: The branch numerator.
        q: The raw denominator.

    Returns:
        An approximately equal factored branch.

    Raises:
        ValidationError: If q has a repeated unit-root factor.
        ZeroPolynomialError: If q is zero.
    """
    split = extract_cyclotomic_part(q)
    if split.multiplicity_violation:
        raise ValidationError(
            f"Denominator {q} has a repeated unit-root factor.", parameter="denominator_poly"
        )
    remainder = split.remainder
    real_roots: Counter = Counter()
    quadratics: Counter = Counter()
    if remainder.degree >= 1:
        for root in roots_numeric(remainder):
            if root.im == 0:
                real_roots[_rationalize(root.re)] += 1
            elif root.im > 0:
                b = _rationalize(-2 * root.re)
                c = _rationalize(root.re * root.re + root.im * root.im)
                quadratics[(b, c)] += 1
    real_count = sum(real_roots.values())
    # remainder ≈ lead · ∏(λ − ω) · ∏(λ² + bλ + c) and (λ − ω) = −(ω − λ)
    factor = Fraction((-1) ** real_count) / remainder.leading
    logger.info(
        "Approximated %s as %d unit-root, %d real and %d quadratic factors",
        q,
        len(split.indices),
        real_count,
        sum(quadratics.values()),
    )
    return SpecBranch(
        numerator=numerator * factor,
        denominator=FactoredDenominator(
            cyclotomic=split.indices,
            real_roots=sorted(real_roots.items()),
            quadratics=sorted((b, c, k) for (b, c), k in quadratics.items()),
        ),
    )


def approximate_spec(spec: MaxFSpec) -> MaxFSpec:
    """Replace every raw branch by its approximate factorization."""
    return MaxFSpec(
        branches=[
            factor_denominator_approx(branch.numerator, branch.denominator_poly)
            if isinstance(branch, RawSpecBranch)
            else branch
            for branch in spec.branches
        ]
    )
