"""
Unit tests for target specifications and the synthesis pipeline.
"""

from fractions import Fraction

import pytest

from mdp_values.algebra import Polynomial, RationalFunction
from mdp_values.exceptions import ValidationError
from mdp_values.mdp import DegenerateMdp, is_degenerate, validate
from mdp_values.solver import policy_envelope
from mdp_values.synthesis import (
    FactoredDenominator,
    MaxFSpec,
    RawSpecBranch,
    SpecBranch,
    approximate_spec,
    branch_spec,
    check_spec,
    factor_denominator_approx,
    mk_const,
    mk_geometric,
    require_spec,
    scaling_constant,
    synth_branch,
    synth_max,
    synth_spec,
    synthesize,
)
from tests.strategies import value_of

LAM = Polynomial.lam()


def test_scaling_constant_examples():
    """Test the rescaling constants for c = 4 and c = 2."""
    assert scaling_constant(Fraction(4)) == Fraction(3, 2)
    assert scaling_constant(Fraction(2)) == Fraction(9, 8)


@pytest.mark.parametrize("c", [Fraction(5, 4), Fraction(16, 9), Fraction(101, 100), Fraction(50)])
def test_scaling_constant_lies_between_one_and_root(c):
    """Test 1 < c′ and c′² < c."""
    factor = scaling_constant(c)
    assert 1 < factor
    assert factor * factor < c


def test_scaling_constant_needs_c_above_one():
    """Test that c <= 1 has no admissible constant."""
    with pytest.raises(ValidationError):
        scaling_constant(Fraction(1))


def test_flagship_denominator_polynomial(flagship_denominator):
    """Test (λ + 1)(2 − λ)(λ² + 4) multiplied out."""
    assert flagship_denominator.polynomial() == (LAM + 1) * (2 - LAM) * (LAM * LAM + 4)
    assert flagship_denominator.cyclotomic_indices == [2]


def test_flagship_synthesis(flagship_spec):
    """Test that the flagship spec synthesizes to exactly its target."""
    m, report = synthesize(flagship_spec)
    target = RationalFunction(1, (LAM + 1) * (2 - LAM) * (LAM * LAM + 4))
    assert isinstance(m, DegenerateMdp)
    assert report.degenerate
    assert value_of(m) == target
    assert validate(m) == []

    branch = report.branches[0]
    assert branch.target == target
    assert branch.states == len(m.states) == report.states
    assert branch.states <= branch.state_bound
    assert [step.construction for step in branch.steps] == [
        "inv_cyclotomic",
        "product_contract",
        "product_contract",
    ]
    assert branch.certificates[0].exponents == (1, 2, 4)
    assert branch.certificates[0].alpha == (Fraction(0), Fraction(7, 16), Fraction(9, 16))


def test_numerator_only_branch():
    """Test a polynomial branch with an empty denominator."""
    m = synth_branch(Polynomial([1, 2]), FactoredDenominator())
    assert value_of(m) == RationalFunction(Polynomial([1, 2]))


def test_first_factor_is_used_directly():
    """Test a lone quadratic and a lone negative real root."""
    quadratic_only = FactoredDenominator(quadratics=[(Fraction(1), Fraction(2), 1)])
    assert value_of(synth_branch(1, quadratic_only)) == RationalFunction(1, Polynomial([2, 1, 1]))
    negative_root = FactoredDenominator(real_roots=[(Fraction(-2), 1)])
    assert value_of(synth_branch(1, negative_root)) == RationalFunction(1, -2 - LAM)


def test_repeated_real_root():
    """Test multiplicity 2: 3/(3 − λ)²."""
    den = FactoredDenominator(real_roots=[(Fraction(3), 2)])
    assert value_of(synth_branch(3, den)) == RationalFunction(3, (3 - LAM) ** 2)


def test_unit_roots_with_real_root_and_numerator():
    """Test (λ + 1)/((λ − 1)(λ + 1)(5/4 − λ))."""
    den = FactoredDenominator(cyclotomic=[1, 2], real_roots=[(Fraction(5, 4), 1)])
    m = synth_branch(LAM + 1, den)
    assert value_of(m) == RationalFunction(LAM + 1, den.polynomial())


def test_invalid_denominator_is_rejected():
    """Test that synthesis refuses a broken factorization."""
    den = FactoredDenominator(real_roots=[(Fraction(1, 2), 1)])
    with pytest.raises(ValidationError) as exc_info:
        synth_branch(1, den)
    assert "|ω| > 1" in str(exc_info.value)


def test_synth_max_of_constant_and_geometric():
    """Test max(2, 1/(1 − λ)) and its envelope."""
    m = synth_max([mk_const(2), mk_geometric()])
    assert not is_degenerate(m)
    assert m.actions["choice"] == ["b0", "b1"]
    assert m.initial == {"choice": Fraction(1)}
    report = policy_envelope(m)
    assert {b.value for b in report.branches} == {
        RationalFunction(2),
        RationalFunction(1, 1 - LAM),
    }
    assert report.switchpoints == [(Fraction(1, 2), Fraction(1, 2))]


def test_synth_max_single_branch_is_degenerate():
    """Test that one branch gives a degenerate MDP with the same value."""
    m = synth_max([mk_geometric()])
    assert isinstance(m, DegenerateMdp)
    assert value_of(m) == RationalFunction(1, 1 - LAM)


def test_synth_max_needs_branches():
    """Test that the maximum of nothing is rejected."""
    with pytest.raises(ValidationError):
        synth_max([])


def test_synth_spec_envelope(envelope_spec):
    """Test the two-branch spec end to end."""
    m = synth_spec(envelope_spec)
    assert validate(m) == []
    values = {b.value for b in policy_envelope(m, switchpoints=False).branches}
    assert values == set(envelope_spec.targets())


def test_branch_spec():
    """Test wrapping one factored branch."""
    spec = branch_spec([1, 1], FactoredDenominator(cyclotomic=[1]))
    assert spec.targets() == [RationalFunction(LAM + 1, LAM - 1)]
    assert spec.value_at(Fraction(1, 2)) == -3


def test_check_spec_itemizes_violations():
    """Test that every broken invariant is reported."""
    spec = MaxFSpec(
        branches=[
            SpecBranch(
                denominator=FactoredDenominator(
                    cyclotomic=[2, 2],
                    real_roots=[(Fraction(1, 2), 1)],
                    quadratics=[(Fraction(0), Fraction(1, 2), 1), (Fraction(3), Fraction(2), 0)],
                )
            ),
            RawSpecBranch(denominator_poly=Polynomial([2, -1])),
        ]
    )
    problems = check_spec(spec)
    assert len(problems) == 6
    assert problems[-1] == "branch 1: unfactored denominator needs --approx-factor"
    assert len(check_spec(spec, allow_raw=True)) == 5
    with pytest.raises(ValidationError):
        require_spec(spec)


def test_check_spec_factors_raw_branches():
    """Test that raw branches are checked through their approximate factorization."""
    spec = MaxFSpec(
        branches=[
            RawSpecBranch(denominator_poly=(LAM + 1) ** 2),
            RawSpecBranch(denominator_poly=LAM - Fraction(1, 2)),
            RawSpecBranch(denominator_poly=Polynomial([4, -2])),
        ]
    )
    problems = check_spec(spec, allow_raw=True)
    assert len(problems) == 2
    assert problems[0].startswith("branch 0: approximate factorization failed")
    assert problems[1] == "branch 1: real root 1/2 must satisfy |ω| > 1"


def test_empty_spec_is_invalid():
    """Test that a spec needs at least one branch."""
    assert check_spec(MaxFSpec(branches=[])) == ["specification has no branches"]


def test_spec_document_form(envelope_spec):
    """Test that unknown fields are rejected and raw branches are recognized."""
    with pytest.raises(ValueError):
        MaxFSpec.model_validate({"branches": [{"numerator": ["1"], "denominator": {"bogus": 1}}]})
    raw = MaxFSpec.model_validate({"branches": [{"denominator_poly": ["2", "-1"]}]})
    assert isinstance(raw.branches[0], RawSpecBranch)
    assert not raw.factored
    assert envelope_spec.factored


def test_factor_denominator_approx_recovers_flagship(flagship_spec):
    """Test that the flagship denominator is recovered from its expanded form."""
    q = (LAM + 1) * (2 - LAM) * (LAM * LAM + 4)
    branch = factor_denominator_approx(Polynomial.one(), q)
    assert branch.denominator.cyclotomic == [2]
    assert branch.denominator.real_roots == [(Fraction(2), 1)]
    assert branch.denominator.quadratics == [(Fraction(0), Fraction(4), 1)]
    assert branch.target() == flagship_spec.branches[0].target()


def test_factor_denominator_approx_folds_leading_coefficient():
    """Test 1/(4 − 2λ) becomes (1/2)/(2 − λ)."""
    branch = factor_denominator_approx(Polynomial.one(), Polynomial([4, -2]))
    assert branch.numerator == Polynomial([Fraction(1, 2)])
    assert branch.target() == RationalFunction(1, Polynomial([4, -2]))


def test_factor_denominator_approx_rejects_repeated_unit_roots():
    """Test that (1 + λ)² cannot be factored into an admissible branch."""
    with pytest.raises(ValidationError):
        factor_denominator_approx(Polynomial.one(), (LAM + 1) ** 2)


def test_approximate_spec_replaces_raw_branches():
    """Test that only raw branches are rewritten."""
    spec = MaxFSpec(
        branches=[
            SpecBranch(numerator=Polynomial([2])),
            RawSpecBranch(denominator_poly=Polynomial([-1, 1])),
        ]
    )
    approximated = approximate_spec(spec)
    assert approximated.factored
    assert approximated.branches[0] == spec.branches[0]
    assert approximated.branches[1].denominator.cyclotomic == [1]
    assert approximated.targets() == spec.targets()
