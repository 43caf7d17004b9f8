"""Certify value functions of MDPs and verify synthesized MDPs against their targets."""

import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from mdp_values import constants
from mdp_values.algebra import (
    ComplexPoint,
    DiskVerdict,
    Polynomial,
    Rational,
    RationalFunction,
    roots_numeric,
)
from mdp_values.exceptions import PoleError, RootFindingError, TierMismatchError, ValidationError
from mdp_values.mdp import Mdp, is_degenerate, require_valid
from mdp_values.solver import (
    Policy,
    check_admissibility,
    policy_envelope,
    stationary_value_symbolic,
    validate_policy,
    value_iteration,
)
from mdp_values.synthesis.specs import MaxFSpec

logger = logging.getLogger(__name__)

EXACT = "exact"
NUMERIC = "numeric"
AUTO = "auto"
PASS = "pass"
FAIL = "fail"


class DenominatorReport(BaseModel):
    """Admissibility of one denominator, with numeric roots for diagnostics."""

    polynomial: Polynomial
    verdict: str
    cyclotomic_indices: List[int] = Field(default_factory=list)
    outside_disk: DiskVerdict
    multiplicity_violation: bool = False
    remainder: Polynomial
    roots: List[ComplexPoint] = Field(default_factory=list)
    note: Optional[str] = None

    @property
    def admissible(self) -> bool:
        return self.verdict == "admissible"


class AnalyzedBranch(BaseModel):
    """One distinct branch value of an MDP with its denominator report."""

    policy: Dict[str, str]
    value: RationalFunction
    denominator: DenominatorReport
    spectrum: List[ComplexPoint] = Field(default_factory=list)
    policies: int = 1


class AnalysisReport(BaseModel):
    """Envelope of an MDP's pure stationary policy values, every branch classified."""

    policy_count: int
    admissible: bool
    branches: List[AnalyzedBranch]
    switchpoints: List[Tuple[Rational, Rational]] = Field(default_factory=list)


class VerificationReport(BaseModel):
    """Outcome of comparing an MDP's value function with a target spec."""

    tier: str
    verdict: str
    witness: Optional[str] = None
    max_deviation: Optional[float] = None
    value: Optional[RationalFunction] = None
    difference: Optional[RationalFunction] = None
    worst_lambda: Optional[float] = None
    grid_points: Optional[int] = None
    tolerance: Optional[float] = None
    epsilon: Optional[float] = None

    @property
    def passed(self) -> bool:
        return self.verdict == PASS


def _boundary_note(roots: List[ComplexPoint]) -> str:
    """Explain a degenerate outside-disk test from the numeric roots."""
    prefix = "outside-disk test degenerated"
    if not roots:
        return f"{prefix} after unit-root extraction; review required"
    smallest = min(root.modulus for root in roots)
    if smallest < 1 - constants.UNIT_CIRCLE_TOLERANCE:
        return f"{prefix}; numeric roots place a root inside the unit disk (|ω| ≈ {smallest:.6g})"
    if smallest <= 1 + constants.UNIT_CIRCLE_TOLERANCE:
        return f"{prefix} on a non-unit root near the unit circle; review required"
    return f"{prefix} although every numeric root lies outside the unit disk; review required"


def classify_denominator(q: Polynomial) -> DenominatorReport:
    """
    Decide exactly whether q is an admissible denominator.

    Admissible means every root is a simple unit root or lies strictly outside
    the unit disk. Numeric roots of the non-unit part are listed for
    diagnostics only and never affect the verdict.

    Raises:
        ZeroPolynomialError: If q is zero.
    """
    admissibility = check_admissibility(q)
    roots: List[ComplexPoint] = []
    note = None
    if admissibility.remainder.degree >= 1:
        try:
            roots = roots_numeric(admissibility.remainder)
        except RootFindingError as e:
            note = f"numeric roots unavailable: {e}"
    if admissibility.outside_disk == DiskVerdict.BOUNDARY:
        note = _boundary_note(roots)
        logger.warning("Boundary verdict for %s after unit-root extraction", q)
    return DenominatorReport(
        polynomial=q,
        verdict=admissibility.verdict,
        cyclotomic_indices=admissibility.cyclotomic_indices,
        outside_disk=admissibility.outside_disk,
        multiplicity_violation=admissibility.multiplicity_violation,
        remainder=admissibility.remainder,
        roots=roots,
        note=note,
    )


def transition_spectrum(m: Mdp, p: Policy) -> List[ComplexPoint]:
    """Numeric eigenvalues of the transition matrix of policy p."""
    validate_policy(m, p)
    index = {s: i for i, s in enumerate(m.states)}
    matrix = np.zeros((len(m.states), len(m.states)))
    for state in m.states:
        for target, probability in m.transition[(state, p.action(m, state))].items():
            matrix[index[state], index[target]] = float(probability)
    eigenvalues = np.linalg.eigvals(matrix)
    points = [ComplexPoint.from_complex(complex(z)) for z in eigenvalues]
    return sorted(points, key=lambda point: (round(point.re, 9), round(point.im, 9)))


def analyze(
    m: Mdp, cap: int = constants.POLICY_CAP, switchpoints: bool = True
) -> AnalysisReport:
    """
    Enumerate the policy envelope of m and classify every branch denominator.

    The overall verdict is the conjunction of the branch verdicts.

    Raises:
        ValidationError: If m is invalid.
        CapExceededError: If the policy count exceeds ``cap``.
    """
    envelope = policy_envelope(m, cap=cap, switchpoints=switchpoints)
    branches = []
    for branch in envelope.branches:
        policy = Policy(
            choice={s: m.actions[s].index(a) for s, a in branch.policy.items()}
        )
        branches.append(
            AnalyzedBranch(
                policy=branch.policy,
                value=branch.value,
                denominator=classify_denominator(branch.value.denominator),
                spectrum=transition_spectrum(m, policy),
                policies=branch.policies,
            )
        )
    admissible = all(b.denominator.admissible for b in branches)
    if not admissible:
        logger.warning("MDP has inadmissible branch values")
    return AnalysisReport(
        policy_count=envelope.policy_count,
        admissible=admissible,
        branches=branches,
        switchpoints=envelope.switchpoints,
    )


def verify_exact(m: Mdp, spec: MaxFSpec) -> VerificationReport:
    """
    Compare the symbolic value of a degenerate MDP with a single-branch spec.

    Raises:
        TierMismatchError: If m has a choice of actions or the spec has several branches.
        ValidationError: If m is invalid.
    """
    if not is_degenerate(m):
        raise TierMismatchError("Exact verification needs a degenerate MDP; use the numeric tier.")
    if len(spec.branches) != 1:
        raise TierMismatchError(
            "Exact verification needs a single-branch spec; use the numeric tier."
        )
    value = stationary_value_symbolic(m, Policy.first(m)).initial
    target = spec.branches[0].target()
    difference = value - target
    if difference.is_zero:
        return VerificationReport(tier=EXACT, verdict=PASS, value=value)
    return VerificationReport(
        tier=EXACT,
        verdict=FAIL,
        witness=f"value {value} differs from target {target} by {difference}",
        value=value,
        difference=difference,
    )


def verify_numeric(
    m: Mdp,
    spec: MaxFSpec,
    grid: Sequence[float] = constants.DEFAULT_GRID,
    tol: float = constants.TOLERANCE,
    epsilon: float = constants.VALUE_ITERATION_EPSILON,
) -> VerificationReport:
    """
    Compare value iteration with the pointwise maximum of the branches on a grid.

    Passes iff the largest deviation is at most tol plus the certified
    value-iteration error ε.

    Raises:
        ValidationError: If a grid point is outside [0, 1) or a branch has a pole on the grid.
    """
    require_valid(m)
    targets = spec.targets()
    worst, worst_lambda = 0.0, None
    for lam in grid:
        if not 0 <= lam < 1:
            raise ValidationError(
                f"Grid point {lam} is outside [0, 1).", parameter="grid", valid_values="0 <= λ < 1"
            )
        point = Fraction(lam)
        try:
            expected = float(max(target(point) for target in targets))
        except PoleError as e:
            raise ValidationError(
                f"A target branch has a pole at λ = {lam}.", parameter="spec", original_error=e
            ) from e
        result = value_iteration(m, lam, epsilon)
        deviation = abs(result.initial - expected)
        if worst_lambda is None or deviation > worst:
            worst, worst_lambda = deviation, lam
    passed = worst <= tol + epsilon
    return VerificationReport(
        tier=NUMERIC,
        verdict=PASS if passed else FAIL,
        witness=None if passed else f"deviation {worst:.3e} at λ = {worst_lambda}",
        max_deviation=worst,
        worst_lambda=None if worst_lambda is None else float(worst_lambda),
        grid_points=len(grid),
        tolerance=tol,
        epsilon=epsilon,
    )


def verify(
    m: Mdp,
    spec: MaxFSpec,
    tier: str = AUTO,
    grid: Sequence[float] = constants.DEFAULT_GRID,
    tol: float = constants.TOLERANCE,
) -> VerificationReport:
    """Run the requested verification tier; ``auto`` picks exact whenever it applies."""
    if tier == AUTO:
        tier = EXACT if is_degenerate(m) and len(spec.branches) == 1 else NUMERIC
    if tier == EXACT:
        return verify_exact(m, spec)
    if tier == NUMERIC:
        return verify_numeric(m, spec, grid=grid, tol=tol)
    raise ValidationError(f"Unknown tier {tier!r}.", parameter="tier", valid_values="exact, numeric, auto")
