"""Compile target specifications into MDPs whose value function is exactly the target."""

import logging
import math
from fractions import Fraction
from functools import reduce
from typing import List, Optional, Sequence, Tuple

from pydantic import BaseModel, Field

from mdp_values import constants
from mdp_values.algebra import Polynomial, RationalFunction, euler_phi
from mdp_values.exceptions import ValidationError
from mdp_values.mdp import DEGENERATE_ACTION, DegenerateMdp, Mdp, as_degenerate
from mdp_values.synthesis.gadget_search import GadgetCertificate, gadget_search
from mdp_values.synthesis.gadgets import (
    inv_cyclotomic,
    inv_linear,
    inv_quadratic,
    mk_const,
    mul_by_poly,
    product_contract,
    scale,
)
from mdp_values.synthesis.specs import FactoredDenominator, MaxFSpec, SpecBranch, require_spec

logger = logging.getLogger(__name__)


class SynthesisStep(BaseModel):
    """One construction applied while synthesizing a branch."""

    construction: str
    detail: str
    states: int


class BranchReport(BaseModel):
    """How one branch was synthesized."""

    target: RationalFunction
    states: int
    state_bound: int
    steps: List[SynthesisStep] = Field(default_factory=list)
    certificates: List[GadgetCertificate] = Field(default_factory=list)


class SynthesisReport(BaseModel):
    """Summary of a whole synthesis run."""

    states: int
    degenerate: bool
    branches: List[BranchReport]


def scaling_constant(c: Fraction) -> Fraction:
    """
    Pick a low-denominator rational c′ with 1 < c′ and c′² < c.

    Starts from the midpoint of 1 and a rational lower bound on √c, then takes
    the first of its best approximations with denominator 2, 4, 8, ... that
    still lies in the interval.
    """
    if c <= 1:
        raise ValidationError(f"Cannot place a constant between 1 and √{c}.", parameter="c")
    precision = 0
    while True:
        scale_factor = 4**precision
        root = Fraction(
            math.isqrt(c.numerator * c.denominator * scale_factor),
            c.denominator * 2**precision,
        )
        if root > 1:
            break
        precision += 1
    midpoint = (1 + root) / 2
    limit = 2
    while True:
        candidate = midpoint.limit_denominator(limit)
        if candidate > 1 and candidate * candidate < c:
            return candidate
        limit *= 2


def _mul_bound(states: int, degree: int) -> int:
    # parts t0..t_degree, part i has states + i states
    return max(2, (degree + 1) * states + degree * (degree + 1) // 2)


def _product_bound(f_states: int, g_states: int) -> int:
    return g_states * (1 + f_states) + 1


class _BranchBuilder:
    """Accumulates the value numerator / (factors folded so far) and the trace."""

    def __init__(self, bound: int):
        self.bound = bound
        self.mdp: Optional[DegenerateMdp] = None
        self.state_bound = 1
        self.steps: List[SynthesisStep] = []
        self.certificates: List[GadgetCertificate] = []

    def record(self, construction: str, detail: str) -> None:
        self.steps.append(
            SynthesisStep(construction=construction, detail=detail, states=len(self.mdp.states))
        )
        logger.debug("%s (%s): %d states", construction, detail, len(self.mdp.states))

    def cyclotomic(self, indices: Sequence[int]) -> None:
        self.mdp = inv_cyclotomic(indices)
        n = reduce(math.lcm, indices)
        self.state_bound = _mul_bound(n, n - sum(euler_phi(d) for d in indices))
        self.record("inv_cyclotomic", f"indices {list(indices)}")

    def _quadratic_gadget(self, b: Fraction, c: Fraction) -> Tuple[DegenerateMdp, int]:
        certificate = gadget_search(b, c, self.bound)
        self.certificates.append(certificate)
        gadget = inv_quadratic(b, c, certificate=certificate)
        return gadget, _mul_bound(certificate.m, certificate.m - 2)

    def quadratic(self, b: Fraction, c: Fraction) -> None:
        if self.mdp is None:
            self.mdp, self.state_bound = self._quadratic_gadget(b, c)
            self.record("inv_quadratic", f"b={b}, c={c}")
            return
        factor = scaling_constant(c)
        scaled_b, scaled_c = b / factor, c / (factor * factor)
        if scaled_b * scaled_b >= 4 * scaled_c or scaled_c <= 1:
            raise ValidationError(
                f"Rescaled quadratic ({scaled_b}, {scaled_c}) lost its root conditions."
            )
        gadget, gadget_bound = self._quadratic_gadget(scaled_b, scaled_c)
        self.mdp = product_contract(self.mdp, gadget, 1 / factor)
        self.state_bound = _product_bound(self.state_bound, gadget_bound)
        self.mdp = scale(self.mdp, 1 / (factor * factor))
        self.record("product_contract", f"b={b}, c={c} at scale {factor}")

    def real_root(self, omega: Fraction) -> None:
        gadget_bound = 4 if omega < 0 else 2
        if self.mdp is None:
            self.mdp = inv_linear(omega)
            self.state_bound = gadget_bound
            self.record("inv_linear", f"ω={omega}")
            return
        factor = (1 + abs(omega)) / 2
        gadget = inv_linear(omega / factor)
        self.mdp = product_contract(self.mdp, gadget, 1 / factor)
        self.state_bound = _product_bound(self.state_bound, gadget_bound)
        self.mdp = scale(self.mdp, 1 / factor)
        self.record("product_contract", f"ω={omega} at scale {factor}")

    def numerator(self, p: Polynomial) -> None:
        if self.mdp is None:
            self.mdp = mk_const(1)
            self.state_bound = 2
        if p == 1:
            return
        self.mdp = mul_by_poly(self.mdp, p)
        self.state_bound = _mul_bound(self.state_bound, max(p.degree, 0))
        self.record("mul_by_poly", f"p={p}")


def _build_branch(
    numerator: Polynomial, den: FactoredDenominator, bound: int
) -> Tuple[DegenerateMdp, BranchReport]:
    problems = den.violations()
    if problems:
        raise ValidationError("Invalid factored denominator.", violations=problems)
    builder = _BranchBuilder(bound)
    if den.cyclotomic:
        builder.cyclotomic(den.cyclotomic)
    for b, c, multiplicity in den.quadratics:
        for _ in range(multiplicity):
            builder.quadratic(b, c)
    for omega, multiplicity in den.real_roots:
        for _ in range(multiplicity):
            builder.real_root(omega)
    builder.numerator(Polynomial.coerce(numerator))
    report = BranchReport(
        target=RationalFunction(numerator, den.polynomial()),
        states=len(builder.mdp.states),
        state_bound=builder.state_bound,
        steps=builder.steps,
        certificates=builder.certificates,
    )
    logger.info(
        "Synthesized branch %s with %d states (bound %d)",
        report.target,
        report.states,
        report.state_bound,
    )
    return builder.mdp, report


def synth_branch(
    numerator, den: FactoredDenominator, bound: int = constants.GADGET_BOUND
) -> DegenerateMdp:
    """
    Build a degenerate MDP with value exactly numerator / den.

    The unit-root part comes first. Every outside-disk factor is then folded
    in, once per multiplicity: its gadget is built for the root scaled by a
    rational constant between 1 and the root modulus, composed with the
    accumulator at contraction 1/constant, and the result rescaled. A factor
    with nothing before it is used directly. The numerator is applied last.

    Args:
        numerator: The branch numerator.
        den: The factored denominator.
        bound: Gadget search bound for quadratic factors.

    Returns:
        The synthesized MDP.

    Raises:
        ValidationError: If the factorization breaks its invariants.
        GadgetSearchExhaustedError: If a quadratic gadget needs exponents above ``bound``.
    """
    mdp, _ = _build_branch(numerator, den, bound)
    return mdp


def synth_max(branches: Sequence[DegenerateMdp]) -> Mdp:
    """
    Combine branches under one choice state whose value is the maximum of theirs.

    Action ``b{i}`` of the choice state pays branch i's expected first-stage
    payoff and moves like branch i's second stage.

    Raises:
        ValidationError: If there are no branches.
    """
    if not branches:
        raise ValidationError("Maximum of zero branches.", parameter="branches")
    choice = "choice"
    states = [choice]
    actions = {choice: []}
    payoff = {}
    transition = {}
    for i, branch in enumerate(branches):
        prefix = f"b{i}:"
        name = f"b{i}"
        actions[choice].append(name)
        reward = Fraction(0)
        row = {}
        for s, weight in branch.initial.items():
            reward += weight * branch.reward(s)
            for t, p in branch.row(s).items():
                row[prefix + t] = row.get(prefix + t, Fraction(0)) + weight * p
        payoff[(choice, name)] = reward
        transition[(choice, name)] = {t: p for t, p in row.items() if p != 0}
        for s in branch.states:
            states.append(prefix + s)
            actions[prefix + s] = [DEGENERATE_ACTION]
            payoff[(prefix + s, DEGENERATE_ACTION)] = branch.reward(s)
            transition[(prefix + s, DEGENERATE_ACTION)] = {
                prefix + t: p for t, p in branch.row(s).items()
            }
    combined = Mdp(
        states=states,
        actions=actions,
        payoff=payoff,
        transition=transition,
        initial={choice: Fraction(1)},
    )
    if len(branches) == 1:
        return as_degenerate(combined)
    return combined


def synthesize_branches(
    spec: MaxFSpec, bound: int = constants.GADGET_BOUND
) -> List[Tuple[DegenerateMdp, BranchReport]]:
    """Synthesize each branch of a factored spec separately."""
    require_spec(spec)
    return [
        _build_branch(branch.numerator, branch.denominator, bound) for branch in spec.branches
    ]


def synthesize(
    spec: MaxFSpec, bound: int = constants.GADGET_BOUND
) -> Tuple[Mdp, SynthesisReport]:
    """
    Synthesize every branch of a factored spec and take their maximum.

    Returns:
        The MDP, degenerate iff the spec has one branch, and its report.

    Raises:
        ValidationError: If the spec is invalid or has unfactored branches.
        GadgetSearchExhaustedError: If a quadratic gadget needs exponents above ``bound``.
    """
    built = synthesize_branches(spec, bound)
    mdps = [mdp for mdp, _ in built]
    reports = [report for _, report in built]
    result = mdps[0] if len(mdps) == 1 else synth_max(mdps)
    return result, SynthesisReport(
        states=len(result.states),
        degenerate=len(mdps) == 1,
        branches=reports,
    )


def synth_spec(spec: MaxFSpec, bound: int = constants.GADGET_BOUND) -> Mdp:
    """Build an MDP whose value function is the maximum of the spec's branches."""
    mdp, _ = synthesize(spec, bound)
    return mdp


def branch_spec(numerator, den: FactoredDenominator) -> MaxFSpec:
    """Wrap one factored branch as a spec."""
    return MaxFSpec(branches=[SpecBranch(numerator=Polynomial.coerce(numerator), denominator=den)])
