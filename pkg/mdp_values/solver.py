"""Discounted values: exact rational functions per policy, numeric value iteration, and the policy envelope."""

import itertools
import logging
import math
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from pydantic import BaseModel, Field

from mdp_values import constants
from mdp_values.algebra import (
    DiskVerdict,
    Polynomial,
    Rational,
    RationalFunction,
    all_roots_outside_unit_disk,
    extract_cyclotomic_part,
    parse_rational,
    poly_gcd,
    sturm_isolate,
)
from mdp_values.exceptions import CapExceededError, ValidationError
from mdp_values.mdp import Mdp, as_degenerate, require_valid

logger = logging.getLogger(__name__)


class Policy(BaseModel):
    """A pure stationary policy: one action index per state."""

    model_config = {"frozen": True}

    choice: Dict[str, int]

    @classmethod
    def first(cls, m: Mdp) -> "Policy":
        """The policy picking the first action everywhere; the only policy of a degenerate MDP."""
        return cls(choice={s: 0 for s in m.states})

    def action(self, m: Mdp, state: str) -> str:
        return m.actions[state][self.choice[state]]

    def labels(self, m: Mdp) -> Dict[str, str]:
        """Return the policy as a state -> action identifier map."""
        return {s: self.action(m, s) for s in m.states}


class PolicyValue(BaseModel):
    """Symbolic value of a fixed policy, per state and averaged over μ."""

    values: Dict[str, RationalFunction]
    initial: RationalFunction


class ValueIterationResult(BaseModel):
    """Numeric values with their a-priori error certificate."""

    values: Dict[str, float]
    initial: float
    iterations: int
    error_bound: float


class Admissibility(BaseModel):
    """Denominator-root verdict for one branch value."""

    verdict: str
    cyclotomic_indices: List[int] = Field(default_factory=list)
    outside_disk: DiskVerdict
    multiplicity_violation: bool = False
    remainder: Polynomial

    @property
    def admissible(self) -> bool:
        return self.verdict == "admissible"


class EnvelopeBranch(BaseModel):
    """One distinct branch value and the first policy that attains it."""

    policy: Dict[str, str]
    value: RationalFunction
    admissibility: Admissibility
    policies: int = 1


class EnvelopeReport(BaseModel):
    """The upper envelope of all pure stationary policy values."""

    branches: List[EnvelopeBranch]
    switchpoints: List[Tuple[Rational, Rational]] = Field(default_factory=list)
    policy_count: int
    admissible: bool


class _Chain:
    """A policy's Markov reward chain over state indices, zero probabilities dropped."""

    def __init__(self, m: Mdp, p: Policy):
        self.states = list(m.states)
        index = {s: i for i, s in enumerate(self.states)}
        self.rewards: List[Fraction] = []
        self.rows: List[Dict[int, Fraction]] = []
        for state in self.states:
            action = p.action(m, state)
            self.rewards.append(m.payoff[(state, action)])
            row = m.transition[(state, action)]
            self.rows.append({index[t]: q for t, q in row.items() if q != 0})
        self.initial = {index[s]: q for s, q in m.initial.items() if q != 0}


def validate_policy(m: Mdp, p: Policy) -> None:
    """
    Check that p picks a valid action index for every state of m.

    Raises:
        ValidationError: If a state is missing or an index is out of range.
    """
    problems = []
    for state in m.states:
        if state not in p.choice:
            problems.append(f"no action chosen for {state!r}")
        elif not 0 <= p.choice[state] < len(m.actions.get(state, [])):
            problems.append(f"action index {p.choice[state]} out of range for {state!r}")
    if problems:
        raise ValidationError("Policy does not fit the MDP.", violations=problems)


def _components(rows: List[Dict[int, Fraction]]) -> List[List[int]]:
    """Strongly connected components, each listed after every component it can reach."""
    count = len(rows)
    index: List[Optional[int]] = [None] * count
    low = [0] * count
    on_stack = [False] * count
    stack: List[int] = []
    components: List[List[int]] = []
    counter = 0
    for root in range(count):
        if index[root] is not None:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, iter(rows[root]))]
        while work:
            node, successors = work[-1]
            descended = False
            for successor in successors:
                if index[successor] is None:
                    index[successor] = low[successor] = counter
                    counter += 1
                    stack.append(successor)
                    on_stack[successor] = True
                    work.append((successor, iter(rows[successor])))
                    descended = True
                    break
                if on_stack[successor]:
                    low[node] = min(low[node], index[successor])
            if descended:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[node])
            if low[node] == index[node]:
                component = []
                while True:
                    member = stack.pop()
                    on_stack[member] = False
                    component.append(member)
                    if member == node:
                        break
                components.append(sorted(component))
    return components


def bareiss_solve(
    rows: List[Dict[int, Polynomial]], rhs: List[Polynomial]
) -> Tuple[Polynomial, List[Polynomial], int]:
    """
    Solve A·v = b over Q[λ] by fraction-free (Bareiss) elimination.

    Rows are sparse maps column -> entry. Every intermediate division is
    exact, and the solution comes back as v = x / d with polynomial x.

    Args:
        rows: The matrix A, one sparse row per equation.
        rhs: The right-hand side b.

    Returns:
        (d, x, sign) where d is the last pivot, equal to sign·det(A).

    Raises:
        ArithmeticError: If A is singular.
    """
    size = len(rows)
    rows = [dict(row) for row in rows]
    rhs = list(rhs)
    zero = Polynomial()
    previous = Polynomial.one()
    sign = 1
    for k in range(size):
        candidates = [i for i in range(k, size) if k in rows[i]]
        if not candidates:
            raise ArithmeticError("Singular polynomial matrix")
        chosen = min(candidates, key=lambda i: (rows[i][k].degree, i))
        if chosen != k:
            rows[k], rows[chosen] = rows[chosen], rows[k]
            rhs[k], rhs[chosen] = rhs[chosen], rhs[k]
            sign = -sign
        pivot = rows[k][k]
        pivot_row = rows[k]
        for i in range(k + 1, size):
            row = rows[i]
            factor = row.pop(k, None)
            if factor is None:
                if pivot != previous:
                    rows[i] = {j: (pivot * v).exact_div(previous) for j, v in row.items()}
                    rhs[i] = (pivot * rhs[i]).exact_div(previous)
                continue
            updated = {}
            for j in set(row) | set(pivot_row):
                if j == k:
                    continue
                value = pivot * row.get(j, zero) - factor * pivot_row.get(j, zero)
                if not value.is_zero:
                    updated[j] = value.exact_div(previous)
            rows[i] = updated
            rhs[i] = (pivot * rhs[i] - factor * rhs[k]).exact_div(previous)
        previous = pivot
    determinant = previous
    solution: List[Polynomial] = [zero] * size
    for i in reversed(range(size)):
        accumulated = determinant * rhs[i]
        for j, entry in rows[i].items():
            if j > i:
                accumulated = accumulated - entry * solution[j]
        solution[i] = accumulated.exact_div(rows[i][i])
    return determinant, solution, sign


def _block_system(
    chain: _Chain, block: List[int]
) -> Tuple[Dict[int, int], List[Dict[int, Polynomial]]]:
    """The rows of I − λQ restricted to one component, in local indices."""
    local = {state: i for i, state in enumerate(block)}
    matrix = []
    for state in block:
        row: Dict[int, Polynomial] = {local[state]: Polynomial.one()}
        for target, probability in chain.rows[state].items():
            if target in local:
                j = local[target]
                row[j] = row.get(j, Polynomial()) - Polynomial.monomial(1, probability)
        matrix.append({j: entry for j, entry in row.items() if not entry.is_zero})
    return local, matrix


def _solve_symbolic(chain: _Chain) -> List[RationalFunction]:
    lam = Polynomial.lam()
    values: List[Optional[RationalFunction]] = [None] * len(chain.states)
    for block in _components(chain.rows):
        local, matrix = _block_system(chain, block)
        rhs: List[RationalFunction] = []
        for state in block:
            outside = RationalFunction.constant(0)
            for target, probability in chain.rows[state].items():
                if target not in local:
                    outside = outside + values[target] * probability
            if outside.is_zero:
                rhs.append(RationalFunction.constant(chain.rewards[state]))
            else:
                rhs.append(
                    RationalFunction(
                        outside.numerator * lam + outside.denominator * chain.rewards[state],
                        outside.denominator,
                    )
                )
        if len(block) == 1:
            diagonal = matrix[0][0]
            values[block[0]] = RationalFunction(
                rhs[0].numerator, rhs[0].denominator * diagonal
            )
            continue
        common = Polynomial.one()
        for term in rhs:
            if term.denominator.degree > 0:
                common = common * term.denominator.exact_div(
                    poly_gcd(common, term.denominator)
                )
        scaled = [term.numerator * common.exact_div(term.denominator) for term in rhs]
        determinant, solution, _ = bareiss_solve(matrix, scaled)
        for state, numerator in zip(block, solution):
            values[state] = RationalFunction(numerator, determinant * common)
    return values


def stationary_value_symbolic(m: Mdp, p: Policy) -> PolicyValue:
    """
    Solve (I − λQ_p)v = r_p exactly over the rational functions in λ.

    The chain is split into strongly connected components, which puts
    I − λQ_p in block-triangular form; components are solved in reverse
    topological order, each by Bareiss elimination over Q[λ].

    Args:
        m: A valid MDP.
        p: A policy for m.

    Returns:
        The reduced value of every state and the μ-average γ_λ(μ, p).

    Raises:
        ValidationError: If m is invalid or p does not fit m.
    """
    require_valid(m)
    validate_policy(m, p)
    return _policy_value(m, p)


def _policy_value(m: Mdp, p: Policy) -> PolicyValue:
    chain = _Chain(m, p)
    values = _solve_symbolic(chain)
    initial = RationalFunction.constant(0)
    for state, weight in chain.initial.items():
        initial = initial + values[state] * weight
    return PolicyValue(
        values={s: v for s, v in zip(chain.states, values)},
        initial=initial,
    )


def transition_determinant(m: Mdp, p: Policy) -> Polynomial:
    """Return det(I − λQ_p); every reduced state value's denominator divides it."""
    validate_policy(m, p)
    chain = _Chain(m, p)
    determinant = Polynomial.one()
    for block in _components(chain.rows):
        _, matrix = _block_system(chain, block)
        if len(block) == 1:
            determinant = determinant * matrix[0][0]
            continue
        last_pivot, _, sign = bareiss_solve(matrix, [Polynomial()] * len(block))
        determinant = determinant * last_pivot * sign
    return determinant


def stage_payoffs(m: Mdp, p: Policy, count: int) -> List[Fraction]:
    """
    Return the expected payoffs x_1, ..., x_count of the first stages under p.

    These are the power-series coefficients of γ_λ(μ, p) at λ = 0.
    """
    validate_policy(m, p)
    chain = _Chain(m, p)
    distribution = dict(chain.initial)
    payoffs = []
    for _ in range(count):
        payoffs.append(sum((w * chain.rewards[s] for s, w in distribution.items()), Fraction(0)))
        advanced: Dict[int, Fraction] = {}
        for state, weight in distribution.items():
            for target, probability in chain.rows[state].items():
                advanced[target] = advanced.get(target, Fraction(0)) + weight * probability
        distribution = advanced
    return payoffs


def _check_discount(lam) -> Fraction:
    value = parse_rational(lam)
    if not 0 <= value < 1:
        raise ValidationError(
            f"Discount factor {value} is outside [0, 1).",
            parameter="lambda",
            valid_values="0 <= λ < 1",
        )
    return value


def _solve_dense(matrix: List[List[Fraction]], rhs: List[Fraction]) -> List[Fraction]:
    """Gauss-Jordan elimination over the rationals."""
    size = len(rhs)
    augmented = [row[:] + [b] for row, b in zip(matrix, rhs)]
    for k in range(size):
        pivot_row = next(i for i in range(k, size) if augmented[i][k] != 0)
        augmented[k], augmented[pivot_row] = augmented[pivot_row], augmented[k]
        pivot = augmented[k][k]
        augmented[k] = [v / pivot for v in augmented[k]]
        for i in range(size):
            if i != k and augmented[i][k] != 0:
                factor = augmented[i][k]
                augmented[i] = [a - factor * b for a, b in zip(augmented[i], augmented[k])]
    return [row[-1] for row in augmented]


def policy_value_at(m: Mdp, p: Policy, lam) -> Dict[str, Fraction]:
    """
    Solve (I − λQ_p)v = r_p at one rational λ, component by component.

    Raises:
        ValidationError: If λ is outside [0, 1) or p does not fit m.
    """
    lam = _check_discount(lam)
    validate_policy(m, p)
    chain = _Chain(m, p)
    values: List[Optional[Fraction]] = [None] * len(chain.states)
    for block in _components(chain.rows):
        local = {state: i for i, state in enumerate(block)}
        matrix = [[Fraction(0)] * len(block) for _ in block]
        rhs = []
        for state in block:
            i = local[state]
            matrix[i][i] += 1
            known = chain.rewards[state]
            for target, probability in chain.rows[state].items():
                if target in local:
                    matrix[i][local[target]] -= lam * probability
                else:
                    known += lam * probability * values[target]
            rhs.append(known)
        for state, value in zip(block, _solve_dense(matrix, rhs)):
            values[state] = value
    return {s: v for s, v in zip(chain.states, values)}


def degenerate_value_at(m: Mdp, lam) -> Fraction:
    """
    Return the exact value μ·v of a degenerate MDP at a rational discount factor.

    Raises:
        ValidationError: If m is not degenerate or λ is outside [0, 1).
    """
    chain_mdp = as_degenerate(m)
    values = policy_value_at(chain_mdp, Policy.first(chain_mdp), lam)
    return sum((w * values[s] for s, w in chain_mdp.initial.items()), Fraction(0))


def iteration_count(lam: float, epsilon: float, r_max: float) -> int:
    """Smallest N >= 1 with λ^N·R_max/(1 − λ) <= ε."""
    if r_max == 0 or lam == 0:
        return 1
    horizon = r_max / (1 - lam)
    if horizon <= epsilon:
        return 1
    n = max(1, math.ceil(math.log(epsilon / horizon) / math.log(lam)))
    while lam**n * horizon > epsilon:
        n += 1
    return n


def value_iteration(
    m: Mdp, lam: float, epsilon: float = constants.VALUE_ITERATION_EPSILON
) -> ValueIterationResult:
    """
    Approximate v_λ by iterating the Bellman max-operator from zero.

    The iteration count is fixed in advance so that λ^N·R_max/(1 − λ) <= ε,
    which bounds the distance to v_λ in every state.

    Args:
        m: A valid MDP.
        lam: Discount factor in [0, 1).
        epsilon: Certified error bound.

    Returns:
        Per-state values, the μ-average, N and the certified bound.

    Raises:
        ValidationError: If λ is outside [0, 1), ε <= 0, or m is invalid.
    """
    lam = float(lam)
    if not 0 <= lam < 1:
        raise ValidationError(
            f"Discount factor {lam} is outside [0, 1).",
            parameter="lambda",
            valid_values="0 <= λ < 1",
        )
    if epsilon <= 0:
        raise ValidationError("Epsilon must be positive.", parameter="epsilon")
    require_valid(m)

    index = {s: i for i, s in enumerate(m.states)}
    pairs = m.state_actions()
    rewards = np.array([float(m.payoff[pair]) for pair in pairs])
    transitions = np.zeros((len(pairs), len(m.states)))
    for row, pair in enumerate(pairs):
        for target, probability in m.transition[pair].items():
            transitions[row, index[target]] = float(probability)
    starts = np.cumsum([0] + [len(m.actions[s]) for s in m.states[:-1]])

    r_max = float(m.max_abs_payoff())
    iterations = iteration_count(lam, epsilon, r_max)
    values = np.zeros(len(m.states))
    for _ in range(iterations):
        values = np.maximum.reduceat(rewards + lam * (transitions @ values), starts)

    initial = sum(float(w) * values[index[s]] for s, w in m.initial.items())
    error_bound = lam**iterations * (r_max / (1 - lam))
    return ValueIterationResult(
        values={s: float(values[index[s]]) for s in m.states},
        initial=float(initial),
        iterations=iterations,
        error_bound=error_bound,
    )


def check_admissibility(q: Polynomial) -> Admissibility:
    """
    Decide whether every root of q is a simple unit root or lies strictly outside the unit disk.

    Cyclotomic factors are removed by exact trial division, and the remainder
    must pass the exact outside-disk test.
    """
    split = extract_cyclotomic_part(q)
    outside = all_roots_outside_unit_disk(split.remainder)
    admissible = not split.multiplicity_violation and outside == DiskVerdict.YES
    return Admissibility(
        verdict="admissible" if admissible else "inadmissible",
        cyclotomic_indices=split.indices,
        outside_disk=outside,
        multiplicity_violation=split.multiplicity_violation,
        remainder=split.remainder,
    )


def _leaders(functions: Sequence[RationalFunction], x: Fraction) -> frozenset:
    values = [f(x) for f in functions]
    best = max(values)
    return frozenset(i for i, v in enumerate(values) if v == best)


def find_switchpoints(functions: Sequence[RationalFunction]) -> List[Tuple[Fraction, Fraction]]:
    """
    Isolate the points of [0, 1) where the maximizing function changes.

    Candidates are the real roots of the pairwise difference numerators; the
    maximizer is evaluated exactly in every gap between candidates, and a
    candidate is kept when the maximizer differs on its two sides.
    """
    functions = list(functions)
    if len(functions) < 2:
        return []
    candidates: List[Tuple[Fraction, Fraction]] = []
    for f, g in itertools.combinations(functions, 2):
        difference = (f - g).numerator
        if not difference.is_zero:
            candidates.extend(sturm_isolate(difference, Fraction(0), Fraction(1)))
    if not candidates:
        return []
    candidates.sort()
    merged = [list(candidates[0])]
    for lo, hi in candidates[1:]:
        if lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])

    switchpoints = []
    first_lo = merged[0][0]
    if first_lo > 0:
        before = _leaders(functions, first_lo / 2)
    elif (first_lo, first_lo) not in candidates:
        # the first root lies strictly inside (0, hi)
        before = _leaders(functions, first_lo)
    else:
        before = None
    for position, (lo, hi) in enumerate(merged):
        right = merged[position + 1][0] if position + 1 < len(merged) else Fraction(1)
        after = _leaders(functions, (hi + right) / 2)
        if before is not None and after != before:
            switchpoints.append((lo, hi))
        before = after
    return switchpoints


def policy_envelope(
    m: Mdp, cap: int = constants.POLICY_CAP, switchpoints: bool = True
) -> EnvelopeReport:
    """
    Enumerate every pure stationary policy and collect the distinct value functions.

    Each distinct branch is checked for admissibility, and optionally the
    switchpoints of the upper envelope are isolated in [0, 1).

    Args:
        m: A valid MDP.
        cap: Maximum number of policies to enumerate.
        switchpoints: Whether to isolate switchpoints.

    Returns:
        The envelope report.

    Raises:
        ValidationError: If m is invalid.
        CapExceededError: If ∏|A(s)| exceeds cap.
    """
    require_valid(m)
    count = 1
    for state in m.states:
        count *= len(m.actions[state])
    if count > cap:
        raise CapExceededError(count, cap)

    branches: Dict[RationalFunction, EnvelopeBranch] = {}
    for choice in itertools.product(*(range(len(m.actions[s])) for s in m.states)):
        policy = Policy(choice=dict(zip(m.states, choice)))
        value = _policy_value(m, policy).initial
        if value in branches:
            branches[value].policies += 1
            continue
        branches[value] = EnvelopeBranch(
            policy=policy.labels(m),
            value=value,
            admissibility=check_admissibility(value.denominator),
        )
    logger.info("Enumerated %d policies into %d distinct branches", count, len(branches))

    distinct = list(branches.values())
    return EnvelopeReport(
        branches=distinct,
        switchpoints=find_switchpoints([b.value for b in distinct]) if switchpoints else [],
        policy_count=count,
        admissible=all(b.admissibility.admissible for b in distinct),
    )
