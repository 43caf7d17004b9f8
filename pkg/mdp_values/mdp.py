"""Finite Markov decision processes with exact rational data."""

import itertools
import logging
from fractions import Fraction
from typing import Dict, Iterable, List, Tuple

from pydantic import BaseModel, field_serializer, field_validator, model_validator

from mdp_values import constants
from mdp_values.algebra import Rational, format_rational
from mdp_values.exceptions import CapExceededError, ValidationError

logger = logging.getLogger(__name__)

# Action identifier used by every synthesized degenerate state
DEGENERATE_ACTION = "go"

ActionKey = Tuple[str, str]


def _split_action_key(key) -> ActionKey:
    if isinstance(key, str):
        state, sep, action = key.partition("|")
        if not sep:
            raise ValueError(f"State-action key must look like 'state|action': {key!r}")
        return state, action
    return tuple(key)


class Violation(BaseModel):
    """One invariant violation found by :func:`validate`."""

    kind: str
    location: str
    detail: str

    def __str__(self) -> str:
        return f"{self.kind} at {self.location}: {self.detail}"


class Mdp(BaseModel):
    """
    A finite MDP (S, A, r, q, μ) with exact rational payoffs and probabilities.

    Construction checks shapes only; the stochastic invariants are reported
    by :func:`validate` so that invalid models can still be inspected.
    """

    model_config = {"frozen": True}

    states: List[str]
    actions: Dict[str, List[str]]
    payoff: Dict[Tuple[str, str], Rational]
    transition: Dict[Tuple[str, str], Dict[str, Rational]]
    initial: Dict[str, Rational]

    @field_validator("payoff", "transition", mode="before")
    @classmethod
    def split_action_keys(cls, value):
        if isinstance(value, dict):
            return {_split_action_key(key): v for key, v in value.items()}
        return value

    @field_validator("states")
    @classmethod
    def check_state_names(cls, states: List[str]) -> List[str]:
        for state in states:
            if "|" in state:
                raise ValueError(f"State identifiers may not contain '|': {state!r}")
        return states

    @field_validator("actions")
    @classmethod
    def check_action_names(cls, actions: Dict[str, List[str]]) -> Dict[str, List[str]]:
        for state, names in actions.items():
            for action in names:
                if "|" in action:
                    raise ValueError(
                        f"Action identifiers may not contain '|': {action!r} in state {state!r}"
                    )
        return actions

    @field_serializer("payoff")
    def dump_payoff(self, payoff: Dict[ActionKey, Fraction]) -> Dict[str, str]:
        return {f"{s}|{a}": format_rational(v) for (s, a), v in payoff.items()}

    @field_serializer("transition")
    def dump_transition(
        self, transition: Dict[ActionKey, Dict[str, Fraction]]
    ) -> Dict[str, Dict[str, str]]:
        dense = len(self.states) <= constants.DENSE_ROW_STATES
        dumped = {}
        for (s, a), row in transition.items():
            if dense:
                targets = {t: row.get(t, Fraction(0)) for t in self.states}
            else:
                targets = {t: p for t, p in row.items() if p != 0}
            dumped[f"{s}|{a}"] = {t: format_rational(p) for t, p in targets.items()}
        return dumped

    @field_serializer("initial")
    def dump_initial(self, initial: Dict[str, Fraction]) -> Dict[str, str]:
        return {s: format_rational(p) for s, p in initial.items() if p != 0}

    def state_actions(self) -> List[ActionKey]:
        """Return the state-action set SA in state order."""
        return [(s, a) for s in self.states for a in self.actions.get(s, [])]

    def max_abs_payoff(self) -> Fraction:
        return max((abs(v) for v in self.payoff.values()), default=Fraction(0))

    def support(self) -> List[str]:
        """Return the states with positive initial probability, in state order."""
        return [s for s in self.states if self.initial.get(s, 0) > 0]


class DegenerateMdp(Mdp):
    """An MDP with exactly one action per state: a Markov reward chain."""

    @model_validator(mode="after")
    def check_single_action(self) -> "DegenerateMdp":
        for state in self.states:
            if len(self.actions.get(state, [])) != 1:
                raise ValueError(f"State {state!r} must have exactly one action")
        return self

    def action(self, state: str) -> str:
        return self.actions[state][0]

    def reward(self, state: str) -> Fraction:
        return self.payoff[(state, self.actions[state][0])]

    def row(self, state: str) -> Dict[str, Fraction]:
        return self.transition[(state, self.actions[state][0])]


def degenerate(
    states: List[str],
    payoff: Dict[str, Fraction],
    transition: Dict[str, Dict[str, Fraction]],
    initial: Dict[str, Fraction],
) -> DegenerateMdp:
    """Build a degenerate MDP from per-state data, dropping zero probabilities."""
    return DegenerateMdp(
        states=states,
        actions={s: [DEGENERATE_ACTION] for s in states},
        payoff={(s, DEGENERATE_ACTION): payoff.get(s, Fraction(0)) for s in states},
        transition={
            (s, DEGENERATE_ACTION): {t: p for t, p in transition[s].items() if p != 0}
            for s in states
        },
        initial={s: p for s, p in initial.items() if p != 0},
    )


def fresh_state(base: str, taken: Iterable[str]) -> str:
    """Return ``base`` or ``base.N``, whichever first avoids ``taken``."""
    taken = set(taken)
    if base not in taken:
        return base
    for n in itertools.count(1):
        candidate = f"{base}.{n}"
        if candidate not in taken:
            return candidate


def validate(m: Mdp) -> List[Violation]:
    """
    Report every invariant violation of m.

    Checks emptiness, totality of payoff and transition on SA, nonnegativity,
    exact row sums, the initial distribution, and references to unknown states.
    Arithmetic is exact; there is no tolerance.

    Args:
        m: The MDP to check.

    Returns:
        The violations, empty when m is valid.
    """
    violations: List[Violation] = []
    known = set(m.states)
    if not m.states:
        violations.append(Violation(kind="empty", location="states", detail="no states"))
    if len(known) != len(m.states):
        violations.append(
            Violation(kind="duplicate", location="states", detail="repeated state identifier")
        )
    for state in m.actions:
        if state not in known:
            violations.append(
                Violation(kind="unknown_state", location=state, detail="actions for unknown state")
            )

    for state in m.states:
        actions = m.actions.get(state, [])
        if not actions:
            violations.append(Violation(kind="empty", location=state, detail="empty action list"))
            continue
        if len(set(actions)) != len(actions):
            violations.append(
                Violation(kind="duplicate", location=state, detail="repeated action identifier")
            )
        for action in actions:
            location = f"{state}|{action}"
            if (state, action) not in m.payoff:
                violations.append(
                    Violation(kind="totality", location=location, detail="missing payoff")
                )
            row = m.transition.get((state, action))
            if row is None:
                violations.append(
                    Violation(kind="totality", location=location, detail="missing transition")
                )
                continue
            violations.extend(_check_distribution(row, known, location, "row_sum"))

    state_actions = set(m.state_actions())
    for key in list(m.payoff) + list(m.transition):
        if key not in state_actions:
            violations.append(
                Violation(
                    kind="unknown_state",
                    location=f"{key[0]}|{key[1]}",
                    detail="entry for a state-action pair outside SA",
                )
            )
    violations.extend(_check_distribution(m.initial, known, "initial", "initial_sum"))
    return violations


def _check_distribution(
    distribution: Dict[str, Fraction], known: set, location: str, sum_kind: str
) -> List[Violation]:
    violations = []
    for target, probability in distribution.items():
        if target not in known:
            violations.append(
                Violation(
                    kind="unknown_state",
                    location=location,
                    detail=f"probability on unknown state {target!r}",
                )
            )
        if probability < 0:
            violations.append(
                Violation(
                    kind="negative",
                    location=location,
                    detail=f"probability {probability} on {target!r}",
                )
            )
    total = sum(distribution.values(), Fraction(0))
    if total != 1:
        violations.append(
            Violation(kind=sum_kind, location=location, detail=f"probabilities sum to {total}")
        )
    return violations


def require_valid(m: Mdp, what: str = "MDP") -> None:
    """Raise ValidationError listing every violation of m, if any."""
    violations = validate(m)
    if violations:
        raise ValidationError(f"Invalid {what}.", violations=[str(v) for v in violations])


def is_degenerate(m: Mdp) -> bool:
    """Return True iff every state has exactly one action."""
    return all(len(m.actions.get(s, [])) == 1 for s in m.states)


def as_degenerate(m: Mdp) -> DegenerateMdp:
    """
    View a degenerate Mdp as a DegenerateMdp.

    Raises:
        ValidationError: If some state has more than one action.
    """
    if isinstance(m, DegenerateMdp):
        return m
    if not is_degenerate(m):
        raise ValidationError("MDP has states with a choice of actions.", parameter="m")
    return DegenerateMdp(
        states=m.states,
        actions=m.actions,
        payoff=m.payoff,
        transition=m.transition,
        initial=m.initial,
    )


def determinize_initial(
    m: Mdp, max_support: int = constants.DETERMINIZE_MAX_SUPPORT
) -> Mdp:
    """
    Concentrate the initial distribution on one new state.

    The new state carries one action per joint choice of actions on the
    support of μ, with the μ-expected first-stage payoff and post-first-stage
    transition of that choice. The value function is unchanged and the
    original states' data are left as they are.

    Args:
        m: A valid MDP.
        max_support: Largest initial support handled; joint choices grow
            exponentially with it.

    Returns:
        The determinized MDP, degenerate when m is.

    Raises:
        ValidationError: If m is invalid.
        CapExceededError: If the support or the number of joint choices is too large.
    """
    require_valid(m)
    support = m.support()
    if len(support) > max_support:
        raise CapExceededError(len(support), max_support, what="initial support states")
    profile_count = 1
    for state in support:
        profile_count *= len(m.actions[state])
    if profile_count > constants.POLICY_CAP:
        raise CapExceededError(profile_count, constants.POLICY_CAP, what="joint action profiles")

    start = fresh_state("start", m.states)
    single = is_degenerate(m)
    actions: List[str] = []
    payoff: Dict[ActionKey, Fraction] = {}
    transition: Dict[ActionKey, Dict[str, Fraction]] = {}
    for profile in itertools.product(*(m.actions[s] for s in support)):
        if single:
            name = DEGENERATE_ACTION
        else:
            name = ",".join(f"{s}={a}" for s, a in zip(support, profile))
        reward = Fraction(0)
        row: Dict[str, Fraction] = {}
        for state, action in zip(support, profile):
            weight = m.initial[state]
            reward += weight * m.payoff[(state, action)]
            for target, probability in m.transition[(state, action)].items():
                row[target] = row.get(target, Fraction(0)) + weight * probability
        actions.append(name)
        payoff[(start, name)] = reward
        transition[(start, name)] = {t: p for t, p in row.items() if p != 0}

    logger.debug("Determinized initial support of %d states into %d actions", len(support), len(actions))
    model = DegenerateMdp if single else Mdp
    return model(
        states=[start] + list(m.states),
        actions={start: actions, **m.actions},
        payoff={**payoff, **m.payoff},
        transition={**transition, **m.transition},
        initial={start: Fraction(1)},
    )
