"""
Hypothesis strategies and helpers shared by the property tests.
"""

from fractions import Fraction

from hypothesis import strategies as st

from mdp_values.algebra import Polynomial, RationalFunction
from mdp_values.mdp import Mdp, as_degenerate
from mdp_values.solver import Policy, stationary_value_symbolic

rationals = st.builds(Fraction, st.integers(-8, 8), st.integers(1, 8))
small_rationals = st.builds(Fraction, st.integers(-16, 16), st.integers(1, 16))
unit_interval = st.builds(Fraction, st.integers(1, 15), st.just(16))
polynomials = st.lists(small_rationals, min_size=1, max_size=4).map(Polynomial)


def value_of(m) -> RationalFunction:
    """Symbolic μ-value of a degenerate MDP."""
    return stationary_value_symbolic(m, Policy.first(m)).initial


@st.composite
def distributions(draw, support, max_weight=4):
    """A distribution over ``support`` with small rational weights."""
    weights = draw(
        st.lists(st.integers(0, max_weight), min_size=len(support), max_size=len(support))
    )
    if sum(weights) == 0:
        weights[0] = 1
    total = sum(weights)
    return {s: Fraction(w, total) for s, w in zip(support, weights) if w}


@st.composite
def mdps(draw, max_states=4, max_actions=3):
    """A valid MDP with rational payoffs and transitions of denominator at most 8."""
    count = draw(st.integers(1, max_states))
    states = [f"s{i}" for i in range(count)]
    actions = {s: [f"a{j}" for j in range(draw(st.integers(1, max_actions)))] for s in states}
    payoff = {}
    transition = {}
    for s in states:
        for a in actions[s]:
            payoff[(s, a)] = draw(rationals)
            transition[(s, a)] = draw(distributions(states, max_weight=2))
    return Mdp(
        states=states,
        actions=actions,
        payoff=payoff,
        transition=transition,
        initial=draw(distributions(states)),
    )


def degenerate_mdps(max_states=8):
    """A valid degenerate MDP."""
    return mdps(max_states=max_states, max_actions=1).map(as_degenerate)


@st.composite
def spread_degenerate_mdps(draw, max_states=8):
    """A degenerate MDP whose initial distribution has at least two support states."""
    m = draw(degenerate_mdps(max_states=max_states).filter(lambda m: len(m.states) >= 2))
    first, second = m.states[0], m.states[1]
    weight = draw(st.builds(Fraction, st.integers(1, 7), st.just(8)))
    return m.model_copy(update={"initial": {first: weight, second: 1 - weight}})
