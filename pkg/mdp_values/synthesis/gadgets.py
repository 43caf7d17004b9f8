"""
Degenerate MDP constructions, each realizing one operation on value functions.

Every construction takes and returns :class:`DegenerateMdp` instances and
leaves its inputs untouched. State identifiers of composite constructions are
prefixed by the part they come from, so disjoint unions never collide.
"""

import logging
import math
from fractions import Fraction
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

from mdp_values import constants
from mdp_values.algebra import Polynomial, RationalLike, cyclotomic, parse_rational
from mdp_values.exceptions import ValidationError
from mdp_values.mdp import DegenerateMdp, degenerate, fresh_state
from mdp_values.synthesis.gadget_search import GadgetCertificate, gadget_search
from mdp_values.synthesis.specs import quadratic

logger = logging.getLogger(__name__)

Row = Dict[str, Fraction]


def _payoffs(m: DegenerateMdp) -> Dict[str, Fraction]:
    return {s: m.reward(s) for s in m.states}


def _rows(m: DegenerateMdp) -> Dict[str, Row]:
    return {s: m.row(s) for s in m.states}


def _renamed(row: Row, prefix: str) -> Row:
    return {prefix + t: p for t, p in row.items()}


def mk_const(a: RationalLike) -> DegenerateMdp:
    """Value ≡ a: payoff a once, then an absorbing zero state."""
    a = parse_rational(a)
    return degenerate(
        states=["const", "sink"],
        payoff={"const": a, "sink": Fraction(0)},
        transition={"const": {"sink": Fraction(1)}, "sink": {"sink": Fraction(1)}},
        initial={"const": Fraction(1)},
    )


def mk_geometric() -> DegenerateMdp:
    """Value 1/(1 − λ): one self-looping state with payoff 1."""
    return degenerate(
        states=["geo"],
        payoff={"geo": Fraction(1)},
        transition={"geo": {"geo": Fraction(1)}},
        initial={"geo": Fraction(1)},
    )


def scale(m: DegenerateMdp, a: RationalLike) -> DegenerateMdp:
    """Value a·f: every payoff multiplied by a."""
    a = parse_rational(a)
    if a == 1:
        return m
    return degenerate(
        states=list(m.states),
        payoff={s: a * r for s, r in _payoffs(m).items()},
        transition=_rows(m),
        initial=dict(m.initial),
    )


def alternate_negate(m: DegenerateMdp) -> DegenerateMdp:
    """Value f(−λ): odd stages in one copy, even stages in a copy with negated payoffs."""
    payoffs, rows = _payoffs(m), _rows(m)
    states = [f"odd:{s}" for s in m.states] + [f"even:{s}" for s in m.states]
    payoff: Dict[str, Fraction] = {}
    transition: Dict[str, Row] = {}
    for s in m.states:
        payoff[f"odd:{s}"] = payoffs[s]
        payoff[f"even:{s}"] = -payoffs[s]
        transition[f"odd:{s}"] = _renamed(rows[s], "even:")
        transition[f"even:{s}"] = _renamed(rows[s], "odd:")
    return degenerate(
        states=states,
        payoff=payoff,
        transition=transition,
        initial=_renamed(m.initial, "odd:"),
    )


def shift(m: DegenerateMdp) -> DegenerateMdp:
    """Value λ·f: a new zero-payoff initial state that moves according to μ."""
    start = fresh_state("shift", m.states)
    return degenerate(
        states=[start] + list(m.states),
        payoff={start: Fraction(0), **_payoffs(m)},
        transition={start: dict(m.initial), **_rows(m)},
        initial={start: Fraction(1)},
    )


def contract(m: DegenerateMdp, c: RationalLike) -> DegenerateMdp:
    """
    Value f(cλ): each step continues with probability c and is absorbed otherwise.

    Raises:
        ValidationError: If c is outside [0, 1].
    """
    c = parse_rational(c)
    if not 0 <= c <= 1:
        raise ValidationError(
            f"Contraction factor {c} is outside [0, 1].", parameter="c", valid_values="0 <= c <= 1"
        )
    if c == 1:
        return m
    sink = fresh_state("sink", m.states)
    transition = {}
    for s, row in _rows(m).items():
        scaled = {t: c * p for t, p in row.items()}
        scaled[sink] = 1 - c
        transition[s] = scaled
    transition[sink] = {sink: Fraction(1)}
    return degenerate(
        states=list(m.states) + [sink],
        payoff={**_payoffs(m), sink: Fraction(0)},
        transition=transition,
        initial=dict(m.initial),
    )


def _mix(parts: Sequence[Tuple[str, DegenerateMdp]]) -> DegenerateMdp:
    """Value Σ f_i: a uniform prior over the parts, payoffs scaled by the part count."""
    weight = Fraction(1, len(parts))
    states: List[str] = []
    payoff: Dict[str, Fraction] = {}
    transition: Dict[str, Row] = {}
    initial: Row = {}
    for prefix, part in parts:
        rows = _rows(part)
        for s in part.states:
            states.append(prefix + s)
            payoff[prefix + s] = len(parts) * part.reward(s)
            transition[prefix + s] = _renamed(rows[s], prefix)
        for s, p in part.initial.items():
            initial[prefix + s] = weight * p
    return degenerate(states=states, payoff=payoff, transition=transition, initial=initial)


def add(mf: DegenerateMdp, mg: DegenerateMdp) -> DegenerateMdp:
    """Value f + g."""
    return _mix([("f:", mf), ("g:", mg)])


def power(m: DegenerateMdp, n: int) -> DegenerateMdp:
    """
    Value f(λⁿ): n layers, payoffs only in layer 1, one step of m every n stages.

    Raises:
        ValidationError: If n < 1.
    """
    if n < 1:
        raise ValidationError("Power must be at least 1.", parameter="n")
    if n == 1:
        return m
    payoffs, rows = _payoffs(m), _rows(m)
    states: List[str] = []
    payoff: Dict[str, Fraction] = {}
    transition: Dict[str, Row] = {}
    for s in m.states:
        for layer in range(1, n + 1):
            name = f"{s}@{layer}"
            states.append(name)
            payoff[name] = payoffs[s] if layer == 1 else Fraction(0)
            if layer < n:
                transition[name] = {f"{s}@{layer + 1}": Fraction(1)}
            else:
                transition[name] = {f"{t}@1": p for t, p in rows[s].items()}
    return degenerate(
        states=states,
        payoff=payoff,
        transition=transition,
        initial={f"{s}@1": p for s, p in m.initial.items()},
    )


def product_contract(mf: DegenerateMdp, mg: DegenerateMdp, c: RationalLike) -> DegenerateMdp:
    """
    Value f(λ)·g(cλ).

    One copy of mg runs with continuation probability c. On leaving it from a
    state s_g, play enters a private copy of mf distributed as mf's second
    stage, with payoffs r_g(s_g)·r_f/(1 − c). The copies of zero-payoff
    g-states are merged into one absorbing zero state.

    Raises:
        ValidationError: If c is outside (0, 1).
    """
    c = parse_rational(c)
    if not 0 < c < 1:
        raise ValidationError(
            f"Product contraction {c} is outside (0, 1).", parameter="c", valid_values="0 < c < 1"
        )
    f_payoffs, f_rows = _payoffs(mf), _rows(mf)
    g_payoffs, g_rows = _payoffs(mg), _rows(mg)
    first_stage = sum((p * f_payoffs[s] for s, p in mf.initial.items()), Fraction(0))
    second_stage: Row = {}
    for s, p in mf.initial.items():
        for t, q in f_rows[s].items():
            second_stage[t] = second_stage.get(t, Fraction(0)) + p * q

    states: List[str] = []
    payoff: Dict[str, Fraction] = {}
    transition: Dict[str, Row] = {}
    sink = "sink"
    needs_sink = False
    for sg in mg.states:
        name = f"g:{sg}"
        states.append(name)
        payoff[name] = g_payoffs[sg] * first_stage
        row = {f"g:{t}": c * p for t, p in g_rows[sg].items()}
        if g_payoffs[sg] == 0:
            needs_sink = True
            row[sink] = 1 - c
        else:
            copy = f"p:{sg}×"
            for t, p in second_stage.items():
                row[copy + t] = (1 - c) * p
            for sf in mf.states:
                states.append(copy + sf)
                payoff[copy + sf] = g_payoffs[sg] * f_payoffs[sf] / (1 - c)
                transition[copy + sf] = _renamed(f_rows[sf], copy)
        transition[name] = row
    if needs_sink:
        states.append(sink)
        payoff[sink] = Fraction(0)
        transition[sink] = {sink: Fraction(1)}
    return degenerate(
        states=states,
        payoff=payoff,
        transition=transition,
        initial=_renamed(mg.initial, "g:"),
    )


def mul_by_poly(m: DegenerateMdp, p) -> DegenerateMdp:
    """Value p(λ)·f: one shifted and scaled part per nonzero term of p, summed."""
    p = Polynomial.coerce(p)
    terms = p.nonzero_terms()
    if not terms:
        return mk_const(0)
    parts = []
    shifted = m
    reached = 0
    for degree, coefficient in terms:
        while reached < degree:
            shifted = shift(shifted)
            reached += 1
        parts.append((f"t{degree}:", scale(shifted, coefficient)))
    if len(parts) == 1:
        return parts[0][1]
    return _mix(parts)


def inv_cyclotomic(indices: Sequence[int]) -> DegenerateMdp:
    """
    Value 1/∏Φ_d: 1/(1 − λⁿ) for n = lcm(indices), times the exact cofactor.

    Raises:
        ValidationError: If an index is repeated or not positive.
    """
    indices = list(indices)
    if len(set(indices)) != len(indices) or any(d < 1 for d in indices):
        raise ValidationError(
            "Cyclotomic indices must be distinct positive integers.", parameter="indices"
        )
    if not indices:
        return mk_const(1)
    n = reduce(math.lcm, indices)
    product = reduce(lambda acc, d: acc * cyclotomic(d), indices, Polynomial.one())
    cofactor = (1 - Polynomial.monomial(n)).exact_div(product)
    return mul_by_poly(power(mk_geometric(), n), cofactor)


def cycle_gadget(certificate: GadgetCertificate) -> DegenerateMdp:
    """
    Value 1/(1 − α₁λ^k − α₂λ^l − α₃λ^m) at the last state of an m-cycle.

    The last state pays 1 and jumps back k, l or m states with
    probabilities α₁, α₂, α₃.
    """
    k, l, m = certificate.exponents  # noqa: E741
    names = [f"cyc{j}" for j in range(1, m + 1)]
    transition: Dict[str, Row] = {names[j]: {names[j + 1]: Fraction(1)} for j in range(m - 1)}
    last: Row = {}
    for back, weight in zip((k, l, m), certificate.alpha):
        target = names[m - back]
        last[target] = last.get(target, Fraction(0)) + weight
    transition[names[-1]] = last
    return degenerate(
        states=names,
        payoff={name: Fraction(1) if name == names[-1] else Fraction(0) for name in names},
        transition=transition,
        initial={names[-1]: Fraction(1)},
    )


def inv_quadratic(
    b: RationalLike,
    c: RationalLike,
    bound: int = constants.GADGET_BOUND,
    certificate: Optional[GadgetCertificate] = None,
) -> DegenerateMdp:
    """
    Value 1/(λ² + bλ + c) for a complex root pair outside the unit disk.

    Raises:
        ValidationError: If b² >= 4c or c <= 1.
        GadgetSearchExhaustedError: If no certificate exists within ``bound``.
    """
    b, c = parse_rational(b), parse_rational(c)
    if certificate is None:
        certificate = gadget_search(b, c, bound)
    cofactor = certificate.polynomial().exact_div(quadratic(b, c))
    return mul_by_poly(cycle_gadget(certificate), cofactor)


def inv_linear(omega: RationalLike) -> DegenerateMdp:
    """
    Value 1/(ω − λ) for a real ω with |ω| > 1.

    Raises:
        ValidationError: If |ω| <= 1.
    """
    omega = parse_rational(omega)
    if abs(omega) <= 1:
        raise ValidationError(
            f"Real root {omega} is not outside the unit disk.",
            parameter="omega",
            valid_values="|ω| > 1",
        )
    if omega < 0:
        return scale(alternate_negate(inv_linear(-omega)), -1)
    return scale(contract(mk_geometric(), 1 / omega), 1 / omega)
