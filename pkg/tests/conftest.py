"""
Common test fixtures for the mdp-values package.
"""

import json
from fractions import Fraction

import pytest

from mdp_values.mdp import Mdp, degenerate
from mdp_values.synthesis import FactoredDenominator, MaxFSpec, SpecBranch


@pytest.fixture
def geometric():
    """One self-looping state with payoff 1: value 1/(1 − λ)."""
    return degenerate(
        states=["s"],
        payoff={"s": Fraction(1)},
        transition={"s": {"s": Fraction(1)}},
        initial={"s": Fraction(1)},
    )


@pytest.fixture
def two_cycle():
    """Deterministic 2-cycle with payoffs 1 and 0: value 1/(1 − λ²)."""
    return degenerate(
        states=["a", "b"],
        payoff={"a": Fraction(1), "b": Fraction(0)},
        transition={"a": {"b": Fraction(1)}, "b": {"a": Fraction(1)}},
        initial={"a": Fraction(1)},
    )


@pytest.fixture
def swap():
    """Deterministic 2-cycle with payoffs 1 and −1: value 1/(1 + λ)."""
    return degenerate(
        states=["a", "b"],
        payoff={"a": Fraction(1), "b": Fraction(-1)},
        transition={"a": {"b": Fraction(1)}, "b": {"a": Fraction(1)}},
        initial={"a": Fraction(1)},
    )


@pytest.fixture
def choice_mdp():
    """Stay for 1 per stage, or take 2 once and stop: value max(2, 1/(1 − λ))."""
    return Mdp(
        states=["s", "stop"],
        actions={"s": ["stay", "cash"], "stop": ["idle"]},
        payoff={
            ("s", "stay"): Fraction(1),
            ("s", "cash"): Fraction(2),
            ("stop", "idle"): Fraction(0),
        },
        transition={
            ("s", "stay"): {"s": Fraction(1)},
            ("s", "cash"): {"stop": Fraction(1)},
            ("stop", "idle"): {"stop": Fraction(1)},
        },
        initial={"s": Fraction(1)},
    )


@pytest.fixture
def flagship_denominator():
    """(λ + 1)·(2 − λ)·(λ² + 4) in factored form."""
    return FactoredDenominator(
        cyclotomic=[2],
        real_roots=[(Fraction(2), 1)],
        quadratics=[(Fraction(0), Fraction(4), 1)],
    )


@pytest.fixture
def flagship_spec(flagship_denominator):
    """Single-branch spec 1 / ((λ + 1)(2 − λ)(λ² + 4))."""
    return MaxFSpec(branches=[SpecBranch(denominator=flagship_denominator)])


@pytest.fixture
def envelope_spec():
    """Spec max(2, 1/(1 − λ))."""
    return MaxFSpec.model_validate(
        {
            "branches": [
                {"numerator": ["2"], "denominator": {}},
                {"numerator": ["-1"], "denominator": {"cyclotomic": [1]}},
            ]
        }
    )


@pytest.fixture
def write_json(tmp_path):
    """Fixture that writes a JSON-compatible object to a file and returns its path."""

    def _write(name, data):
        path = tmp_path / name
        if hasattr(data, "model_dump"):
            data = data.model_dump(mode="json")
        path.write_text(json.dumps(data))
        return path

    return _write
