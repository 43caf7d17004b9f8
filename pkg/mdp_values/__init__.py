"""Exact value functions of discounted Markov decision processes, in both directions."""

__version__ = "0.1.0"

__all__ = [
    "Mdp",
    "DegenerateMdp",
    "Polynomial",
    "RationalFunction",
    "MaxFSpec",
    "analyze",
    "policy_envelope",
    "stationary_value_symbolic",
    "synth_spec",
    "value_iteration",
]

from mdp_values.algebra import Polynomial, RationalFunction
from mdp_values.analyzer import analyze
from mdp_values.mdp import DegenerateMdp, Mdp
from mdp_values.solver import policy_envelope, stationary_value_symbolic, value_iteration
from mdp_values.synthesis import MaxFSpec, synth_spec
