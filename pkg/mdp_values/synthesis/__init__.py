"""Synthesis of MDPs realizing a target value function."""

from mdp_values.synthesis.gadget_search import GadgetCertificate, gadget_search
from mdp_values.synthesis.gadgets import (
    add,
    alternate_negate,
    contract,
    cycle_gadget,
    inv_cyclotomic,
    inv_linear,
    inv_quadratic,
    mk_const,
    mk_geometric,
    mul_by_poly,
    power,
    product_contract,
    scale,
    shift,
)
from mdp_values.synthesis.pipeline import (
    BranchReport,
    SynthesisReport,
    SynthesisStep,
    branch_spec,
    scaling_constant,
    synth_branch,
    synth_max,
    synth_spec,
    synthesize,
    synthesize_branches,
)
from mdp_values.synthesis.specs import (
    FactoredDenominator,
    MaxFSpec,
    RawSpecBranch,
    SpecBranch,
    approximate_spec,
    check_spec,
    factor_denominator_approx,
    require_spec,
)

__all__ = [
    "BranchReport",
    "FactoredDenominator",
    "GadgetCertificate",
    "MaxFSpec",
    "RawSpecBranch",
    "SpecBranch",
    "SynthesisReport",
    "SynthesisStep",
    "add",
    "alternate_negate",
    "approximate_spec",
    "branch_spec",
    "check_spec",
    "contract",
    "cycle_gadget",
    "factor_denominator_approx",
    "gadget_search",
    "inv_cyclotomic",
    "inv_linear",
    "inv_quadratic",
    "mk_const",
    "mk_geometric",
    "mul_by_poly",
    "power",
    "product_contract",
    "require_spec",
    "scale",
    "scaling_constant",
    "shift",
    "synth_branch",
    "synth_max",
    "synth_spec",
    "synthesize",
    "synthesize_branches",
]
