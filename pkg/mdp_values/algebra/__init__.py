"""Exact polynomial and rational-function algebra over λ, with root classification."""

from mdp_values.algebra.polynomial import (
    Polynomial,
    poly_divrem,
    poly_gcd,
    poly_lcm,
    poly_mul,
)
from mdp_values.algebra.rational import (
    Rational,
    RationalLike,
    format_rational,
    parse_rational,
)
from mdp_values.algebra.rational_function import (
    RationalFunction,
    ratfunc_eval,
    taylor_coefficients,
)
from mdp_values.algebra.roots import (
    ComplexPoint,
    CyclotomicSplit,
    DiskVerdict,
    RootInterval,
    all_roots_outside_unit_disk,
    cyclotomic,
    euler_phi,
    extract_cyclotomic_part,
    roots_numeric,
    sturm_isolate,
    sturm_sequence,
)

__all__ = [
    "ComplexPoint",
    "CyclotomicSplit",
    "DiskVerdict",
    "Polynomial",
    "Rational",
    "RationalFunction",
    "RationalLike",
    "RootInterval",
    "all_roots_outside_unit_disk",
    "cyclotomic",
    "euler_phi",
    "extract_cyclotomic_part",
    "format_rational",
    "parse_rational",
    "poly_divrem",
    "poly_gcd",
    "poly_lcm",
    "poly_mul",
    "ratfunc_eval",
    "roots_numeric",
    "sturm_isolate",
    "sturm_sequence",
    "taylor_coefficients",
]
