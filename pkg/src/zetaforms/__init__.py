"""Exact linear forms in Hurwitz zeta values and the constants varpi, r_0, C_0."""

__version__ = "0.1.0"

from .arith import PrimePowerProduct, WorkingPrecision, lcm_upto, euler_phi, mu_factor, padic_valuation
from .params import ParameterError, ProofParameters
from .sieve import SieveSets, build_sieve_sets
from .omega import StepFunction, omega_at, omega_table, phi_n, varpi
from .special import digamma, hurwitz_zeta
from .forms import FactoredForm, PartialFractionTable, build_rational_function, partial_fractions, linear_form_coeffs, evaluate_series
from .elimination import WeightVector, integer_weights, assemble_tilde_S
from .asymptotics import AsymptoticsReport, solve_roots
from .criterion import CriterionReport, TheoremInapplicable, constants, solve_r0, c0_constant
from .search import SearchResult, scan_M, local_search

__all__ = [
    "PrimePowerProduct",
    "WorkingPrecision",
    "lcm_upto",
    "euler_phi",
    "mu_factor",
    "padic_valuation",
    "ParameterError",
    "ProofParameters",
    "SieveSets",
    "build_sieve_sets",
    "StepFunction",
    "omega_at",
    "omega_table",
    "phi_n",
    "varpi",
    "digamma",
    "hurwitz_zeta",
    "FactoredForm",
    "PartialFractionTable",
    "build_rational_function",
    "partial_fractions",
    "linear_form_coeffs",
    "evaluate_series",
    "WeightVector",
    "integer_weights",
    "assemble_tilde_S",
    "AsymptoticsReport",
    "solve_roots",
    "CriterionReport",
    "TheoremInapplicable",
    "constants",
    "solve_r0",
    "c0_constant",
    "SearchResult",
    "scan_M",
    "local_search",
]
