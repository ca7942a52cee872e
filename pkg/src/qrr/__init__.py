"""Exact q-series toolkit for Rogers-Ramanujan type identities."""

from .powerseries import (
    InsufficientPrecision, NonUnit, Series, equal_up_to, from_coefficients, invert_unit, monomial,
    substitute_q_power,
)
from .qobjects import (
    DivergentProduct, Monomial, NonTerminating, PoleInLowerParameter, ZERO, poch_finite, poch_inf,
    poch_inf_inverse, poch_scaled, theta_sum_lhs, triple_product_rhs,
)
from .hypergeometric import PhiSpec, phi
from .transforms import MissingParameter, ParamAssignment, TheoremId, liu_general, theorem_parts, theorem_sides
from .productrec import (
    ExponentProfile, NoPeriodicity, NotAUnit, ProductPresentation, detect_modulus, factor_exponents,
    recognize, reconstruct, split_two_term,
)
from .registry import (
    CatalogSyntaxError, DuplicateLabel, IdentityEntry, eval_product_side, eval_sum_side, find, load_catalog,
    parse_catalog,
)

__all__ = [
    "InsufficientPrecision", "NonUnit", "Series", "equal_up_to", "from_coefficients", "invert_unit",
    "monomial", "substitute_q_power",
    "DivergentProduct", "Monomial", "NonTerminating", "PoleInLowerParameter", "ZERO", "poch_finite",
    "poch_inf", "poch_inf_inverse", "poch_scaled", "theta_sum_lhs", "triple_product_rhs",
    "PhiSpec", "phi",
    "MissingParameter", "ParamAssignment", "TheoremId", "liu_general", "theorem_parts", "theorem_sides",
    "ExponentProfile", "NoPeriodicity", "NotAUnit", "ProductPresentation", "detect_modulus",
    "factor_exponents", "recognize", "reconstruct", "split_two_term",
    "CatalogSyntaxError", "DuplicateLabel", "IdentityEntry", "eval_product_side", "eval_sum_side", "find",
    "load_catalog", "parse_catalog",
]
