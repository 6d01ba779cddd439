"""Receptron threshold units with input-dependent weight functions."""

from receptron._accel import BACKEND
from receptron.boolexpr import (
    And,
    Not,
    Or,
    Pred,
    TruthTable,
    build_expr_receptron,
    census,
    demorgan_product,
    eval_expr,
    is_linearly_separable,
    normalized_or,
    synthesize_digital,
)
from receptron.core import (
    Constant,
    Double,
    Lookup,
    Receptron,
    SelectiveRect,
    Single,
    VectorWeight,
    activate,
    heaviside,
    negated_heaviside,
    weighted_sum,
)
from receptron.domains import (
    HyperRectDomain,
    RectPredicate,
    UniformSampler,
    build_selective_receptron,
    domain_contains,
    rect_eval,
    selective_weight,
    verify_equivalence,
    violation_count,
)
from receptron.dsl import ParseError, SpecDocument, parse, serialize
from receptron.network import (
    Network,
    build_disjunction_network,
    build_multidomain_unit,
    equivalence_suite,
    eval_network,
)

__all__ = [
    "And",
    "BACKEND",
    "Constant",
    "Double",
    "HyperRectDomain",
    "Lookup",
    "Network",
    "Not",
    "Or",
    "ParseError",
    "Pred",
    "Receptron",
    "RectPredicate",
    "SelectiveRect",
    "Single",
    "SpecDocument",
    "TruthTable",
    "UniformSampler",
    "VectorWeight",
    "activate",
    "build_disjunction_network",
    "build_expr_receptron",
    "build_multidomain_unit",
    "build_selective_receptron",
    "census",
    "demorgan_product",
    "domain_contains",
    "equivalence_suite",
    "eval_expr",
    "eval_network",
    "heaviside",
    "is_linearly_separable",
    "negated_heaviside",
    "normalized_or",
    "parse",
    "rect_eval",
    "selective_weight",
    "serialize",
    "synthesize_digital",
    "verify_equivalence",
    "violation_count",
    "weighted_sum",
]

__version__ = "0.1.0"
