"""Homology of one-dimensional generalized solenoids from wrapping rules."""

__version__ = "0.1.0"

from .abelian import (
    Composite,
    FiniteCyclic,
    FreeCyclic,
    InconsistencyError,
    StationaryLimit,
    StationaryLimitGroup,
    Zero,
    hermite_normal_form,
    kernel_of_invariant_functional,
    limit_contains,
    limits_agree_on_samples,
    quotient_by_invariant_vector,
    smith_normal_form,
    stationary_limit,
)
from .homology import HomologyResult, ValidationFailed, analyze, build_sft, cech, dimension_groups
from .intmatrix import IntMatrix
from .normalform import (
    NormalizedRule,
    ObstructionData,
    normalize,
    obstruction,
    orientability_by_germs,
    orientability_by_solver,
)
from .rule_core import (
    Letter,
    ParseError,
    WrappingRule,
    format_rule,
    invert_word,
    parse_rule,
    power_rule,
    reverse_edge,
    signed_matrix,
    substitute,
    unsigned_matrix,
)
from .validator import ValidationReport, validate

__all__ = [
    "Composite",
    "FiniteCyclic",
    "FreeCyclic",
    "HomologyResult",
    "InconsistencyError",
    "IntMatrix",
    "Letter",
    "NormalizedRule",
    "ObstructionData",
    "ParseError",
    "StationaryLimit",
    "StationaryLimitGroup",
    "ValidationFailed",
    "ValidationReport",
    "WrappingRule",
    "Zero",
    "analyze",
    "build_sft",
    "cech",
    "dimension_groups",
    "format_rule",
    "hermite_normal_form",
    "invert_word",
    "kernel_of_invariant_functional",
    "limit_contains",
    "limits_agree_on_samples",
    "normalize",
    "obstruction",
    "orientability_by_germs",
    "orientability_by_solver",
    "parse_rule",
    "power_rule",
    "quotient_by_invariant_vector",
    "reverse_edge",
    "signed_matrix",
    "smith_normal_form",
    "stationary_limit",
    "substitute",
    "unsigned_matrix",
    "validate",
]
