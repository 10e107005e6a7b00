"""Provenance-polynomial compression and what-if evaluation workbench."""

from .core import (
    Monomial,
    Polynomial,
    ProvenanceBundle,
    Valuation,
    bundle_size,
    evaluate,
    evaluate_bundle,
    parse_bundle,
    serialize_bundle,
)
from .errors import EvaluationError, ParseError, ValidationError
from .generator import GenConfig, generate, plans_tree, telephony_micro_instance
from .optimizer import (
    AbstractionResult,
    brute_force_optimize,
    compute_counts,
    count_cuts,
    diagnostics_obj,
    enumerate_cuts,
    optimize,
)
from .tree import (
    AbstractionTree,
    Cut,
    TreeNode,
    apply_abstraction,
    cut_mapping,
    default_meta_valuation,
    induced_valuation,
    parse_tree,
    validate_cut,
)

__all__ = [
    "AbstractionResult",
    "AbstractionTree",
    "Cut",
    "EvaluationError",
    "GenConfig",
    "Monomial",
    "ParseError",
    "Polynomial",
    "ProvenanceBundle",
    "TreeNode",
    "ValidationError",
    "Valuation",
    "apply_abstraction",
    "brute_force_optimize",
    "bundle_size",
    "compute_counts",
    "count_cuts",
    "cut_mapping",
    "default_meta_valuation",
    "diagnostics_obj",
    "enumerate_cuts",
    "evaluate",
    "evaluate_bundle",
    "generate",
    "induced_valuation",
    "optimize",
    "parse_bundle",
    "parse_tree",
    "plans_tree",
    "serialize_bundle",
    "telephony_micro_instance",
    "validate_cut",
]
