"""Services for algebraic validation, scenario runs and reporting."""

from .errors import AlgebraError, InputError, VerificationError
from .semigroup import FiniteInverseSemigroup, generate_closure, idempotents_and_order, min_group_congruence, verify_inverse_semigroup
from .cstar import BlockAlgebra, Element, Ideal, PartialAutomorphism, compose
from .spans import MatrixAlgebraSpan, StructureReport, algebra_equal, span_closure, structure_report
from .partial_action import PartialAction, get_group, validate_partial_action
from .covariant import (
    CovariantRep,
    HilbertRep,
    PartialIsometryFamily,
    SemigroupAction,
    SemigroupCovRep,
    pair_semigroup_action,
    validate_covrep_partial,
    validate_covrep_semigroup,
)
from .crossed_product import LElement, realize_crossed_product, verify_main_theorem
from .report import ReportService
from .exporters import get_exporter, get_supported_formats, BaseExporter, ExportResult
from .scenario import parse_scenario, resolve_scenario
from .runner import fuzz_suite, list_builtins, run_scenario

__all__ = [
    # Errors
    "AlgebraError",
    "InputError",
    "VerificationError",
    # Algebra
    "FiniteInverseSemigroup",
    "generate_closure",
    "idempotents_and_order",
    "min_group_congruence",
    "verify_inverse_semigroup",
    "BlockAlgebra",
    "Element",
    "Ideal",
    "PartialAutomorphism",
    "compose",
    "MatrixAlgebraSpan",
    "StructureReport",
    "algebra_equal",
    "span_closure",
    "structure_report",
    "PartialAction",
    "get_group",
    "validate_partial_action",
    "CovariantRep",
    "HilbertRep",
    "PartialIsometryFamily",
    "SemigroupAction",
    "SemigroupCovRep",
    "pair_semigroup_action",
    "validate_covrep_partial",
    "validate_covrep_semigroup",
    "LElement",
    "realize_crossed_product",
    "verify_main_theorem",
    # Runs and reports
    "ReportService",
    "get_exporter",
    "get_supported_formats",
    "BaseExporter",
    "ExportResult",
    "parse_scenario",
    "resolve_scenario",
    "fuzz_suite",
    "list_builtins",
    "run_scenario",
]
