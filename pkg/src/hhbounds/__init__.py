"""Numerical certification of strong phi-convexity and gap bound verification.

The package parses one-variable expressions, certifies strong phi-convexity
on sampling grids, computes the trapezoid-minus-mean gap with an adaptive
Simpson oracle, verifies the derivative-based gap identity, and evaluates
every closed-form bound with margins and tightness ratios.
"""

from .expr import (
    Binary,
    Constant,
    DualValue,
    EvalDomainError,
    Expr,
    ExprError,
    ExprSyntaxError,
    Unary,
    UnknownIdentifierError,
    Variable,
    abs_kink_points,
    evaluate,
    evaluate_dual,
    has_abs_kink_at,
    parse,
    unparse,
)
from .funcspec import (
    CertificateResult,
    DegeneratePhiError,
    GridConfig,
    Interval,
    PhiMap,
    ProblemSpec,
    SpecValidationError,
    certify_strong_phi_convexity,
    derivative_power,
    estimate_max_modulus,
    function_of,
    validate,
)
from .quad import (
    GapResult,
    IdentityViolationError,
    QuadratureError,
    QuadResult,
    hh_gap,
    integrate,
    lemma_rhs,
    verify_lemma_identity,
)
from .bounds import (
    BoundInputs,
    BoundValue,
    ModulusInfeasibleError,
    bound_holder,
    bound_power_mean,
    bound_sandwich,
    bound_split_holder,
    bound_split_holder_relaxed,
    derivative_inputs,
    evaluate_all,
    holder_quarter_width_variant,
)
from .report import (
    BoundReport,
    CertificateSummary,
    ReportRow,
    build_report,
    report_from_json,
    run_check,
    serialize,
    serialize_many,
)
from .corpus import corpus_configs, corpus_specs, spec_from_config

__version__ = "0.1.0"

__all__ = [
    "Binary", "Constant", "DualValue", "EvalDomainError", "Expr", "ExprError",
    "ExprSyntaxError", "Unary", "UnknownIdentifierError", "Variable",
    "abs_kink_points", "evaluate", "evaluate_dual", "has_abs_kink_at",
    "parse", "unparse",
    "CertificateResult", "DegeneratePhiError", "GridConfig", "Interval",
    "PhiMap", "ProblemSpec", "SpecValidationError",
    "certify_strong_phi_convexity", "derivative_power", "estimate_max_modulus",
    "function_of", "validate",
    "GapResult", "IdentityViolationError", "QuadratureError", "QuadResult",
    "hh_gap", "integrate", "lemma_rhs", "verify_lemma_identity",
    "BoundInputs", "BoundValue", "ModulusInfeasibleError", "bound_holder",
    "bound_power_mean", "bound_sandwich", "bound_split_holder",
    "bound_split_holder_relaxed", "derivative_inputs", "evaluate_all",
    "holder_quarter_width_variant",
    "BoundReport", "CertificateSummary", "ReportRow", "build_report",
    "report_from_json", "run_check", "serialize", "serialize_many",
    "corpus_configs", "corpus_specs", "spec_from_config",
    "__version__",
]
