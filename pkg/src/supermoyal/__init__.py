"""Exact star products and verification for super Poisson structures."""

from .atlas import (
    Chart,
    NonComposableCycle,
    TransitionMap,
    UnresolvedPair,
    WeightLaw,
    check_cocycle,
    check_weight_law,
    transport_table,
)
from .cli import (
    IllegalDivision,
    ModelFormatError,
    ParseError,
    UnknownIdentifier,
    load_model,
    parse_expression,
    parse_model_text,
    render_model_text,
    render_poly,
    save_model,
)
from .graded_calculus import bidiff_apply, d_left, d_right
from .graded_ring import (
    EVEN,
    ODD,
    GradedPoly,
    Monomial,
    NonInvertibleSubstitution,
    ParityMismatch,
    VarSpec,
    VarTable,
    mul,
    parity_of,
    substitute,
)
from .models import (
    CheckRecord,
    CYWeights,
    Fibration,
    MissingFibration,
    ModelSpec,
    UnknownModel,
    VerificationReport,
    anti_chiral_substitution,
    builtin,
    calabi_yau_index,
    fibration_pullback,
    generic_chart_pair,
    list_builtins,
    quadric_generator,
    verify_model,
)
from .moyal import (
    ContractEntry,
    ContractReport,
    MixedParityInput,
    NonCentralBivector,
    StarEngine,
    TruncationExceeded,
    check_quantization_contract,
    star,
    supercommutator,
)
from .poisson import (
    SuperBivector,
    SuperTrivector,
    VariableMismatch,
    is_poisson,
    poisson_bracket,
    schouten_bracket,
)

__all__ = [
    "EVEN",
    "ODD",
    "Chart",
    "CheckRecord",
    "ContractEntry",
    "ContractReport",
    "CYWeights",
    "Fibration",
    "GradedPoly",
    "IllegalDivision",
    "MissingFibration",
    "MixedParityInput",
    "ModelFormatError",
    "ModelSpec",
    "Monomial",
    "NonCentralBivector",
    "NonComposableCycle",
    "NonInvertibleSubstitution",
    "ParityMismatch",
    "ParseError",
    "StarEngine",
    "SuperBivector",
    "SuperTrivector",
    "TransitionMap",
    "TruncationExceeded",
    "UnknownIdentifier",
    "UnknownModel",
    "UnresolvedPair",
    "VariableMismatch",
    "VarSpec",
    "VarTable",
    "VerificationReport",
    "WeightLaw",
    "anti_chiral_substitution",
    "bidiff_apply",
    "builtin",
    "calabi_yau_index",
    "check_cocycle",
    "check_quantization_contract",
    "check_weight_law",
    "d_left",
    "d_right",
    "fibration_pullback",
    "generic_chart_pair",
    "is_poisson",
    "list_builtins",
    "load_model",
    "mul",
    "parity_of",
    "parse_expression",
    "parse_model_text",
    "poisson_bracket",
    "quadric_generator",
    "render_model_text",
    "render_poly",
    "save_model",
    "schouten_bracket",
    "star",
    "substitute",
    "supercommutator",
    "transport_table",
    "verify_model",
]
