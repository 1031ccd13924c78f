"""Extremal problems for positive definite functions on finite abelian groups.

The package solves instances of the form: over real positive definite f on
a finite abelian group with f(0) = 1, f nonpositive off a window W and
spectrum supported in a set Q of characters, maximize the total mass of f.
The optimum is computed by a dense LP over orbit Fourier coefficients,
certified by an LP dual, cross-checkable against exhaustive vertex
enumeration, and transportable to the subgroup generated by the window.
"""

from .errors import (
    AsymmetricBump,
    DelsarteError,
    EmptyEffectiveSupport,
    EmptySetError,
    GroupMismatch,
    InvalidInstance,
    InvalidSpec,
    NetPreconditionError,
    NotOptimal,
    OracleTooLarge,
    OriginNotInW,
    ParseError,
    SnfOverflow,
)
from .fourier import (
    FunctionOnG,
    Spectrum,
    bump_theta,
    conj_fourier,
    conj_fourier_real,
    conv_square,
    convolve,
    dft,
    reflect,
)
from .groups import (
    DualElement,
    GroupElement,
    GroupSpec,
    Subgroup,
    char_eval,
    char_phase,
    character_extensions,
    difference_set,
    generated_subgroup,
    make_group,
    restrict_character,
    smith_normal_form,
    whole_group,
)
from .lp import (
    CertificateReport,
    DelsarteInstance,
    DelsarteProgram,
    DelsarteSolution,
    DualCertificate,
    MembershipReport,
    OracleResult,
    OrbitBasis,
    Status,
    build_lp,
    build_orbit_basis,
    feasibility_check,
    solve_delsarte,
    verify_certificate,
    vertex_enum_oracle,
)
from .nets import (
    EpsilonNet,
    build_net,
    character_distance,
    net_approximation_error,
    project_coeffs,
    quantize,
)
from .posdef import (
    PosDefReport,
    gram_oracle,
    is_positive_definite,
    negative_part,
    positive_part,
    restrict_function,
    trivial_extension,
)
from .reduction import (
    EquivalenceReport,
    ReducedInstance,
    lift_solution,
    q_star,
    q_zero,
    reduce_instance,
    restriction_fibers,
    verify_equivalence,
)
from .simplex import (
    ExactCheckReport,
    LinearProgram,
    SimplexResult,
    exact_basis_check,
    simplex_solve,
)

__version__ = "0.1.0"

__all__ = [
    "AsymmetricBump",
    "CertificateReport",
    "DelsarteError",
    "DelsarteInstance",
    "DelsarteProgram",
    "DelsarteSolution",
    "DualCertificate",
    "DualElement",
    "EmptyEffectiveSupport",
    "EmptySetError",
    "EpsilonNet",
    "EquivalenceReport",
    "ExactCheckReport",
    "FunctionOnG",
    "GroupElement",
    "GroupMismatch",
    "GroupSpec",
    "InvalidInstance",
    "InvalidSpec",
    "LinearProgram",
    "MembershipReport",
    "NetPreconditionError",
    "NotOptimal",
    "OracleResult",
    "OracleTooLarge",
    "OrbitBasis",
    "OriginNotInW",
    "ParseError",
    "PosDefReport",
    "ReducedInstance",
    "SimplexResult",
    "SnfOverflow",
    "Spectrum",
    "Status",
    "Subgroup",
    "build_lp",
    "build_net",
    "build_orbit_basis",
    "bump_theta",
    "char_eval",
    "char_phase",
    "character_distance",
    "character_extensions",
    "conj_fourier",
    "conj_fourier_real",
    "conv_square",
    "convolve",
    "dft",
    "difference_set",
    "exact_basis_check",
    "feasibility_check",
    "generated_subgroup",
    "gram_oracle",
    "is_positive_definite",
    "lift_solution",
    "make_group",
    "negative_part",
    "net_approximation_error",
    "positive_part",
    "project_coeffs",
    "q_star",
    "q_zero",
    "quantize",
    "reduce_instance",
    "reflect",
    "restrict_character",
    "restrict_function",
    "restriction_fibers",
    "simplex_solve",
    "smith_normal_form",
    "solve_delsarte",
    "trivial_extension",
    "verify_certificate",
    "verify_equivalence",
    "vertex_enum_oracle",
    "whole_group",
]
