"""Exact rational linear algebra, LP with certificates, and double description."""

from .dd import cone_generators, generators_to_hrep
from .lp import (
    FEASIBLE,
    INFEASIBLE,
    KIND_FARKAS,
    KIND_PAIR,
    KIND_POINT,
    KIND_RAY,
    OPTIMAL,
    UNBOUNDED,
    LpCertificate,
    LpError,
    LpProblem,
    LpResult,
    lp_solve,
    margin_relaxation,
    verify_certificate,
)
from .matrix import (
    ONE,
    ZERO,
    RatMatrix,
    Vec,
    dot,
    format_vec,
    in_row_span,
    is_zero_vec,
    primitive,
    rank,
    rank_rows,
    rat,
    rref,
    unit_vec,
    vec,
    vec_add,
    vec_neg,
    vec_scale,
    vec_sub,
    zero_vec,
)

__all__ = [
    "FEASIBLE",
    "INFEASIBLE",
    "KIND_FARKAS",
    "KIND_PAIR",
    "KIND_POINT",
    "KIND_RAY",
    "ONE",
    "OPTIMAL",
    "UNBOUNDED",
    "LpCertificate",
    "LpError",
    "LpProblem",
    "LpResult",
    "RatMatrix",
    "Vec",
    "ZERO",
    "cone_generators",
    "dot",
    "format_vec",
    "generators_to_hrep",
    "in_row_span",
    "is_zero_vec",
    "lp_solve",
    "margin_relaxation",
    "primitive",
    "rank",
    "rank_rows",
    "rat",
    "rref",
    "unit_vec",
    "vec",
    "vec_add",
    "vec_neg",
    "vec_scale",
    "vec_sub",
    "verify_certificate",
    "zero_vec",
]
