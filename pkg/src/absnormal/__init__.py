"""Exact verification of kink and complementarity constraint qualifications.

Builds the four formulations of a nonsmooth program in abs-normal form (the
inequality- and slack-based forms and their complementarity counterparts),
computes their tangent/linearized/dual cones as exact polyhedral objects, and
decides Abadie/Guignard-type qualifications and M-/B-stationarity of candidate
points, emitting machine-checkable certificates.
"""

__version__ = "0.1.0"

from .anf import AbsNormalProgram, EvalResult, QuadraticFunc, SignatureVector, evaluate, validate
from .cones import PolyCone, UnionCone, dual_cone, dual_union, lin_cone_abs, lin_cone_mpcc
from .cq import analyze_point, check_akq, check_gkq, check_mpcc_cq, verify_relations
from .problemfile import ProblemFile, load_corpus, load_corpus_problem, parse_problem
from .stationarity import (
    check_b_stationary,
    check_m_stationary_anf,
    check_m_stationary_mpcc,
    translate_multipliers,
)
from .transforms import enumerate_branches, phi, phi_inv, to_mpcc, to_slack

__all__ = [
    "AbsNormalProgram",
    "EvalResult",
    "PolyCone",
    "ProblemFile",
    "QuadraticFunc",
    "SignatureVector",
    "UnionCone",
    "__version__",
    "analyze_point",
    "check_akq",
    "check_b_stationary",
    "check_gkq",
    "check_m_stationary_anf",
    "check_m_stationary_mpcc",
    "check_mpcc_cq",
    "dual_cone",
    "dual_union",
    "enumerate_branches",
    "evaluate",
    "lin_cone_abs",
    "lin_cone_mpcc",
    "load_corpus",
    "load_corpus_problem",
    "parse_problem",
    "phi",
    "phi_inv",
    "to_mpcc",
    "to_slack",
    "translate_multipliers",
    "validate",
    "verify_relations",
]
