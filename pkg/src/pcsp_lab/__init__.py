"""Toolkit for Boolean promise CSPs over (t-in-k, NAE) style templates."""

from .classify import (
    ClassificationReport,
    Label,
    classify_add,
    classify_csp_superset,
    classify_remove,
    prop9_closure_trace,
    schaefer_check,
    symmetric_dichotomy_evidence,
    symmetrize,
)
from .errors import (
    CapacityError,
    CaseError,
    DimError,
    DomainError,
    InternalError,
    ParamError,
    PCSPError,
    PreconditionError,
    SignatureError,
    SpecError,
    TemplateError,
)
from .polymorphisms import (
    AlternatingFn,
    BlockSymFn,
    BoolFn,
    check_family_in_pol,
    enumerate_polymorphisms,
    exists_alternating,
    exists_block_symmetric,
    is_polymorphism,
)
from .relax import aip_decide, blp_aip, relative_interior_point
from .solve import GF2System, brute_solve, gf2_solve, solve_search_affine
from .structures import Relation, RelStructure, find_homomorphism, is_homomorphism
from .tableaux import RefutationCertificate, Tableau, build_case, refute, verify_tableau
from .templates import Mode, PCSPTemplate, TemplateSpec, build_template

__version__ = "0.1.0"

__all__ = [
    "AlternatingFn", "BlockSymFn", "BoolFn", "CapacityError", "CaseError",
    "ClassificationReport", "DimError", "DomainError", "GF2System", "InternalError",
    "Label", "Mode", "PCSPError", "PCSPTemplate", "ParamError", "PreconditionError",
    "RefutationCertificate", "RelStructure", "Relation", "SignatureError", "SpecError",
    "Tableau", "TemplateError", "TemplateSpec", "aip_decide", "blp_aip", "brute_solve",
    "build_case", "build_template", "check_family_in_pol", "classify_add",
    "classify_csp_superset", "classify_remove", "enumerate_polymorphisms",
    "exists_alternating", "exists_block_symmetric", "find_homomorphism", "gf2_solve",
    "is_homomorphism", "is_polymorphism", "prop9_closure_trace", "refute",
    "relative_interior_point", "schaefer_check", "solve_search_affine",
    "symmetric_dichotomy_evidence", "symmetrize", "verify_tableau",
]
