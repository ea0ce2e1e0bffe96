from .hnf import solve_integer
from .programs import (
    IntSystem,
    LPProblem,
    Rational,
    RelaxOutcome,
    Verdict,
    aip_build,
    aip_decide,
    augment_unary,
    blp_aip,
    blp_build,
    check_int_point,
    check_lp_point,
    emit_text,
    int_feasible,
    lp_feasible,
    relative_interior_point,
)
from .simplex import Simplex

__all__ = [
    "IntSystem", "LPProblem", "Rational", "RelaxOutcome", "Simplex", "Verdict",
    "aip_build", "aip_decide", "augment_unary", "blp_aip", "blp_build",
    "check_int_point", "check_lp_point", "emit_text", "int_feasible",
    "lp_feasible", "relative_interior_point", "solve_integer",
]
