"""Exact first-order factorization of linear partial differential operators."""

from .expr import ConstScalar, Poly, RatExpr, register_differential_param, tower
from .operator import LPDO, FirstOrderFactor
from .charpoly import CharPoly, Root, RootSearch, char_poly, find_roots
from .factorize import (
    FactorizationOutcome,
    FactorizationTree,
    OutcomeStatus,
    RiccatiProblem,
    complete_with_p3,
    degenerate_constraints,
    factor_all_roots,
    factor_fully,
    factor_left,
    factor_right,
    riccati_candidates,
    solve_level,
    solve_p3,
    solve_top,
    verify,
)
from .parser import ParseError, parse, parse_function
from .printer import (
    operator_latex,
    operator_str,
    operator_structured,
    outcome_str,
    outcome_structured,
)

__all__ = [
    "ConstScalar",
    "Poly",
    "RatExpr",
    "register_differential_param",
    "tower",
    "LPDO",
    "FirstOrderFactor",
    "CharPoly",
    "Root",
    "RootSearch",
    "char_poly",
    "find_roots",
    "FactorizationOutcome",
    "FactorizationTree",
    "OutcomeStatus",
    "RiccatiProblem",
    "complete_with_p3",
    "degenerate_constraints",
    "factor_all_roots",
    "factor_fully",
    "factor_left",
    "factor_right",
    "riccati_candidates",
    "solve_level",
    "solve_p3",
    "solve_top",
    "verify",
    "ParseError",
    "parse",
    "parse_function",
    "operator_latex",
    "operator_str",
    "operator_structured",
    "outcome_str",
    "outcome_structured",
]

__version__ = "0.1.0"
