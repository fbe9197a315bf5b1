"""Exact solvers for semilinear Horn constraints over the rationals.

The package covers recognition and solving of semilinear Horn formulas,
operator systems with their primal/dual problems, the associated stochastic
mean-payoff games, and compilation to primitive positive formulas.
"""
from .errors import (ConsistencyError, DimensionError, FormulaSyntaxError, LimitExceeded,
                     PreconditionError, TropisolveError)
from .formula import (Clause, Formula, Literal, format_formula, horn_columns, is_horn,
                      is_max_closed_semantic, is_restricted_horn, is_tropically_convex_syntactic,
                      parse_formula)
from .games import (Game, build_game, cross_check_duality, discounted_values,
                    limiting_average_values, parse_game)
from .horn_solver import Sat, Unsat, brute_force_sat, solve_restricted, verify_witness
from .lp import Feasible, Infeasible, LinSystem, Row, fm_feasible, fm_project
from .numeric import EPS, POS_INF, EpsNum, ExtVal, parse_epsnum, parse_rational
from .ppcompile import (PPAtom, PPFormula, compile_gamma0, compile_gamma_t, equivalence_check,
                        pp_eval, pp_to_horn)
from .tropical import (Atom, Avg, Max, Min, OperatorSystem, check_duality, parse_atoms,
                       parse_operator_system, sat_in_zero_plus, solve_csp, solve_dual,
                       solve_primal)

__version__ = "0.1.0"

__all__ = [
    "TropisolveError", "DimensionError", "FormulaSyntaxError", "LimitExceeded",
    "PreconditionError", "ConsistencyError",
    "Literal", "Clause", "Formula", "parse_formula", "format_formula", "horn_columns",
    "is_horn", "is_restricted_horn", "is_tropically_convex_syntactic", "is_max_closed_semantic",
    "Game", "build_game", "limiting_average_values", "discounted_values",
    "cross_check_duality", "parse_game",
    "Sat", "Unsat", "solve_restricted", "brute_force_sat", "verify_witness",
    "Row", "LinSystem", "Feasible", "Infeasible", "fm_feasible", "fm_project",
    "EpsNum", "ExtVal", "EPS", "POS_INF", "parse_rational", "parse_epsnum",
    "PPAtom", "PPFormula", "compile_gamma0", "compile_gamma_t", "pp_to_horn", "pp_eval",
    "equivalence_check",
    "Max", "Min", "Avg", "OperatorSystem", "Atom", "solve_primal", "solve_dual",
    "check_duality", "solve_csp", "sat_in_zero_plus", "parse_operator_system", "parse_atoms",
]
