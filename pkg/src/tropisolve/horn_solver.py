"""Satisfiability of semilinear Horn formulas.

:func:`solve_restricted` is the polynomial-time literal-removal procedure for
restricted Horn formulas; :func:`brute_force_sat` guesses one literal per
clause and is the exponential reference oracle.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import DimensionError, PreconditionError
from .formula import Formula, Literal, eval_point, restricted_horn_witnesses
from .lp import LinSystem, Row, first_feasible_selection, fm_feasible
from .numeric import EpsNum

log = logging.getLogger(__name__)

DEFAULT_SELECTION_BUDGET = 10**6


@dataclass
class Sat:
    witness: list[Fraction]

    def __bool__(self):
        return True


@dataclass
class Removal:
    clause: int
    literal: Literal
    pass_no: int


@dataclass
class Unsat:
    trace: list[Removal] = field(default_factory=list)
    psi: list[Literal] | None = None

    def __bool__(self):
        return False


SolveResult = Sat | Unsat


def _row(lit: Literal) -> Row:
    return Row(lit.coeffs, lit.strict, EpsNum(lit.bound, 0))


def _rational_point(witness) -> list[Fraction]:
    # bounds are rational, so back-substitution never introduces eps parts
    assert all(w.eps == 0 for w in witness)
    return [w.std for w in witness]


def solve_restricted(phi: Formula) -> Sat | Unsat:
    witnesses = restricted_horn_witnesses(phi)
    if witnesses is None:
        raise PreconditionError("formula is not restricted Horn")
    n = phi.num_vars
    clauses = [list(c.literals) for c in phi.clauses]
    positive = []
    for clause, (_, l) in zip(phi.clauses, witnesses):
        positive.append(clause.literals[l] if l is not None else None)

    trace: list[Removal] = []
    pass_no = 0
    while True:
        pass_no += 1
        psi = [c[0] for c in clauses if len(c) == 1]
        if any(not c for c in clauses):
            return Unsat(trace, psi)
        psi_rows = [_row(lit) for lit in psi]
        if not fm_feasible(LinSystem(n, psi_rows)):
            return Unsat(trace, psi)
        doomed: list[tuple[int, Literal]] = []
        tested: dict[Literal, bool] = {}
        for ci, clause in enumerate(clauses):
            for lit in clause:
                if lit == positive[ci]:
                    continue
                if lit not in tested:
                    tested[lit] = bool(fm_feasible(LinSystem(n, psi_rows + [_row(lit)])))
                if not tested[lit]:
                    doomed.append((ci, lit))
        if not doomed:
            break
        for ci, lit in doomed:
            clauses[ci].remove(lit)
            trace.append(Removal(ci, lit, pass_no))

    psi_rows = [_row(c[0]) for c in clauses if len(c) == 1]
    negative = []
    for ci, clause in enumerate(clauses):
        for lit in clause:
            if lit != positive[ci] and lit not in negative:
                negative.append(lit)
    if not negative:
        res = fm_feasible(LinSystem(n, psi_rows))
        return Sat(_rational_point(res.witness))
    point = None
    for lit in negative:
        res = fm_feasible(LinSystem(n, psi_rows + [_row(lit)]))
        s = _rational_point(res.witness)
        point = s if point is None else [max(a, b) for a, b in zip(point, s)]
    return Sat(point)


def brute_force_sat(phi: Formula, budget: int | None = DEFAULT_SELECTION_BUDGET) -> Sat | Unsat:
    found = brute_force_selection(phi, budget)
    if found is None:
        return Unsat()
    return Sat(_rational_point(found[1]))


def brute_force_selection(phi: Formula, budget: int | None = DEFAULT_SELECTION_BUDGET):
    """First feasible one-literal-per-clause choice and its plane witness."""
    units = [[_row(c.literals[0])] for c in phi.clauses if len(c) == 1]
    base = [r for u in units for r in u]
    if any(c.is_empty for c in phi.clauses):
        return None
    groups = [[[_row(lit)] for lit in c] for c in phi.clauses if len(c) > 1]
    return first_feasible_selection(base, groups, phi.num_vars, budget=budget)


def verify_witness(phi: Formula, x: Sequence[Fraction]) -> bool:
    if len(x) != phi.num_vars:
        raise DimensionError(f"expected {phi.num_vars} coordinates, got {len(x)}")
    return eval_point(phi, x)
