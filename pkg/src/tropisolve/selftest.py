"""Randomized property checks runnable from the command line."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from . import generators as gen
from .formula import eval_point, is_max_closed_semantic
from .games import build_game, cross_check_duality, discount_equation_residual, discounted_values
from .horn_solver import brute_force_sat, solve_restricted, verify_witness
from .ppcompile import compile_gamma0, compile_gamma_t, equivalence_check
from .tropical import (atoms_to_formula, check_duality, eval_atoms, solve_csp,
                       solve_zero_plus, verify_dual_certificate)


@dataclass
class CheckResult:
    name: str
    passed: int
    total: int

    @property
    def ok(self) -> bool:
        return self.passed == self.total


def _duality(rng):
    check_duality(gen.operator_system(rng))
    return True


def _games(rng):
    o = gen.game_system(rng)
    cross_check_duality(o)
    g = build_game(o)
    beta = Fraction(9, 10)
    return not any(discount_equation_residual(g, beta, discounted_values(g, beta)))


def _horn(rng):
    phi = gen.restricted_horn(rng)
    res = solve_restricted(phi)
    if bool(res) != bool(brute_force_sat(phi)):
        return False
    return not res or verify_witness(phi, res.witness)


def _csp(rng):
    atoms = gen.gamma_t_instance(rng)
    res = solve_csp(atoms)
    if bool(res) != bool(brute_force_sat(atoms_to_formula(atoms))):
        return False
    if res:
        return all(eval_atoms(atoms, res.names, [v + c for v in res.witness])
                   for c in (Fraction(-7), Fraction(1, 3), Fraction(10)))
    return verify_dual_certificate(res.system, res.certificate, strict=True)


def _compile(rng):
    tropical = rng.random() < 0.5
    phi = gen.horn_clause(rng, tropical=tropical)
    pp = (compile_gamma_t if tropical else compile_gamma0)(phi)
    return equivalence_check(phi, pp)


def _zero_plus(rng):
    family = rng.randrange(30)
    case = gen.zero_plus_sat(rng, family)
    w = solve_zero_plus(case.phi, case.param)
    if w is None or not eval_point(case.phi, w.point):
        return False
    case = gen.zero_plus_unsat(rng, family)
    return solve_zero_plus(case.phi, case.param) is None


def _max_closed(rng):
    return is_max_closed_semantic(gen.horn_formula(rng))


CHECKS: dict[str, Callable[[random.Random], bool]] = {
    "duality": _duality,
    "games": _games,
    "horn": _horn,
    "csp": _csp,
    "compile": _compile,
    "zero-plus": _zero_plus,
    "max-closed": _max_closed,
}


def run_selftest(seed: int = 0, count: int = 20) -> list[CheckResult]:
    """Run every check ``count`` times; a consistency violation counts as a failure."""
    results = []
    for name, check in CHECKS.items():
        rng = random.Random(f"{seed}:{name}")
        passed = 0
        for _ in range(count):
            try:
                passed += bool(check(rng))
            except AssertionError:
                pass
        results.append(CheckResult(name, passed, count))
    return results
