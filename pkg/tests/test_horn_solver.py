from fractions import Fraction

import pytest

from tropisolve.errors import DimensionError, PreconditionError
from tropisolve.formula import Formula, parse_formula
from tropisolve.horn_solver import (Sat, Unsat, brute_force_sat, solve_restricted,
                                    verify_witness)


def test_removal_then_sat():
    phi = parse_formula("x1 >= 1 | x2 >= 1\nx1 <= 0")
    res = solve_restricted(phi)
    assert isinstance(res, Sat)
    assert verify_witness(phi, res.witness)
    assert res.witness[0] <= 0 and res.witness[1] >= 1
    assert brute_force_sat(phi)


def test_emptied_clause_is_unsat():
    phi = parse_formula("x1 <= 0\nx2 <= 0\nx1 >= 1 | x2 >= 1")
    res = solve_restricted(phi)
    assert isinstance(res, Unsat)
    removed = {(r.clause, r.pass_no) for r in res.trace}
    assert removed == {(2, 1)}
    assert len(res.trace) == 2
    assert not brute_force_sat(phi)


def test_empty_formula():
    phi = Formula.build([], num_vars=2)
    res = solve_restricted(phi)
    assert res and res.witness == [0, 0]
    assert verify_witness(phi, [5, -3])


def test_non_restricted_input_is_refused():
    with pytest.raises(PreconditionError):
        solve_restricted(parse_formula("x1 < x2 | x1 < x3"))


def test_brute_force_examples():
    cycle = parse_formula("x2 - x1 >= 1 | x3 - x1 >= 1\n"
                          "x3 - x2 >= 1 | x1 - x2 >= 1\n"
                          "x1 - x3 >= 1 | x2 - x3 >= 1")
    assert not brute_force_sat(cycle)
    res = brute_force_sat(parse_formula("x1 >= 0 | x1 >= 5"))
    assert res and res.witness[0] >= 0
    assert not brute_force_sat(parse_formula("x < y\ny < x"))


def test_max_atoms_point_checks():
    phi = parse_formula("x2 - x1 >= 3 | x3 - x1 >= 3")
    assert verify_witness(phi, [0, 3, 0])
    assert not verify_witness(phi, [0, 2, 2])
    with pytest.raises(DimensionError):
        verify_witness(phi, [0, 1])


def test_later_pass_removal():
    # x2 >= 1 only becomes impossible after x1 >= 1 is gone and x1 <= 0 drives x2
    phi = parse_formula("x1 >= 1 | x3 >= 1\nx1 <= 0\nx3 <= 0\nx2 - x3 <= 0 | x2 >= 7\nx2 <= 3")
    res = solve_restricted(phi)
    assert bool(res) == bool(brute_force_sat(phi))


def test_witness_dominates_literal_solutions():
    phi = parse_formula("x1 >= 2 | x2 >= 2\nx1 >= 1 | x2 - x1 >= 1\nx2 <= 10")
    res = solve_restricted(phi)
    assert res and verify_witness(phi, res.witness)
    assert res.witness[0] >= 2 or res.witness[1] >= 2
