from fractions import Fraction

import pytest

from tropisolve.errors import FormulaSyntaxError, LimitExceeded
from tropisolve.formula import (Literal, eval_point, format_formula, horn_columns, is_horn,
                                is_max_closed_semantic, is_restricted_horn,
                                is_tropically_convex_syntactic, parse_formula,
                                restricted_horn_witnesses, shift_point)

MC3 = "x2 - x1 >= 3 | x3 - x1 >= 3"


def test_parse_max_atoms_clause():
    phi = parse_formula(MC3)
    assert len(phi.clauses) == 1
    (clause,) = phi.clauses
    assert len(clause) == 2
    assert all(lit.bound == 3 and not lit.strict for lit in clause)
    assert clause.literals[0].coeff_map() == {0: -1, 1: 1}


def test_parse_normalizes_less_equal():
    (lit,) = parse_formula("x1 <= 0").clauses[0]
    assert lit == Literal.make({0: -1}, False, 0)


def test_parse_strict_with_rational_bound():
    (lit,) = parse_formula("2*x1 + 3*x2 > 1/2").clauses[0]
    assert lit.coeff_map() == {0: 2, 1: 3}
    assert lit.strict and lit.bound == Fraction(1, 2)


def test_parse_variables_on_both_sides_and_comments():
    phi = parse_formula("# header\nx1 <= x2 + 1  # trailing\n")
    (lit,) = phi.clauses[0]
    assert lit.coeff_map() == {0: -1, 1: 1} and lit.bound == -1


def test_parse_arbitrary_names_in_order_of_appearance():
    phi = parse_formula("b >= a\nc > 0")
    assert phi.var_names == ("b", "a", "c")


@pytest.mark.parametrize("text", ["x1 >=", "x1 => 2", "x1 >= 1/0", "x1 >= 1 |", "3 x1 >= 2"])
def test_parse_errors_carry_position(text):
    with pytest.raises((FormulaSyntaxError, ZeroDivisionError)) as info:
        parse_formula(text)
    if isinstance(info.value, FormulaSyntaxError):
        assert info.value.line == 1


def test_format_round_trip():
    phi = parse_formula("x2 - x1 >= 3 | x3 - 2*x1 > -1/2\nx1 <= 4")
    assert parse_formula(format_formula(phi)) == phi


def test_horn_columns_examples():
    (clause,) = parse_formula(MC3).clauses
    assert horn_columns(clause, 3) == {0}
    (clause,) = parse_formula("x1 >= 0").clauses
    assert horn_columns(clause, 2) == {0, 1}
    (clause,) = parse_formula("-x1 + x2 >= 0 | x1 - x2 >= 0").clauses
    assert horn_columns(clause, 2) == set()


def test_restricted_examples():
    assert not is_restricted_horn(parse_formula("x1 < x2 | x1 < x3"))
    assert is_horn(parse_formula("x1 < x2 | x1 < x3"))
    assert is_restricted_horn(parse_formula("x1 >= 1 | x2 >= 1\nx1 <= 0"))
    assert not is_restricted_horn(parse_formula(MC3))


def test_restricted_witness_indices():
    phi = parse_formula("x1 >= 1 | x2 - x1 >= 1\nx1 >= 1")
    assert restricted_horn_witnesses(phi) == [(0, 1), (0, None)]


def test_tropical_examples():
    assert is_tropically_convex_syntactic(parse_formula("x - y/2 - z/2 <= 0"))
    assert is_tropically_convex_syntactic(parse_formula(MC3))
    assert not is_tropically_convex_syntactic(parse_formula("x1 >= 1"))


def test_semantic_max_closure_examples():
    assert is_max_closed_semantic(parse_formula(MC3))
    assert is_max_closed_semantic(parse_formula("-x1 + x2 + x3 >= 0"))
    assert not is_max_closed_semantic(parse_formula("x1 <= 0 | x2 <= 0"))


def test_semantic_max_closure_size_limit():
    phi = parse_formula(" + ".join(f"x{i}" for i in range(1, 8)) + " >= 0")
    with pytest.raises(LimitExceeded):
        is_max_closed_semantic(phi)


def test_eval_and_shift():
    phi = parse_formula("x1 <= x2 | x1 <= x3")
    assert eval_point(phi, [0, 1, -5])
    assert not eval_point(phi, [0, -1, -5])
    assert shift_point([0, 1, -5], 7) == [7, 8, 2]
