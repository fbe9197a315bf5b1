from fractions import Fraction

import pytest

from tropisolve.errors import FormulaSyntaxError
from tropisolve.formula import eval_point, parse_formula
from tropisolve.horn_solver import brute_force_sat
from tropisolve.numeric import EPS, POS_INF, EpsNum, ExtVal
from tropisolve.tropical import (Atom, Avg, Max, Min, OperatorSystem, atoms_to_formula,
                                 check_duality, csp_to_operator_system, eval_atoms,
                                 eval_operator, format_operator_system, parse_atoms,
                                 parse_operator_system, sat_in_zero_plus, solve_csp,
                                 solve_dual, solve_primal, solve_zero_plus, substitute_eps,
                                 verify_dual_certificate, verify_primal_solution)


def system(*ops):
    return OperatorSystem(tuple(ops))


def test_eval_operator_examples():
    x = [ExtVal(0), ExtVal(0)]
    assert eval_operator(Max(((1, 1),)), x) == ExtVal(1)
    assert eval_operator(Min(((0, 0), (1, 0))), [POS_INF, ExtVal(3)]) == ExtVal(3)
    assert eval_operator(Avg(((2, 0), (1, 1)), 1), [ExtVal(0), ExtVal(3)]) == ExtVal(2)


def test_primal_examples():
    assert solve_primal(system(Max(((0, 1),))), strict=True) == [0]
    assert solve_primal(system(Max(((0, -1),))), strict=True) is None
    o = system(Avg(((1, 1),), -1), Avg(((1, 0),), 0))
    assert solve_primal(o, strict=True) is None


def test_dual_examples():
    y = solve_dual(system(Max(((0, -1),))), strict=False)
    assert list(y) == [ExtVal(0)]
    o = system(Avg(((1, 1),), -1), Avg(((1, 0),), 0))
    y = solve_dual(o, strict=False)
    assert y is not None and verify_dual_certificate(o, y, strict=False)
    assert solve_dual(system(Max(((0, 1),))), strict=False) is None


def test_duality_reports():
    rep = check_duality(system(Max(((0, 1),))))
    assert rep.primal_strict is not None and rep.dual_nonstrict is None
    rep = check_duality(system(Max(((0, 0),))))
    assert rep.primal_strict is None and rep.dual_nonstrict is not None
    assert rep.primal_nonstrict is not None and rep.dual_strict is None
    rep = check_duality(system(Max(((0, -1),))))
    assert rep.dual_nonstrict is not None and rep.dual_strict is not None
    assert rep.primal_strict is None and rep.primal_nonstrict is None


def test_infinite_coordinates_in_certificates():
    # x2 is free to go up; x1 = max(x2) + ... needs a finite part
    o = system(Max(((0, -1),)), Max(((1, 1),)))
    y = solve_dual(o, strict=False)
    assert y is not None and verify_dual_certificate(o, y, strict=False)
    assert y[1].is_inf or y[1] >= y[1] + 1


def test_certificate_verification():
    assert verify_dual_certificate(system(Max(((0, -1),))), [ExtVal(0)], strict=False)
    assert not verify_dual_certificate(system(Max(((0, 1),))), [ExtVal(0)], strict=False)
    assert not verify_dual_certificate(system(Max(((0, -1),))), [POS_INF], strict=False)


def test_primal_verification_with_eps():
    o = system(Max(((0, EpsNum(0, 1)),)))
    x = solve_primal(o, strict=True)
    assert x is not None
    assert verify_primal_solution(o, x, strict=True, eps_value=Fraction(1, 3))


def test_translation_of_atoms():
    o = csp_to_operator_system([Atom("T+1", ("x", "y"))])
    assert o.names == ("x", "y")
    assert o.ops[0] == Max(((1, 1),))
    o = csp_to_operator_system([Atom("M0", ("x", "y", "z")), Atom("T-1", ("y", "x")),
                                Atom("T-1", ("z", "x"))])
    assert o.ops[0] == Max(((1, 0), (2, 0)))
    assert o.ops[1] == Max(((0, -1),)) and o.ops[2] == Max(((0, -1),))


def test_left_variable_is_split_into_copies():
    o = csp_to_operator_system([Atom("LT", ("x", "y")), Atom("LT", ("x", "z"))])
    names = list(o.names)
    i1, i2 = names.index("x#1"), names.index("x#2")
    assert o.ops[i1] == Max(((names.index("y"), -EPS),))
    assert o.ops[i2] == Max(((names.index("z"), -EPS),))
    assert o.ops[names.index("x")] == Min(((i1, 0), (i2, 0)))


def test_csp_examples():
    res = solve_csp([Atom("T+1", ("x", "y"))])
    assert res and res.witness == [0, 0]
    atoms = [Atom("M0", ("x", "y", "z")), Atom("T-1", ("y", "x")), Atom("T-1", ("z", "x"))]
    res = solve_csp(atoms)
    assert not res
    assert verify_dual_certificate(res.system, res.certificate, strict=True)
    res = solve_csp([Atom("LT", ("x", "y")), Atom("LT", ("y", "x"))])
    assert not res and verify_dual_certificate(res.system, res.certificate, strict=True)


def test_csp_witness_is_translation_invariant():
    atoms = parse_atoms("LT(x,y)\nS3(y,x,z)\nM0(z,x,y)\nT-1(x,z)")
    res = solve_csp(atoms)
    assert bool(res) == bool(brute_force_sat(atoms_to_formula(atoms)))
    if res:
        for c in (Fraction(-7), Fraction(1, 3), Fraction(10)):
            assert eval_atoms(atoms, res.names, [v + c for v in res.witness])


def test_certificate_survives_larger_eps():
    res = solve_csp([Atom("LT", ("x", "y")), Atom("LT", ("y", "x"))])
    o = res.system
    for t in (Fraction(1, 100), Fraction(1, 2), Fraction(3)):
        assert verify_dual_certificate(substitute_eps(o, t), res.certificate, strict=True)


def test_zero_plus_examples():
    phi = parse_formula("t > 0\nx >= t")
    w = solve_zero_plus(phi, 0)
    assert w is not None
    assert w.t > 0 and eval_point(phi, w.point)
    assert not sat_in_zero_plus(parse_formula("t >= 1/2"), 0)
    assert not sat_in_zero_plus(parse_formula("x >= 1\nx <= 1 - t"), 1)


def test_operator_file_round_trip():
    text = ("x1 := max(x2 + 1, x3 - 2)\n"
            "x2 := min(x1, x3 + 1/2)\n"
            "x3 := avg(2: x1, 1: x2) + 1/3\n")
    o = parse_operator_system(text)
    assert o.ops[2] == Avg(((2, 0), (1, 1)), Fraction(1, 3))
    assert parse_operator_system(format_operator_system(o)) == o
    o = parse_operator_system("a := max(a - eps, b + 1/2*eps)\nb := min(a)")
    assert o.ops[0].args[0][1] == EpsNum(0, -1)


@pytest.mark.parametrize("text", ["x1 := max()", "x1 := foo(x1)", "x1 := max(x9)", "x1 max(x1)"])
def test_operator_file_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse_operator_system(text)


def test_atom_file():
    atoms = parse_atoms("# instance\nLT(x, y)\nT+1(y,z)\nS3(x,y,z)")
    assert [a.kind for a in atoms] == ["LT", "T+1", "S3"]
    with pytest.raises(FormulaSyntaxError):
        parse_atoms("S3(x,y)")
