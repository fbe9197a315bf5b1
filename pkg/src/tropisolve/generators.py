"""Seeded random instance generators for tests and ``selftest``."""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .formula import Formula, Literal
from .numeric import EpsNum
from .tropical import ATOM_ARITY, Atom, Avg, Max, Min, OperatorSystem


def operator_system(rng: random.Random, max_n: int = 4, max_arity: int = 3,
                    offsets=range(-3, 4), weights=range(1, 4),
                    offset_denominators=(1,)) -> OperatorSystem:
    n = rng.randint(1, max_n)
    ops = []
    for _ in range(n):
        arity = rng.randint(1, max_arity)
        kind = rng.choice((Max, Min, Avg))

        def offset():
            return Fraction(rng.choice(offsets), rng.choice(offset_denominators))

        if kind is Avg:
            weighted = [(rng.choice(weights), rng.randrange(n)) for _ in range(arity)]
            ops.append(Avg(tuple(weighted), offset()))
        else:
            ops.append(kind(tuple((rng.randrange(n), offset()) for _ in range(arity))))
    return OperatorSystem(tuple(ops))


def game_system(rng: random.Random, max_n: int = 3) -> OperatorSystem:
    """Small systems with rational (not only integer) offsets."""
    return operator_system(rng, max_n=max_n, max_arity=3, offsets=range(-3, 4),
                           offset_denominators=(1, 2, 3))


def gamma_t_instance(rng: random.Random, max_vars: int = 5, max_atoms: int = 6) -> list[Atom]:
    names = [f"x{i + 1}" for i in range(rng.randint(1, max_vars))]
    atoms = []
    for _ in range(rng.randint(1, max_atoms)):
        kind = rng.choice(sorted(ATOM_ARITY))
        atoms.append(Atom(kind, tuple(rng.choice(names) for _ in range(ATOM_ARITY[kind]))))
    return atoms


def restricted_horn(rng: random.Random, max_vars: int = 5, max_clauses: int = 6,
                    max_literals: int = 3, span: int = 3) -> Formula:
    n = rng.randint(1, max_vars)
    clauses = []
    for _ in range(rng.randint(1, max_clauses)):
        k = rng.randrange(n)
        m = rng.randint(1, max_literals)
        positive = rng.choice([None] + list(range(m)))
        lits = []
        for i in range(m):
            coeffs = {j: rng.randint(0, span) for j in range(n)}
            if i == positive:
                coeffs[k] = rng.randint(-span, -1)
            lits.append(Literal.make(coeffs, rng.random() < 0.4, rng.randint(-span, span)))
        clauses.append(lits)
    return Formula.build(clauses, num_vars=n)


def horn_formula(rng: random.Random, max_vars: int = 3, max_clauses: int = 3,
                 max_literals: int = 3, span: int = 3) -> Formula:
    """Syntactically Horn: negative coefficients only in one column per clause."""
    n = rng.randint(1, max_vars)
    clauses = [horn_clause_literals(rng, n, max_literals, span, span)
               for _ in range(rng.randint(1, max_clauses))]
    return Formula.build(clauses, num_vars=n)


def horn_clause_literals(rng: random.Random, n: int, max_literals: int, coeff: int,
                         bound: int, tropical: bool = False) -> list[Literal]:
    k = rng.randrange(n)
    lits = []
    for _ in range(rng.randint(1, max_literals)):
        coeffs = {j: rng.randint(0, coeff) for j in range(n) if j != k}
        if tropical:
            coeffs[k] = -sum(coeffs.values())
        else:
            coeffs[k] = rng.randint(-coeff, coeff)
        lits.append(Literal.make(coeffs, rng.random() < 0.4, rng.randint(-bound, bound)))
    return lits


def horn_clause(rng: random.Random, max_vars: int = 3, tropical: bool = False) -> Formula:
    """One clause with ``|coeff| <= 4``, ``|c| <= 8`` and at most 3 literals."""
    n = rng.randint(1, max_vars)
    return Formula.build([horn_clause_literals(rng, n, 3, 4, 8, tropical)], num_vars=n)


# --------------------------------------------------------------------------
# parameterized families with a known answer near t = 0+


@dataclass
class ZeroPlusCase:
    phi: Formula
    param: int
    expected: bool
    witness: list[EpsNum] | None
    reason: str


def _q(rng: random.Random) -> Fraction:
    return Fraction(rng.randint(-6, 6), rng.randint(1, 3))


def _lit(coeffs, strict, bound) -> Literal:
    return Literal.make(coeffs, strict, bound)


def zero_plus_sat(rng: random.Random, family: int) -> ZeroPlusCase:
    """Satisfiable cases; ``witness`` lists plane values for ``(t, x, y)``."""
    t, x, y = 0, 1, 2
    names = ("t", "x", "y")
    q, r = _q(rng), _q(rng)
    k = rng.randint(1, 3)
    c = Fraction(rng.randint(1, 5), rng.randint(1, 4))
    family %= 5
    if family == 0:
        clauses = [[_lit({t: 1}, True, 0)], [_lit({x: 1, t: -k}, False, q)]]
        w = EpsNum(q, k)
        reason = "x = q + k*t"
    elif family == 1:
        clauses = [[_lit({x: 1}, True, q)], [_lit({x: -1, t: k}, True, -q)]]
        w = EpsNum(q, Fraction(k, 2))
        reason = "x strictly between q and q + k*t"
    elif family == 2:
        clauses = [[_lit({t: -1}, True, -c)], [_lit({x: 1}, False, q)]]
        w = EpsNum(q)
        reason = "t < c holds near 0"
    elif family == 3:
        clauses = [[_lit({t: 1}, False, c), _lit({x: 1, y: -1}, True, q)],
                   [_lit({y: 1}, False, r)],
                   [_lit({x: -1, t: 1}, True, -(r + q))]]
        return ZeroPlusCase(Formula.build(clauses, 3, names), t, True,
                            [EpsNum(0, 1), EpsNum(r + q, Fraction(1, 2)), EpsNum(r)],
                            "second disjunct with y = r, x = r + q + t/2")
    else:
        k2 = k + rng.randint(1, 3)
        clauses = [[_lit({x: 1, y: -1, t: -k}, False, 0)],
                   [_lit({y: 1, x: -1, t: k2}, False, 0)],
                   [_lit({y: 1}, False, q)], [_lit({y: -1}, False, -q)]]
        return ZeroPlusCase(Formula.build(clauses, 3, names), t, True,
                            [EpsNum(0, 1), EpsNum(q, k), EpsNum(q)],
                            "x - y between k*t and k2*t")
    return ZeroPlusCase(Formula.build(clauses, 2, names[:2]), t, True, [EpsNum(0, 1), w], reason)


def zero_plus_unsat(rng: random.Random, family: int) -> ZeroPlusCase:
    t, x, y = 0, 1, 2
    names = ("t", "x", "y")
    q = _q(rng)
    k = rng.randint(1, 3)
    c = Fraction(rng.randint(1, 5), rng.randint(1, 4))
    family %= 6
    n = 2
    if family == 0:
        clauses = [[_lit({t: -1}, False, 0)], [_lit({x: 1}, False, q)]]
        reason = "t <= 0"
    elif family == 1:
        clauses = [[_lit({t: 1}, False, c)]]
        reason = "t >= c fails below c"
    elif family == 2:
        clauses = [[_lit({x: 1}, False, q)], [_lit({x: -1, t: -k}, False, -q)]]
        reason = "q <= x <= q - k*t"
    elif family == 3:
        k2 = k + rng.randint(0, 2)
        clauses = [[_lit({x: 1, y: -1, t: -k2}, True, 0)], [_lit({y: 1, x: -1, t: k}, True, 0)]]
        n = 3
        reason = "k2*t < x - y < k*t with k <= k2"
    elif family == 4:
        clauses = [[_lit({t: 1}, False, c), _lit({t: -1}, False, c)], [_lit({x: 1}, True, q)]]
        reason = "t >= c or t <= -c, both false near 0"
    else:
        clauses = [[_lit({x: 1, t: -1}, True, q)], [_lit({x: -1, t: Fraction(1, k + 1)}, True, -q)]]
        reason = "q + t < x < q + t/(k+1)"
    return ZeroPlusCase(Formula.build(clauses, n, names[:n]), t, False, None, reason)
