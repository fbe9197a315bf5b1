"""Compile semilinear Horn clauses into primitive positive formulas.

Two target vocabularies are supported.  ``gamma0`` uses ``Lt``, the
constants 1 and -1, ``S1`` (2x <= y), ``S2`` (x <= y+z) and ``M0``
(x <= y or x <= z).  ``gammat`` uses ``Lt``, ``Tplus``/``Tminus``
(x <= y +/- 1), ``S3`` (x <= (y+z)/2) and ``M0``, and accepts only clauses
whose literals have coefficient sum zero.

Every literal is first rewritten as ``beta*x_k <= sum_j alpha_j*x_j - c``
over integers with ``beta > 0`` and ``alpha >= 0``, where ``x_k`` is the
clause's Horn column.  The clause then holds iff there are ``x'_i`` with
``x_k <= x'_1 or ... or x_k <= x'_m`` and each ``x'_i`` obeying its
literal's bound, which is a chain of ``M0`` atoms on top of per-literal
gadgets.

Size of ``compile_gamma0`` on ``x2 - x1 >= c | x3 - x1 >= c``: with
``c = 2**b + 3`` and ``b >= 2`` the output has exactly ``b + 8`` atoms
(``b`` doubling steps for the constant, three ``S2`` per literal, one
``M0`` and one constant pin).  Hence ``atom_count <= GAMMA0_MC_A +
GAMMA0_MC_B * b`` for every ``b >= 1``.  For an arbitrary positive ``c``
each extra set bit costs two more ``S2`` atoms, so the count never exceeds
``GAMMA0_MC_A + GAMMA0_BITS_C * c.bit_length()``.
"""
from __future__ import annotations

import json
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DimensionError, FormulaSyntaxError, PreconditionError
from .formula import Clause, Formula, Literal, horn_columns
from .horn_solver import DEFAULT_SELECTION_BUDGET
from .lp import LinSystem, Row, fm_feasible, fm_project, iter_feasible_selections
from .numeric import EpsNum, as_rational

GAMMA0_MC_A = 8
GAMMA0_MC_B = 1
GAMMA0_BITS_C = 3

ONE = "one"
NEG_ONE = "neg_one"

ARITY = {
    "Lt": 2, "One": 1, "NegOne": 1, "S1": 2, "S2": 3, "M0": 3,
    "Tplus": 2, "Tminus": 2, "S3": 3,
}
GAMMA0_RELATIONS = frozenset({"Lt", "One", "NegOne", "S1", "S2", "M0"})
GAMMAT_RELATIONS = frozenset({"Lt", "Tplus", "Tminus", "S3", "M0"})


@dataclass(frozen=True)
class PPAtom:
    rel: str
    args: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "args", tuple(self.args))
        if self.rel not in ARITY:
            raise ValueError(f"unknown relation {self.rel!r}")
        if len(self.args) != ARITY[self.rel]:
            raise ValueError(f"{self.rel} takes {ARITY[self.rel]} arguments")

    def __str__(self):
        return f"{self.rel}({','.join(self.args)})"


@dataclass
class PPFormula:
    free_vars: list[str]
    bound_vars: list[str] = field(default_factory=list)
    constants: list[str] = field(default_factory=list)
    atoms: list[PPAtom] = field(default_factory=list)

    def __post_init__(self):
        known = set(self.free_vars) | set(self.bound_vars) | set(self.constants)
        for atom in self.atoms:
            for a in atom.args:
                if a not in known:
                    raise ValueError(f"atom {atom} mentions undeclared variable {a!r}")

    @property
    def atom_count(self) -> int:
        return len(self.atoms)

    def relations(self) -> set[str]:
        return {a.rel for a in self.atoms}

    def to_text(self) -> str:
        lines = ["FREE " + " ".join(self.free_vars) if self.free_vars else "FREE"]
        if self.constants:
            lines.append("CONST " + " ".join(self.constants))
        body = " & ".join(str(a) for a in self.atoms) or "TRUE"
        if self.bound_vars:
            body = "EXISTS " + " ".join(self.bound_vars) + " . " + body
        lines.append(body)
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "free": list(self.free_vars),
            "exists": list(self.bound_vars),
            "constants": list(self.constants),
            "atoms": [{"rel": a.rel, "args": list(a.args)} for a in self.atoms],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "PPFormula":
        return cls(list(data["free"]), list(data["exists"]), list(data["constants"]),
                   [PPAtom(a["rel"], tuple(a["args"])) for a in data["atoms"]])

    def __str__(self):
        return self.to_text()


_PP_ATOM = re.compile(r"^\s*([A-Za-z0-9]+)\s*\(([^)]*)\)\s*$")


def parse_pp(text: str) -> PPFormula:
    """Inverse of :meth:`PPFormula.to_text`."""
    free: list[str] = []
    consts: list[str] = []
    body = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        if head == "FREE":
            free = rest.split()
        elif head == "CONST":
            consts = rest.split()
        elif body is None:
            body = (line, lineno)
        else:
            raise FormulaSyntaxError("more than one formula body", lineno, 1)
    if body is None:
        raise FormulaSyntaxError("missing formula body", 1, 1)
    line, lineno = body
    bound: list[str] = []
    if line.startswith("EXISTS "):
        quant, sep, line = line[len("EXISTS "):].partition(" . ")
        if not sep:
            raise FormulaSyntaxError("expected ' . ' after the quantified variables", lineno, 1)
        bound = quant.split()
    atoms = []
    if line.strip() != "TRUE":
        for part in line.split("&"):
            m = _PP_ATOM.match(part)
            if m is None:
                raise FormulaSyntaxError(f"bad atom {part.strip()!r}", lineno, 1)
            args = tuple(a.strip() for a in m.group(2).split(","))
            try:
                atoms.append(PPAtom(m.group(1), args))
            except ValueError as exc:
                raise FormulaSyntaxError(str(exc), lineno, 1) from None
    try:
        return PPFormula(free, bound, consts, atoms)
    except ValueError as exc:
        raise FormulaSyntaxError(str(exc), lineno, 1) from None


def pp_from_json_text(text: str) -> PPFormula:
    return PPFormula.from_json(json.loads(text))


# --------------------------------------------------------------------------
# literal normal form


@dataclass(frozen=True)
class _Bound:
    """``beta * x' <= sum alpha_j x_j - c`` (``<`` when strict), all integers."""

    beta: int
    alpha: tuple[tuple[int, int], ...]
    c: int
    strict: bool


def _normal_form(lit: Literal, k: int, force_unit: bool) -> _Bound:
    coeffs = lit.coeff_map()
    ak = coeffs.pop(k, Fraction(0))
    if ak < 0:
        beta = -ak
    elif force_unit:
        beta = Fraction(1)
        coeffs[k] = ak + 1
    else:
        raise PreconditionError("literal has no negative coefficient in the Horn column")
    c = lit.bound
    scale = math.lcm(beta.denominator, c.denominator, *(a.denominator for a in coeffs.values()))
    ints = [int(beta * scale), int(c * scale)] + [int(a * scale) for a in coeffs.values()]
    g = math.gcd(*ints) or 1
    alpha = tuple(sorted((v, int(a * scale) // g) for v, a in coeffs.items() if a))
    return _Bound(int(beta * scale) // g, alpha, int(c * scale) // g, lit.strict)


def _log2_ceil(beta: int) -> int:
    return (beta - 1).bit_length()


class _Builder:
    def __init__(self, names: Sequence[str]):
        self.names = list(names)
        self.taken = set(names)
        self.counter = 0
        self.bound: list[str] = []
        self.constants: list[str] = []
        self.atoms: list[PPAtom] = []
        self.doubling: dict[tuple[str, int], str] = {}

    def fresh(self) -> str:
        while True:
            self.counter += 1
            name = f"_t{self.counter}"
            if name not in self.taken:
                self.taken.add(name)
                self.bound.append(name)
                return name

    def emit(self, rel: str, *args: str) -> None:
        self.atoms.append(PPAtom(rel, args))

    def const(self, name: str) -> str:
        if name not in self.constants:
            if name in self.taken:
                raise PreconditionError(f"variable name {name!r} is reserved for a constant")
            self.constants.append(name)
            self.emit("One" if name == ONE else "NegOne", name)
        return name

    def result(self) -> PPFormula:
        return PPFormula(list(self.names), self.bound, self.constants, self.atoms)

    # gamma0 pieces

    def times_pow2(self, v: str, p: int) -> str:
        """A variable ``w`` constrained by ``w <= 2**p * v`` (shared per ``(v, p)``)."""
        if p == 0:
            return v
        key = (v, p)
        if key not in self.doubling:
            half = self.times_pow2(v, p - 1)
            w = self.fresh()
            self.emit("S2", w, half, half)
            self.doubling[key] = w
        return self.doubling[key]

    def s1_chain(self, x: str, target: str, m: int) -> None:
        """``2**m * x <= target`` for ``m >= 1``."""
        cur = x
        for _ in range(m - 1):
            t = self.fresh()
            self.emit("S1", cur, t)
            cur = t
        self.emit("S1", cur, target)

    def sum_chain(self, y: str, terms: list[str]) -> None:
        """``y <= terms[0] + ... + terms[-1]``."""
        if not terms:
            self.emit("S2", y, self.const(ONE), self.const(NEG_ONE))
        elif len(terms) == 1:
            self.emit("M0", y, terms[0], terms[0])
        elif len(terms) == 2:
            self.emit("S2", y, terms[0], terms[1])
        else:
            s = self.fresh()
            self.emit("S2", y, s, terms[-1])
            self.sum_chain(s, terms[:-1])

    # gammat pieces

    def offset(self, a: str, b: str, d: int) -> None:
        """``a <= b - d``."""
        if d == 0:
            self.emit("M0", a, b, b)
            return
        step = "Tminus" if d > 0 else "Tplus"
        if abs(d) <= 3:
            cur = b
            for _ in range(abs(d) - 1):
                u = self.fresh()
                self.emit(step, u, cur)
                cur = u
            self.emit(step, a, cur)
        elif d % 2 == 0:
            m = self.fresh()
            self.emit("S3", m, a, b)
            self.offset(a, m, d // 2)
        else:
            u = self.fresh()
            self.emit(step, u, b)
            self.offset(a, u, d - 1 if d > 0 else d + 1)

    def average(self, head: str | None, slots: list[str]) -> str:
        """``head <= mean(slots)`` by a binary ``S3`` tree; ``len(slots)`` is a power of 2."""
        if len(set(slots)) == 1:
            if head is None:
                return slots[0]
            self.emit("M0", head, slots[0], slots[0])
            return head
        mid = len(slots) // 2
        left = self.average(None, slots[:mid])
        right = self.average(None, slots[mid:])
        node = head if head is not None else self.fresh()
        self.emit("S3", node, left, right)
        return node


def _horn_column(clause: Clause, num_vars: int) -> int:
    cols = horn_columns(clause, num_vars)
    if not cols:
        raise PreconditionError("clause is not Horn")
    return min(cols)


def _gamma0_literal(b: _Builder, nf: _Bound, head: str | None) -> str:
    """Constrain ``x'`` by the literal bound; returns the name standing for ``x'``.

    With ``head=None`` a fresh ``x'`` is made unless it can be replaced by an
    existing variable.
    """
    m = _log2_ceil(nf.beta)
    alpha = {b.names[v]: a for v, a in nf.alpha}

    def terms_for(xp: str) -> list[str]:
        weights = dict(alpha)
        if (1 << m) > nf.beta:
            weights[xp] = weights.get(xp, 0) + (1 << m) - nf.beta
        if nf.c < 0:
            weights[b.const(ONE)] = -nf.c
        elif nf.c > 0:
            weights[b.const(NEG_ONE)] = nf.c
        out = []
        for v, a in weights.items():
            for p in range(a.bit_length()):
                if a >> p & 1:
                    out.append(b.times_pow2(v, p))
        return out

    if head is None and m == 0 and not nf.strict:
        weights_only_var = len(alpha) == 1 and nf.c == 0 and next(iter(alpha.values())) == 1
        if weights_only_var:
            return next(iter(alpha))
    xp = head if head is not None else b.fresh()
    terms = terms_for(xp)
    if not nf.strict:
        if m == 0:
            b.sum_chain(xp, terms)
        elif len(terms) == 1:
            b.s1_chain(xp, terms[0], m)
        else:
            y = b.fresh()
            b.s1_chain(xp, y, m)
            b.sum_chain(y, terms)
        return xp
    u = xp
    if m > 0:
        u = b.fresh()
        b.s1_chain(xp, u, m)
    if len(terms) == 1:
        b.emit("Lt", u, terms[0])
    else:
        w = b.fresh()
        b.emit("Lt", u, w)
        b.sum_chain(w, terms)
    return xp


def _gammat_literal(b: _Builder, nf: _Bound, head: str | None) -> str:
    m = _log2_ceil(nf.beta)
    alpha = [(b.names[v], a) for v, a in nf.alpha]
    if head is None and m == 0 and not nf.strict and nf.c == 0:
        return alpha[0][0]
    xp = head if head is not None else b.fresh()
    slots = [v for v, a in alpha for _ in range(a)] + [xp] * ((1 << m) - nf.beta)
    target = xp
    if nf.strict:
        if m == 0 and nf.c == 0:
            b.emit("Lt", xp, slots[0])
            return xp
        target = b.fresh()
        b.emit("Lt", xp, target)
    if m == 0:
        b.offset(target, slots[0], nf.c)
        return xp
    if nf.c:
        y0 = b.fresh()
        b.offset(y0, slots[0], nf.c)
        slots[0] = y0
    b.average(target, slots)
    return xp


def _constant_truth(lit: Literal) -> bool:
    return 0 > lit.bound or (not lit.strict and lit.bound == 0)


def _disjunction(b: _Builder, xk: str, heads: list[str]) -> None:
    """``xk <= heads[0] or ... or xk <= heads[-1]`` with ``len(heads) >= 2``."""
    if len(heads) == 2:
        b.emit("M0", xk, heads[0], heads[1])
        return
    t = b.fresh()
    b.emit("M0", xk, t, heads[-1])
    _disjunction(b, t, heads[:-1])


def _compile_clause(b: _Builder, clause: Clause, num_vars: int, target: str) -> None:
    lits = []
    for lit in clause:
        if lit.coeffs:
            lits.append(lit)
        elif _constant_truth(lit):
            return
    if not lits:
        if target == "gamma0":
            b.emit("S1", b.const(ONE), b.const(NEG_ONE))
        else:
            u = b.fresh()
            b.emit("Lt", u, u)
        return
    if target == "gamma0":
        k = _horn_column(clause, num_vars)
        forms = [_normal_form(lit, k, force_unit=True) for lit in lits]
        literal = _gamma0_literal
    else:
        if any(lit.coefficient_sum() != 0 for lit in lits):
            raise PreconditionError("clause is not tropically convex")
        k = _horn_column(clause, num_vars)
        forms = [_normal_form(lit, k, force_unit=False) for lit in lits]
        literal = _gammat_literal
    xk = b.names[k]
    if len(forms) == 1:
        literal(b, forms[0], xk)
        return
    heads = [literal(b, nf, None) for nf in forms]
    _disjunction(b, xk, heads)


def _as_formula(source: Clause | Formula, var_names: Sequence[str] | None) -> Formula:
    if isinstance(source, Formula):
        return source
    used = [v for lit in source for v in lit.variables()]
    n = len(var_names) if var_names is not None else (max(used) + 1 if used else 0)
    return Formula.build([source.literals], num_vars=n, var_names=var_names)


def _compile(source, var_names, target: str) -> PPFormula:
    phi = _as_formula(source, var_names)
    if phi.exists:
        raise PreconditionError("input must be quantifier-free")
    b = _Builder(phi.var_names)
    for clause in phi.clauses:
        _compile_clause(b, clause, phi.num_vars, target)
    return b.result()


def compile_gamma0(source: Clause | Formula, var_names: Sequence[str] | None = None) -> PPFormula:
    """pp-definition over ``Lt, One, NegOne, S1, S2, M0``; clauses are conjoined."""
    return _compile(source, var_names, "gamma0")


def compile_gamma_t(source: Clause | Formula, var_names: Sequence[str] | None = None) -> PPFormula:
    """pp-definition over ``Lt, Tplus, Tminus, S3, M0`` for zero-sum literals."""
    return _compile(source, var_names, "gammat")


# --------------------------------------------------------------------------
# semantics


def atom_clause(atom: PPAtom, index: Mapping[str, int]) -> list[list[Literal]]:
    """Defining clauses of one atom (``M0`` gives one binary clause, the rest units)."""
    i = [index[a] for a in atom.args]
    rel = atom.rel
    if rel == "Lt":
        return [[Literal.make([(i[1], 1), (i[0], -1)], True, 0)]]
    if rel in ("One", "NegOne"):
        v = 1 if rel == "One" else -1
        return [[Literal.make([(i[0], 1)], False, v)], [Literal.make([(i[0], -1)], False, -v)]]
    if rel == "S1":
        return [[Literal.make([(i[1], 1), (i[0], -2)], False, 0)]]
    if rel == "S2":
        return [[Literal.make([(i[1], 1), (i[2], 1), (i[0], -1)], False, 0)]]
    if rel == "S3":
        return [[Literal.make([(i[1], 1), (i[2], 1), (i[0], -2)], False, 0)]]
    if rel == "M0":
        return [[Literal.make([(i[1], 1), (i[0], -1)], False, 0),
                 Literal.make([(i[2], 1), (i[0], -1)], False, 0)]]
    if rel == "Tplus":
        return [[Literal.make([(i[1], 1), (i[0], -1)], False, -1)]]
    if rel == "Tminus":
        return [[Literal.make([(i[1], 1), (i[0], -1)], False, 1)]]
    raise ValueError(f"unknown relation {rel!r}")


def pp_to_horn(pp: PPFormula) -> Formula:
    """Horn formula over free, bound and constant variables; non-free ones are existential."""
    names = list(pp.free_vars) + list(pp.bound_vars) + list(pp.constants)
    index = {n: i for i, n in enumerate(names)}
    clauses = [c for atom in pp.atoms for c in atom_clause(atom, index)]
    exists = range(len(pp.free_vars), len(names))
    return Formula.build(clauses, num_vars=len(names), var_names=names, exists=exists)


def pp_eval(pp: PPFormula, assignment: Mapping[str, object] | Sequence,
            budget: int | None = DEFAULT_SELECTION_BUDGET) -> bool:
    """Decide the formula at a point (mapping by name, or a sequence in free-variable order)."""
    if not isinstance(assignment, Mapping):
        if len(assignment) != len(pp.free_vars):
            raise DimensionError(f"expected {len(pp.free_vars)} values, got {len(assignment)}")
        assignment = dict(zip(pp.free_vars, assignment))
    missing = [v for v in pp.free_vars if v not in assignment]
    if missing:
        raise KeyError(f"no value for free variable(s) {', '.join(missing)}")
    phi = pp_to_horn(pp)
    values = {i: as_rational(assignment[name]) for i, name in enumerate(pp.free_vars)}
    shift = len(pp.free_vars)

    def row(lit: Literal) -> Row:
        bound = lit.bound - sum((c * values[v] for v, c in lit.coeffs if v in values), Fraction(0))
        coeffs = tuple((v - shift, c) for v, c in lit.coeffs if v not in values)
        return Row(coeffs, lit.strict, EpsNum(bound, 0))

    base, groups = [], []
    for clause in phi.clauses:
        if len(clause) == 1:
            base.append(row(clause.literals[0]))
        else:
            groups.append([[row(lit)] for lit in clause])
    found = next(iter_feasible_selections(base, groups, phi.num_vars - shift, budget, "greedy"), None)
    return found is not None


# --------------------------------------------------------------------------
# equivalence


def _row(lit: Literal, remap: Sequence[int]) -> Row:
    return Row(tuple(sorted((remap[v], c) for v, c in lit.coeffs)), lit.strict,
               EpsNum(lit.bound, 0))


def _layout(a: Formula, b: Formula):
    free_a = [a.var_names[i] for i in a.free_vars]
    free_b = [b.var_names[i] for i in b.free_vars]
    if sorted(free_a) != sorted(free_b):
        raise PreconditionError("formulas have different free variables")
    free = sorted(free_a)
    pos = {n: i for i, n in enumerate(free)}
    nxt = len(free)
    maps = []
    for phi in (a, b):
        remap = [0] * phi.num_vars
        for i in range(phi.num_vars):
            if i in phi.exists:
                remap[i] = nxt
                nxt += 1
            else:
                remap[i] = pos[phi.var_names[i]]
        maps.append(remap)
    return len(free), nxt, maps


def _groups(phi: Formula, remap):
    base, groups = [], []
    for clause in phi.clauses:
        if len(clause) == 1:
            base.append(_row(clause.literals[0], remap))
        else:
            groups.append([[_row(lit, remap)] for lit in clause])
    if any(c.is_empty for c in phi.clauses):
        return None
    return base, groups


def _covered(piece: list[Row], cover: list[list[Row]], dim: int) -> bool:
    """Is the polyhedron ``piece`` inside the union of the ``cover`` polyhedra?"""
    if not fm_feasible(LinSystem(dim, piece), "greedy"):
        return True
    if not cover:
        return False
    first, rest = cover[0], cover[1:]
    prefix: list[Row] = []
    for row in first:
        if not _covered(piece + prefix + [row.negate()], rest, dim):
            return False
        prefix.append(row)
    return True


def _included(a: Formula, ra, b: Formula, rb, n_free: int, dim: int, budget) -> bool:
    ga = _groups(a, ra)
    if ga is None:
        return True
    gb = _groups(b, rb)
    if not b.exists:
        if gb is None:
            return next(iter_feasible_selections(ga[0], ga[1], dim, budget, "greedy"), None) is None
        for clause in b.clauses:
            negated = [_row(lit, rb).negate() for lit in clause]
            found = next(iter_feasible_selections(ga[0] + negated, ga[1], dim, budget, "greedy"), None)
            if found is not None:
                return False
        return True
    cover = []
    if gb is not None:
        keep = range(n_free)
        for _, rows, _ in iter_feasible_selections(gb[0], gb[1], dim, budget, "greedy"):
            proj = fm_project(LinSystem(dim, rows), keep, "greedy").rows
            if fm_feasible(LinSystem(dim, proj), "greedy"):
                cover.append(proj)
    for _, rows, _ in iter_feasible_selections(ga[0], ga[1], dim, budget, "greedy"):
        if not _covered(rows, cover, dim):
            return False
    return True


def equivalence_check(a: Formula | PPFormula, b: Formula | PPFormula,
                      budget: int | None = DEFAULT_SELECTION_BUDGET) -> bool:
    """Do ``a`` and ``b`` define the same relation on their free variables?

    Existential variables are projected away; variables are matched by name.
    """
    if isinstance(a, PPFormula):
        a = pp_to_horn(a)
    if isinstance(b, PPFormula):
        b = pp_to_horn(b)
    n_free, dim, (ra, rb) = _layout(a, b)
    return (_included(a, ra, b, rb, n_free, dim, budget)
            and _included(b, rb, a, ra, n_free, dim, budget))


def max_atoms_clause(c, names: Iterable[str] = ("x1", "x2", "x3")) -> Formula:
    """``x2 - x1 >= c | x3 - x1 >= c``."""
    names = list(names)
    lits = [Literal.make([(1, 1), (0, -1)], False, c), Literal.make([(2, 1), (0, -1)], False, c)]
    return Formula.build([lits], num_vars=3, var_names=names)


__all__ = [
    "PPAtom", "PPFormula", "parse_pp", "compile_gamma0", "compile_gamma_t", "pp_to_horn",
    "pp_eval", "equivalence_check", "max_atoms_clause", "GAMMA0_MC_A", "GAMMA0_MC_B", "GAMMA0_BITS_C",
]
