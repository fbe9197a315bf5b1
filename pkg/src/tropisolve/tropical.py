"""Max/min/average operator systems and tropically convex CSPs.

For an operator system ``o`` the primal problem asks for a rational ``x``
with ``x < o(x)`` (``x <= o(x)`` in the non-strict variant) and the dual
problem for ``y`` over the rationals with ``+inf``, not all infinite, with
``y >= o(y)`` (``y > o(y)``, reading ``+inf > +inf`` as true).  Exactly one
side of each pair is satisfiable; :func:`check_duality` enforces this.

Instances of the tropically convex CSP use the atoms

=========  =========================
``LT``     ``x < y``
``T+1``    ``x <= y + 1``
``T-1``    ``x <= y - 1``
``S3``     ``x <= (y + z) / 2``
``M0``     ``x <= max(y, z)``
=========  =========================
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .errors import ConsistencyError, DimensionError, FormulaSyntaxError, LimitExceeded
from .formula import Formula, Literal
from .horn_solver import DEFAULT_SELECTION_BUDGET, brute_force_selection
from .lp import Row, first_feasible_selection, instantiate
from .numeric import (EPS, POS_INF, EpsNum, ExtVal, as_rational, ext_strict_gt,
                      format_rational, parse_epsnum)

DEFAULT_PATTERN_BUDGET = 1 << 16


# --------------------------------------------------------------------------
# operators


@dataclass(frozen=True)
class Max:
    """``max_l (x[j_l] + k_l)``."""

    args: tuple[tuple[int, EpsNum], ...]

    def __post_init__(self):
        if not self.args:
            raise ValueError("max needs at least one argument")
        object.__setattr__(self, "args", tuple((j, EpsNum.lift(k)) for j, k in self.args))

    def variables(self):
        return [j for j, _ in self.args]


@dataclass(frozen=True)
class Min:
    """``min_l (x[j_l] + k_l)``."""

    args: tuple[tuple[int, EpsNum], ...]

    def __post_init__(self):
        if not self.args:
            raise ValueError("min needs at least one argument")
        object.__setattr__(self, "args", tuple((j, EpsNum.lift(k)) for j, k in self.args))

    def variables(self):
        return [j for j, _ in self.args]


@dataclass(frozen=True)
class Avg:
    """``sum_l w_l x[j_l] / sum_l w_l + offset`` with positive weights."""

    weighted: tuple[tuple[Fraction, int], ...]
    offset: EpsNum = EpsNum(0, 0)

    def __post_init__(self):
        if not self.weighted:
            raise ValueError("avg needs at least one argument")
        weighted = tuple((as_rational(w), j) for w, j in self.weighted)
        if any(w <= 0 for w, _ in weighted):
            raise ValueError("avg weights must be positive")
        object.__setattr__(self, "weighted", weighted)
        object.__setattr__(self, "offset", EpsNum.lift(self.offset))

    def variables(self):
        return [j for _, j in self.weighted]

    def normalized(self) -> list[tuple[Fraction, int]]:
        total = sum(w for w, _ in self.weighted)
        return [(w / total, j) for w, j in self.weighted]


Operator = Union[Max, Min, Avg]


@dataclass(frozen=True)
class OperatorSystem:
    ops: tuple[Operator, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "ops", tuple(self.ops))
        names = tuple(self.names) or tuple(f"x{i + 1}" for i in range(len(self.ops)))
        if len(names) != len(self.ops):
            raise DimensionError("one name per component required")
        object.__setattr__(self, "names", names)
        for op in self.ops:
            for j in op.variables():
                if not 0 <= j < len(self.ops):
                    raise DimensionError(f"operator refers to component {j} of {len(self.ops)}")

    @property
    def n(self) -> int:
        return len(self.ops)

    def has_eps(self) -> bool:
        for op in self.ops:
            if isinstance(op, Avg):
                if op.offset.eps:
                    return True
            elif any(k.eps for _, k in op.args):
                return True
        return False


@dataclass(frozen=True)
class DualCertificate:
    y: tuple[ExtVal, ...]

    def __iter__(self):
        return iter(self.y)

    def __len__(self):
        return len(self.y)

    def __getitem__(self, i):
        return self.y[i]


def eval_operator(op: Operator, x: Sequence[ExtVal]) -> ExtVal:
    if isinstance(op, Max):
        return max(x[j] + k for j, k in op.args)
    if isinstance(op, Min):
        return min(x[j] + k for j, k in op.args)
    if any(x[j].is_inf for _, j in op.weighted):
        return POS_INF
    total = sum(w for w, _ in op.weighted)
    acc = sum((x[j].value * w for w, j in op.weighted), Fraction(0))
    return ExtVal(acc / total + op.offset)


# --------------------------------------------------------------------------
# primal and dual problems


def _rel(lhs_minus_rhs, strict: bool, bound) -> Row:
    return Row.make(lhs_minus_rhs, strict, bound)


def _primal_constraints(o: OperatorSystem, strict: bool):
    """``x_i < o_i(x)`` as base rows plus one disjunctive group per max."""
    base: list[Row] = []
    groups: list[list[list[Row]]] = []
    for i, op in enumerate(o.ops):
        if isinstance(op, Avg):
            coeffs = {i: Fraction(-1)}
            for w, j in op.normalized():
                coeffs[j] = coeffs.get(j, 0) + w
            base.append(_rel(coeffs, strict, -op.offset))
            continue
        rows = [_rel([(j, 1), (i, -1)], strict, -k) for j, k in op.args]
        if isinstance(op, Min):
            base.extend(rows)
        elif len(rows) == 1:
            base.append(rows[0])
        else:
            groups.append([[r] for r in rows])
    return base, groups


def _primal_search(o: OperatorSystem, strict: bool, budget):
    base, groups = _primal_constraints(o, strict)
    found = first_feasible_selection(base, groups, o.n, budget=budget)
    if found is None:
        return None
    choice, witness = found
    chosen = base + [groups[g][c][0] for g, c in enumerate(choice)]
    return witness, chosen


def solve_primal(o: OperatorSystem, strict: bool = True,
                 budget: int | None = DEFAULT_SELECTION_BUDGET) -> list[Fraction] | None:
    """Rational ``x`` with ``x < o(x)`` (or ``<=``), or ``None``.

    When offsets carry eps terms the plane witness is instantiated at a
    concrete positive eps (half of the largest admissible value) and the
    returned point satisfies the system for that eps.
    """
    found = solve_primal_detail(o, strict, budget)
    return None if found is None else found[0]


def solve_primal_detail(o: OperatorSystem, strict: bool = True,
                        budget: int | None = DEFAULT_SELECTION_BUDGET):
    """Like :func:`solve_primal` but returns ``(point, eps_value, plane_witness)``."""
    found = _primal_search(o, strict, budget)
    if found is None:
        return None
    witness, rows = found
    if all(w.eps == 0 for w in witness) and not o.has_eps():
        return [w.std for w in witness], None, witness
    t, point = instantiate([[r] for r in rows], witness)
    return point, t, witness


def _pattern_consistent(o: OperatorSystem, finite: frozenset) -> bool:
    for i in finite:
        op = o.ops[i]
        if isinstance(op, Min):
            if not any(j in finite for j in op.variables()):
                return False
        elif not all(j in finite for j in op.variables()):
            return False
    return True


def _dual_constraints(o: OperatorSystem, finite: frozenset, strict: bool):
    base: list[Row] = []
    groups: list[list[list[Row]]] = []
    for i in sorted(finite):
        op = o.ops[i]
        if isinstance(op, Avg):
            coeffs = {i: Fraction(1)}
            for w, j in op.normalized():
                coeffs[j] = coeffs.get(j, 0) - w
            base.append(_rel(coeffs, strict, op.offset))
            continue
        rows = [_rel([(i, 1), (j, -1)], strict, k) for j, k in op.args if j in finite]
        if isinstance(op, Max) or len(rows) == 1:
            base.extend(rows)
        else:
            groups.append([[r] for r in rows])
    return base, groups


def iter_patterns(n: int) -> Iterable[frozenset]:
    """Nonempty finiteness patterns, largest bitmask (all finite) first."""
    for mask in range((1 << n) - 1, 0, -1):
        yield frozenset(i for i in range(n) if mask >> i & 1)


def solve_dual(o: OperatorSystem, strict: bool = False,
               budget: int | None = DEFAULT_SELECTION_BUDGET,
               pattern_budget: int | None = DEFAULT_PATTERN_BUDGET) -> DualCertificate | None:
    """``y >= o(y)`` (or ``y > o(y)``) over rationals with ``+inf``, not all infinite.

    Coordinates outside the finite set are ``+inf`` and satisfy their
    constraint automatically; inside it max and average constraints need all
    arguments finite and min constraints need some finite argument.
    """
    n = o.n
    if pattern_budget is not None and (1 << n) - 1 > pattern_budget:
        raise LimitExceeded(f"{(1 << n) - 1} finiteness patterns exceed the budget of {pattern_budget}")
    for finite in iter_patterns(n):
        if not _pattern_consistent(o, finite):
            continue
        base, groups = _dual_constraints(o, finite, strict)
        found = first_feasible_selection(base, groups, n, budget=budget)
        if found is None:
            continue
        witness = found[1]
        y = tuple(ExtVal(witness[i]) if i in finite else POS_INF for i in range(n))
        return DualCertificate(y)
    return None


def verify_dual_certificate(o: OperatorSystem, y: DualCertificate | Sequence[ExtVal],
                            strict: bool = False) -> bool:
    y = tuple(y)
    if len(y) != o.n:
        raise DimensionError(f"expected {o.n} coordinates, got {len(y)}")
    if all(v.is_inf for v in y):
        return False
    for i, op in enumerate(o.ops):
        rhs = eval_operator(op, y)
        ok = ext_strict_gt(y[i], rhs) if strict else y[i] >= rhs
        if not ok:
            return False
    return True


def verify_primal_solution(o: OperatorSystem, x: Sequence, strict: bool = True,
                           eps_value: Fraction | None = None) -> bool:
    """Check ``x < o(x)`` (or ``<=``); eps offsets are read at ``eps_value``."""
    if len(x) != o.n:
        raise DimensionError(f"expected {o.n} coordinates, got {len(x)}")
    o_conc = o if eps_value is None else substitute_eps(o, eps_value)
    xs = [ExtVal(as_rational(v)) for v in x]
    for i, op in enumerate(o_conc.ops):
        rhs = eval_operator(op, xs).value
        rhs = rhs.std if isinstance(rhs, EpsNum) else rhs
        if (xs[i].value >= rhs) if strict else (xs[i].value > rhs):
            return False
    return True


def substitute_eps(o: OperatorSystem, t: Fraction) -> OperatorSystem:
    """Replace every eps offset by the rational ``t``."""
    def conc(k: EpsNum) -> EpsNum:
        return EpsNum(k.at(t), 0)

    ops = []
    for op in o.ops:
        if isinstance(op, Avg):
            ops.append(Avg(op.weighted, conc(op.offset)))
        else:
            ops.append(type(op)(tuple((j, conc(k)) for j, k in op.args)))
    return OperatorSystem(tuple(ops), o.names)


@dataclass
class DualityReport:
    primal_strict: list[Fraction] | None
    dual_nonstrict: DualCertificate | None
    primal_nonstrict: list[Fraction] | None
    dual_strict: DualCertificate | None


def check_duality(o: OperatorSystem, budget: int | None = DEFAULT_SELECTION_BUDGET,
                  pattern_budget: int | None = DEFAULT_PATTERN_BUDGET) -> DualityReport:
    report = DualityReport(
        solve_primal(o, True, budget),
        solve_dual(o, False, budget, pattern_budget),
        solve_primal(o, False, budget),
        solve_dual(o, True, budget, pattern_budget),
    )
    if (report.primal_strict is None) == (report.dual_nonstrict is None):
        raise ConsistencyError("strict primal and non-strict dual are not exclusive/exhaustive")
    if (report.primal_nonstrict is None) == (report.dual_strict is None):
        raise ConsistencyError("non-strict primal and strict dual are not exclusive/exhaustive")
    return report


# --------------------------------------------------------------------------
# tropically convex CSP instances

ATOM_ARITY = {"LT": 2, "T+1": 2, "T-1": 2, "S3": 3, "M0": 3}


@dataclass(frozen=True)
class Atom:
    kind: str
    args: tuple[str, ...]

    def __post_init__(self):
        if self.kind not in ATOM_ARITY:
            raise ValueError(f"unknown atom kind {self.kind!r}")
        object.__setattr__(self, "args", tuple(self.args))
        if len(self.args) != ATOM_ARITY[self.kind]:
            raise ValueError(f"{self.kind} takes {ATOM_ARITY[self.kind]} arguments")

    def __str__(self):
        return f"{self.kind}({','.join(self.args)})"


def instance_variables(atoms: Sequence[Atom]) -> list[str]:
    names: list[str] = []
    for atom in atoms:
        for a in atom.args:
            if a not in names:
                names.append(a)
    return names


def atom_literals(atom: Atom, index: dict[str, int]) -> list[Literal]:
    """The defining clause of an atom as ``>=``/``>`` literals."""
    x, y = index[atom.args[0]], index[atom.args[1]]
    if atom.kind == "LT":
        return [Literal.make([(y, 1), (x, -1)], True, 0)]
    if atom.kind == "T+1":
        return [Literal.make([(y, 1), (x, -1)], False, -1)]
    if atom.kind == "T-1":
        return [Literal.make([(y, 1), (x, -1)], False, 1)]
    z = index[atom.args[2]]
    if atom.kind == "S3":
        return [Literal.make([(y, Fraction(1, 2)), (z, Fraction(1, 2)), (x, -1)], False, 0)]
    return [Literal.make([(y, 1), (x, -1)], False, 0), Literal.make([(z, 1), (x, -1)], False, 0)]


def atoms_to_formula(atoms: Sequence[Atom], names: Sequence[str] | None = None) -> Formula:
    names = list(names) if names is not None else instance_variables(atoms)
    index = {v: i for i, v in enumerate(names)}
    return Formula.build([atom_literals(a, index) for a in atoms], len(names), names)


def _atom_operator(atom: Atom, index: dict[str, int]) -> Operator:
    y = index[atom.args[1]]
    if atom.kind == "LT":
        return Max(((y, -EPS),))
    if atom.kind == "T+1":
        return Max(((y, EpsNum(1)),))
    if atom.kind == "T-1":
        return Max(((y, EpsNum(-1)),))
    z = index[atom.args[2]]
    if atom.kind == "S3":
        return Avg(((Fraction(1), y), (Fraction(1), z)), EpsNum(0))
    return Max(((y, EpsNum(0)), (z, EpsNum(0))))


def csp_to_operator_system(atoms: Sequence[Atom]) -> OperatorSystem:
    """Square ``x <= o(x)`` form with ``x < y`` read as ``x <= y - eps``.

    A variable bounded by several atoms is split into copies tied back by a
    min; an unconstrained variable gets the vacuous ``x <= x + 1``.
    """
    names = instance_variables(atoms)
    index = {v: i for i, v in enumerate(names)}
    by_left: dict[str, list[Atom]] = {v: [] for v in names}
    for atom in atoms:
        by_left[atom.args[0]].append(atom)
    ops: list[Operator | None] = [None] * len(names)
    all_names = list(names)
    extra: list[Operator] = []
    for v in names:
        i = index[v]
        bounded = by_left[v]
        if not bounded:
            ops[i] = Max(((i, EpsNum(1)),))
        elif len(bounded) == 1:
            ops[i] = _atom_operator(bounded[0], index)
        else:
            copies = []
            for c, atom in enumerate(bounded, start=1):
                copies.append(len(names) + len(extra))
                extra.append(_atom_operator(atom, index))
                all_names.append(f"{v}#{c}")
            ops[i] = Min(tuple((j, EpsNum(0)) for j in copies))
    return OperatorSystem(tuple(ops) + tuple(extra), tuple(all_names))


@dataclass
class CspSat:
    witness: list[Fraction]
    names: list[str]

    def __bool__(self):
        return True


@dataclass
class CspUnsat:
    certificate: DualCertificate
    system: OperatorSystem

    def __bool__(self):
        return False


def _sat_path(atoms: Sequence[Atom], names: list[str], budget):
    phi = atoms_to_formula(atoms, names)
    found = brute_force_selection(phi, budget)
    if found is None:
        return None
    index = {v: i for i, v in enumerate(names)}
    witness = found[1]
    clauses = [[Row(l.coeffs, l.strict, EpsNum(l.bound)) for l in atom_literals(a, index)]
               for a in atoms]
    if all(w.eps == 0 for w in witness):
        return [w.std for w in witness]
    _, point = instantiate(clauses, witness)
    return point


def solve_csp(atoms: Sequence[Atom], budget: int | None = DEFAULT_SELECTION_BUDGET,
              pattern_budget: int | None = DEFAULT_PATTERN_BUDGET,
              cross_check: bool = True) -> CspSat | CspUnsat:
    """Witness by guessing the active argument of every max; certificate by duality.

    The certificate solves ``y > o_eps(y)`` in the plane, i.e. for every
    sufficiently small positive eps.  With ``cross_check`` both sides are
    computed and a missing or doubled answer raises :class:`ConsistencyError`.
    """
    names = instance_variables(atoms)
    point = _sat_path(atoms, names, budget)
    certificate = None
    system = None
    if point is None or cross_check:
        system = csp_to_operator_system(atoms)
        certificate = solve_dual(system, strict=True, budget=budget, pattern_budget=pattern_budget)
    if point is not None:
        if certificate is not None:
            raise ConsistencyError("instance has both a solution and a dual certificate")
        return CspSat(point, names)
    if certificate is None:
        raise ConsistencyError("instance has neither a solution nor a dual certificate")
    return CspUnsat(certificate, system)


def eval_atoms(atoms: Sequence[Atom], names: Sequence[str], x: Sequence) -> bool:
    phi = atoms_to_formula(atoms, names)
    return all(c.holds(x) for c in phi.clauses)


# --------------------------------------------------------------------------
# satisfiability for all small positive parameter values


@dataclass
class ZeroPlusWitness:
    std: list[Fraction]
    eps: list[Fraction]
    t: Fraction
    point: list[Fraction]


def _v_literal_alternatives(lit: Literal, param: int, others: list[int]):
    """Rows over ``(a, b)`` pairs for ``lit`` holding at ``t = eps``.

    Variable ``others[i]`` has standard part at ``2*i`` and eps part at
    ``2*i + 1``; the parameter contributes only to the eps part.
    """
    std = {}
    eps = {}
    d = Fraction(0)
    for v, c in lit.coeffs:
        if v == param:
            d += c
            continue
        i = others.index(v)
        std[2 * i] = c
        eps[2 * i + 1] = c
    strict_std = Row.make(std, True, lit.bound)
    eq_lo = Row.make(std, False, lit.bound)
    eq_hi = Row.make({k: -c for k, c in std.items()}, False, -lit.bound)
    eps_row = Row.make(eps, lit.strict, -d)
    return [[strict_std], [eq_lo, eq_hi, eps_row]]


def solve_zero_plus(phi: Formula, param: int,
                    budget: int | None = DEFAULT_SELECTION_BUDGET) -> ZeroPlusWitness | None:
    """Decide whether ``phi(t, x)`` is satisfiable for all small ``t > 0``.

    Each variable becomes a pair ``(a, b)`` meaning ``a + b*eps``; a literal
    holds in the plane iff its standard part is positive, or zero with the
    eps part satisfying the original relation.  The resulting disjunctive
    rational system is searched by selection enumeration.
    """
    if not 0 <= param < phi.num_vars:
        raise DimensionError("parameter index out of range")
    others = [v for v in range(phi.num_vars) if v != param]
    groups = []
    for clause in phi.clauses:
        alts = []
        for lit in clause:
            alts.extend(_v_literal_alternatives(lit, param, others))
        groups.append(alts)
    found = first_feasible_selection([], groups, 2 * len(others), budget=budget)
    if found is None:
        return None
    w = found[1]
    a = [w[2 * i].std for i in range(len(others))]
    b = [w[2 * i + 1].std for i in range(len(others))]
    plane = [EpsNum(0)] * phi.num_vars
    for i, v in enumerate(others):
        plane[v] = EpsNum(a[i], b[i])
    plane[param] = EpsNum(0, 1)
    clauses = [[Row(l.coeffs, l.strict, EpsNum(l.bound)) for l in c] for c in phi.clauses]
    t, point = instantiate(clauses, plane)
    return ZeroPlusWitness(a, b, t, point)


def sat_in_zero_plus(phi: Formula, param: int, budget: int | None = DEFAULT_SELECTION_BUDGET) -> bool:
    return solve_zero_plus(phi, param, budget) is not None


# --------------------------------------------------------------------------
# text formats

_OP_LINE = re.compile(r"^\s*([A-Za-z_][\w#']*)\s*:=\s*(max|min|avg)\s*\((.*)\)\s*(.*?)\s*$")
_ARG = re.compile(r"^\s*([A-Za-z_][\w#']*)\s*(.*?)\s*$")
_AVG_ARG = re.compile(r"^\s*(?:(\d+(?:/\d+)?)\s*:)?\s*([A-Za-z_][\w#']*)\s*$")


def _offset(text: str, lineno: int) -> EpsNum:
    if not text.strip():
        return EpsNum(0)
    try:
        return parse_epsnum(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise FormulaSyntaxError(f"bad offset {text!r}: {exc}", lineno, 1) from None


def parse_operator_system(text: str) -> OperatorSystem:
    """Parse lines ``x1 := max(x2 + 1, x3 - eps)``, ``min(...)``, ``avg(2: x1, x2) + 1/3``."""
    parsed = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line
        if not body.strip() or body.lstrip().startswith("#"):
            continue
        m = _OP_LINE.match(body)
        if m is None:
            raise FormulaSyntaxError("expected 'name := max|min|avg(...)'", lineno, 1)
        parsed.append((lineno, m.group(1), m.group(2), m.group(3), m.group(4)))
    names = [p[1] for p in parsed]
    if len(set(names)) != len(names):
        raise FormulaSyntaxError("component defined twice", parsed[-1][0], 1)
    index = {v: i for i, v in enumerate(names)}

    def ref(name, lineno):
        if name not in index:
            raise FormulaSyntaxError(f"undefined component {name!r}", lineno, 1)
        return index[name]

    ops: list[Operator] = []
    for lineno, _, kind, inner, tail in parsed:
        parts = [p for p in inner.split(",")]
        if kind == "avg":
            weighted = []
            for part in parts:
                m = _AVG_ARG.match(part)
                if m is None:
                    raise FormulaSyntaxError(f"bad avg argument {part.strip()!r}", lineno, 1)
                w = Fraction(1) if m.group(1) is None else as_rational(m.group(1))
                weighted.append((w, ref(m.group(2), lineno)))
            ops.append(Avg(tuple(weighted), _offset(tail, lineno)))
            continue
        if tail.strip():
            raise FormulaSyntaxError(f"unexpected text after {kind}(...)", lineno, 1)
        args = []
        for part in parts:
            m = _ARG.match(part)
            if m is None:
                raise FormulaSyntaxError(f"bad argument {part.strip()!r}", lineno, 1)
            args.append((ref(m.group(1), lineno), _offset(m.group(2), lineno)))
        ops.append((Max if kind == "max" else Min)(tuple(args)))
    return OperatorSystem(tuple(ops), tuple(names))


def _fmt_offset(k: EpsNum) -> str:
    if k == EpsNum(0):
        return ""
    text = str(k)
    if text.startswith("-"):
        return f" - {text[1:]}"
    return f" + {text}"


def format_operator(op: Operator, names: Sequence[str]) -> str:
    if isinstance(op, Avg):
        inner = ", ".join(f"{format_rational(w)}: {names[j]}" for w, j in op.weighted)
        tail = _fmt_offset(op.offset)
        return f"avg({inner}){tail}"
    kind = "max" if isinstance(op, Max) else "min"
    inner = ", ".join(f"{names[j]}{_fmt_offset(k)}" for j, k in op.args)
    return f"{kind}({inner})"


def format_operator_system(o: OperatorSystem) -> str:
    return "".join(f"{o.names[i]} := {format_operator(op, o.names)}\n" for i, op in enumerate(o.ops))


_ATOM_RE = re.compile(r"^\s*(LT|T\+1|T-1|S3|M0)\s*\(\s*([^)]*)\)\s*$")


def parse_atoms(text: str) -> list[Atom]:
    atoms = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        m = _ATOM_RE.match(body)
        if m is None:
            raise FormulaSyntaxError(f"unknown atom {body.strip()!r}", lineno, 1)
        args = tuple(a.strip() for a in m.group(2).split(","))
        try:
            atoms.append(Atom(m.group(1), args))
        except ValueError as exc:
            raise FormulaSyntaxError(str(exc), lineno, 1) from None
    return atoms
