"""Exact linear feasibility by Fourier-Motzkin elimination.

Rows read ``sum_j a_j x_j >= b`` or ``> b`` with rational coefficients and
bounds in the lexicographic plane (:class:`EpsNum`), so strict inequalities
and first-order perturbations are decided exactly.  Infeasible systems come
with Farkas-style multipliers; feasible ones with a witness built by
back-substitution.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DimensionError, LimitExceeded
from .numeric import EpsNum, as_rational

__all__ = [
    "Row",
    "LinSystem",
    "Feasible",
    "Infeasible",
    "fm_feasible",
    "fm_project",
    "implies",
    "check_certificate",
    "first_feasible_selection",
    "iter_feasible_selections",
    "row_threshold",
    "selection_threshold",
]

_ZERO = EpsNum(0, 0)


@dataclass(frozen=True)
class Row:
    coeffs: tuple[tuple[int, Fraction], ...]
    strict: bool
    bound: EpsNum

    @classmethod
    def make(cls, coeffs: Mapping[int, object] | Iterable[tuple[int, object]],
             strict: bool, bound) -> "Row":
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, Fraction] = {}
        for var, c in items:
            acc[var] = acc.get(var, Fraction(0)) + as_rational(c)
        packed = tuple(sorted((v, c) for v, c in acc.items() if c != 0))
        return cls(packed, bool(strict), EpsNum.lift(bound))

    def lhs(self, x: Sequence) -> EpsNum:
        total = _ZERO
        for v, c in self.coeffs:
            total = total + EpsNum.lift(x[v]) * c
        return total

    def holds(self, x: Sequence) -> bool:
        value = self.lhs(x)
        return value > self.bound if self.strict else value >= self.bound

    def negate(self) -> "Row":
        return Row(tuple((v, -c) for v, c in self.coeffs), not self.strict, -self.bound)

    def variables(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.coeffs)


@dataclass
class LinSystem:
    num_vars: int
    rows: list[Row] = field(default_factory=list)

    def __post_init__(self):
        for row in self.rows:
            for v in row.variables():
                if not 0 <= v < self.num_vars:
                    raise DimensionError(f"row mentions variable {v} outside 0..{self.num_vars - 1}")


@dataclass
class Feasible:
    witness: list[EpsNum]

    def __bool__(self):
        return True


@dataclass
class Infeasible:
    """``certificate`` maps input row index to a nonnegative multiplier."""

    certificate: dict[int, Fraction]

    def __bool__(self):
        return False


class _Work:
    __slots__ = ("c", "strict", "bound", "mult")

    def __init__(self, c, strict, bound, mult):
        self.c = c
        self.strict = strict
        self.bound = bound
        self.mult = mult

    def key(self):
        return tuple(sorted((v, a.numerator, a.denominator) for v, a in self.c.items()))

    def contradictory(self) -> bool:
        # all-zero row: 0 >= b or 0 > b
        return self.bound > _ZERO or (self.strict and self.bound == _ZERO)

    def normalized(self) -> "_Work":
        lead = abs(self.c[min(self.c)])
        if lead == 1:
            return self
        inv = 1 / lead
        return _Work({v: a * inv for v, a in self.c.items()}, self.strict, self.bound * inv,
                     {i: m * inv for i, m in self.mult.items()})


def _combine(p: _Work, n: _Work, var: int) -> _Work:
    a = p.c[var]
    b = -n.c[var]
    coeffs = {}
    for v, x in p.c.items():
        if v != var:
            coeffs[v] = b * x
    for v, x in n.c.items():
        if v != var:
            y = coeffs.get(v, 0) + a * x
            if y:
                coeffs[v] = y
            else:
                coeffs.pop(v, None)
    coeffs = {v: x for v, x in coeffs.items() if x}
    mult = {i: m * b for i, m in p.mult.items()}
    for i, m in n.mult.items():
        mult[i] = mult.get(i, 0) + m * a
    return _Work(coeffs, p.strict or n.strict, p.bound * b + n.bound * a, mult)


class _Contradiction(Exception):
    def __init__(self, row: _Work):
        self.row = row


def _tighter(r: _Work, s: _Work) -> bool:
    if r.bound != s.bound:
        return r.bound > s.bound
    return r.strict and not s.strict


def _admit(pool: dict, row: _Work) -> None:
    if not row.c:
        if row.contradictory():
            raise _Contradiction(row)
        return
    row = row.normalized()
    key = row.key()
    old = pool.get(key)
    if old is None or _tighter(row, old):
        pool[key] = row


def _initial(rows: Sequence[Row]) -> dict:
    pool: dict = {}
    for i, row in enumerate(rows):
        coeffs = {v: Fraction(c) for v, c in row.coeffs}
        _admit(pool, _Work(coeffs, row.strict, row.bound, {i: Fraction(1)}))
    return pool


def _eliminate(pool: dict, var: int):
    pos, neg, rest = [], [], {}
    for key, row in pool.items():
        a = row.c.get(var)
        if a is None:
            rest[key] = row
        elif a.numerator > 0:
            pos.append(row)
        else:
            neg.append(row)
    for p in pos:
        for n in neg:
            _admit(rest, _combine(p, n, var))
    return rest, pos + neg


def _pick(lower, lower_strict, upper, upper_strict):
    if lower is not None and upper is not None:
        if lower == upper:
            return lower
        return (lower + upper) / 2
    if lower is not None:
        return lower + 1
    if upper is not None:
        return upper - 1
    return _ZERO


def _next_var(pool: dict, remaining: set, order: str) -> int:
    if order == "index":
        return min(remaining)
    pos: dict[int, int] = {}
    neg: dict[int, int] = {}
    for row in pool.values():
        for v, a in row.c.items():
            if a.numerator > 0:
                pos[v] = pos.get(v, 0) + 1
            else:
                neg[v] = neg.get(v, 0) + 1
    # greedy: fewest new rows created, ties by index
    return min(remaining, key=lambda v: (pos.get(v, 0) * neg.get(v, 0) - pos.get(v, 0) - neg.get(v, 0), v))


def fm_feasible(system: LinSystem, order: str = "index") -> Feasible | Infeasible:
    """Decide feasibility by eliminating every variable.

    ``order="index"`` eliminates in ascending index order; ``"greedy"`` picks
    the variable producing the fewest combined rows at each step.
    """
    remaining = set(range(system.num_vars))
    steps = []
    try:
        pool = _initial(system.rows)
        while remaining:
            var = _next_var(pool, remaining, order)
            remaining.discard(var)
            pool, touched = _eliminate(pool, var)
            steps.append((var, touched))
    except _Contradiction as exc:
        return Infeasible({i: m for i, m in exc.row.mult.items() if m})

    x: list[EpsNum] = [_ZERO] * system.num_vars
    for var, touched in reversed(steps):
        lower = upper = None
        lower_strict = upper_strict = False
        for row in touched:
            a = row.c[var]
            rest = row.bound
            for v, c in row.c.items():
                if v != var:
                    rest = rest - x[v] * c
            value = rest / a
            if a > 0:
                if lower is None or value > lower or (value == lower and row.strict):
                    lower, lower_strict = value, row.strict
            else:
                if upper is None or value < upper or (value == upper and row.strict):
                    upper, upper_strict = value, row.strict
        x[var] = _pick(lower, lower_strict, upper, upper_strict)
    return Feasible(x)


def check_certificate(system: LinSystem, certificate: Mapping[int, Fraction]) -> bool:
    """Recompute the certified combination and confirm it is contradictory."""
    if not certificate or any(m < 0 for m in certificate.values()):
        return False
    coeffs: dict[int, Fraction] = {}
    bound = _ZERO
    strict = False
    for i, m in certificate.items():
        if m == 0:
            continue
        row = system.rows[i]
        for v, c in row.coeffs:
            coeffs[v] = coeffs.get(v, 0) + m * c
        bound = bound + row.bound * m
        strict = strict or row.strict
    if any(c != 0 for c in coeffs.values()):
        return False
    return bound > _ZERO or (strict and bound == _ZERO)


def fm_project(system: LinSystem, keep: Iterable[int], order: str = "index") -> LinSystem:
    """Project onto ``keep``; an empty projection is returned as ``0 > 0``."""
    keep = set(keep)
    remaining = set(range(system.num_vars)) - keep
    try:
        pool = _initial(system.rows)
        while remaining:
            var = _next_var(pool, remaining, order)
            remaining.discard(var)
            pool, _ = _eliminate(pool, var)
    except _Contradiction:
        return LinSystem(system.num_vars, [Row((), True, _ZERO)])
    rows = [Row(tuple(sorted(r.c.items())), r.strict, r.bound) for r in pool.values()]
    return LinSystem(system.num_vars, rows)


def implies(system: LinSystem, row: Row) -> bool:
    """``system`` entails ``row`` iff ``system & not row`` is infeasible."""
    return not fm_feasible(LinSystem(system.num_vars, list(system.rows) + [row.negate()]))


def iter_feasible_selections(base: Sequence[Row], groups: Sequence[Sequence[Sequence[Row]]],
                             num_vars: int, budget: int | None = 10**6, order: str = "index"):
    """Yield ``(choice_indices, rows, witness)`` for every feasible selection.

    One alternative (a list of rows) is taken from each group; alternatives
    are tried in lexicographic order and infeasible prefixes are pruned.
    """
    if budget is not None:
        total = math.prod(len(g) for g in groups)
        if total > budget:
            raise LimitExceeded(f"{total} selections exceed the budget of {budget}")
    if any(len(g) == 0 for g in groups):
        return
    base = list(base)
    result = fm_feasible(LinSystem(num_vars, base), order)
    if not result:
        return
    if not groups:
        yield [], base, result.witness
        return

    choice: list[int] = []

    def search(rows: list[Row], depth: int):
        for i, alt in enumerate(groups[depth]):
            extended = rows + list(alt)
            res = fm_feasible(LinSystem(num_vars, extended), order)
            if not res:
                continue
            choice.append(i)
            if depth + 1 == len(groups):
                yield list(choice), extended, res.witness
            else:
                yield from search(extended, depth + 1)
            choice.pop()

    yield from search(base, 0)


def first_feasible_selection(base: Sequence[Row], groups: Sequence[Sequence[Sequence[Row]]],
                             num_vars: int, budget: int | None = 10**6, order: str = "index"):
    """First feasible selection in lexicographic order as ``(choice, witness)``, or ``None``."""
    for choice, _, witness in iter_feasible_selections(base, groups, num_vars, budget, order):
        return choice, witness
    return None


# --------------------------------------------------------------------------
# concrete instantiation of eps


def row_threshold(row: Row, x: Sequence[EpsNum]):
    """Largest ``t`` such that ``row`` holds at ``eps = t`` on ``(0, t]``.

    ``x`` is a witness in the plane, each coordinate read as ``a + b*t``.
    Returns ``None`` for "every t > 0", ``0`` when ``row`` fails in the plane.
    For strict rows the returned value is a supremum.
    """
    value = row.lhs(x) - row.bound
    if not (value.sign() > 0 or (value.sign() == 0 and not row.strict)):
        return Fraction(0)
    if value.std == 0 or value.eps >= 0:
        return None
    return value.std / -value.eps


def selection_threshold(clauses: Sequence[Sequence[Row]], x: Sequence[EpsNum]):
    """Minimum over clauses of the best literal threshold (``None`` = unbounded)."""
    best_overall = None
    for clause in clauses:
        best = Fraction(0)
        unbounded = False
        for row in clause:
            t = row_threshold(row, x)
            if t is None:
                unbounded = True
                break
            best = max(best, t)
        if unbounded:
            continue
        if best_overall is None or best < best_overall:
            best_overall = best
    return best_overall


def instantiate(clauses: Sequence[Sequence[Row]], x: Sequence[EpsNum]):
    """Return ``(t, point)`` with ``t > 0`` rational and ``point = a + b*t``.

    ``t`` is half the threshold, or ``1`` when every positive ``t`` works.
    """
    t0 = selection_threshold(clauses, x)
    if t0 is not None and t0 <= 0:
        raise ValueError("witness does not satisfy the system in the plane")
    t = Fraction(1) if t0 is None else t0 / 2
    return t, [EpsNum.lift(v).at(t) for v in x]
