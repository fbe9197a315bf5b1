"""Semilinear Horn formulas: data model, text format and classifiers.

A literal ``sum a_j x_j >= c`` (or ``>``) is stored with non-strict/strict
relations only; ``<=`` and ``<`` are negated on input.  A clause is a
disjunction of literals and a formula is a conjunction of clauses.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import DimensionError, FormulaSyntaxError, LimitExceeded
from .numeric import as_rational, format_rational

GEQ = ">="
GT = ">"

_CANONICAL_NAME = re.compile(r"^x([1-9]\d*)$")


@dataclass(frozen=True)
class Literal:
    """``coeffs . x  rel  bound`` with ``rel`` in {``>=``, ``>``}."""

    coeffs: tuple[tuple[int, Fraction], ...]
    strict: bool
    bound: Fraction

    @classmethod
    def make(cls, coeffs: Mapping[int, object] | Iterable[tuple[int, object]],
             strict: bool, bound) -> "Literal":
        items = coeffs.items() if isinstance(coeffs, Mapping) else coeffs
        acc: dict[int, Fraction] = {}
        for var, c in items:
            acc[var] = acc.get(var, Fraction(0)) + as_rational(c)
        packed = tuple(sorted((v, c) for v, c in acc.items() if c != 0))
        return cls(packed, bool(strict), as_rational(bound))

    @property
    def relation(self) -> str:
        return GT if self.strict else GEQ

    def coeff_map(self) -> dict[int, Fraction]:
        return dict(self.coeffs)

    def coeff(self, var: int) -> Fraction:
        for v, c in self.coeffs:
            if v == var:
                return c
        return Fraction(0)

    def variables(self) -> tuple[int, ...]:
        return tuple(v for v, _ in self.coeffs)

    def has_negative(self) -> bool:
        return any(c < 0 for _, c in self.coeffs)

    def negative_columns(self) -> set[int]:
        return {v for v, c in self.coeffs if c < 0}

    def lhs(self, x: Sequence[Fraction]):
        return sum((c * x[v] for v, c in self.coeffs), Fraction(0))

    def holds(self, x: Sequence) -> bool:
        value = self.lhs(x)
        return value > self.bound if self.strict else value >= self.bound

    def negate(self) -> "Literal":
        """``not (a.x >= c)`` is ``-a.x > -c``; ``not (a.x > c)`` is ``-a.x >= -c``."""
        return Literal(tuple((v, -c) for v, c in self.coeffs), not self.strict, -self.bound)

    def coefficient_sum(self) -> Fraction:
        return sum((c for _, c in self.coeffs), Fraction(0))


@dataclass(frozen=True)
class Clause:
    literals: tuple[Literal, ...]

    def __post_init__(self):
        object.__setattr__(self, "literals", tuple(self.literals))

    def __len__(self):
        return len(self.literals)

    def __iter__(self):
        return iter(self.literals)

    @property
    def is_unit(self) -> bool:
        return len(self.literals) == 1

    @property
    def is_empty(self) -> bool:
        return not self.literals

    def holds(self, x: Sequence) -> bool:
        return any(lit.holds(x) for lit in self.literals)


@dataclass(frozen=True)
class Formula:
    """Conjunction of clauses over ``num_vars`` variables.

    ``exists`` lists variable indices that are existentially quantified
    (used by compiled primitive positive formulas); the remaining variables
    are free.
    """

    num_vars: int
    var_names: tuple[str, ...]
    clauses: tuple[Clause, ...]
    exists: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "var_names", tuple(self.var_names))
        object.__setattr__(self, "clauses", tuple(self.clauses))
        object.__setattr__(self, "exists", frozenset(self.exists))
        if len(self.var_names) != self.num_vars:
            raise DimensionError("one name per variable required")
        for clause in self.clauses:
            for lit in clause:
                for v in lit.variables():
                    if not 0 <= v < self.num_vars:
                        raise DimensionError(f"variable index {v} out of range")

    @classmethod
    def build(cls, clauses: Iterable[Iterable[Literal]], num_vars: int | None = None,
              var_names: Sequence[str] | None = None, exists=()) -> "Formula":
        cl = tuple(Clause(tuple(c)) for c in clauses)
        if num_vars is None:
            used = [v for c in cl for lit in c for v in lit.variables()]
            num_vars = max(used) + 1 if used else 0
        if var_names is None:
            var_names = tuple(f"x{i + 1}" for i in range(num_vars))
        return cls(num_vars, tuple(var_names), cl, frozenset(exists))

    @property
    def free_vars(self) -> list[int]:
        return [i for i in range(self.num_vars) if i not in self.exists]

    def literals(self) -> Iterable[Literal]:
        for clause in self.clauses:
            yield from clause

    def __str__(self):
        return format_formula(self)


# --------------------------------------------------------------------------
# text format


def _fmt_term(coef: Fraction, name: str, first: bool) -> str:
    sign = "-" if coef < 0 else "+"
    mag = abs(coef)
    body = name if mag == 1 else f"{format_rational(mag)}*{name}"
    if first:
        return f"-{body}" if coef < 0 else body
    return f" {sign} {body}"


def format_literal(lit: Literal, names: Sequence[str]) -> str:
    if not lit.coeffs:
        lhs = "0"
    else:
        lhs = "".join(_fmt_term(c, names[v], i == 0) for i, (v, c) in enumerate(lit.coeffs))
    return f"{lhs} {lit.relation} {format_rational(lit.bound)}"


def format_clause(clause: Clause, names: Sequence[str]) -> str:
    if clause.is_empty:
        return "FALSE"
    return " | ".join(format_literal(lit, names) for lit in clause)


def format_formula(phi: Formula) -> str:
    return "".join(format_clause(c, phi.var_names) + "\n" for c in phi.clauses)


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<ident>[A-Za-z_][A-Za-z0-9_']*)|"
    r"(?P<rel>[<>=!]+)|(?P<op>[+\-*/|]))"
)


class _ClauseParser:
    """Recursive-descent parser for one line of the formula format.

    Variables and constants may appear on either side of the relation.
    """

    def __init__(self, text: str, lineno: int, names: dict[str, int]):
        self.text = text
        self.lineno = lineno
        self.names = names
        self.tokens = self._tokenize()
        self.pos = 0

    def _tokenize(self):
        tokens = []
        pos = 0
        text = self.text
        while pos < len(text):
            if text[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(text, pos)
            if m is None or m.end() == pos:
                raise FormulaSyntaxError(
                    f"unexpected character {text[pos]!r}", self.lineno, pos + 1)
            kind = m.lastgroup
            start = m.start(kind)
            tokens.append((kind, m.group(kind), start + 1))
            pos = m.end()
        tokens.append(("eof", "", len(text) + 1))
        return tokens

    def peek(self):
        return self.tokens[self.pos]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        raise FormulaSyntaxError(msg, self.lineno, tok[2])

    def parse_clause(self) -> list[Literal]:
        lits = [self.parse_literal()]
        while self.peek()[:2] == ("op", "|"):
            self.take()
            lits.append(self.parse_literal())
        if self.peek()[0] != "eof":
            self.error(f"unexpected token {self.peek()[1]!r}")
        return lits

    def parse_literal(self) -> Literal:
        left, lconst = self.parse_linexpr()
        tok = self.take()
        if tok[0] != "rel":
            self.error("missing relation symbol", tok)
        if tok[1] not in (">=", "<=", ">", "<"):
            self.error(f"unknown relation symbol {tok[1]!r}", tok)
        right, rconst = self.parse_linexpr()
        rel = tok[1]
        # move everything to the form  sum (left - right) x  rel  rconst - lconst
        coeffs = dict(left)
        for v, c in right.items():
            coeffs[v] = coeffs.get(v, Fraction(0)) - c
        bound = rconst - lconst
        if rel in ("<=", "<"):
            coeffs = {v: -c for v, c in coeffs.items()}
            bound = -bound
        return Literal.make(coeffs, rel in (">", "<"), bound)

    def parse_linexpr(self):
        coeffs: dict[int, Fraction] = {}
        const = Fraction(0)
        sign = Fraction(1)
        tok = self.peek()
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = Fraction(-1) if tok[1] == "-" else Fraction(1)
        while True:
            coef, var = self.parse_sterm()
            if var is None:
                const += sign * coef
            else:
                coeffs[var] = coeffs.get(var, Fraction(0)) + sign * coef
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                sign = Fraction(-1) if tok[1] == "-" else Fraction(1)
                continue
            return coeffs, const

    def _number(self, tok) -> Fraction:
        try:
            return as_rational(tok[1])
        except (ValueError, ZeroDivisionError) as exc:
            raise FormulaSyntaxError(f"malformed rational {tok[1]!r}: {exc}",
                                     self.lineno, tok[2]) from None

    def parse_sterm(self):
        """``q``, ``q*x``, ``x`` or ``x/q``."""
        tok = self.take()
        if tok[0] == "num":
            coef = self._number(tok)
            if self.peek()[:2] == ("op", "*"):
                self.take()
                ident = self.take()
                if ident[0] != "ident":
                    self.error("expected identifier after '*'", ident)
                return coef, self._var(ident[1])
            return coef, None
        if tok[0] == "ident":
            var = self._var(tok[1])
            if self.peek()[:2] == ("op", "/"):
                self.take()
                num = self.take()
                if num[0] != "num" or "/" in num[1]:
                    self.error("expected integer divisor after '/'", num)
                d = self._number(num)
                if d == 0:
                    self.error("division by zero", num)
                return 1 / d, var
            return Fraction(1), var
        self.error(f"expected term, found {tok[1] or 'end of line'!r}", tok)

    def _var(self, name: str) -> int:
        if name not in self.names:
            self.names[name] = len(self.names)
        return self.names[name]


def parse_formula(text: str) -> Formula:
    """Parse the line-oriented clause format.

    If every identifier has the form ``x<N>`` the variable ``xN`` gets index
    ``N-1``; otherwise identifiers are numbered by first occurrence.
    """
    names: dict[str, int] = {}
    raw: list[list[Literal]] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0]
        if not body.strip():
            continue
        raw.append(_ClauseParser(body, lineno, names).parse_clause())
    if names and all(_CANONICAL_NAME.match(n) for n in names):
        remap = {idx: int(_CANONICAL_NAME.match(n).group(1)) - 1 for n, idx in names.items()}
        num_vars = max(remap.values()) + 1
        var_names = [f"x{i + 1}" for i in range(num_vars)]
        raw = [[Literal.make([(remap[v], c) for v, c in lit.coeffs], lit.strict, lit.bound)
                for lit in clause] for clause in raw]
    else:
        num_vars = len(names)
        var_names = [None] * num_vars
        for n, idx in names.items():
            var_names[idx] = n
    return Formula.build(raw, num_vars=num_vars, var_names=var_names)


# --------------------------------------------------------------------------
# classifiers


def horn_columns(clause: Clause, num_vars: int) -> set[int]:
    """Columns ``k`` outside of which every coefficient is nonnegative."""
    negative: set[int] = set()
    for lit in clause:
        negative |= lit.negative_columns()
    if len(negative) > 1:
        return set()
    if negative:
        return set(negative)
    return set(range(num_vars))


def is_horn(phi: Formula) -> bool:
    return all(horn_columns(c, phi.num_vars) or phi.num_vars == 0 for c in phi.clauses)


def restricted_horn_witnesses(phi: Formula) -> list[tuple[int | None, int | None]] | None:
    """Per-clause ``(k, l)``: a Horn column and the positive literal index.

    ``None`` entries mean "no such column/literal needed" (no negative
    coefficient anywhere).  Returns ``None`` when ``phi`` is not restricted.
    """
    witnesses = []
    for clause in phi.clauses:
        cols = horn_columns(clause, phi.num_vars)
        if not cols and clause.literals and phi.num_vars:
            return None
        positive = [i for i, lit in enumerate(clause) if lit.has_negative()]
        if len(positive) > 1:
            return None
        k = min(cols) if cols else None
        witnesses.append((k, positive[0] if positive else None))
    return witnesses


def is_restricted_horn(phi: Formula) -> bool:
    return restricted_horn_witnesses(phi) is not None


def is_tropically_convex_syntactic(phi: Formula) -> bool:
    """Horn with every literal's coefficients summing to zero."""
    return is_horn(phi) and all(lit.coefficient_sum() == 0 for lit in phi.literals())


MAX_SEMANTIC_VARS = 6


def is_max_closed_semantic(phi: Formula, budget: int = 10**6) -> bool:
    """Decide whether the solution set of ``phi`` is closed under max.

    For each of the ``2**n`` patterns fixing which of two points is larger in
    each coordinate, the max becomes a linear substitution; closure then
    reduces to infeasibility checks of ``X(x) & X(y) & pattern & not C(z)``.
    """
    from .lp import Row, first_feasible_selection

    n = phi.num_vars
    if n > MAX_SEMANTIC_VARS:
        raise LimitExceeded(f"semantic max-closure check limited to {MAX_SEMANTIC_VARS} variables")

    def shifted(lit: Literal, offset: int) -> Row:
        return Row.make({v + offset: c for v, c in lit.coeffs}, lit.strict, lit.bound)

    x_groups = [[[shifted(l, 0)] for l in c] for c in phi.clauses]
    y_groups = [[[shifted(l, n)] for l in c] for c in phi.clauses]
    for pattern in itertools.product((True, False), repeat=n):
        pattern_rows = []
        for j, x_wins in enumerate(pattern):
            if x_wins:  # ties fold into this branch
                pattern_rows.append(Row.make({j: 1, n + j: -1}, False, 0))
            else:
                pattern_rows.append(Row.make({n + j: 1, j: -1}, True, 0))
        pick = [j if x_wins else n + j for j, x_wins in enumerate(pattern)]
        for clause in phi.clauses:
            negated = []
            for lit in clause:
                neg = lit.negate()
                negated.append(Row.make({pick[v]: c for v, c in neg.coeffs}, neg.strict, neg.bound))
            found = first_feasible_selection(
                pattern_rows + negated, x_groups + y_groups, 2 * n, budget=budget, order="greedy")
            if found is not None:
                return False
    return True


def eval_point(phi: Formula, x: Sequence) -> bool:
    if len(x) != phi.num_vars:
        raise DimensionError(f"expected {phi.num_vars} coordinates, got {len(x)}")
    return all(c.holds(x) for c in phi.clauses)


def shift_point(x: Sequence, c) -> list:
    c = as_rational(c)
    return [xi + c for xi in x]
