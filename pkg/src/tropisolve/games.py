"""Stochastic mean-payoff games built from operator systems.

Values are computed exactly by enumerating pure stationary strategy pairs:
each pair induces a finite Markov chain whose discounted value solves a
linear system and whose limiting average is obtained from its recurrent
classes.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import networkx as nx

from .errors import ConsistencyError, FormulaSyntaxError, LimitExceeded
from .numeric import as_rational, format_rational
from .tropical import Avg, Max, Min, OperatorSystem, solve_dual, solve_primal

MAX, MIN, STOCH = "MAX", "MIN", "STOCH"

DEFAULT_STRATEGY_BUDGET = 10**5


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    payoff: Fraction
    prob: Fraction | None = None


@dataclass(frozen=True)
class Game:
    kinds: tuple[str, ...]
    edges: tuple[Edge, ...]
    names: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kinds", tuple(self.kinds))
        object.__setattr__(self, "edges", tuple(self.edges))
        names = tuple(self.names) or tuple(f"v{i + 1}" for i in range(len(self.kinds)))
        object.__setattr__(self, "names", names)
        self.validate()

    @property
    def n(self) -> int:
        return len(self.kinds)

    def out_edges(self, v: int) -> list[Edge]:
        return [e for e in self.edges if e.src == v]

    def validate(self) -> None:
        for kind in self.kinds:
            if kind not in (MAX, MIN, STOCH):
                raise ValueError(f"unknown vertex kind {kind!r}")
        for e in self.edges:
            if not (0 <= e.src < self.n and 0 <= e.dst < self.n):
                raise ValueError(f"edge {e} leaves the vertex range")
        for v, kind in enumerate(self.kinds):
            out = self.out_edges(v)
            if not out:
                raise ValueError(f"vertex {self.names[v]} has no out-edge")
            if kind == STOCH:
                if any(e.prob is None or e.prob <= 0 for e in out):
                    raise ValueError(f"stochastic vertex {self.names[v]} needs positive probabilities")
                if sum(e.prob for e in out) != 1:
                    raise ValueError(f"probabilities at {self.names[v]} do not sum to 1")
            elif any(e.prob is not None for e in out):
                raise ValueError(f"player vertex {self.names[v]} carries probabilities")


def build_game(o: OperatorSystem) -> Game:
    """One vertex per component, one edge per operator argument."""
    kinds = []
    edges = []
    for i, op in enumerate(o.ops):
        if isinstance(op, Avg):
            if op.offset.eps:
                raise ValueError("games need rational offsets")
            kinds.append(STOCH)
            for w, j in op.normalized():
                edges.append(Edge(i, j, op.offset.std, w))
            continue
        if any(k.eps for _, k in op.args):
            raise ValueError("games need rational offsets")
        kinds.append(MAX if isinstance(op, Max) else MIN)
        for j, k in op.args:
            edges.append(Edge(i, j, k.std))
    return Game(tuple(kinds), tuple(edges), o.names)


# --------------------------------------------------------------------------
# exact linear algebra


def solve_linear(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction]:
    """Gauss-Jordan elimination over the rationals for a nonsingular system."""
    n = len(a)
    m = [row[:] + [rhs] for row, rhs in zip(a, b)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("singular linear system")
        m[col], m[pivot] = m[pivot], m[col]
        inv = 1 / m[col][col]
        m[col] = [x * inv for x in m[col]]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[r][n] for r in range(n)]


def _chain(game: Game, choice: dict[int, Edge]):
    """Transition matrix and expected one-step payoff under fixed choices."""
    n = game.n
    p = [[Fraction(0)] * n for _ in range(n)]
    r = [Fraction(0)] * n
    for v in range(n):
        if game.kinds[v] == STOCH:
            for e in game.out_edges(v):
                p[v][e.dst] += e.prob
                r[v] += e.prob * e.payoff
        else:
            e = choice[v]
            p[v][e.dst] += 1
            r[v] = e.payoff
    return p, r


def _recurrent_classes(p: list[list[Fraction]]) -> list[list[int]]:
    g = nx.DiGraph()
    g.add_nodes_from(range(len(p)))
    g.add_edges_from((u, w) for u, row in enumerate(p) for w, x in enumerate(row) if x)
    return sorted(sorted(c) for c in nx.attracting_components(g))


def _stationary(p: list[list[Fraction]], cls: list[int]) -> dict[int, Fraction]:
    """Unique stationary distribution of an irreducible class."""
    k = len(cls)
    # mu (P - I) = 0 with one equation replaced by sum(mu) = 1
    a = [[p[cls[j]][cls[i]] - (1 if i == j else 0) for j in range(k)] for i in range(k)]
    b = [Fraction(0)] * k
    a[-1] = [Fraction(1)] * k
    b[-1] = Fraction(1)
    mu = solve_linear(a, b)
    return dict(zip(cls, mu))


def chain_gain(p: list[list[Fraction]], r: list[Fraction]) -> list[Fraction]:
    """Expected limiting average from every start state of a finite chain."""
    n = len(p)
    classes = _recurrent_classes(p)
    gain = [None] * n
    class_gain = []
    for cls in classes:
        mu = _stationary(p, cls)
        g = sum((mu[v] * r[v] for v in cls), Fraction(0))
        class_gain.append(g)
        for v in cls:
            gain[v] = g
    transient = [v for v in range(n) if gain[v] is None]
    if transient:
        idx = {v: i for i, v in enumerate(transient)}
        a = [[(1 if i == j else 0) - p[u][w] for j, w in enumerate(transient)]
             for i, u in enumerate(transient)]
        total = [Fraction(0)] * len(transient)
        for cls, g in zip(classes, class_gain):
            rhs = [sum((p[u][w] for w in cls), Fraction(0)) for u in transient]
            h = solve_linear(a, rhs)
            total = [t + hi * g for t, hi in zip(total, h)]
        for v in transient:
            gain[v] = total[idx[v]]
    return gain


def chain_discounted(p: list[list[Fraction]], r: list[Fraction], beta: Fraction) -> list[Fraction]:
    n = len(p)
    a = [[(1 if i == j else 0) - beta * p[i][j] for j in range(n)] for i in range(n)]
    return solve_linear(a, [(1 - beta) * x for x in r])


def _strategies(game: Game, kind: str):
    verts = [v for v in range(game.n) if game.kinds[v] == kind]
    options = [game.out_edges(v) for v in verts]
    for combo in itertools.product(*options):
        yield dict(zip(verts, combo))


def _count(game: Game, kind: str) -> int:
    return math.prod(len(game.out_edges(v)) for v in range(game.n) if game.kinds[v] == kind)


def _maxmin(game: Game, evaluate, budget: int | None) -> list[Fraction]:
    pairs = _count(game, MAX) * _count(game, MIN)
    if budget is not None and pairs > budget:
        raise LimitExceeded(f"{pairs} strategy pairs exceed the budget of {budget}")
    best = None
    for sigma in _strategies(game, MAX):
        worst = None
        for tau in _strategies(game, MIN):
            vals = evaluate(*_chain(game, {**sigma, **tau}))
            worst = vals if worst is None else [min(a, b) for a, b in zip(worst, vals)]
        best = worst if best is None else [max(a, b) for a, b in zip(best, worst)]
    return best


def limiting_average_values(game: Game, budget: int | None = DEFAULT_STRATEGY_BUDGET) -> list[Fraction]:
    """Value of the limiting average game, as max-min over stationary pairs."""
    return _maxmin(game, chain_gain, budget)


def discounted_values(game: Game, beta, budget: int | None = DEFAULT_STRATEGY_BUDGET) -> list[Fraction]:
    beta = as_rational(beta)
    if not 0 <= beta < 1:
        raise ValueError("discount factor must lie in [0, 1)")
    return _maxmin(game, lambda p, r: chain_discounted(p, r, beta), budget)


def discount_equation_residual(game: Game, beta, values: Sequence[Fraction]) -> list[Fraction]:
    """Per-vertex difference between both sides of the discounted fixpoint equation."""
    beta = as_rational(beta)
    res = []
    for v in range(game.n):
        terms = [((1 - beta) * e.payoff + beta * values[e.dst], e) for e in game.out_edges(v)]
        if game.kinds[v] == MAX:
            rhs = max(t for t, _ in terms)
        elif game.kinds[v] == MIN:
            rhs = min(t for t, _ in terms)
        else:
            rhs = sum((e.prob * t for t, e in terms), Fraction(0))
        res.append(values[v] - rhs)
    return res


@dataclass
class GameCrossCheck:
    values: list[Fraction]
    primal: list[Fraction] | None
    dual: object | None


def cross_check_duality(o: OperatorSystem, budget: int | None = DEFAULT_STRATEGY_BUDGET) -> GameCrossCheck:
    """Primal solvable iff every value is positive; dual iff some value is <= 0."""
    values = limiting_average_values(build_game(o), budget)
    primal = solve_primal(o, strict=True)
    dual = solve_dual(o, strict=False)
    if all(v > 0 for v in values) != (primal is not None):
        raise ConsistencyError(f"primal verdict disagrees with game values {values}")
    if any(v <= 0 for v in values) != (dual is not None):
        raise ConsistencyError(f"dual verdict disagrees with game values {values}")
    return GameCrossCheck(values, primal, dual)


# --------------------------------------------------------------------------
# text format

_VERTEX = re.compile(r"^([A-Za-z_][\w']*):(MAX|MIN|STOCH)$")
_EDGE = re.compile(
    r"^\s*([A-Za-z_][\w']*)\s*->\s*([A-Za-z_][\w']*)\s+payoff\s+(\S+)(?:\s+prob\s+(\S+))?\s*$")


def parse_game(text: str) -> Game:
    """``vertices: v1:MAX v2:STOCH`` then edges ``v1 -> v2 payoff 3/2 [prob 1/3]``."""
    names: list[str] = []
    kinds: list[str] = []
    edges = []
    header_seen = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if not header_seen:
            if not body.startswith("vertices:"):
                raise FormulaSyntaxError("expected 'vertices:' header", lineno, 1)
            for tok in body[len("vertices:"):].split():
                m = _VERTEX.match(tok)
                if m is None:
                    raise FormulaSyntaxError(f"bad vertex declaration {tok!r}", lineno, 1)
                names.append(m.group(1))
                kinds.append(m.group(2))
            header_seen = True
            continue
        m = _EDGE.match(body)
        if m is None:
            raise FormulaSyntaxError("expected 'u -> v payoff p [prob q]'", lineno, 1)
        src, dst, payoff, prob = m.groups()
        for name in (src, dst):
            if name not in names:
                raise FormulaSyntaxError(f"undeclared vertex {name!r}", lineno, 1)
        try:
            edges.append(Edge(names.index(src), names.index(dst), as_rational(payoff),
                              None if prob is None else as_rational(prob)))
        except (ValueError, ZeroDivisionError) as exc:
            raise FormulaSyntaxError(str(exc), lineno, 1) from None
    if not header_seen:
        raise FormulaSyntaxError("empty game", 1, 1)
    return Game(tuple(kinds), tuple(edges), tuple(names))


def format_game(game: Game) -> str:
    lines = ["vertices: " + " ".join(f"{n}:{k}" for n, k in zip(game.names, game.kinds))]
    for e in game.edges:
        line = f"{game.names[e.src]} -> {game.names[e.dst]} payoff {format_rational(e.payoff)}"
        if e.prob is not None:
            line += f" prob {format_rational(e.prob)}"
        lines.append(line)
    return "\n".join(lines) + "\n"
