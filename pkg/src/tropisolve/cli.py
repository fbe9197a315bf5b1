"""Command-line front end.

Exit codes: 0 SAT/true, 1 UNSAT/false, 2 usage or input error, 3 budget
exceeded, 4 internal consistency violation.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

from .errors import ConsistencyError, FormulaSyntaxError, LimitExceeded, PreconditionError
from .formula import (MAX_SEMANTIC_VARS, format_literal, horn_columns, is_horn,
                      is_max_closed_semantic, is_restricted_horn, is_tropically_convex_syntactic,
                      parse_formula)
from .games import (DEFAULT_STRATEGY_BUDGET, build_game, discounted_values, format_game,
                    limiting_average_values, parse_game)
from .horn_solver import DEFAULT_SELECTION_BUDGET, brute_force_sat, solve_restricted
from .numeric import ExtVal, format_rational, parse_rational
from .ppcompile import compile_gamma0, compile_gamma_t
from .selftest import run_selftest
from .tropical import (DEFAULT_PATTERN_BUDGET, check_duality, parse_atoms,
                       parse_operator_system, solve_csp)

EXIT_TRUE, EXIT_FALSE, EXIT_INPUT, EXIT_BUDGET, EXIT_CONSISTENCY = 0, 1, 2, 3, 4

log = logging.getLogger("tropisolve")


def _fmt(value) -> str:
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, ExtVal):
        return "+inf" if value.is_inf else _fmt(value.value)
    return str(value)


def _vec(values) -> str:
    return "(" + ", ".join(_fmt(v) for v in values) + ")"


def _jvec(values) -> list[str]:
    return [_fmt(v) for v in values]


def _positive_int(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _env_budget() -> int | None:
    raw = os.environ.get("TROPISOLVE_BUDGET")
    if raw is None:
        return None
    try:
        return _positive_int(raw)
    except (ValueError, argparse.ArgumentTypeError):
        raise SystemExit(f"tropisolve: TROPISOLVE_BUDGET must be a positive integer, got {raw!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--selection-budget", type=_positive_int, default=None,
                        help="limit on literal selections")
    common.add_argument("--pattern-budget", type=_positive_int, default=None,
                        help="limit on dual finiteness patterns")
    common.add_argument("--strategy-budget", type=_positive_int, default=None,
                        help="limit on strategy pairs")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="tropisolve", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("classify", parents=[common], help="Horn / restricted / tropical verdicts")
    p.add_argument("file")
    p = sub.add_parser("solve", parents=[common], help="decide a Horn formula")
    p.add_argument("file")
    p = sub.add_parser("tropical", parents=[common], help="solve a tropically convex CSP instance")
    p.add_argument("file")
    p = sub.add_parser("duality", parents=[common], help="primal/dual problems of an operator system")
    p.add_argument("file")
    p = sub.add_parser("game", parents=[common], help="values of the associated stochastic game")
    p.add_argument("file")
    p.add_argument("--beta", default="999/1000", help="discount factor in [0,1)")
    p = sub.add_parser("compile", parents=[common], help="compile to a pp formula")
    p.add_argument("file")
    p.add_argument("--target", choices=("gamma0", "gammat"), default="gamma0")
    p = sub.add_parser("selftest", parents=[common], help="randomized property checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=_positive_int, default=20)
    return parser


class _Budgets:
    def __init__(self, args):
        env = _env_budget()
        self.selection = args.selection_budget or env or DEFAULT_SELECTION_BUDGET
        self.pattern = args.pattern_budget or env or DEFAULT_PATTERN_BUDGET
        self.strategy = args.strategy_budget or env or DEFAULT_STRATEGY_BUDGET


def _emit(args, text: str, data: dict) -> None:
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def cmd_classify(args, budgets) -> int:
    phi = parse_formula(_read(args.file))
    horn = is_horn(phi)
    cols = []
    for clause in phi.clauses:
        c = horn_columns(clause, phi.num_vars)
        cols.append(min(c) + 1 if c else None)
    restricted = is_restricted_horn(phi)
    tropical = is_tropically_convex_syntactic(phi)
    semantic = None
    if phi.num_vars <= MAX_SEMANTIC_VARS:
        semantic = is_max_closed_semantic(phi, budgets.selection)
    yn = {True: "yes", False: "no", None: "skipped"}
    ks = ",".join(str(k) for k in cols if k is not None)
    head = f"horn: yes (k={ks})" if horn else "horn: no"
    text = f"{head}; restricted: {yn[restricted]}; tropical: {yn[tropical]}\n"
    text += f"semantic max-closed: {yn[semantic]}"
    _emit(args, text, {"horn": horn, "k": cols, "restricted": restricted,
                       "tropical": tropical, "max_closed": semantic})
    return EXIT_TRUE if horn else EXIT_FALSE


def cmd_solve(args, budgets) -> int:
    phi = parse_formula(_read(args.file))
    names = phi.var_names
    if is_restricted_horn(phi):
        res = solve_restricted(phi)
        method = "restricted"
    else:
        print("warning: formula is not restricted Horn; falling back to brute force, "
              "which may exceed the selection budget", file=sys.stderr)
        res = brute_force_sat(phi, budgets.selection)
        method = "brute-force"
    if res:
        text = "SAT x=" + _vec(res.witness)
        _emit(args, text, {"result": "SAT", "method": method,
                           "witness": dict(zip(names, _jvec(res.witness)))})
        return EXIT_TRUE
    lines = ["UNSAT"]
    trace = []
    for r in res.trace:
        lit = format_literal(r.literal, names)
        lines.append(f"  pass {r.pass_no}: removed {lit} from clause {r.clause + 1}")
        trace.append({"pass": r.pass_no, "clause": r.clause + 1, "literal": lit})
    _emit(args, "\n".join(lines), {"result": "UNSAT", "method": method, "trace": trace})
    return EXIT_FALSE


def cmd_tropical(args, budgets) -> int:
    atoms = parse_atoms(_read(args.file))
    res = solve_csp(atoms, budgets.selection, budgets.pattern)
    if res:
        pairs = ", ".join(f"{n}={_fmt(v)}" for n, v in zip(res.names, res.witness))
        _emit(args, f"SAT {pairs}", {"result": "SAT",
                                      "witness": dict(zip(res.names, _jvec(res.witness)))})
        return EXIT_TRUE
    names = res.system.names
    pairs = ", ".join(f"{n}={_fmt(v)}" for n, v in zip(names, res.certificate))
    _emit(args, f"UNSAT certificate {pairs}",
          {"result": "UNSAT", "certificate": dict(zip(names, _jvec(res.certificate)))})
    return EXIT_FALSE


def cmd_duality(args, budgets) -> int:
    o = parse_operator_system(_read(args.file))
    rep = check_duality(o, budgets.selection, budgets.pattern)

    def side(label, value, kind):
        if value is None:
            return f"{label}: UNSAT", None
        return f"{label}: SAT {kind}={_vec(value)}", _jvec(value)

    parts = [side("P strict", rep.primal_strict, "x"),
             side("D nonstrict", rep.dual_nonstrict, "y"),
             side("P nonstrict", rep.primal_nonstrict, "x"),
             side("D strict", rep.dual_strict, "y")]
    text = "; ".join(p[0] for p in parts[:2]) + "\n" + "; ".join(p[0] for p in parts[2:])
    keys = ("primal_strict", "dual_nonstrict", "primal_nonstrict", "dual_strict")
    _emit(args, text, {k: p[1] for k, p in zip(keys, parts)})
    return EXIT_TRUE


def cmd_game(args, budgets) -> int:
    text = _read(args.file)
    if text.lstrip().startswith("vertices:"):
        game = parse_game(text)
    else:
        game = build_game(parse_operator_system(text))
    beta = parse_rational(args.beta)
    nu1 = limiting_average_values(game, budgets.strategy)
    nub = discounted_values(game, beta, budgets.strategy)
    out = format_game(game)
    out += f"limiting average: {_vec(nu1)}\n"
    out += f"discounted (beta={format_rational(beta)}): {_vec(nub)}"
    _emit(args, out, {"game": format_game(game), "limiting_average": _jvec(nu1),
                      "beta": format_rational(beta), "discounted": _jvec(nub)})
    return EXIT_TRUE


def cmd_compile(args, budgets) -> int:
    phi = parse_formula(_read(args.file))
    pp = (compile_gamma0 if args.target == "gamma0" else compile_gamma_t)(phi)
    _emit(args, pp.to_text() + f"atoms: {pp.atom_count}",
          {"target": args.target, "formula": pp.to_json(), "atoms": pp.atom_count})
    return EXIT_TRUE


def cmd_selftest(args, budgets) -> int:
    results = run_selftest(args.seed, args.count)
    lines = [f"{'PASS' if r.ok else 'FAIL'} {r.name}: {r.passed}/{r.total}" for r in results]
    _emit(args, "\n".join(lines), {"seed": args.seed, "results": [
        {"name": r.name, "passed": r.passed, "total": r.total} for r in results]})
    return EXIT_TRUE if all(r.ok for r in results) else EXIT_CONSISTENCY


COMMANDS = {
    "classify": cmd_classify,
    "solve": cmd_solve,
    "tropical": cmd_tropical,
    "duality": cmd_duality,
    "game": cmd_game,
    "compile": cmd_compile,
    "selftest": cmd_selftest,
}


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_TRUE
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        budgets = _Budgets(args)
        return COMMANDS[args.command](args, budgets)
    except LimitExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ConsistencyError as exc:
        print(f"consistency violation: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    except (OSError, ValueError, ZeroDivisionError, FormulaSyntaxError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SystemExit as exc:
        print(exc, file=sys.stderr)
        return EXIT_INPUT


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
