import json

import pytest

from tropisolve.cli import run


@pytest.fixture
def write(tmp_path):
    def _write(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)
    return _write


def test_classify_max_atoms(write, capsys):
    path = write("maxatoms.horn", "x2 - x1 >= 3 | x3 - x1 >= 3\n")
    assert run(["classify", path]) == 0
    out = capsys.readouterr().out
    assert out.startswith("horn: yes (k=1); restricted: no; tropical: yes")
    assert "semantic max-closed: yes" in out


def test_classify_not_horn(write, capsys):
    assert run(["classify", write("f.horn", "x1 < x2 | x2 < x1\n")]) == 1
    assert capsys.readouterr().out.startswith("horn: no")


def test_duality_selfloop(write, capsys):
    assert run(["duality", write("selfloop_plus1.ops", "x1 := max(x1 + 1)\n")]) == 0
    first = capsys.readouterr().out.splitlines()[0]
    assert first == "P strict: SAT x=(0); D nonstrict: UNSAT"


def test_solve_unsat_trace(write, capsys):
    path = write("unsat_pair.horn", "x1 <= 0\nx2 <= 0\nx1 >= 1 | x2 >= 1\n")
    assert run(["solve", path]) == 1
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "UNSAT" and len(out) == 3
    assert all("removed" in line for line in out[1:])


def test_solve_sat_prints_fractions(write, capsys):
    assert run(["solve", write("f.horn", "2*x1 >= 1\nx1 <= 1/2\n")]) == 0
    assert capsys.readouterr().out.strip() == "SAT x=(1/2)"


def test_solve_fallback_warns(write, capsys):
    assert run(["solve", write("f.horn", "x1 < x2 | x1 < x3\n")]) == 0
    assert "not restricted" in capsys.readouterr().err


def test_tropical(write, capsys):
    assert run(["tropical", write("a.atoms", "LT(x,y)\nLT(y,x)\n")]) == 1
    assert capsys.readouterr().out.startswith("UNSAT certificate")
    assert run(["tropical", write("b.atoms", "T+1(x,y)\n")]) == 0
    assert capsys.readouterr().out.startswith("SAT ")


def test_game(write, capsys):
    game = ("vertices: v1:STOCH v2:MAX v3:MAX\n"
            "v1 -> v2 payoff 0 prob 1/2\nv1 -> v3 payoff 0 prob 1/2\n"
            "v2 -> v2 payoff 2\nv3 -> v3 payoff 4\n")
    assert run(["game", write("g.game", game), "--beta", "1/2", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["limiting_average"] == ["3", "2", "4"]
    assert data["discounted"] == ["3/2", "2", "4"]


def test_compile(write, capsys):
    path = write("f.horn", "x1 <= y1 | x1 <= y2 | x1 <= y3\n")
    assert run(["compile", path]) == 0
    out = capsys.readouterr().out
    assert "EXISTS _t1 . M0(x1,_t1,y3) & M0(_t1,y1,y2)" in out and out.rstrip().endswith("atoms: 2")
    assert run(["compile", path, "--target", "gammat", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["atoms"] == 2 and data["target"] == "gammat"


def test_json_round_trip(write, capsys):
    path = write("f.horn", "x1 >= 1 | x2 >= 1\nx1 <= 0\n")
    assert run(["solve", path, "--json"]) == 0
    raw = capsys.readouterr().out
    data = json.loads(raw)
    assert data == {"result": "SAT", "method": "restricted", "witness": data["witness"]}
    assert json.loads(json.dumps(data, sort_keys=True)) == data
    assert json.dumps(data, sort_keys=True) == raw.strip()


def test_determinism(write, capsys):
    outs = []
    for _ in range(2):
        assert run(["selftest", "--seed", "5", "--count", "3"]) == 0
        outs.append(capsys.readouterr().out)
    assert outs[0] == outs[1]


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["solve"], ["solve", "x", "--bogus"],
                                  ["solve", "x", "--selection-budget", "0"]])
def test_usage_errors(argv, capsys):
    assert run(argv) == 2


def test_input_errors(write, capsys):
    assert run(["solve", write("bad.horn", "x1 <== 3\n")]) == 2
    assert run(["solve", "/nonexistent/file.horn"]) == 2
    assert run(["game", write("g.ops", "x1 := max(x1)\n"), "--beta", "1"]) == 2


def test_budget_exit(write, capsys, monkeypatch):
    clauses = "\n".join(f"x{i} < x{i + 1} | x{i} < x{i + 2} | x{i} < x{i + 3}" for i in range(1, 9))
    assert run(["solve", write("big.horn", clauses + "\n"), "--selection-budget", "2"]) == 3
    monkeypatch.setenv("TROPISOLVE_BUDGET", "2")
    assert run(["solve", write("big2.horn", clauses + "\n")]) == 3
    monkeypatch.setenv("TROPISOLVE_BUDGET", "zero")
    assert run(["solve", write("big3.horn", clauses + "\n")]) == 2


def test_consistency_exit(monkeypatch, capsys):
    import tropisolve.selftest as st
    monkeypatch.setattr(st, "CHECKS", {"broken": lambda rng: False})
    assert run(["selftest", "--count", "2"]) == 4
    assert "FAIL broken: 0/2" in capsys.readouterr().out
