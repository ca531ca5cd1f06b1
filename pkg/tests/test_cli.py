import json
import subprocess
import sys

import pytest

from rhpp.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip().startswith("{") else out


def test_hjcf_eval(capsys):
    code, out = run(capsys, "hjcf", "eval", "3,2,2,2,2,3")
    assert code == 0 and (out["q"], out["q1"]) == (24, 11) and out["value"] == "24/11"


def test_hjcf_classify_and_tau(capsys):
    _, out = run(capsys, "hjcf", "classify", "3,2,2,2,2,3")
    assert out["kind"] == "T" and out["d"] == 6
    _, out = run(capsys, "hjcf", "tau", "3,3")
    assert out["tau"] == [2, 3, 4] and out["t"] == out["t_tau"]


def test_gen_td(capsys):
    _, out = run(capsys, "hjcf", "gen-td", "--d", "6", "--max-len", "8")
    assert out["strings"][0] == [3, 2, 2, 2, 2, 3]


def test_sing_commands(capsys):
    _, out = run(capsys, "sing", "info", "--spec", "D(b=3;[2,2])")
    assert out["dp2"] == "-3/4" and out["group_order"] == 48
    _, out = run(capsys, "sing", "table2", "--b-max", "4")
    assert len(out["rows"]) == 15 and all(r["pipeline_agrees"] for r in out["rows"])


def test_lattice_commands(capsys):
    _, out = run(capsys, "lattice", "det", "--spec", "4A1+D5+K")
    assert out["det"] == -64 and out["numerically_trivial"]
    _, out = run(capsys, "lattice", "disc", "--spec", "4A1+D5")
    assert sorted(out["invariant_factors"]) == [2, 2, 2, 2, 4]
    _, out = run(capsys, "lattice", "diag", "--spec", "HJ[3,2,2,2,2,3]")
    assert out["diagonal"][-1] == "-24/11"


def test_qform_commands(capsys):
    _, out = run(capsys, "qform", "eps", "--p", "3", "--diag", "-3,-5/3,-7/5,-9/7,-11/9,-24/11")
    assert out["epsilon"] == 1
    _, out = run(capsys, "qform", "equiv", "--lhs", "1,1", "--rhs", "3,3")
    assert out["verdict"] == "inequivalent" and out["failing_places"] == ["2", "3"]


def test_obstruct_commands(capsys):
    _, out = run(capsys, "obstruct", "embed", "--spec", "4A1+A5")
    assert out["result"] == "Obstructed" and out["place"] == 3
    _, out = run(capsys, "obstruct", "square", "--spec", "2A1+3diag(-3)+K")
    assert out["result"] == "Obstructed" and out["details"]["det"] == -540
    _, out = run(capsys, "obstruct", "embed", "--spec", "3A1+A2+diag(-5)+K")
    assert out["test"] == "finite_index_embed" and out["result"] == "Obstructed"
    code, out = run(capsys, "obstruct", "t6-sweep", "--max-len", "10")
    assert code == 0 and out["failed"] == 0
    code, out = run(capsys, "obstruct", "enriques-d5")
    assert code == 0 and out["count"] == 3


def test_census_run_to_file(tmp_path, capsys):
    path = tmp_path / "report.json"
    code = main(["census", "run", "--max-q", "24", "--max-len", "10", "--sweep-len", "8", "--out", str(path)])
    assert code == 0
    data = json.loads(path.read_text())
    assert data["summary"]["survivors_final"] == ["3A1+2A3"]
    assert set(data) >= {"config", "tuples", "cases", "sweeps", "summary"}


def test_census_table(capsys):
    code, out = run(capsys, "census", "run", "--max-q", "16", "--max-len", "8", "--sweep-len", "6", "--format", "table", "--no-nef")
    assert code == 0 and "survivors (lattice tests)" in out


def test_verify_lemmas(capsys):
    code, out = run(capsys, "census", "verify-lemmas", "--max-len", "8")
    assert code == 0 and all(v["passed"] for v in out.values())


def test_bad_input_reports_error(capsys):
    assert main(["lattice", "det", "--spec", "Q7"]) == 2
    err = json.loads(capsys.readouterr().err)
    assert "error" in err


def test_missing_command():
    with pytest.raises(SystemExit):
        main([])


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "rhpp", "obstruct", "embed", "--spec", "3A1+2A3"],
        capture_output=True, text=True, check=True,
    )
    assert json.loads(proc.stdout)["result"] == "NotObstructed"
