import json

import pytest

from fourgeo.cli import SEED_ENV, main


def run_cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def report(capsys, *argv):
    code, out = run_cli(capsys, *argv)
    assert code == 0, out
    return json.loads(out)


def test_tower(capsys):
    rep = report(capsys, "tower", "--stages", "2:3")
    inv = rep["result"]["invariants"]
    assert (inv["c1sq"], inv["e"], inv["sigma"]) == (0, 24, -16)
    assert rep["result"]["hitchin_thorpe"] == "equality"
    assert rep["schema"] == "fourgeo-report/1" and rep["seed"] == 0


def test_ci(capsys):
    rep = report(capsys, "ci", "--ambient", "1,2", "--degrees", "5,6")
    assert rep["result"]["invariants"]["c1sq"] == 153
    assert rep["result"]["divisibility"] == 3


def test_plan_and_dissolve(capsys):
    rep = report(capsys, "plan", "--chi", "100", "--c1sq", "249", "--dissolve")
    assert rep["result"]["invariants"]["chi"] == 100
    assert "wedge" in rep["result"]["regions"]
    assert rep["result"]["dissolution"]["summands"]


def test_synth(capsys):
    rep = report(capsys, "synth", "--k", "2", "--mu", "1/2,1/2")
    assert len(rep["result"]["result"]["towers"]) == 2


def test_pq(capsys):
    assert report(capsys, "pq", "--p", "3", "--q", "40")["result"]["verdict"]["status"] == "obstructed"


def test_exit_codes(capsys):
    assert run_cli(capsys, "plan", "--chi", "1", "--c1sq", "5")[0] == 2
    assert run_cli(capsys, "plan", "--chi", "0", "--c1sq", "5")[0] == 3
    assert run_cli(capsys, "tower", "--stages", "x")[0] == 3
    assert run_cli(capsys, "synth", "--mu", "1/2,1/3")[0] == 3
    code, out = run_cli(capsys, "match", "--k", "2", "--mu", "1/3,1/3,1/3")
    assert code == 2 and json.loads(out)["error"] == "SlopeOutOfRange"
    with pytest.raises(SystemExit):
        main(["nonsense"])


def test_examples(capsys):
    rep = report(capsys, "examples")
    assert rep["result"]["all_passed"]


def test_replay_round_trip(tmp_path, capsys):
    path = tmp_path / "plan.json"
    assert main(["plan", "--chi", "500", "--c1sq", "2000", "--out", str(path)]) == 0
    code, out = run_cli(capsys, "replay", str(path))
    assert code == 0 and json.loads(out)["replay"] == "match"
    data = json.loads(path.read_text())
    data["result"]["invariants"]["chi"] = 501
    path.write_text(json.dumps(data))
    assert run_cli(capsys, "replay", str(path))[0] == 1


def test_map_csv_and_sidecar(tmp_path, capsys):
    path = tmp_path / "map.csv"
    assert main(["map", "--chi-min", "1", "--chi-max", "20", "--out", str(path)]) == 0
    lines = path.read_text().splitlines()
    assert lines[0] == "chi,c1sq,e,sigma,tags,recipe"
    assert len(lines) == 1 + sum(9 * x + 1 for x in range(1, 21))
    assert run_cli(capsys, "replay", str(path) + ".json")[0] == 0


def test_seed_from_environment(monkeypatch, tmp_path, capsys):
    monkeypatch.setenv(SEED_ENV, "7")
    path = tmp_path / "synth.json"
    assert main(["synth", "--mu", "1/2,1/2", "--out", str(path)]) == 0
    assert json.loads(path.read_text())["seed"] == 7
    monkeypatch.setenv(SEED_ENV, "0")
    assert run_cli(capsys, "replay", str(path))[0] == 0
    monkeypatch.setenv(SEED_ENV, "bad")
    assert run_cli(capsys, "tower", "--stages", "2:3")[0] == 3
