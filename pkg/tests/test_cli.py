import json

import pytest

from hecke_clifford import cli


def run(capsys, *args):
    with pytest.raises(SystemExit) as info:
        cli.main(list(args))
    out = capsys.readouterr()
    return info.value.code, out.out, out.err


def test_tableaux_shows_diagonal_letters(capsys):
    code, out, _ = run(capsys, "tableaux", "--type", "s", "--m", "1", "--n", "5")
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "v1"
    shape = next(s for s in doc["shapes"] if s["shape"]["parts"] == [[2, 1], [1, 1]])
    assert shape["diagonal_boxes"] == [[1, 1, 0], [2, 2, 0]]
    target = next(t for t in shape["tableaux"] if t["rows"] == [[[1, 3], [5]], [[2], [4]]])
    assert target["D_t"] == [1, 5]


def test_verify_passes(capsys):
    code, out, _ = run(capsys, "verify", "--flavor", "nd", "--type", "s", "--m", "0",
                       "--q", "2", "--n", "3")
    assert code == 0
    doc = json.loads(out)
    assert doc["passed"]
    assert doc["max_residual"] < 1e-25
    assert set(doc["summary"]) >= {"relations", "seminormal_bases", "star", "subalgebras"}


def test_conjecture_grid(capsys):
    code, out, _ = run(capsys, "conjecture", "--grid", "q=2,3;Q=3,5", "--n", "3",
                       "--type", "0", "--m", "1")
    assert code == 0
    doc = json.loads(out)
    assert doc["identical"]
    assert len(doc["points"]) == 4
    assert all(p["dims"] == doc["points"][0]["dims"] for p in doc["points"])


def test_conjecture_rejects_bad_grid(capsys):
    code, _, err = run(capsys, "conjecture", "--grid", "x=2")
    assert code == 1
    assert "grid key" in err


def test_dims(capsys):
    code, out, _ = run(capsys, "dims", "--type", "s", "--n", "3")
    assert code == 0
    ledger = json.loads(out)["ledger"]
    assert ledger["N"] == 12 and ledger["dim"] == 48


def test_subalgebras_degenerate(capsys):
    code, out, _ = run(capsys, "subalgebras", "--flavor", "d", "--type", "s", "--n", "3")
    assert code == 0
    dims = json.loads(out)["subalgebras"]["dims"]
    assert (dims["G"], dims["P"], dims["A"], dims["CP"]) == (2, 6, 48, 16)


def test_seminormal_structure_constants(capsys, tmp_path):
    path = tmp_path / "sn.json"
    code, out, _ = run(capsys, "seminormal", "--type", "s", "--n", "2", "--output", str(path))
    assert code == 0 and out == ""
    doc = json.loads(path.read_text())
    block = doc["blocks"][0]
    assert block["check"]["passed"]
    assert block["constants"]
    entry = block["constants"][0]
    assert entry["T"]["t"] == entry["U"]["t"]


def test_module_and_idempotents(capsys):
    code, out, _ = run(capsys, "module", "--flavor", "d", "--type", "s", "--n", "2")
    assert code == 0
    doc = json.loads(out)
    assert {m["type"] for m in doc["modules"]} == {"Q"}
    code, out, _ = run(capsys, "idempotents", "--flavor", "d", "--type", "s", "--n", "3")
    assert code == 0
    assert "addable_box" in json.loads(out)


def test_separateness_failure_exits_2(capsys):
    code, _, err = run(capsys, "verify", "--type", "0", "--Q", "1", "--n", "3")
    assert code == 2
    doc = json.loads(err)
    assert doc["letters"] == [1, 2]
    assert doc["tableau"]


def test_config_errors_exit_1(capsys):
    code, _, err = run(capsys, "dims", "--q", "1")
    assert code == 1
    assert "q^2" in err
    code, _, _ = run(capsys, "dims", "--m", "2", "--Q", "3")
    assert code == 1
    code, _, _ = run(capsys, "dims", "--flavor", "d", "--type", "ss")
    assert code == 1


def test_precision_from_environment(capsys, monkeypatch):
    monkeypatch.setenv(cli.PRECISION_ENV, "128")
    code, out, _ = run(capsys, "dims", "--n", "2")
    assert code == 0
    assert json.loads(out)["config"]["precision"] == 128
    monkeypatch.delenv(cli.PRECISION_ENV)
    code, out, _ = run(capsys, "dims", "--n", "2")
    assert json.loads(out)["config"]["precision"] == 256


def test_output_is_deterministic(capsys):
    _, first, _ = run(capsys, "subalgebras", "--type", "ss", "--n", "2", "--seed", "5")
    _, second, _ = run(capsys, "subalgebras", "--type", "ss", "--n", "2", "--seed", "5")
    assert first == second


def test_parse_grid():
    assert cli.parse_grid("q=2,3;Q=3,5") == {"q": ["2", "3"], "Q": ["3", "5"]}
