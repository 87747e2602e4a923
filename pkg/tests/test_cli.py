from __future__ import annotations

import csv
import io
import json

import pytest

from rigidfourfolds import cli
from rigidfourfolds import expected as X


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def test_hodge_text(capsys):
    code, out = run(capsys, "hodge")
    assert code == 0
    assert "PASS hodge.z3z3" in out and "PASS hodge.heis3" in out


def test_json_schema(capsys):
    code, out = run(capsys, "hodge", "--group", "heis3", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    assert set(doc) == {"command", "inputs", "tables", "checks"}
    assert doc["command"] == "hodge"
    for t in doc["tables"]:
        assert set(t) == {"id", "columns", "rows"}
        assert all(len(r) == len(t["columns"]) for r in t["rows"])
    for c in doc["checks"]:
        assert set(c) == {"id", "expected", "actual", "pass"}


def test_screen_d4_lists_violated_condition(capsys):
    code, out = run(capsys, "screen", "--group", "d4", "--format", "json")
    row = json.loads(out)["tables"][0]["rows"][0]
    assert code == 0
    assert row[0] == "D4" and row[2] is False and row[4] == "no_common_constituent"


def test_verify_csv_has_one_row_per_check(capsys):
    code, out = run(capsys, "verify", "--criterion", "8", "--format", "csv")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    start = rows.index(["id", "expected", "actual", "pass"])
    assert [r[0] for r in rows[start + 1:]] == ["c8.hodge.heis3", "c8.hodge.z3z3"]


def test_verify_with_corrupted_expectation_fails(capsys, monkeypatch):
    bad = {**X.HODGE, "z3z3": {**X.HODGE["z3z3"], "h22": 7}}
    monkeypatch.setattr(X, "HODGE", bad)
    code, out = run(capsys, "verify", "--criterion", "8")
    assert code == 1
    assert "FAIL c8.hodge.z3z3" in out and '"h22": 7' in out


def test_classify_heis_rows_and_representatives(capsys):
    code, out = run(capsys, "classify", "--group", "heis3", "--format", "json")
    doc = json.loads(out)
    assert code == 0
    table = doc["tables"][0]
    assert len(table["rows"]) == 4
    reps = [r[-1] for r in table["rows"]]
    assert reps == ["tau1@L1", "tau2@L1", "tau1@L2", "tau2@L2"]
    # torsion points serialise as reduced fractions of 1 and w
    assert table["rows"][0][3] == ["1/3", "0", "0", "0"]


def test_classify_z32_reports_the_k2_representative(capsys):
    code, out = run(capsys, "classify", "--group", "z3z3")
    assert code == 1
    assert "FAIL representatives.z3z3.K2" in out
    assert "PASS class_counts.z3z3.bihol" in out


def test_output_is_independent_of_jobs(capsys, tmp_path):
    paths = []
    for jobs in ("1", "2"):
        p = tmp_path / f"out{jobs}.csv"
        code, _ = run(capsys, "actions", "--group", "heis3", "--jobs", jobs, "--format", "csv", "--out", str(p))
        assert code == 0
        paths.append(p.read_bytes())
    assert paths[0] == paths[1]
    assert b"\r\n" not in paths[0]


def test_actions_single_kernel(capsys):
    code, out = run(capsys, "actions", "--kernel", "K6")
    assert code == 0
    assert "PASS z3z3_table.K6.free_actions" in out


def test_classes_arbitrary_kernel(capsys):
    code, out = run(capsys, "classes", "--kernel", "t,t,t,t", "--format", "json")
    doc = json.loads(out)
    assert doc["tables"][0]["rows"] == [["K6", 18]]


@pytest.mark.parametrize("argv", [
    ["actions", "--group", "d4"],
    ["classes", "--kernel", "t,t"],
    ["screen", "--group", "Z13"],
    ["hodge", "--jobs", "0"],
])
def test_usage_errors(capsys, argv):
    assert cli.main(argv) == 2


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as e:
        cli.main(["classify", "--equivalence", "homeo"])
    assert e.value.code == 2
    with pytest.raises(SystemExit) as e:
        cli.main([])
    assert e.value.code == 2
