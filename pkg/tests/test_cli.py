import json
import subprocess
import sys

import pytest

from mubforge.cli import main
from mubforge.formats import read_csv, read_ndjson


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_count(capsys):
    code, out, _ = run(capsys, "count", "d=6:5,4^2,2")
    assert code == 0
    assert "p=45 c=45" in out and "critical" in out


def test_count_rejects(capsys):
    code, _, err = run(capsys, "count", "d=6:5")
    assert code == 2 and "error" in err
    with pytest.raises(SystemExit) as exc:
        main(["count", "d=6:9,1"])
    assert exc.value.code == 2


def test_search_and_hist(tmp_path, capsys):
    out = tmp_path / "run"
    code, text, _ = run(capsys, "search", "d=4:3,2,2", "--trials", "6", "--seed", "3", "--out", str(out))
    assert code == 0 and "/6 successes" in text
    assert len(read_ndjson(out / "records.ndjson")) == 6
    rep = json.loads((out / "report.json").read_text())
    assert rep["trials"] == 6
    code, text, _ = run(capsys, "hist", str(out / "records.ndjson"), "--out", str(tmp_path / "h.csv"))
    assert code == 0
    rows = read_csv(tmp_path / "h.csv")
    assert len(rows) == 24 and sum(int(r["count"]) for r in rows) == 6
    code, _, _ = run(capsys, "search", "d=4:3,2,2", "--trials", "0", "--out", str(out))
    assert code == 2


def test_sweep(tmp_path, capsys):
    code, text, _ = run(capsys, "sweep", "d=3:2,2,2", "--trials", "3", "--out", str(tmp_path))
    assert code == 0 and "implied negatives" in text
    table = read_csv(tmp_path / "table.csv")
    assert len(table) == 3
    assert len(read_csv(tmp_path / "tally.csv")) == 3
    assert json.loads((tmp_path / "reports.json").read_text())["trials"] == 3


def test_construct_verify_dephase(tmp_path, capsys):
    f = tmp_path / "t.json"
    code, text, _ = run(capsys, "construct", "tensor", "2", "3", "--out", str(f))
    assert code == 0 and "pass" in text
    code, text, _ = run(capsys, "verify", str(f), "--tol", "1e-10")
    assert code == 0 and text.startswith("PASS")
    code, _, _ = run(capsys, "dephase", str(f), "--out", str(tmp_path / "d.json"))
    assert code == 0
    assert run(capsys, "verify", str(tmp_path / "d.json"))[0] == 0

    doc = json.loads(f.read_text())
    doc["groups"][1][2][3] = [x * 1.01 for x in doc["groups"][1][2][3]]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(doc))
    code, text, _ = run(capsys, "verify", str(bad))
    assert code == 1 and text.startswith("FAIL") and "worst pair" in text


def test_construct_variants(tmp_path, capsys):
    for args in (["prime", "7"], ["prime", "2"], ["qubit"]):
        assert run(capsys, "construct", *args, "--out", str(tmp_path / "x.json"))[0] == 0
    assert run(capsys, "construct", "prime", "9", "--out", str(tmp_path / "x.json"))[0] == 2
    assert run(capsys, "construct", "tensor", "2", "--out", str(tmp_path / "x.json"))[0] == 2


def test_dephase_error_and_missing_file(tmp_path, capsys):
    f = tmp_path / "e.json"
    f.write_text(json.dumps({"d": 3, "groups": [[[[1, 0], [0, 0], [0, 0]]]]}))
    code, _, err = run(capsys, "dephase", str(f), "--out", str(tmp_path / "o.json"))
    assert code == 1 and "error" in err
    assert run(capsys, "verify", str(tmp_path / "nope.json"))[0] == 1


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "mubforge", "count", "d=5:4,4,2,2"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and "p=28" in proc.stdout
