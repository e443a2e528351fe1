import io
import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

from dkf import cli
from dkf.bounds import BoundReport

SCHEMA = json.loads((Path(__file__).resolve().parents[1] / "docs" / "report_schema.json").read_text())

COMMANDS = [
    ["irreducibles", "--q", "2", "--degree", "4"],
    ["torsion", "--q", "3", "--phi", "carlitz", "--a", "t^2"],
    ["torsion", "--q", "4", "--phi", "phi_t = t + w*tau + tau^2", "--a", "t+w"],
    ["newton", "--q", "3", "--a", "t^2", "--place", "t"],
    ["minima", "--q", "2", "--matrix", "t, t+1; 1, 1"],
    ["tate", "--datum", "q=2; phi_t = t + tau; place = t; seed = t^-1; prime = t; m = 1", "--precision", "16"],
    ["breaks", "--q", "3", "--prime", "t", "--level", "2"],
    ["certify", "--corpus", "carlitz.txt"],
]


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli.run(argv, out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: a[0])
def test_reports_validate_and_are_deterministic(argv):
    code, out, err = run(argv)
    assert code == 0, err
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    assert report["config"]["seed"] == 0
    assert run(argv)[1] == out


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: a[0])
def test_table_and_json_carry_the_same_values(argv):
    _, js, _ = run(argv)
    _, table, _ = run(argv + ["--format", "table"])
    flat = dict(cli._flatten(json.loads(js)))
    rows = {}
    for line in table.splitlines():
        key, _, value = line.partition("  ")
        rows[key] = value.strip()
    flat["config.format"] = "table"
    assert rows == flat


def test_torsion_example():
    _, out, _ = run(["torsion", "--q", "3", "--phi", "carlitz", "--a", "t^2"])
    res = json.loads(out)["result"]
    assert res["coefficients"] == ["t^2", "t^3+t", "1"]
    assert res["exponents"] == [1, 3, 9]


def test_breaks_and_minima_examples():
    res = json.loads(run(["breaks", "--q", "3", "--prime", "t", "--level", "2"])[1])["result"]
    assert res["lower_breaks"] == ["0", "2"] and res["upper_breaks"] == ["0", "1"] and res["maximal_break"] == "1"
    assert res["different"]["from_derivative"] == res["different"]["from_filtration"] == 9
    res = json.loads(run(["minima", "--q", "2", "--matrix", "t, t+1; 1, 1"])[1])["result"]
    assert res["exponents"] == [0, 0] and res["basis"] == [["1", "0"], ["0", "1"]]


def test_tate_product_formula_report():
    res = json.loads(run(COMMANDS[5])[1])["result"]
    assert res["phi"]["rank"] == 2
    assert res["defect"] >= 14
    assert res["product_formula"]["defect"] >= 14 and res["product_formula"]["representatives"] == 4


def test_malformed_module_line():
    code, out, err = run(["torsion", "--q", "3", "--phi", "phi_t = t + tau^^2", "--a", "t"])
    assert code == 2 and not out
    lines = err.splitlines()
    assert "column" in lines[0]
    caret = next(line for line in lines if line.strip() == "^")
    assert lines[lines.index(caret) - 1].strip().startswith("phi_t")


@pytest.mark.parametrize("argv", [
    ["torsion", "--a", "t"],
    ["certify", "--corpus", "no-such-corpus.txt"],
    ["breaks", "--q", "6"],
    ["minima", "--q", "2", "--matrix", "t, t; 1, 1"],
    ["irreducibles", "--q", "2", "--degree", "30"],
    ["bogus"],
    ["breaks", "--q", "2", "--cap-enum", "0"],
])
def test_input_errors_exit_2(argv):
    assert run(argv)[0] == 2


def test_precision_shortfall_exits_3():
    code, _, err = run(["tate", "--datum", "q=3; phi_t = t + tau; place = t; gamma = t^-2", "--precision", "2"])
    assert code == 3 and "precision" in err


def test_false_verdict_exits_1(monkeypatch, tmp_path):
    corpus = tmp_path / "one.txt"
    corpus.write_text('# single entry\n{"kind": "carlitz", "q": 3, "prime": "t", "m": 1}\n')
    assert run(["certify", "--corpus", str(corpus)])[0] == 0

    def failing(*args, **kwargs):
        return BoundReport({"kind": "stub", "prime": "t", "m": 1}, 1, (0, "stub"), (1, "stub"), 0, None, None, None, 5, (("exact break <= prop1 bound", 5, 0, False),))

    monkeypatch.setattr(cli, "certify", failing)
    code, out, _ = run(["certify", "--corpus", str(corpus)])
    assert code == 1
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    assert report["result"]["verdict"] is False


def test_corpus_errors_name_the_line(tmp_path):
    corpus = tmp_path / "bad.txt"
    corpus.write_text('{"kind": "carlitz", "q": 3, "prime": "t", "m": 1}\n{"kind": "nope"}\n')
    code, _, err = run(["certify", "--corpus", str(corpus)])
    assert code == 2 and "bad.txt:2" in err


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv("DKF_Q", "3")
    monkeypatch.setenv("DKF_SEED", "17")
    monkeypatch.setenv("DKF_FORMAT", "table")
    code, out, _ = run(["torsion", "--a", "t"])
    assert code == 0 and "config.seed" in out and "17" in out
    code, out, _ = run(["torsion", "--a", "t", "--format", "json", "--q", "2"])
    cfg = json.loads(out)["config"]
    assert cfg["q"] == 2 and cfg["seed"] == 17
    monkeypatch.setenv("DKF_PRECISION", "many")
    assert run(["torsion", "--a", "t"])[0] == 2


def test_default_certify_and_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dkf", "certify"], capture_output=True, text=True, timeout=170)
    assert proc.returncode == 0, proc.stderr
    again = subprocess.run([sys.executable, "-m", "dkf", "certify"], capture_output=True, text=True, timeout=170)
    assert proc.stdout == again.stdout
    report = json.loads(proc.stdout)
    assert report["result"]["verdict"] and all(r["verdict"] for r in report["result"]["reports"])
