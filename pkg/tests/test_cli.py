import json
import subprocess
import sys

import jsonschema
import pytest

from dillonlab import catalog
from dillonlab.cli import main
from dillonlab.schemas import ANALYSIS_SCHEMA, DREPORT_SCHEMA
from dillonlab.vbf import from_truth_table, read_truth_table, write_truth_table


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_analyze_restricted_gold7(capsys):
    code, out, _ = run(capsys, "analyze", "gold:n=7,i=1,restrict=t0", "--threads", "1")
    assert code == 1 and out.startswith("not-D-function")
    assert "missing 1: 0x1" in out and "modulus 0x83" in out


def test_analyze_odd_dimension(capsys):
    code, out, _ = run(capsys, "analyze", "gold:n=9,i=1,restrict=t0", "--output", "json", "--threads", "1")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, ANALYSIS_SCHEMA)
    assert doc["verdict"] == "D-function" and doc["is_apn"] and doc["delta_F"] == 2
    assert len(doc["d_reports"]) == 7
    for d in doc["d_reports"]:
        jsonschema.validate({**d, "elapsed_ms": 0.0}, DREPORT_SCHEMA)


def test_analyze_zero_table(capsys, tmp_path):
    p = tmp_path / "zero.tt"
    write_truth_table(from_truth_table(3, 3, [0] * 8), p)
    code, out, _ = run(capsys, "analyze", f"tt:{p}")
    assert code == 1 and "not-D-function" in out


def test_analyze_methods_and_errors(capsys):
    code, out, _ = run(capsys, "analyze", "gold:n=5", "--methods", "ddt,moment4", "--output", "json")
    assert code == 0 and [d["method"] for d in json.loads(out)["d_reports"]] == ["ddt", "moment4"]
    code, _, err = run(capsys, "analyze", "gold:n=5", "--methods", "nope")
    assert code == 2 and "unknown methods" in err
    cubic = "uni:n=5,terms=7:1"
    code, _, err = run(capsys, "analyze", cubic, "--methods", "anf-span")
    assert code == 2 and "quadratic" in err


def test_analyze_large_uses_auto(capsys):
    code, out, _ = run(capsys, "analyze", "gold:n=13,i=1,restrict=t0", "--output", "json", "--threads", "1")
    doc = json.loads(out)
    assert code == 0 and [d["method"] for d in doc["d_reports"]] == ["hyperplane-quadratic"]
    assert "spectra" in doc["skipped"]


def test_dcheck_json_deterministic(capsys):
    argv = ["dcheck", "rand2:n=6,m=8,seed=42", "--witnesses", "--threads", "1", "--output", "json"]
    docs = []
    for _ in range(2):
        code, out, _ = run(capsys, *argv)
        doc = json.loads(out)
        jsonschema.validate(doc, DREPORT_SCHEMA)
        doc.pop("elapsed_ms")
        docs.append(json.dumps(doc, sort_keys=True))
    assert docs[0] == docs[1]
    assert code in (0, 1)


def test_analyze_json_deterministic(capsys):
    argv = ["analyze", "gold:n=6,i=1,restrict=t0", "--witnesses", "--threads", "1", "--output", "json"]
    docs = []
    for _ in range(2):
        _, out, _ = run(capsys, *argv)
        doc = json.loads(out)
        doc.pop("timings")
        docs.append(json.dumps(doc, sort_keys=True))
    assert docs[0] == docs[1]


def test_dcheck_methods(capsys):
    for method in ("bruteforce", "ddt", "moment4", "plateaued"):
        code, out, _ = run(capsys, "dcheck", "gold:n=7,i=1,restrict=t0", "--method", method)
        assert code == 1 and out.startswith("not-D-function")
    code, out, _ = run(capsys, "dcheck", "gold:n=3", "--modulus", "0xd", "--output", "json")
    assert code == 0 and json.loads(out)["modulus"] == "0xd"
    code, _, err = run(capsys, "dcheck", "gold:n=3", "--modulus", "0x9")
    assert code == 2 and "reducible" in err


def test_global_flags_before_command(capsys):
    code, out, _ = run(capsys, "--output", "json", "dcheck", "gold:n=4")
    assert code == 0 and json.loads(out)["verdict"] == "D-function"


def test_walsh_and_ddt(capsys, tmp_path):
    code, out, _ = run(capsys, "walsh", "gold:n=3", "--v", "0")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "index,value" and lines[1] == "0,8"
    assert all(line.endswith(",0") for line in lines[2:])
    code, out, _ = run(capsys, "walsh", "gold:n=3", "--v", "5")
    assert {int(line.split(",")[1]) for line in out.strip().splitlines()[1:]} <= {0, 4, -4}
    code, out, err = run(capsys, "ddt", "gold:n=5", "--a", "3")
    assert code == 0 and "row sum 32" in err
    assert sum(int(line.split(",")[1]) for line in out.strip().splitlines()[1:]) == 32
    p = tmp_path / "row.csv"
    code, out, _ = run(capsys, "ddt", "gold:n=5", "--a", "3", "--csv", str(p))
    assert p.read_text().startswith("index,value\n") and "row sum 32" in out
    assert run(capsys, "walsh", "gold:n=3", "--v", "8")[0] == 2
    assert run(capsys, "ddt", "gold:n=3", "--a", "0")[0] == 2


def test_restrict_command(capsys, tmp_path):
    p = tmp_path / "r.tt"
    code, _, _ = run(capsys, "restrict", "gold:n=7", "--out", str(p))
    assert code == 0
    assert read_truth_table(p) == catalog.build("gold:n=7,restrict=t0")
    code, _, _ = run(capsys, "restrict", "gold:n=5", "--alpha", "3", "--out", str(p))
    assert read_truth_table(p) == catalog.build("gold:n=5,restrict=3")


def test_moments_command(capsys):
    code, out, _ = run(capsys, "moments", "gold:n=4,i=1")
    assert code == 0 and out.count("equal") == 3
    code, out, _ = run(capsys, "moments", "uni:n=4,terms=7:1", "--output", "json")
    statuses = {d["identity"]: d["status"] for d in json.loads(out)}
    assert code == 0 and statuses["cubic-moment-quadratic"] == "skipped"


def test_reproduce_commands(capsys):
    code, out, _ = run(capsys, "reproduce", "remark-n7", "--threads", "1")
    assert code == 0 and "remark-n7: PASS" in out
    code, out, _ = run(capsys, "reproduce", "n2-negative", "--output", "json")
    assert code == 0 and all(c["passed"] for c in json.loads(out)["n2-negative"])
    code, _, err = run(capsys, "reproduce", "nonsense")
    assert code == 2 and "unknown experiment" in err


def test_usage_errors(capsys):
    assert run(capsys)[0] == 2
    assert run(capsys, "dcheck")[0] == 2
    assert run(capsys, "dcheck", "gold:n=3", "--threads", "0")[0] == 2
    assert run(capsys, "dcheck", "tt:/nonexistent/file.tt")[0] == 2
    code, _, err = run(capsys, "dcheck", "gold:n=3", "--output", "json", "--method", "anf-span",
                       "--modulus", "0x9")
    assert code == 2 and json.loads(err)["error"] == "InvalidModulus"


def test_size_guard_is_structured(capsys):
    code, _, err = run(capsys, "dcheck", "uni:n=12,terms=7:1", "--method", "bruteforce")
    assert code == 2 and "size guard" in err


@pytest.mark.parametrize("argv,code", [(["dcheck", "gold:n=5"], 0), (["dcheck", "gold:n=7,restrict=t0"], 1)])
def test_console_entry(argv, code):
    res = subprocess.run([sys.executable, "-m", "dillonlab.cli", *argv, "--threads", "1"],
                         capture_output=True, text=True)
    assert res.returncode == code
