import json
import subprocess
import sys

import pytest

from wonderful import fm_building_set, wonderful
from wonderful.certify import certify_trace
from wonderful.cli import UsageError, main, parse_assumption
from wonderful.space import FALSE, projective_space


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_certify_plane_true(capsys):
    code, out, _ = run(capsys, "certify", "fm", "--base", "P2", "--n", "2")
    doc = json.loads(out)
    assert code == 0
    assert doc["verdict"] == "true" and doc["trace_verdict"] == "true"
    assert doc["schema_version"] == 1 and doc["certificate"]["rule"] == "MAIN_THEOREM"


def test_certify_false_exit_3(capsys):
    code, out, _ = run(capsys, "certify", "fm", "--base", "X", "--n", "2", "--assume", "X:ordinary=false")
    assert code == 3 and json.loads(out)["verdict"] == "false"


def test_certify_unknown_exit_4(capsys):
    code, out, _ = run(capsys, "certify", "fm", "--base", "X", "--n", "3")
    doc = json.loads(out)
    assert code == 4
    assert doc["blocked_by"] == [["X", "hodge_witt"], ["X", "ordinary"]]


def test_assume_true_sets_hodge_witt(capsys):
    code, out, _ = run(
        capsys, "certify", "fm", "--base", "X", "--n", "2", "--assume", "X:ordinary=true", "--format", "text"
    )
    assert code == 0
    assert "hodge_witt(X) = true  [ORD_IMPLIES_HW]" in out


def test_betti_kapranov(capsys):
    code, out, _ = run(capsys, "betti", "kapranov", "--n", "5")
    assert code == 0 and out == "1 + 5*t^2 + t^4\n"


def test_betti_json(capsys):
    code, out, _ = run(capsys, "betti", "keel", "--n", "5", "--format", "json")
    doc = json.loads(out)
    assert doc["poincare"] == [1, 0, 16, 0, 16, 0, 1] and doc["palindromic"]


def test_unsupported_range_exit_2(capsys):
    code, _, err = run(capsys, "betti", "kapranov", "--n", "7")
    assert code == 2 and "n <= 6" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["certify", "fm", "--n", "2", "--assume", "Y:ordinary=false"],
        ["certify", "fm", "--n", "2", "--assume", "P2:smooth=true"],
        ["certify", "fm"],
        ["certify", "--n", "2"],
        ["certify", "nonsense"],
        ["betti", "fm", "--base", "X", "--n", "2"],
        ["validate", "keel", "--n", "4"],
        ["certify", "--input", "/nonexistent/file.json"],
    ],
)
def test_malformed_input_exit_1(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 1 and err


def test_parse_assumption():
    a = parse_assumption("X:hw=unknown")
    assert (a.atom, a.flag) == ("X", "hodge_witt")
    with pytest.raises(UsageError):
        parse_assumption("X=false")


def test_build_then_certify_file_round_trip(capsys, tmp_path):
    trace_path = tmp_path / "trace.json"
    code, _, _ = run(capsys, "build", "fm", "--base", "P2", "--n", "3", "--output", str(trace_path))
    assert code == 0
    code, out, _ = run(capsys, "certify", "--input", str(trace_path), "--assume", "P2:ordinary=false")
    assert code == 3
    doc = json.loads(out)
    assert doc["verdict"] == doc["trace_verdict"] == str(FALSE)
    amb, bs = fm_building_set(projective_space(2), 3)
    code, out, _ = run(capsys, "certify", "--input", str(trace_path))
    assert code == 0 and json.loads(out)["trace_verdict"] == str(certify_trace(wonderful(amb, bs)).verdict)


def test_validate_text_and_json(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", "ulyanov", "--n", "4", "--format", "text")
    assert code == 0 and out.startswith("valid: true")
    arr = {
        "schema_version": 1,
        "kind": "building_set",
        "ambient": {"kind": "atom", "name": "P3", "dim": 3, "ordinary": "true"},
        "elements": [
            {"id": "L1", "space": {"kind": "atom", "name": "P1", "dim": 1, "ordinary": "true"}},
            {"id": "L2", "space": {"kind": "atom", "name": "P1", "dim": 1, "ordinary": "true"}},
            {"id": "p", "space": {"kind": "point"}},
        ],
        "leq": [["p", "L1"], ["p", "L2"]],
        "meet": [["L1", "L2", "p"]],
        "members": ["L1", "L2"],
    }
    path = tmp_path / "arr.json"
    path.write_text(json.dumps(arr))
    code, out, _ = run(capsys, "validate", "--input", str(path))
    report = json.loads(out)
    assert code == 0 and not report["valid"]
    assert report["violations"][0]["check"] == "transversality"
    code, _, err = run(capsys, "certify", "--input", str(path))
    assert code == 1 and "not a building set" in err


def test_explain_with_check(capsys, tmp_path):
    cert = tmp_path / "c.json"
    run(capsys, "certify", "ulyanov", "--base", "X", "--n", "3", "--output", str(cert))
    code, out, _ = run(capsys, "explain", str(cert), "--check")
    assert code == 0
    assert out.splitlines()[-1].startswith("check: ok")
    assert "blocked by: X:hodge_witt, X:ordinary" in out
    doc = json.loads(cert.read_text())
    doc["certificate"]["claim"]["verdict"] = "true"
    cert.write_text(json.dumps(doc))
    code, out, _ = run(capsys, "explain", str(cert), "--check")
    assert code == 1 and "FAILED" in out


def test_towers(capsys):
    code, out, _ = run(capsys, "certify", "tdn", "--d", "2", "--n", "4")
    assert code == 0 and json.loads(out)["route"] == "tower"
    code, out, _ = run(capsys, "build", "keel", "--n", "4", "--format", "text")
    assert code == 0 and out.splitlines()[0].startswith("M_0,5")


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "wonderful", "betti", "fm", "--n", "2"], capture_output=True, text=True, check=True
    )
    assert proc.stdout == "1 + 3*t^2 + 4*t^4 + 3*t^6 + t^8\n"
