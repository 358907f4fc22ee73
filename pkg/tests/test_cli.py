import json
import subprocess
import sys

import pytest

from artifact.cli import main

FULL_F7 = {"ring": {"p": 7}, "generators": [[1, 1, 0, 1], [1, 0, 1, 1], [3, 0, 0, 1]]}
SR1_Z9 = {"ring": {"p": 3, "n": 2},
          "generators": [[1, 3, 0, 1], [1, 0, 3, 1], [4, 0, 0, 7]], "depth": 2}
BOREL_Z9 = {"ring": {"p": 3, "n": 2},
            "generators": [[1, 1, 0, 1], [1, 0, 3, 1], [2, 0, 0, 1], [1, 0, 0, 2]]}
CUBE_ROOT = {"ring": {"p": 3, "n": 2, "ext": {"var": "u", "minpoly": [-3, 0, 0, 1]}},
             "generators": [[1, 0, 0, 1]]}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_analyze_full_image(capsys):
    code, out, _ = run(capsys, "analyze", "--input", json.dumps(FULL_F7))
    assert code == 0
    rep = json.loads(out)
    assert rep["result"]["projective_class"] == "PGL2(7)"
    assert rep["result"]["regular"] is True


def test_analyze_identity(capsys):
    code, out, _ = run(capsys, "analyze", "--input", '{"ring":{"p":5},"generators":[]}')
    res = json.loads(out)["result"]
    assert code == 0 and res["projective_class"] == "cyclic(1)" and res["regular"] is False


def test_output_is_byte_stable(capsys, tmp_path):
    path = tmp_path / "job.json"
    path.write_text(json.dumps(FULL_F7))
    _, a, _ = run(capsys, "analyze", "--input", str(path))
    _, b, _ = run(capsys, "analyze", "--input", json.dumps(FULL_F7, indent=2))
    assert a == b


def test_echo_reparses(capsys):
    _, out, _ = run(capsys, "cst", "--input", json.dumps(BOREL_Z9))
    echo = json.loads(out)["job"]
    _, again, _ = run(capsys, "cst", "--input", json.dumps(echo))
    assert again == out


def test_pinklie_levels(capsys):
    code, out, _ = run(capsys, "pinklie", "--input", json.dumps(SR1_Z9))
    levels = json.loads(out)["result"]["levels"]
    assert code == 0
    assert [lv["cardinality"] for lv in levels] == [27, 1]
    assert levels[0]["strong"] and levels[0]["I"] == [[3]]


def test_pinklie_depth_flag_overrides(capsys):
    code, out, _ = run(capsys, "pinklie", "--input", json.dumps(SR1_Z9), "--depth", "1")
    assert code == 0 and len(json.loads(out)["result"]["levels"]) == 1


def test_pinklie_precondition(capsys):
    job = {"ring": {"p": 7}, "generators": [[3, 0, 0, 1]], "depth": 1}
    code, out, err = run(capsys, "pinklie", "--input", json.dumps(job))
    assert code == 2 and out == ""
    assert json.loads(err)["error"] == "precondition"


def test_cst_report(capsys):
    code, out, _ = run(capsys, "cst", "--input", json.dumps(CUBE_ROOT))
    res = json.loads(out)["result"]
    assert code == 0
    assert len(res["pairs"]) == 81
    assert res["kernel_size"] == 81
    assert res["abelian"] is False


def test_level_report(capsys, tmp_path):
    code, out, _ = run(capsys, "level", "--input", json.dumps(BOREL_Z9))
    res = json.loads(out)["result"]
    assert code == 0
    assert res["level_ideal_generators"] == [[3]]
    assert res["conjugator_used"] == [[1], [0], [0], [1]]
    conj = tmp_path / "conj.json"
    conj.write_text("[[[1,0],[0,2]]]")
    code, out, _ = run(capsys, "level", "--input", json.dumps(BOREL_Z9), "--conjugators", str(conj))
    assert code == 0 and json.loads(out)["job"]["conjugators"] == [[[1], [0], [0], [2]]]


@pytest.mark.parametrize("argv", [
    ["analyze", "--input", "{not json"],
    ["analyze", "--input", "/nonexistent/job.json"],
    ["analyze", "--input", '{"ring":{"p":4},"generators":[]}'],
    ["analyze", "--input", '{"ring":{"p":3,"n":2},"generators":[]}'],
    ["level", "--input", '{"ring":{"p":3},"generators":[[1,1,0]]}'],
    ["pinklie", "--input", '{"ring":{"p":3},"generators":[]}'],
    ["--caps", "bogus=1", "cst", "--input", '{"ring":{"p":3},"generators":[]}'],
    ["nosuchcommand"],
])
def test_input_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == ""


def test_cap_exceeded_exit_3(capsys):
    code, _, err = run(capsys, "--caps", "group=100", "cst", "--input", json.dumps(FULL_F7))
    assert code == 3 and json.loads(err)["error"] == "cap_exceeded"


def test_output_file(capsys, tmp_path):
    dest = tmp_path / "out.json"
    code, out, _ = run(capsys, "analyze", "--input", json.dumps(FULL_F7), "--output", str(dest))
    assert code == 0 and out == ""
    assert json.loads(dest.read_text())["command"] == "analyze"


def test_verify_filter(capsys):
    code, out, _ = run(capsys, "verify", "--filter", "c04")
    res = json.loads(out)["result"]
    assert code == 0 and res["failed"] == 0 and res["passed"] >= 1


def test_verify_perturbed_fails(capsys):
    code, out, _ = run(capsys, "verify", "--filter", "c01-congruence-lie-Z27", "--perturb")
    assert code == 1 and json.loads(out)["result"]["failed"] >= 1


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "artifact.cli", "analyze", "--input",
                           json.dumps(FULL_F7)], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["command"] == "analyze"
