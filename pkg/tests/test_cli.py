import json
import subprocess
import sys

import pytest

from diophantus.cli import main, run


def report(argv):
    rep, code = run(argv)
    assert rep["exit_code"] == code
    return rep, code


class TestParam:
    def test_ii20(self):
        rep, code = report(["param", "II20", "--lambda", "1", "--mu", "-2"])
        assert code == 0
        assert rep["outputs"]["point"]["x"] == "3/13"
        assert rep["outputs"]["point"]["y"] == "19/13"
        assert rep["verified"] == [True, True] and rep["verified_all"]

    def test_excluded(self):
        rep, code = report(["param", "III17", "--t", "0"])
        assert code == 2
        assert rep["outputs"]["error"] == "excluded parameter"

    def test_iv32(self):
        rep, code = report(["param", "IV32", "--t0", "3", "--n", "6", "--l0", "40", "--m0", "76"])
        assert code == 0
        assert rep["outputs"]["point"]["x"] == "157/36"
        assert rep["verified"] == [True, True, True]

    def test_iv32_default_split(self):
        rep, code = report(["param", "IV32", "--t0", "2"])
        assert code == 0 and rep["verified_all"]

    def test_float_rejected(self):
        assert report(["param", "II20", "--lambda", "0.5", "--mu", "1"])[1] == 3

    def test_missing_flag(self):
        assert report(["param", "II20", "--lambda", "1"])[1] == 3

    def test_unknown_problem(self):
        assert report(["param", "II99", "--t", "1"])[1] == 3

    def test_positive_flag(self):
        rep, _ = report(["param", "V29", "--p", "3", "--q", "4", "--c", "5", "--positive"])
        assert rep["outputs"]["admissible"] is True
        rep, _ = report(["param", "II20", "--lambda", "1", "--mu", "-2", "--positive"])
        assert rep["outputs"]["admissible"] is False


class TestVerify:
    def test_member(self):
        rep, code = report(["verify", "II31", "x=3/2", "y=15/2", "u=3", "v=9/2", "w=3/2"])
        assert code == 0 and rep["verified"] == [True, True, True]

    def test_non_member_fails_hard(self):
        rep, code = report(["verify", "V29", "x=0", "y=0", "z=0", "w=1"])
        assert code == 1 and rep["verified"] == [False]

    def test_witness_completion(self):
        rep, code = report(["verify", "V29", "x=12/5", "y=3", "z=4", "--solve-witnesses"])
        assert code == 0
        assert rep["outputs"]["point"]["w"] == "481/25"

    def test_bad_coordinate(self):
        assert report(["verify", "II20", "q=1"])[1] == 3


class TestDoubleEq:
    def test_case_i(self):
        rep, code = report(["doubleeq", "--c", "4,4,-1,4,3,-1", "solve"])
        assert code == 0 and rep["outputs"]["point"]["x"] == "65/224"

    def test_obstructed(self):
        rep, code = report(["doubleeq", "--c", "3,0,-1,1,0,1", "solve"])
        assert code == 2
        assert rep["outputs"]["local_obstructions"] == [2, 3]
        assert "2, 3" in rep["outputs"]["reason"]

    def test_first_order(self):
        rep, code = report(["doubleeq", "--c", "0,1,2,0,1,3", "solve", "--factors", "4,1/4"])
        assert code == 0 and rep["outputs"]["point"]["x"] == "97/64"

    def test_classify(self):
        rep, code = report(["doubleeq", "--c", "4,4,-1,4,3,-1", "classify"])
        cls = rep["outputs"]["classification"]
        assert code == 0 and (cls["heath_case"], cls["genus"], cls["smooth"]) == ("I", 1, True)

    def test_iterate(self):
        rep, code = report(["doubleeq", "--c", "4,4,-1,4,3,-1", "iterate", "--steps", "3"])
        assert code == 0
        its = rep["outputs"]["iterates"]
        assert len(its) == 3 and its[0]["point"]["x"] == "65/224"
        assert all(all(it["verified"]) for it in its)
        assert rep["outputs"]["fermat_coefficients"] == [0, 1, -2, 7]

    def test_wrong_arity(self):
        assert report(["doubleeq", "--c", "1,2,3", "classify"])[1] == 3

    def test_precision_env(self, monkeypatch):
        monkeypatch.setenv("DIOPH_PRECISION", "4")
        rep, code = report(["doubleeq", "--c", "3,0,-1,1,0,1", "solve"])
        assert code == 2 and rep["outputs"]["precision"] == 4
        monkeypatch.setenv("DIOPH_PRECISION", "zero")
        assert report(["doubleeq", "--c", "3,0,-1,1,0,1", "solve"])[1] == 3


class TestConic:
    def test_insoluble(self):
        rep, code = report(["conic", "3", "-1", "-16"])
        assert code == 2
        assert rep["outputs"]["soluble"] is False
        assert rep["outputs"]["obstructions"] == [2, 3]

    def test_soluble(self):
        rep, code = report(["conic", "1", "1", "-2"])
        assert code == 0 and rep["outputs"]["witness"] == [1, 1, 1]

    def test_parametrized_conic(self):
        rep, code = report(["conic", "1", "-1", "-2"])
        X, Y, Z = rep["outputs"]["witness"]
        assert code == 0 and X * X - Y * Y - 2 * Z * Z == 0

    def test_zero(self):
        assert report(["conic", "1", "0", "2"])[1] == 3


class TestReduce:
    def test_good(self):
        rep, code = report(["reduce", "--c", "4,4,-1,4,3,-1", "--point", "65/224,79/112,51/112", "--prime", "7"])
        assert code == 0
        assert rep["outputs"]["reduced"] == [2, 4, 4, 0]
        assert rep["outputs"]["reduces_to_infinity"] == ["P1"]

    def test_bad(self):
        rep, code = report(["reduce", "--c", "4,4,-1,4,3,-1", "--proj", "1,2,2,0", "--prime", "5"])
        assert code == 2 and rep["outputs"]["good_reduction"] is False

    def test_point_off_curve(self):
        assert report(["reduce", "--c", "4,4,-1,4,3,-1", "--point", "1,1,1", "--prime", "7"])[1] == 3


def test_output_is_deterministic(capsys):
    argv = ["doubleeq", "--c", "4,4,-1,4,3,-1", "iterate", "--steps", "2"]
    main(argv)
    first = capsys.readouterr().out
    main(argv)
    assert capsys.readouterr().out == first


def test_no_floats_in_output(capsys):
    main(["param", "IV18", "--t", "2"])
    data = json.loads(capsys.readouterr().out)

    def walk(v):
        assert not isinstance(v, float)
        if isinstance(v, dict):
            for w in v.values():
                walk(w)
        elif isinstance(v, list):
            for w in v:
                walk(w)

    walk(data)
    assert data["outputs"]["point"]["y"] == "262143/4096"


def test_timing_goes_to_stderr(capsys):
    main(["--timing", "conic", "1", "1", "-2"])
    out, err = capsys.readouterr()
    assert "timing" not in out and err.startswith("timing_ms=")


def test_batch_preserves_order(tmp_path, capsys):
    batch = tmp_path / "jobs.txt"
    batch.write_text("conic 1 1 -2\n# comment\n\nparam II20 --lambda 1 --mu -2\nconic 3 -1 -16\n")
    code = main(["--batch", str(batch)])
    lines = [json.loads(l) for l in capsys.readouterr().out.splitlines()]
    assert [l["command"].split()[0] for l in lines] == ["conic", "param", "conic"]
    assert [l["exit_code"] for l in lines] == [0, 0, 2]
    assert code == 2


def test_console_script_subprocess():
    proc = subprocess.run(
        [sys.executable, "-m", "diophantus.cli", "param", "II20", "--lambda", "1", "--mu", "-2"],
        capture_output=True, text=True, check=False,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["outputs"]["point"]["x"] == "3/13"


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["conic", "1", "2"]])
def test_parse_errors_exit_3(argv):
    assert run(argv)[1] == 3
