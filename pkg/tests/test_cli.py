import json
import subprocess
import sys
from fractions import Fraction

import pytest

from fairbits.cli import main
from fairbits.dyadic import Dyadic


def run(*argv):
    p = subprocess.run([sys.executable, "-m", "fairbits", *argv], capture_output=True)
    return p.returncode, p.stdout, p.stderr


def run_twice(*argv):
    a = run(*argv)
    b = run(*argv)
    assert a[0] == 0, a[2].decode()
    assert a[1] == b[1]
    return a[1]


def test_sample_real_example():
    out = run_twice("sample-real", "--dist", "uniform", "--precision", "8", "--count", "1",
                    "--seed", "7")
    s = json.loads(out)["samples"][0]
    lo, hi = Dyadic.parse(s["lo"]), Dyadic.parse(s["hi"])
    assert hi - lo <= Dyadic(1, -8)


def test_flag_position_does_not_matter():
    a = run("--seed", "7", "sample-real", "--dist", "gaussian", "--count", "2")
    b = run("sample-real", "--dist", "gaussian", "--count", "2", "--seed", "7")
    assert a[0] == 0 and a[1] == b[1]


def test_threads_do_not_change_output():
    args = ("sample-real", "--dist", "cantor", "--count", "6", "--seed", "3")
    assert run(*args)[1] == run(*args, "--threads", "2")[1]


def test_csv_output():
    out = run_twice("--seed", "1", "--format", "csv", "sample-real", "--dist", "dirac:3/8",
                    "--count", "2").decode().splitlines()
    assert out[0] == "index,lo,hi,decimal" and len(out) == 3


def test_report_bits_goes_to_stderr():
    a = run("--seed", "2", "sample-real", "--dist", "uniform", "--count", "3")
    b = run("--seed", "2", "sample-real", "--dist", "uniform", "--count", "3", "--report-bits")
    assert a[1] == b[1] and a[2] == b""
    assert b"consumed" in b[2]


def test_push(tmp_path):
    w = tmp_path / "w.json"
    w.write_text(json.dumps({"00": "1/8", "01": "1/8", "10": "1/4", "11": "1/2"}))
    out = json.loads(run_twice("push", "--weights", str(w), "--depth", "2", "--count", "10",
                               "--seed", "4"))
    assert len(out["runs"]) == 10
    assert all(r["output"] in ("00", "01", "10", "11") for r in out["runs"])


def test_push_inconsistent_weights_names_cylinder(tmp_path):
    w = tmp_path / "w.json"
    w.write_text(json.dumps({"0": "1/2", "00": "1/8", "01": "1/4", "10": "1/4", "11": "1/4"}))
    code, out, err = run("push", "--weights", str(w), "--depth", "2", "--count", "10")
    assert code == 1 and out == b""
    assert b"cylinder '0'" in err


def test_sample_path_json_and_csv():
    obj = json.loads(run_twice("sample-path", "--depth", "3", "--precision", "12",
                               "--c-dist", "dirac:2", "--seed", "5"))
    assert obj["depth"] == 3 and len(obj["values"]) == 9
    assert obj["cert"]["family"] == "levy" and obj["cert"]["moc"][0] == 4
    assert {"rejections", "bits_used"} <= set(obj["diagnostics"])
    csv_out = run_twice("sample-path", "--depth", "2", "--count", "2", "--emit", "csv",
                        "--seed", "5").decode().splitlines()
    assert csv_out[0] == "path,t,lo,hi" and len(csv_out) == 1 + 2 * 5


def test_sample_path_default_table():
    obj = json.loads(run_twice("sample-path", "--depth", "4", "--seed", "8"))
    assert Dyadic.parse(obj["cert"]["C"]["lo"]) >= Dyadic(1)


@pytest.mark.parametrize("kind, n", [("schauder", "6"), ("kl", "8"), ("donsker", "100")])
def test_oracle(kind, n):
    obj = json.loads(run_twice("oracle", kind, "--n", n, "--t", "0,1/4,1", "--count", "3",
                               "--seed", "9"))
    assert len(obj["runs"]) == 3
    assert obj["runs"][0]["values"][0]["lo"] == obj["runs"][0]["values"][0]["hi"]


def test_oracle_rejects_non_dyadic_time():
    code, _, err = run("oracle", "schauder", "--n", "3", "--t", "1/3")
    assert code == 1 and b"dyadic" in err


def test_estimate_cdist(tmp_path):
    out = tmp_path / "c.csv"
    code, _, _ = run("estimate-cdist", "--paths", "100", "--depth", "3", "--seed", "10",
                     "--out", str(out))
    assert code == 0
    text = out.read_text()
    assert run_twice("estimate-cdist", "--paths", "100", "--depth", "3", "--seed", "10").decode() == text
    assert "n_paths" in text and "levy" in text


def test_unknown_flag_is_usage_error():
    code, _, err = run("sample-real", "--dist", "uniform", "--bogus")
    assert code == 1 and b"unrecognized" in err
    assert main(["nope"]) == 1


def test_bad_values_exit_one():
    assert run("sample-real", "--dist", "weird")[0] == 1
    assert run("sample-real", "--dist", "uniform", "--count", "0")[0] == 1
    assert run("sample-path", "--c-dist", "dirac:1/2")[0] == 1


def test_validate_realizer_passes():
    code, out, _ = run("validate", "--suite", "realizer", "--size", "2000", "--seed", "1")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["seed"] == 1


def test_validate_exit_code_tracks_report(monkeypatch, capsys):
    import fairbits.cli as cli

    monkeypatch.setitem(cli.SUITES, "realizer",
                        lambda s, **kw: {"suite": "realizer", "tests": [], "passed": False})
    assert cli.main(["validate", "--suite", "realizer", "--seed", "1"]) == 2
    assert json.loads(capsys.readouterr().out)["passed"] is False
