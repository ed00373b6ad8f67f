import json
import subprocess
import sys
from pathlib import Path

import pytest

from balancing_cert.cli import EXIT_FAIL, EXIT_OK, EXIT_PRECISION, main

GOLDEN = Path(__file__).parent / "golden" / "search_k3_n100.csv"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_search_csv_matches_golden(capsys):
    code, out, _ = run(capsys, "search", "--k", "3", "--n1-max", "100", "--format", "csv")
    assert code == EXIT_OK
    assert out == GOLDEN.read_text()


def test_search_json_and_table(capsys):
    code, out, _ = run(capsys, "search", "--k", "2", "--n1-max", "100", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["a1_max"] == "256"
    assert ["3", "1", "5", "2"] in doc["solutions"]
    code, out, _ = run(capsys, "search", "--k", "1", "--n1-max", "20")
    assert code == EXIT_OK
    assert out.splitlines()[0].split() == ["n1", "n2", "a1"]
    assert "solution(s) with n1 <= 20" in out


def test_search_rejects_small_a1_max(capsys):
    code, _, err = run(capsys, "search", "--k", "3", "--n1-max", "100", "--a1-max", "10")
    assert code == EXIT_FAIL and "a1_bound" in err


@pytest.mark.parametrize("k,sol,code", [
    ("3", "3,3,6,2,1", EXIT_OK),
    ("3", "3,3,6,2,0", EXIT_FAIL),
    ("1", "1,1,0", EXIT_FAIL),
    ("1", "1,1,1", EXIT_OK),
    ("2", "1,1,1", EXIT_FAIL),       # wrong arity
    ("3", "1,2,3,2,1", EXIT_FAIL),   # n1 < n2
])
def test_verify_exit_codes(capsys, k, sol, code):
    assert run(capsys, "verify", "--k", k, "--solution", sol)[0] == code


def test_bounds_json(capsys):
    code, out, _ = run(capsys, "bounds", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK
    assert set(doc["bound_table"]) >= {"1A", "1B", "2", "steps"}
    assert doc["n1_upper"]["printed_reading"]["decimal"].endswith("e59")
    assert doc["bound_table"]["steps"]["7"]["exponent"] == "4"


def test_reduce_small_M(capsys):
    code, out, _ = run(capsys, "reduce", "--M", "1000000", "--format", "json")
    doc = json.loads(out)
    assert code == EXIT_OK and doc["M"] == "1000000"
    assert int(doc["final_n1_bound"]) < 100
    code, out, _ = run(capsys, "reduce", "--M", "1e6")
    assert code == EXIT_OK and "final: n1 <=" in out


def test_reduce_rejects_bad_M(capsys):
    with pytest.raises(SystemExit):
        main(["reduce", "--M", "abc"])
    with pytest.raises(SystemExit):
        main(["reduce", "--M", "0"])


def test_precision_cap_exhaustion_exit_code(capsys):
    code, _, err = run(capsys, "reduce", "--M", "1e40", "--precision", "64", "--precision-cap", "96")
    assert code == EXIT_PRECISION
    assert "precision cap exhausted" in err


def test_global_flags_either_side(capsys):
    a = run(capsys, "--jobs", "2", "search", "--k", "3", "--n1-max", "30", "--format", "csv")
    b = run(capsys, "search", "--k", "3", "--n1-max", "30", "--format", "csv", "--jobs", "2")
    assert a == b and a[0] == EXIT_OK


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "balancing_cert", "verify", "--k", "3",
                          "--solution", "2,2,2,2,2"], capture_output=True, text=True)
    assert res.returncode == 0 and "holds" in res.stdout


def test_certify_to_file(tmp_path, capsys, certificate):
    out = tmp_path / "cert.json"
    code, text, _ = run(capsys, "certify", "--out", str(out))
    assert code == EXIT_OK and "verdict: complete" in text
    assert out.read_text() == certificate.to_json()
