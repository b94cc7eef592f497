import io
import json
import shutil
import subprocess
import sys

import pytest

import oracles
from morita_ssum.cli import RunConfig, UsageError, run
from morita_ssum.statesum import fixtures_dir


def call(*argv):
    buf = io.StringIO()
    code = run(list(argv), stdout=buf)
    return code, buf.getvalue()


def call_json(*argv):
    code, out = call(*argv)
    return code, json.loads(out)


def test_run_config_validation():
    with pytest.raises(UsageError):
        RunConfig(threads=0)
    with pytest.raises(UsageError):
        RunConfig(tol=0.0)
    RunConfig(scalar="exact", tol=0.0)


def test_hopf_validate_exact():
    code, rep = call_json("hopf", "validate", "vec_s3.hopf", "--scalar", "exact")
    assert code == 0 and rep["pass"]
    assert all(c["residual"] == 0 for c in rep["checks"])
    assert rep["config"]["scalar"] == "exact"


def test_named_hopf_and_invariant():
    code, rep = call_json("hopf", "invariant", "k[S3]")
    assert code == 0
    assert rep["results"]["invariant"] in (6, "6", 6.0)


def test_category_dims():
    code, rep = call_json("category", "dims", "rep_s3.hopf")
    assert code == 0
    assert sorted(x["dim"] for x in rep["results"]["simples"]) == [1, 1, 2]


def test_frobenius_regular_and_check(tmp_path):
    out = tmp_path / "reg.json"
    code, _ = call("frobenius", "regular", "vec_z2.hopf", "--out", str(out))
    assert code == 0 and out.exists()
    code, rep = call_json("frobenius", "check", "vec_z2.hopf", str(out))
    assert code == 0 and rep["pass"]


def test_skeletal_validate_and_corrupted():
    code, rep = call_json("skeletal", "validate", "fib.json")
    assert code == 0 and rep["pass"]
    code, rep = call_json("skeletal", "validate", "corrupted.json")
    assert code == 1 and not rep["pass"]
    assert "pentagon" in rep["failed"]


def test_text_report():
    code, out = call("skeletal", "validate", "corrupted.json", "--report", "text")
    assert code == 1
    assert any(line.startswith("FAIL") and "pentagon" in line for line in out.splitlines())


def test_invariant_fibonacci_sphere():
    code, rep = call_json("invariant", "fib.json", "s3_5tet.json")
    assert code == 0
    assert abs(rep["results"]["invariant"] - oracles.FIB_S3) < 1e-10


def test_invariant_with_bundled_name_and_threads():
    code, rep = call_json("invariant", "vec_s3.json", "l31", "--threads", "2")
    assert code == 0 and abs(rep["results"]["invariant"] - 0.5) < 1e-10


def test_bicolored_invariant():
    code, rep = call_json("invariant", "ctx_vec_s3.json", "s3_5tet.json", "--bicolored", "--labels", "ABABA")
    assert code == 0 and abs(rep["results"]["invariant"] - 1 / 6) < 1e-10
    code, _ = call("invariant", "ctx_vec_s3.json", "s3_5tet.json", "--bicolored", "--labels", "AB")
    assert code == 2


def test_oracle_flat_bundles():
    code, rep = call_json("oracle", "flat-bundles", "Zn(2)", "S3")
    assert code == 0 and abs(rep["results"]["value"] - 2 / 3) < 1e-12


def test_morita_reconstruct_exact():
    code, rep = call_json("morita", "reconstruct", "vec_z2.hopf", "regular", "--scalar", "exact")
    assert code == 0 and rep["pass"]


def test_usage_errors():
    assert call("hopf", "validate", "nope.hopf")[0] == 2
    assert call("hopf", "validate", "vec_z2.hopf", "--threads", "0")[0] == 2
    assert call("frobnicate")[0] == 2
    assert call("--tol", "-1", "hopf", "validate", "vec_z2.hopf")[0] == 2


def test_flags_before_subcommand():
    code, rep = call_json("--scalar", "exact", "hopf", "validate", "vec_z2.hopf")
    assert code == 0 and rep["config"]["scalar"] == "exact"


def test_deterministic_output_is_stable():
    argv = ("invariant", "vec_s3.json", "rp3", "--deterministic")
    a, b = call(*argv), call(*argv)
    assert a == b
    assert "elapsed_s" not in json.loads(a[1])
    assert "elapsed_s" in json.loads(call("invariant", "vec_s3.json", "rp3")[1])


def test_fixture_dir_override(tmp_path, monkeypatch):
    shutil.copy(fixtures_dir() / "fib.json", tmp_path / "only.json")
    monkeypatch.setenv("MORITA_SSUM_FIXTURES", str(tmp_path))
    assert call("skeletal", "validate", "only.json")[0] == 0
    assert call("skeletal", "validate", "fib.json")[0] == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "morita_ssum.cli", "oracle", "flat-bundles", "Z3", "Z2"],
                          capture_output=True, text=True, timeout=120)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["results"]["value"] == 4.0
