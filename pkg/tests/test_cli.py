import io
import json
import subprocess
import sys

import pytest

from clam import Tables
from clam.cli import run


@pytest.fixture(autouse=True)
def cache_dir(tmp_path, monkeypatch):
    d = tmp_path / "cache"
    monkeypatch.setenv("CLAM_CACHE_DIR", str(d))
    return d


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def test_compute_example():
    code, text = call("compute", "--n", "10", "--k", "2", "--x", "1e7")
    assert code == 0
    d = json.loads(text)
    assert d["phi_chain"] == [10, 4, 2] and d["lambda_chain"] == [4, 2]
    assert d["breakdown"]["s3"] >= 0


def test_compute_unit():
    code, text = call("compute", "--n", "1", "--k", "3")
    d = json.loads(text)
    assert code == 0 and d["phi_chain"] == [1, 1, 1, 1] and d["lambda_chain"] == [1, 1, 1]


def test_pattern_example():
    code, text = call("pattern", "--pattern", "LP", "--n", "10")
    d = json.loads(text)
    assert code == 0
    assert (d["value"], d["l"], d["k_eff"]) == (2, 0, 2)


@pytest.mark.parametrize(
    "argv",
    [
        ["compute", "--n", "0", "--k", "2"],
        ["compute", "--n", "10"],
        ["compute", "--n", "1.5", "--k", "2"],
        ["scan", "--lo", "10", "--hi", "9", "--k", "2"],
        ["scan", "--lo", "2", "--hi", "9", "--k", "2", "--threads", "0"],
        ["pattern", "--pattern", "PQ", "--n", "10"],
        ["sieve", "--limit", "1"],
        ["bogus"],
        [],
    ],
)
def test_argument_errors_exit_1(argv, capsys):
    assert run(argv, out=io.StringIO()) == 1
    assert "error" in capsys.readouterr().err


def test_fail_fast(monkeypatch):
    def boom(*a, **k):
        raise AssertionError("table construction started")

    monkeypatch.setattr(Tables, "build", classmethod(boom))
    assert run(["scan", "--lo", "50", "--hi", "40", "--k", "2"], out=io.StringIO()) == 1
    assert run(["moments", "--x", "1e5", "--k", "0"], out=io.StringIO()) == 1


def test_scientific_notation():
    code, text = call("diagnostics", "--t", "1e3", "--m", "5")
    d = json.loads(text)
    assert code == 0 and d["t"] == 1000
    assert abs(d["mertens_deviation"]) <= 2
    assert d["progression"]["gap"] <= d["progression"]["gap_bound"]


def test_warning_goes_to_stderr(capsys):
    out = io.StringIO()
    assert run(["moments", "--x", "1e4", "--k", "2", "--json"], out=out) == 0
    json.loads(out.getvalue())
    assert "warning" in capsys.readouterr().err
    assert "warning" not in out.getvalue()


def test_sieve_cache_transparency(cache_dir, tmp_path):
    argv = ["scan", "--lo", "2", "--hi", "20000", "--k", "2", "--x", "1e7"]
    cold = call(*argv)[1]
    code, text = call("sieve", "--limit", "30000")
    assert code == 0
    assert len(json.loads(text)["files"]) == 3
    assert (cache_dir / "spf-30000.clam").exists()
    warm = call(*argv)[1]
    assert warm == cold
    assert call(*argv)[1] == warm
    assert cold.startswith("n,phi_k,lambda_k,log_ratio,hk,s3,normalized\n")


def test_corrupt_cache_exit_2(cache_dir, capsys):
    assert call("sieve", "--limit", "5000")[0] == 0
    path = cache_dir / "lambda-5000.clam"
    raw = bytearray(path.read_bytes())
    raw[100] ^= 0xFF
    path.write_bytes(bytes(raw))
    assert run(["pattern", "--pattern", "L", "--n", "10"], out=io.StringIO()) == 2
    assert "checksum" in capsys.readouterr().err


def test_scan_outputs(tmp_path):
    csv_path = tmp_path / "s.csv"
    code, text = call("scan", "--lo", "2", "--hi", "3000", "--k", "2", "--x", "1e7", "--out", str(csv_path), "--json")
    assert code == 0
    summary = json.loads(text)
    assert summary["count"] == 2999
    rows = csv_path.read_text().splitlines()
    assert len(rows) == 3000
    code, text = call("scan", "--lo", "2", "--hi", "3000", "--k", "2", "--x", "1e7", "--json", "--threads", "4")
    assert json.loads(text) == summary


def test_moments_and_audit():
    code, text = call("moments", "--x", "1e5", "--k", "2", "--json")
    d = json.loads(text)
    assert code == 0 and set(d) == {"x", "k", "m1_exact", "m2_exact", "m1_predicted", "tk_lhs", "tk_ratio"}
    code, text = call("audit", "--x", "2e4", "--k", "2")
    d = json.loads(text)
    assert code == 0 and d["count"] == 20000 and not d["sampled"]
    code, text = call("audit", "--x", "2e4", "--k", "2", "--sample", "300")
    d2 = json.loads(text)
    assert d2["count"] == 300 and d2["sampled"]
    for key in ("large_simple", "large_repeated", "small_lambda", "small_phi_minus_hk"):
        assert "exceed_fraction" in d[key]


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "clam", "pattern", "--pattern", "PL", "--n", "97"],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["value"] == 32
