import json
import subprocess
import sys

import pytest

from toricsecant.cli import RunConfig, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["schema"] == 1
    return data


@pytest.mark.parametrize("n,d,value", [("1,1,1", "2,2,2", 4), ("1,1", "5,3", 6), ("1", "1", 0)])
def test_bound(capsys, n, d, value):
    assert run_json(capsys, "bound", "--n", n, "--d", d)["bound"] == value


def test_separate(capsys):
    assert run_json(capsys, "separate", "--n", "1,2", "--d", "3,2", "--runs", "5")["verdict"]["complete"]
    data = run_json(capsys, "separate", "--n", "1,1", "--d", "2,2", "--runs", "5")
    assert not data["verdict"]["complete"] and data["conclusion"] == "candidate_defective"
    data = run_json(capsys, "separate", "--polytope", "data/fano523456.json")
    assert not data["verdict"]["complete"]


def test_oracle(capsys):
    data = run_json(capsys, "oracle", "--n", "2,2,2", "--d", "1,1,1", "--h", "4")
    e = data["report"]["entries"][0]
    assert (e["computed"], e["expected"], e["status"]) == (25, 26, "defective_evidence")


def test_flatten(capsys):
    data = run_json(capsys, "flatten", "--n", "1,1,2", "--d", "1,3,1", "--h", "5")
    assert data["fired"]
    code, out, _ = run(capsys, "flatten", "--n", "1,1,2", "--d", "1,3,1", "--h", "5", "--split", "0,1,1")
    assert code == 0 and "certificate fired" in out


def test_cremona(capsys):
    data = run_json(capsys, "cremona", "--system", "1,4,1;2^5", "--r", "2")
    assert data["output"]["label"] == "L(1,0,1;2)" and data["output_dim"] == 0
    data = run_json(capsys, "cremona", "--scan", "1,2,1")
    assert [e["h"] for e in data["scan"]["entries"] if e["status"] == "defective_evidence"] == [3]
    code, out, _ = run(capsys, "cremona", "--system", "2,3,1;3,2", "--pair", "0,1")
    assert code == 0 and "extrapolated" in out


def test_table_csv(capsys):
    code, out, _ = run(capsys, "table", "--preset", "P1P2-sum8", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "dims,degs,h,expected,computed,status,bound,certificate_ref"


def test_polytope(capsys, tmp_path):
    dest = tmp_path / "p.json"
    assert run(capsys, "polytope", "product", "--n", "1,2", "--d", "3,2", "-o", str(dest))[0] == 0
    data = run_json(capsys, "polytope", "inspect", str(dest))
    assert data["num_points"] == 24 and data["hyperplane_bound_proof_grade"] is True
    assert run_json(capsys, "polytope", "inspect", "data/fano523456.json")["num_points"] == 8


def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "bound", "--n", "1,x", "--d", "2")[0] == 2
    assert run(capsys, "bound", "--n", "1,1")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "separate", "--polytope", str(tmp_path / "missing.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": [[0, 0.5], [1, 0], [0, 1]]}')
    assert run(capsys, "separate", "--polytope", str(bad))[0] == 2
    assert run(capsys, "flatten", "--n", "5,5", "--d", "4,4", "--h", "2", "--split", "2,2")[0] == 3


def test_seed_env_and_printing(capsys, monkeypatch):
    monkeypatch.setenv("SECANT_SEED", "42")
    code, out, _ = run(capsys, "separate", "--n", "1,2", "--d", "3,2")
    assert code == 0 and out.startswith("seed 42")
    code, out, _ = run(capsys, "separate", "--n", "1,2", "--d", "3,2", "--seed", "7")
    assert out.startswith("seed 7")


def test_byte_identical_json():
    cmd = [sys.executable, "-m", "toricsecant.cli", "oracle", "--n", "1,2", "--d", "2,2", "--format", "json"]
    a = subprocess.run(cmd, capture_output=True, check=True).stdout
    b = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert a == b and a


def test_run_config_validation():
    with pytest.raises(ValueError):
        RunConfig(runs=0)
    with pytest.raises(ValueError):
        RunConfig(seed=-1)
    assert RunConfig(primes=[101]).fixed_field().p == 101
    assert RunConfig().fixed_field() is None
