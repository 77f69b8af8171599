import json
import math

import pytest

from seqnorm.cli import main
from seqnorm.core import FiniteVector
from seqnorm.io import load_family, load_vector, load_witness, save_vector
from seqnorm.witness import evaluate_witness, validate_witness, witness_from_json, witness_to_json


def run_cli(capsys, *args):
    code = main([str(a) for a in args])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


@pytest.fixture()
def vec_file(tmp_path):
    p = tmp_path / "v.json"
    p.write_text(json.dumps({"coords": [[1, 1.0], [2, 1.0]]}))
    return p


def test_norm_x2(capsys, vec_file):
    code, out = run_cli(capsys, "norm", "x2", vec_file)
    assert code == 0
    assert out["value"] == 1.0
    assert out["witness_rule"] == "sup"


def test_norm_x1_small(capsys, tmp_path):
    p = tmp_path / "v15.json"
    p.write_text(json.dumps({"coords": [[i, 1.0] for i in range(1, 16)]}))
    code, out = run_cli(capsys, "norm", "x1", p, "--config", "small")
    assert code == 0
    assert out["value"] == pytest.approx(7.9913, abs=1e-3)
    assert "config_hash" in out


def test_norm_empty_vector(capsys, tmp_path):
    p = tmp_path / "zero.json"
    p.write_text(json.dumps({"coords": []}))
    code, out = run_cli(capsys, "norm", "x2", p)
    assert code == 0 and out["value"] == 0.0


def test_norm_witness_file_roundtrip(capsys, tmp_path):
    p = tmp_path / "v70.json"
    x = FiniteVector.ones(70)
    save_vector(x, str(p))
    wpath = tmp_path / "w.json"
    code, out = run_cli(capsys, "norm", "x2", p, "--mode", "segment", "--witness", wpath)
    assert code == 0
    assert out["value"] >= 1.5 - 1e-12
    w = load_witness(str(wpath))
    validate_witness(w, x)
    assert evaluate_witness(w, x) == pytest.approx(out["value"], abs=1e-12)
    assert witness_from_json(witness_to_json(w)) == w


def test_seminorm_commands(capsys, vec_file):
    code, out = run_cli(capsys, "seminorm", "triple", vec_file, "-m", "2")
    assert code == 0 and out["value"] == pytest.approx(1.0, abs=1e-12)
    code, out = run_cli(capsys, "seminorm", "ell", vec_file, "-l", "2")
    assert code == 0 and out["value"] == pytest.approx(0.63093, abs=1e-5)
    code, out = run_cli(capsys, "seminorm", "ellm0", vec_file, "-l", "1", "--m0", "4")
    assert code == 0 and out["value"] == pytest.approx(0.5, abs=1e-12)
    code, out = run_cli(capsys, "seminorm", "ell", vec_file, "--space", "x1", "-l", "5")
    assert code == 0 and out["value"] == pytest.approx(2 / math.log2(6), abs=1e-12)


def test_exit_codes(capsys, tmp_path, vec_file):
    code, _ = run_cli(capsys, "norm", "x2", tmp_path / "missing.json")
    assert code == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    code, _ = run_cli(capsys, "norm", "x2", bad)
    assert code == 2
    big = tmp_path / "big.json"
    big.write_text(json.dumps({"coords": [[i, 1.0] for i in range(1, 20)]}))
    code, _ = run_cli(capsys, "norm", "x2", big)  # exhaustive limit
    assert code == 2
    code, out = run_cli(capsys, "norm", "x2", big, "--mode", "segment")
    assert code == 0


def test_verify_exit_status_and_report_shape(capsys):
    code, out = run_cli(capsys, "verify", "matrix", "--seed", "11", "--count", "25")
    assert code == 0 and out["ok"]
    item = out["items"][0]
    assert {"instance", "premise_status", "lhs", "rhs", "margin"} <= set(item)


def test_verify_requires_seed(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "matrix"])
    assert exc.value.code == 2


def test_verify_exit_one_on_asserted_failure(capsys, monkeypatch):
    from seqnorm import suites as suites_mod
    from seqnorm.suites import SuiteItem, SuiteReport

    def failing(count, seed):
        rep = SuiteReport("matrix", seed)
        rep.items.append(SuiteItem("forced", "met", 1.0, 0.0, -1.0, tol=0.0))
        return rep

    monkeypatch.setitem(suites_mod.SUITES, "matrix", failing)
    # the CLI module binds SUITES by reference, so the patch is visible
    code, out = run_cli(capsys, "verify", "matrix", "--seed", "0", "--count", "1")
    assert code == 1 and not out["ok"]


def test_verify_determinism(capsys):
    code1, out1 = run_cli(capsys, "verify", "embed", "--seed", "4", "--count", "10")
    code2, out2 = run_cli(capsys, "verify", "embed", "--seed", "4", "--count", "10")
    out1.pop("timings")
    out2.pop("timings")
    assert json.dumps(out1, sort_keys=True) == json.dumps(out2, sort_keys=True)


def test_construct_chain_artifacts(capsys, tmp_path):
    code, out = run_cli(
        capsys, "construct", "chain", "--l", "2", "--out-dir", tmp_path / "art"
    )
    assert code == 0 and out["status"] == "ok"
    assert out["certificate"] == pytest.approx(1.2619, abs=1e-4)
    b1 = load_vector(str(tmp_path / "art" / "chain_block_1.json"))
    assert b1 == FiniteVector.ones(2)
    fam = load_family(str(tmp_path / "art" / "chain_family.json"))
    assert fam.length == 2


def test_construct_chain_budget_report(capsys, tmp_path):
    code, out = run_cli(
        capsys, "construct", "chain", "--l", "5", "--budget", "100",
        "--out-dir", tmp_path / "art",
    )
    assert code == 0
    assert out["status"] == "budget-exceeded"
    assert "2**" in out["min_support"]


def test_construct_lp_average(capsys, tmp_path):
    b1 = tmp_path / "b1.json"
    b2 = tmp_path / "b2.json"
    save_vector(FiniteVector.basis(1), str(b1))
    save_vector(FiniteVector.basis(2), str(b2))
    code, out = run_cli(
        capsys, "construct", "lp-average", "--p", "1", "--blocks", b1, b2,
        "--out-dir", tmp_path / "art",
    )
    assert code == 0 and out["constant"] == 2.0 and out["exact"]
    avg = load_vector(str(tmp_path / "art" / "average.json"))
    assert avg == 0.5 * FiniteVector.ones(2)
