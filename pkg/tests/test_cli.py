import json

import pytest

from curvlab import io as tio
from curvlab import random_curvature_tensor
from curvlab.cli import main, report_body

FAST = ["--restarts", "16", "--seed", "3"]


@pytest.fixture
def files(tmp_path):
    paths = {}
    for key, args in {
        "cp2": ["fubini-study", "m=2"],
        "s5": ["sphere", "n=5", "kappa=1"],
        "s6": ["sphere", "n=6"],
        "s2": ["sphere", "n=2"],
        "sc4": ["sphere-cross-circle", "n=4"],
        "flat5": ["flat", "n=5"],
    }.items():
        p = tmp_path / f"{key}.json"
        assert main(["model", *args, "--out", str(p)]) == 0
        paths[key] = str(p)
    p = tmp_path / "s2s2.json"
    assert main(["model", "product", f"a={paths['s2']}", f"b={paths['s2']}", "--out", str(p)]) == 0
    paths["s2s2"] = str(p)
    return paths


def _run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip().startswith("{") else out


def test_model_prints_scalars(tmp_path, capsys):
    p = tmp_path / "m.json"
    assert main(["model", "fubini-study", "m=2", "--out", str(p)]) == 0
    summary = json.loads(capsys.readouterr().out)
    assert summary["dim"] == 4 and summary["s0"] == 2.0
    assert main(["model", "sphere", "n=5", "kappa=1", "--out", str(p), "--format", "dense"]) == 0
    assert json.loads(capsys.readouterr().out)["s0"] == 1.0
    assert json.loads(p.read_text())["format"] == "dense"


def test_model_to_stdout(capsys):
    assert main(["model", "flat", "n=3"]) == 0
    assert tio.loads(capsys.readouterr().out).dim == 3


def test_product_dimension(files, capsys):
    assert tio.load(files["s2s2"]).dim == 4


@pytest.mark.parametrize("argv", [
    ["model", "torus", "n=3"],
    ["model", "sphere", "n=x"],
    ["model", "sphere", "n"],
    ["model", "sphere", "k=2", "n=3"],
    ["model", "sphere", "n=1"],
    ["model", "fubini-study"],
    ["model", "product", "a=x.json"],
    ["check"],
    ["minimize", "x.json", "--functional", "nope"],
])
def test_usage_errors_exit_one(argv, capsys):
    assert main(argv) == 1
    assert "curvlab: error" in capsys.readouterr().err


def test_check_cp2_main_is_weak(files, capsys):
    code, rep = _run(capsys, ["check", files["cp2"], "--condition", "main", *FAST])
    assert code == 2 and rep["exit_code"] == 2
    assert abs(rep["results"]["extremal_value"]) < 1e-6
    assert rep["config"]["restarts"] == 16 and rep["seed"] == 3
    assert len(rep["input"]["sha256"]) == 64


def test_check_sphere_pic(files, capsys):
    code, rep = _run(capsys, ["check", files["s6"], "--condition", "pic", *FAST])
    assert code == 0 and rep["results"]["extremal_value"] == pytest.approx(4.0)


def test_check_product_weak_fails(files, capsys):
    code, rep = _run(capsys, ["check", files["s2s2"], "--condition", "main-weak", *FAST])
    assert code == 3 and rep["results"]["verdict"] == "fails"


def test_check_errors(tmp_path, files, capsys):
    assert main(["check", str(tmp_path / "missing.json"), "--condition", "main"]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"dim": 4, "format": "sparse", "entries": [[1, 2, 3, 4, 1.0]]}))
    assert main(["check", str(bad), "--condition", "main"]) == 1
    assert "first_bianchi" in capsys.readouterr().err
    assert main(["check", files["s5"], "--condition", "biorthogonal"]) == 1


def test_identities_table(tmp_path, files, capsys):
    p = tmp_path / "r5.json"
    tio.save(random_curvature_tensor(5, 1), p)
    code, rep = _run(capsys, ["identities", str(p)])
    names = {r["identity"] for r in rep["results"]["identities"]}
    assert code == 0
    assert {"a-average", "b-average", "scalar(gamma=0.5)", "rotated-frames"} <= names
    assert "4d" not in names and any("4d" in s for s in rep["results"]["skipped"])
    assert all(r["relative_residual"] < 1e-9 for r in rep["results"]["identities"])
    code, rep = _run(capsys, ["identities", files["cp2"]])
    assert "4d" in {r["identity"] for r in rep["results"]["identities"]}
    code, rep = _run(capsys, ["identities", files["flat5"]])
    assert all(r["max_abs_residual"] == 0.0 for r in rep["results"]["identities"])


def test_minimize_with_oracle(files, capsys):
    code, rep = _run(capsys, ["minimize", files["cp2"], "--functional", "sectional-min", "--oracle", "1000000", *FAST])
    res = rep["results"]
    assert code == 0
    assert abs(res["value"] - 1.0) < 1e-4 and abs(res["oracle"]["value"] - 1.0) < 1e-4
    code, rep = _run(capsys, ["minimize", files["sc4"], "--functional", "condition", "--gamma", "0.5", *FAST])
    assert rep["results"]["value"] == pytest.approx(1.5, abs=1e-6)
    for f in ("a-sum", "isotropic", "sectional-max", "flag"):
        code, rep = _run(capsys, ["minimize", files["flat5"], "--functional", f, *FAST])
        assert code == 0 and rep["results"]["value"] == 0.0


def test_minimize_oracle_disagreement_exits_four(files, capsys):
    # a single restart with one iteration cannot keep up with the oracle on CP^2
    code, rep = _run(capsys, ["minimize", files["cp2"], "--functional", "condition", "--restarts", "1",
                              "--max-iter", "1", "--oracle", "20000"])
    assert code == 4 and rep["exit_code"] == 4


def test_scan_and_determinism(tmp_path, capsys):
    argv = ["scan", "--family", "prop-main", "--trials", "4", "--restarts", "8", "--seed", "7"]
    code, first = _run(capsys, argv)
    assert code == 0 and first["results"]["violation_count"] == 0
    code, second = _run(capsys, argv + ["--workers", "2"])
    assert report_body(first) == report_body(second)
    assert "timing" in first


def test_seed_from_environment(files, capsys, monkeypatch):
    monkeypatch.setenv("CURVLAB_SEED", "41")
    code, rep = _run(capsys, ["check", files["s5"], "--condition", "pic", "--restarts", "4"])
    assert rep["seed"] == 41 and rep["config"]["seed"] == 41
    monkeypatch.setenv("CURVLAB_SEED", "-3")
    assert main(["check", files["s5"], "--condition", "pic"]) == 1


def test_report_to_file(tmp_path, files, capsys):
    out = tmp_path / "rep.json"
    assert main(["check", files["s5"], "--condition", "pic", *FAST, "--out", str(out)]) == 0
    assert json.loads(out.read_text())["results"]["verdict"] == "holds-strict"
