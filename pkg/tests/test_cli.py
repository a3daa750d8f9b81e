import json
import subprocess
import sys

import numpy as np
import pytest

from shapestat import cli
from shapestat.drivers import AnalysisConfig, dumps, run_mean_test, run_summary, run_variation_test
from shapestat.errors import InputError
from shapestat.extrinsic import extrinsic_mean, extrinsic_variation
from shapestat.io import LandmarkFile, parse_landmarks, write_landmarks
from shapestat.rng import stream
from shapestat.simulate import SimSpec, default_template, simulate_kads


def sim_file(seed, sd=0.02, n=30, k=5, label=None, key=()):
    kads = simulate_kads(SimSpec(default_template(k), sd, n), stream(seed, *key))
    return LandmarkFile(kads, label or f"s{seed}")


@pytest.fixture
def files(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    write_landmarks(sim_file(1), a)
    write_landmarks(sim_file(2), b)
    return a, b


def run(argv, capsys):
    code = cli.main([str(x) for x in argv])
    return code, capsys.readouterr().out


def test_identical_files(files, capsys):
    a, _ = files
    code, out = run(["mean-test", a, a], capsys)
    doc = json.loads(out)
    assert code == 0
    for t in doc["tests"]:
        assert t["statistic"] == pytest.approx(0, abs=1e-12)
        assert t["p_value"] == pytest.approx(1.0) and t["reject"] is False
    code, out = run(["variation-test", a, a], capsys)
    assert code == 0 and all(t["statistic"] == 0 for t in json.loads(out)["tests"])


def test_document_schema_and_config_echo(files, capsys):
    a, b = files
    code, out = run(["mean-test", a, b, "--alpha", "0.1"], capsys)
    doc = json.loads(out)
    assert set(doc) == {"command", "config", "samples", "tests", "warnings"}
    assert doc["command"] == "mean-test"
    assert doc["config"] == {
        "alpha": 0.1, "method": "both", "step": 1.0, "tol": 1e-9, "max_iter": 100,
        "fd_step": 1e-4, "seed": 0, "replicates": 500, "bootstrap": 0,
    }
    assert [(s["label"], s["method"]) for s in doc["samples"]] == [
        ("a", "extrinsic"), ("a", "intrinsic"), ("b", "extrinsic"), ("b", "intrinsic")
    ]
    for s in doc["samples"]:
        assert s["n"] == 30 and s["k"] == 5 and len(s["mean_preshape"]) == 5
        assert s["variation"] > 0
    assert [t["name"] for t in doc["tests"]] == ["extrinsic_mean", "intrinsic_mean"]
    for t in doc["tests"]:
        assert t["df"] == 6 and t["distribution"] == "chi_squared" and t["alpha"] == 0.1
    assert doc["warnings"] == []


def test_method_selection_and_json_flag(files, tmp_path, capsys):
    a, b = files
    dest = tmp_path / "r.json"
    code, out = run(["variation-test", a, b, "--method", "intrinsic", "--json", dest], capsys)
    assert code == 0 and out == ""
    doc = json.loads(dest.read_text())
    assert [t["name"] for t in doc["tests"]] == ["intrinsic_variation"]
    assert doc["tests"][0]["distribution"] == "standard_normal" and "df" not in doc["tests"][0]


def test_byte_identical_output(files, capsys):
    a, b = files
    outs = [run(["mean-test", a, b], capsys)[1] for _ in range(2)]
    assert outs[0] == outs[1]
    outs = [run(["variation-test", a, b, "--bootstrap", "20", "--seed", "3"], capsys)[1] for _ in range(2)]
    assert outs[0] == outs[1]


def test_bootstrap_flag(files, capsys):
    a, b = files
    code, out = run(["variation-test", a, b, "--bootstrap", "50", "--method", "extrinsic"], capsys)
    t = json.loads(out)["tests"][0]
    assert code == 0
    assert t["name"] == "extrinsic_variation_bootstrap" and t["distribution"] == "bootstrap"
    assert 1 / 51 <= t["p_value"] <= 1
    assert t["extra"]["replicates"] == 50


def test_csv_and_summary(tmp_path, capsys):
    p = tmp_path / "c.csv"
    write_landmarks(sim_file(5), p, "csv")
    code, out = run(["summary", p, "--format", "csv", "--method", "extrinsic"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["tests"] == [] and doc["samples"][0]["label"] == "c"


def test_parse_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("3 1\n0 0\n1 0\n")
    code, out = run(["mean-test", bad, bad], capsys)
    assert code == 2
    err = json.loads(out)["error"]
    assert err["type"] == "ShapeMismatch" and "line" in err["message"]
    code, _ = run(["mean-test", tmp_path / "missing.txt", bad], capsys)
    assert code == 2
    code, _ = run(["mean-test", bad, bad, "--alpha", "2"], capsys)
    assert code == 2


def test_mismatched_k_is_usage_error(tmp_path, capsys):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    write_landmarks(sim_file(1, k=5), a)
    write_landmarks(sim_file(2, k=6), b)
    assert run(["mean-test", a, b], capsys)[0] == 2


def test_numerical_failure_exit_code(tmp_path, capsys):
    # too few objects for a nonsingular covariance in 2k - 4 = 12 dimensions
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    write_landmarks(sim_file(1, n=4, k=8), a)
    write_landmarks(sim_file(2, n=4, k=8), b)
    code, out = run(["mean-test", a, b, "--method", "extrinsic"], capsys)
    assert code == 3
    assert json.loads(out)["error"]["type"] == "SingularCovariance"


def test_usage_errors_from_argparse(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["mean-test"])
    assert info.value.code == 2


def test_simulate_and_plot_commands(tmp_path, capsys):
    out = tmp_path / "sim.txt"
    assert run(["simulate", "--k", "6", "--n", "12", "--seed", "4", "--out", out], capsys)[0] == 0
    lf = parse_landmarks(out)
    assert (lf.n, lf.k) == (12, 6)
    out2 = tmp_path / "sim2.txt"
    run(["simulate", "--k", "6", "--n", "12", "--seed", "4", "--out", out2], capsys)
    assert out.read_bytes() == out2.read_bytes()
    svg = tmp_path / "f.svg"
    assert run(["plot", out, "--out", svg, "--method", "intrinsic"], capsys)[0] == 0
    assert svg.read_text().count("<circle") == 72


def test_simulate_with_template_file(tmp_path, capsys):
    tpl = tmp_path / "tpl.txt"
    tpl.write_text("4 1\n0 0\n2 0\n2 1\n0 1\n")
    out = tmp_path / "s.txt"
    assert run(["simulate", "--template", tpl, "--n", "3", "--noise-sd", "0.001", "--out", out], capsys)[0] == 0
    assert parse_landmarks(out).k == 4


def test_calibrate_command(capsys):
    code, out = run(["calibrate", "--k", "4", "--n", "20", "--m", "20", "--replicates", "3", "--seed", "2"], capsys)
    doc = json.loads(out)
    assert code == 0 and doc["command"] == "calibrate"
    assert doc["config"]["replicates"] == 3 and doc["config"]["noise_sd"] == 0.02
    assert [m["replicates"] for m in doc["calibration"]["methods"]] == [3, 3]


def test_data_dir_lookup(tmp_path, monkeypatch, capsys):
    write_landmarks(sim_file(1), tmp_path / "x.txt")
    monkeypatch.setenv("SHAPESTAT_DATA_DIR", str(tmp_path))
    monkeypatch.chdir(tmp_path.parent)
    assert run(["summary", "x.txt", "--method", "extrinsic"], capsys)[0] == 0


def test_module_entry_point(files):
    a, _ = files
    res = subprocess.run([sys.executable, "-m", "shapestat", "summary", str(a), "--method", "extrinsic"],
                         capture_output=True, text=True, check=False)
    assert res.returncode == 0
    assert json.loads(res.stdout)["command"] == "summary"


def test_config_validation():
    with pytest.raises(InputError):
        AnalysisConfig(method="median")
    with pytest.raises(InputError):
        AnalysisConfig(seed=-3)
    with pytest.raises(InputError):
        AnalysisConfig(replicates=0)


def test_dumps_rejects_nan():
    with pytest.raises(ValueError):
        dumps({"x": float("nan")})


@pytest.mark.slow
def test_variation_test_power():
    config = AnalysisConfig(method="extrinsic")
    rejections = 0
    for r in range(100):
        a = sim_file(40, sd=0.01, n=200, key=(r, 0))
        b = sim_file(40, sd=0.02, n=200, key=(r, 1))
        doc = run_variation_test(a, b, config)
        rejections += doc["tests"][0]["reject"]
    assert rejections >= 90


@pytest.mark.slow
def test_mean_test_size_over_seeded_runs():
    config = AnalysisConfig()
    rejected = {"extrinsic_mean": 0, "intrinsic_mean": 0}
    runs = 200
    for r in range(runs):
        a = sim_file(41, n=100, k=4, key=(r, 0))
        b = sim_file(41, n=100, k=4, key=(r, 1))
        for t in run_mean_test(a, b, config)["tests"]:
            rejected[t["name"]] += t["reject"]
    for count in rejected.values():
        assert 0.02 <= count / runs <= 0.09


def test_summary_driver_matches_direct_computation():
    lf = sim_file(6)
    doc = run_summary([lf], AnalysisConfig(method="extrinsic"))
    mean, eig = extrinsic_mean(lf.shapes())
    s = doc["samples"][0]
    assert s["variation"] == pytest.approx(extrinsic_variation(eig), abs=1e-15)
    np.testing.assert_allclose([complex(*p) for p in s["mean_preshape"]], mean.u, atol=1e-15)
