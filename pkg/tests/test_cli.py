import json
import subprocess
import sys

import numpy as np
import pytest

from conftest import MNIST_IMAGES, MNIST_LABELS
from spiral.cli import main, parse_keep_grid


def run(*argv):
    return main([str(a) for a in argv])


def usage_code(*argv):
    with pytest.raises(SystemExit) as exc:
        run(*argv)
    return exc.value.code


@pytest.fixture
def blobs(tmp_path):
    path = tmp_path / "blobs.csv"
    assert run("synth", "--n", 200, "--d", 2, "--separation", 5, "--seed", 1, "--out", path) == 0
    return path


def test_synth(tmp_path, blobs):
    assert len(blobs.read_text().splitlines()) == 201
    again = tmp_path / "again.csv"
    run("synth", "--n", 200, "--d", 2, "--separation", 5, "--seed", 1, "--out", again)
    assert again.read_bytes() == blobs.read_bytes()
    assert usage_code("synth", "--n", 3, "--seed", 1, "--out", again) == 2


def test_seed_is_mandatory(tmp_path):
    assert usage_code("synth", "--out", tmp_path / "x.csv") == 2


def test_train_and_eval(tmp_path, blobs, capsys):
    model = tmp_path / "m.json"
    assert run("train", "--algo", "spiral", "--r", 0.1, "--epochs", 1, "--seed", 7,
               "--data", blobs, "--out", model) == 0
    assert capsys.readouterr().out.startswith("train_accuracy=")
    doc = json.loads(model.read_text())
    assert doc["algorithm"] == "spiral" and doc["r"] == 0.1 and len(doc["sigma"]) == 4

    assert run("eval", "--model", model, "--data", blobs) == 0
    clean = capsys.readouterr().out.strip()
    assert clean.startswith("accuracy=") and len(clean.split(".")[1]) == 6
    assert run("eval", "--model", model, "--data", blobs, "--keep-fraction", 1.0,
               "--seed", 3) == 0
    assert capsys.readouterr().out.strip() == clean


def test_no_spike_matches_arow(tmp_path, blobs):
    run("train", "--algo", "spiral", "--no-spike", "--seed", 7, "--data", blobs,
        "--out", tmp_path / "s.json")
    run("train", "--algo", "arow", "--seed", 7, "--data", blobs, "--out", tmp_path / "a.json")
    s = json.loads((tmp_path / "s.json").read_text())
    a = json.loads((tmp_path / "a.json").read_text())
    assert s["mu"] == a["mu"] and s["sigma"] == a["sigma"]


def test_bogus_algorithm(tmp_path, blobs, capsys):
    assert usage_code("train", "--algo", "bogus", "--seed", 1, "--data", blobs,
                      "--out", tmp_path / "m.json") == 2
    assert "perceptron" in capsys.readouterr().err


def test_eval_dimension_mismatch(tmp_path, blobs, capsys):
    wide = tmp_path / "wide.csv"
    run("synth", "--n", 10, "--d", 5, "--seed", 1, "--out", wide)
    run("train", "--algo", "arow", "--seed", 1, "--data", wide, "--out", tmp_path / "m.json")
    assert run("eval", "--model", tmp_path / "m.json", "--data", blobs) == 1
    err = capsys.readouterr().err
    assert "d=5" in err and "d=2" in err


def test_missing_file_is_runtime_error(tmp_path):
    assert run("train", "--algo", "arow", "--seed", 1, "--data", tmp_path / "nope.csv",
               "--out", tmp_path / "m.json") == 1


def test_bad_idx_magic_is_runtime_error(tmp_path, capsys):
    bad = tmp_path / "bad.idx"
    bad.write_bytes(bytes([0, 0, 8, 1, 0, 0, 0, 0]))
    assert run("sweep", "--images", bad, "--labels", bad, "--seed", 1,
               "--out", tmp_path / "r.csv") == 1
    assert "magic" in capsys.readouterr().err


def test_keep_grid_syntax():
    assert parse_keep_grid("0.1:1.0:0.1") == tuple(round(0.1 * i, 10) for i in range(1, 11))
    assert parse_keep_grid("0.2:0.8:0.3") == (0.2, 0.5, 0.8)
    assert parse_keep_grid("0.5,1") == (0.5, 1.0)


def test_sweep_rows_and_determinism(tmp_path):
    common = ["sweep", "--images", MNIST_IMAGES, "--labels", MNIST_LABELS, "--limit", 120,
              "--algos", "perceptron,arow,spiral", "--keep", "0.1:1.0:0.1",
              "--repeats", 5, "--seed", 7]
    assert run(*common, "--out", tmp_path / "all.csv") == 0
    assert len((tmp_path / "all.csv").read_text().splitlines()) == 1 + 10 * 3 * 10 * 5
    assert run(*common, "--tasks", 0, "--out", tmp_path / "one.csv") == 0
    assert len((tmp_path / "one.csv").read_text().splitlines()) == 1 + 1 * 3 * 10 * 5
    run(*common, "--tasks", 0, "--out", tmp_path / "two.csv")
    assert (tmp_path / "one.csv").read_bytes() == (tmp_path / "two.csv").read_bytes()


def test_sweep_csv_dataset(tmp_path, blobs):
    assert run("sweep", "--data", blobs, "--algos", "arow", "--keep", "0.5,1.0",
               "--repeats", 2, "--seed", 3, "--out", tmp_path / "r.csv") == 0
    lines = (tmp_path / "r.csv").read_text().splitlines()
    assert len(lines) == 5 and lines[1].startswith("blobs,arow,0.500000,0,")


def test_rademacher(tmp_path, blobs):
    out = tmp_path / "rad.json"
    assert run("rademacher", "--data", blobs, "--algos", "perceptron,constant",
               "--seed", 5, "--out", out) == 0
    report = json.loads(out.read_text())
    assert report["perceptron"]["n_relabelings"] == 10
    assert abs(report["constant"]["error_reduction"]) < 4 / np.sqrt(200)
    again = tmp_path / "again.json"
    run("rademacher", "--data", blobs, "--algos", "perceptron,constant", "--seed", 5,
        "--out", again)
    assert again.read_bytes() == out.read_bytes()


def test_config_file_precedence(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n": 10, "d": 3, "seed": 4, "out": str(tmp_path / "a.csv")}))
    assert run("synth", "--config", cfg) == 0
    assert len((tmp_path / "a.csv").read_text().splitlines()) == 11
    assert run("synth", "--config", cfg, "--n", 20, "--out", tmp_path / "b.csv") == 0
    lines = (tmp_path / "b.csv").read_text().splitlines()
    assert len(lines) == 21 and lines[0] == "label,f0,f1,f2"
    cfg.write_text(json.dumps({"bogus": 1}))
    assert usage_code("synth", "--config", cfg) == 2


def test_inputs_not_modified(tmp_path, blobs):
    before = blobs.read_bytes()
    run("train", "--algo", "spiral", "--seed", 1, "--data", blobs, "--out", tmp_path / "m.json")
    run("eval", "--model", tmp_path / "m.json", "--data", blobs, "--keep-fraction", 0.5,
        "--seed", 2)
    assert blobs.read_bytes() == before


def test_console_script_module_entry(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "spiral.cli", "synth", "--n", "4", "--seed",
                           "1", "--out", str(tmp_path / "x.csv")], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    proc = subprocess.run([sys.executable, "-m", "spiral.cli", "synth", "--n", "3", "--seed",
                           "1", "--out", str(tmp_path / "y.csv")], capture_output=True, text=True)
    assert proc.returncode == 2
