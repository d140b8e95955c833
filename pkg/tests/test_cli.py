import json
import os

import pytest

from ris_nd.cli import main

CFG = """[geometry]
M = 1
N_x = 2
N_y = 2
d_t = 1
d_r = 1

[fading]
kappa_g = 0

[run]
mode = siso
architectures = conventional,nondiag
trials = 16
seed = 3
sweep = N
grid = 4,16
metrics = gain
"""


@pytest.fixture
def cfg_path(tmp_path):
    p = tmp_path / "scenario.ini"
    p.write_text(CFG)
    return str(p)


def test_missing_config_exits_2(tmp_path, capsys):
    rc = main(["simulate", str(tmp_path / "nope.ini"), "--out", str(tmp_path)])
    assert rc == 2
    assert "config not found" in capsys.readouterr().err


def test_simulate_writes_outputs(cfg_path, tmp_path):
    out = str(tmp_path / "run1")
    assert main(["simulate", cfg_path, "--out", out, "--jobs", "1"]) == 0
    assert os.path.exists(os.path.join(out, "results.csv"))
    meta = json.load(open(os.path.join(out, "meta.json")))
    assert meta["scenarios"][0]["seed"] == 3
    assert meta["scenarios"][0]["trials"] == 16
    assert "version" in meta and "wall_time_s" in meta


def test_simulate_seed_reproducible(cfg_path, tmp_path):
    outs = []
    for name in ("a", "b"):
        out = str(tmp_path / name)
        assert main(["simulate", cfg_path, "--seed", "42", "--out", out,
                     "--jobs", "1"]) == 0
        outs.append(open(os.path.join(out, "results.csv"), "rb").read())
    assert outs[0] == outs[1]


def test_env_seed_fallback(cfg_path, tmp_path, monkeypatch):
    monkeypatch.setenv("RIS_ND_SEED", "99")
    out = str(tmp_path / "env")
    assert main(["simulate", cfg_path, "--out", out, "--jobs", "1"]) == 0
    meta = json.load(open(os.path.join(out, "meta.json")))
    assert meta["scenarios"][0]["seed"] == 99


def test_unknown_config_key_exits_2(tmp_path, capsys):
    p = tmp_path / "bad.ini"
    p.write_text("[geometry]\nwhatever = 1\n[fading]\n[run]\n")
    rc = main(["simulate", str(p), "--out", str(tmp_path)])
    assert rc == 2
    assert "whatever" in capsys.readouterr().err


def test_theory_gain_csv(tmp_path):
    out = str(tmp_path / "th")
    assert main(["theory", "--expr", "gain", "--N", "2,4", "--kappa", "0",
                 "--out", out]) == 0
    text = open(os.path.join(out, "results.csv")).read()
    assert "theory-gain-nondiag-k0" in text
    assert text.count("theory") >= 6  # conventional/nondiag/fully x 2 N values


def test_theory_complexity(tmp_path):
    out = str(tmp_path / "cx")
    assert main(["theory", "--expr", "complexity", "--N", "16", "--G", "4",
                 "--out", out]) == 0
    text = open(os.path.join(out, "results.csv")).read()
    assert "control_load" in text and "impedances" in text


def test_theory_rejects_negative_kappa(tmp_path, capsys):
    rc = main(["theory", "--expr", "gain", "--N", "4", "--kappa", "-1",
               "--out", str(tmp_path)])
    assert rc == 2


def test_figure_preset_runs(tmp_path):
    out = str(tmp_path / "fig")
    assert main(["figure", "5", "--trials", "20", "--out", out,
                 "--jobs", "1"]) == 0
    text = open(os.path.join(out, "results.csv")).read()
    assert "fig5" in text and "nondiag" in text

    meta = json.load(open(os.path.join(out, "meta.json")))
    assert meta["scenarios"][0]["figure"] == "5"


def test_figure_unknown_id(tmp_path, capsys):
    assert main(["figure", "99", "--out", str(tmp_path)]) == 2


def test_selftest_passes(capsys):
    assert main(["selftest"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "FAIL" not in out
