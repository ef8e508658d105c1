import json

import pytest

from avatartime.cli import main
from avatartime.egonet import load


def run(*argv):
    return main([str(a) for a in argv])


def test_generate_deterministic(tmp_path):
    assert run("generate", "--seed", 7, "--out", tmp_path / "a.json") == 0
    assert run("generate", "--seed", 7, "--out", tmp_path / "b.json") == 0
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()
    assert (tmp_path / "a.json.manifest.json").exists()


def test_generate_layer_means(tmp_path):
    out = tmp_path / "n.json"
    assert run("generate", "--seed", 1, "--layer-means", "4.6,14.3,132.5", "--out", out) == 0
    assert set(load(out).layer_sizes()) == {"support_clique", "sympathy_group", "active_network"}


def test_generate_missing_out(capsys):
    assert run("generate", "--seed", 1) == 2
    assert "usage" in capsys.readouterr().err


def test_generate_bad_layers(tmp_path):
    assert run("generate", "--layer-means", "5,3", "--layer-times", "1,2",
               "--out", tmp_path / "x.json") == 2


def test_solve_fig3(tmp_path, capsys):
    out = tmp_path / "plan.json"
    assert run("solve", "--network", "fixture:fig3", "--gamma", 0.63, "--Y", 45, "--Z", 45,
               "--out", out) == 0
    text = capsys.readouterr().out
    assert "regime:          A" in text
    assert "spare time:      6.750000 h" in text
    assert "binding budget:  avatar_capacity" in text
    assert json.loads(out.read_text())["spare_time"] == pytest.approx(6.75, abs=1e-9)


def test_solve_case_b(capsys):
    assert run("solve", "--network", "fixture:fig3", "--gamma", 0.9, "--beta", 1.29) == 0
    text = capsys.readouterr().out
    assert "regime:          B" in text and "avatar not used" in text


def test_solve_z_above_cap(capsys):
    assert run("solve", "--network", "fixture:fig3", "--Z", 400) == 2
    assert "Z_max" in capsys.readouterr().err


def test_solve_missing_network_file(tmp_path):
    assert run("solve", "--network", tmp_path / "nope.json") == 3


def test_solve_invalid_network_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"seed": 0, "alters": [{"id": 1, "layer": "a", "x_tilde": 0, "beta": 1.3}]}))
    assert run("solve", "--network", p) == 2


def test_solve_unwritable_output(tmp_path):
    assert run("solve", "--network", "fixture:fig3", "--out", tmp_path / "no" / "p.json") == 3


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"network": "fixture:fig3", "gamma": 0.63, "Y": 45, "Z": 45}))
    assert run("solve", "--config", cfg) == 0
    assert "6.750000" in capsys.readouterr().out
    assert run("solve", "--config", cfg, "--Y", 0) == 0
    assert "spare time:      0.000000 h" in capsys.readouterr().out


def test_config_unknown_key(tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"network": "fixture:fig3", "bogus": 1}))
    assert run("solve", "--config", cfg) == 2


def test_sweep_default(tmp_path):
    assert run("sweep", "--out-dir", tmp_path) == 0
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert len(lines) == 1 + 40 * 3
    assert (tmp_path / "reinvestment.csv").exists()
    assert json.loads((tmp_path / "manifest.json").read_text())["command"] == "sweep"


def test_sweep_verify(tmp_path):
    assert run("sweep", "--out-dir", tmp_path, "--points", 5, "--verify") == 0
    lines = (tmp_path / "sweep.csv").read_text().splitlines()
    assert lines[0].endswith(",oracle_ok")
    assert all(l.endswith(",true") for l in lines[1:])


def test_sweep_rejects_gamma_beyond_one_over_beta(tmp_path):
    assert run("sweep", "--out-dir", tmp_path, "--gamma-max", 0.9, "--beta", 1.29) == 2


def test_sweep_rerun_from_manifest(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    assert run("sweep", "--out-dir", a, "--points", 7, "--Z", 250, "--seed", 11) == 0
    assert run("sweep", "--config", a / "manifest.json", "--out-dir", b) == 0
    for name in ("sweep.csv", "reinvestment.csv"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_manifest_for_wrong_command(tmp_path):
    run("sweep", "--out-dir", tmp_path, "--points", 2)
    assert run("solve", "--config", tmp_path / "manifest.json") == 2


def test_verify_command(capsys):
    assert run("verify", "--instances", 20, "--seed", 3, "--max-n", 30) == 0
    assert "failures: 0" in capsys.readouterr().out


def test_sweep_verify_failure_exits_4(tmp_path, monkeypatch):
    from avatartime import experiments
    from avatartime.simplex import LpSolution

    monkeypatch.setattr(experiments, "solve_lp",
                        lambda lp: LpSolution("optimal", -1.0, None, 0))
    assert run("sweep", "--out-dir", tmp_path, "--points", 3, "--verify") == 4
    assert (tmp_path / "sweep.csv").read_text().count(",false") == 9


def test_verify_failure_exits_4(monkeypatch):
    from avatartime import cli
    from avatartime.verification import VerificationReport

    monkeypatch.setattr(cli, "verify_oracle",
                        lambda *a: VerificationReport(1, 1, 1.0, 0.0, {"A": 1}))
    assert run("verify", "--instances", 1) == 4
