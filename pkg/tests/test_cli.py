import json

import pytest

from dhlab.cli import EXIT_CONFIG, EXIT_DEGENERATE, EXIT_OK, EXIT_VIOLATION, main, resolve_threads


def _cfg(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data), encoding="utf-8")
    return str(p)


def test_identity_toy(tmp_path):
    cfg = _cfg(tmp_path, "c.json", {"lambdas": [1, -1, -1, -1], "X": 100, "delta": 0.04,
                                    "overrides": {"eta": 0.5}, "A": 500})
    out = tmp_path / "id"
    assert main(["identity", "--config", cfg, "--out", str(out)]) == EXIT_OK
    rep = json.loads((tmp_path / "id.json").read_text())
    assert rep["passed"] and rep["discrepancy"] <= rep["allowance"]


def test_params_flags(tmp_path, capsys):
    cfg = _cfg(tmp_path, "c.json", {"lambdas": [1, 1, -1, -1], "X": 512})
    assert main(["params", "--config", cfg]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert rep["params"]["flags"]["eta_ge_1"] is True


@pytest.mark.parametrize("text", ["{bad", "[1, 2]", json.dumps({"lambdas": [1, 2]}),
                                  json.dumps({"lambdas": [1, 0, -1, -1]}),
                                  json.dumps({"lambdas": [1, -1, -1, -1], "X": "huge"}),
                                  json.dumps({"lambdas": [1, -1, -1, "tau"]})])
def test_malformed_config(tmp_path, text):
    p = tmp_path / "bad.json"
    p.write_text(text, encoding="utf-8")
    assert main(["params", "--config", str(p)]) == EXIT_CONFIG


def test_missing_config_file(tmp_path):
    assert main(["params", "--config", str(tmp_path / "nope.json")]) == EXIT_CONFIG


def test_degenerate_refusal(tmp_path):
    cfg = _cfg(tmp_path, "c.json", {"lambdas": ["sqrt2", -1, -1, -1], "X": 500,
                                    "overrides": {"R": 1e-6}, "samples": 10})
    assert main(["scan-minor", "--config", cfg]) == EXIT_DEGENERATE


def test_from_convergent(tmp_path, capsys):
    cfg = _cfg(tmp_path, "c.json", {"lambdas": ["sqrt2", -1, -1, -1], "X": "from-convergent:1",
                                    "min_q": 29})
    assert main(["params", "--config", cfg]) == EXIT_OK
    rep = json.loads(capsys.readouterr().out)
    assert rep["params"]["X"] == pytest.approx(70**1.8)


def test_s0(tmp_path, capsys):
    cfg = _cfg(tmp_path, "c.json", {"lambdas": [1, -1, -1, -1], "lambda1": 2, "q1": 1, "q2": 1, "eta": 0.1})
    assert main(["s0", "--config", cfg]) == EXIT_OK
    assert json.loads(capsys.readouterr().out)["report"]["s0"] == 46


def test_convergents_csv(tmp_path):
    cfg = _cfg(tmp_path, "c.json", {"lambdas": ["sqrt2", -1, -1, -1], "count": 6})
    assert main(["convergents", "--config", cfg, "--out", str(tmp_path / "cv")]) == EXIT_OK
    lines = (tmp_path / "cv.csv").read_text().splitlines()
    assert lines[0] == "index,a,q,quality,X" and len(lines) == 7


def test_meanvalues_tails_j1(tmp_path, capsys):
    cfg = _cfg(tmp_path, "c.json", {"lambdas": [1, 1, -1, -1], "X": 400, "delta": 0.04,
                                    "overrides": {"eta": 1.0}, "mc_samples": 5000})
    for cmd in ("meanvalues", "tails", "j1"):
        assert main([cmd, "--config", cfg]) == EXIT_OK
        assert json.loads(capsys.readouterr().out)["passed"] is True


def test_violation_exit_code(tmp_path, monkeypatch, capsys):
    import dhlab.analysis.integrals as integrals
    from dhlab.analysis.integrals import IdentityReport

    fake = IdentityReport(1.0, 2.0, 0.0, 10.0, 0.1, 3, 0.1, 0.0, 1.0, 0.5)
    monkeypatch.setattr(integrals, "circle_identity", lambda *a, **k: fake)
    cfg = _cfg(tmp_path, "c.json", {"lambdas": [1, -1, -1, -1], "X": 100})
    assert main(["identity", "--config", cfg]) == EXIT_VIOLATION
    assert json.loads(capsys.readouterr().out)["passed"] is False


def test_threads_resolution(monkeypatch):
    monkeypatch.setenv("DH_LAB_THREADS", "3")
    assert resolve_threads(None) == 3
    assert resolve_threads(2) == 2
    assert resolve_threads(0) >= 1
