"""Command line behavior: exit codes, output routing, overrides."""

import json
import subprocess
import sys

import httpx
import pytest

from ctclab import cli, models, scenarios


def test_run_with_set_overrides_only(capsys):
    code = cli.main(["run", "--set", "scenario=fixed-point",
                     "--set", "unitary=swap",
                     "--set", "cr_state=maximally-mixed"])
    assert code == 0
    captured = capsys.readouterr()
    report = json.loads(captured.out)
    assert report["format_version"] == 1
    assert report["records"][0]["fixed_spectrum"] == [
        pytest.approx(0.5), pytest.approx(0.5)]
    assert "fixed-point" in captured.err
    assert "witness_fraction" in captured.err


def test_quiet_suppresses_summary(capsys):
    code = cli.main(["run", "--set", "scenario=fixed-point", "--quiet"])
    assert code == 0
    assert capsys.readouterr().err == ""


def test_config_file_with_flag_overrides(tmp_path, capsys):
    config = tmp_path / "config.json"
    config.write_text(json.dumps({"scenario": "fixed-point", "trials": 2,
                                  "seed": 1}))
    code = cli.main(["run", "--config", str(config), "--set", "trials=3",
                     "--quiet"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["config"]["trials"] == 3
    assert len(report["records"]) == 3


def test_output_path_and_csv(tmp_path, capsys):
    out = tmp_path / "report.json"
    table = tmp_path / "spectra.csv"
    code = cli.main(["run", "--set", "scenario=fixed-point",
                     "--set", "trials=2",
                     "--set", f'output_path="{out}"',
                     "--csv", str(table), "--quiet"])
    assert code == 0
    assert capsys.readouterr().out == ""
    report = json.loads(out.read_text())
    assert len(report["records"]) == 2
    lines = table.read_text().strip().splitlines()
    assert lines[0] == "trial,eigenvalue_1,eigenvalue_2"
    assert len(lines) == 3


def test_nested_set_keys(capsys):
    code = cli.main(["run", "--set", "scenario=theorem1",
                     "--set", "trials=3", "--set", "seed=42",
                     "--set", "tol_overrides.witness=1.5", "--quiet"])
    assert code == 0
    report = json.loads(capsys.readouterr().out)
    assert report["config"]["tol_overrides"] == {"witness": 1.5}
    assert report["summary"]["witness_fraction"] == 0.0


def test_invalid_config_exits_2(capsys):
    code = cli.main(["run", "--set", "scenario=fixed-point",
                     "--set", "trials=0"])
    assert code == 2
    err = capsys.readouterr().err
    assert "trials" in err


def test_missing_config_file_exits_3(capsys):
    assert cli.main(["run", "--config", "/no/such/file.json"]) == 3


def test_malformed_config_file_exits_2(tmp_path):
    config = tmp_path / "broken.json"
    config.write_text("{not json")
    assert cli.main(["run", "--config", str(config)]) == 2


def test_config_file_must_be_object(tmp_path):
    config = tmp_path / "list.json"
    config.write_text("[1, 2]")
    assert cli.main(["run", "--config", str(config)]) == 2


def test_bad_set_syntax_exits_2():
    assert cli.main(["run", "--set", "scenario"]) == 2


def test_unknown_field_exits_2(capsys):
    code = cli.main(["run", "--set", "scenario=fixed-point",
                     "--set", "bogus=1"])
    assert code == 2
    assert "bogus" in capsys.readouterr().err


def test_payload_file_errors(tmp_path):
    from ctclab import qmath
    import numpy as np
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(qmath.matrix_to_json(np.ones((4, 4)))))
    assert cli.main(["run", "--set", "scenario=fixed-point",
                     "--set", f'unitary="file:{bad}"', "--quiet"]) == 2
    assert cli.main(["run", "--set", "scenario=fixed-point",
                     "--set", f'unitary="file:{tmp_path}/none.json"',
                     "--quiet"]) == 3


def test_unwritable_output_exits_3(tmp_path):
    assert cli.main(["run", "--set", "scenario=fixed-point",
                     "--set", 'output_path="/no/such/dir/report.json"',
                     "--quiet"]) == 3


def test_validate_command(capsys):
    code = cli.main(["validate", "--set", "scenario=theorem1",
                     "--set", "trials=50", "--set", "seed=42"])
    assert code == 0
    assert json.loads(capsys.readouterr().out) == {"valid": True,
                                                   "findings": []}
    code = cli.main(["validate", "--set", "scenario=fixed-point",
                     "--set", "d_cr=16", "--set", "d_ctc=8"])
    assert code == 2
    body = json.loads(capsys.readouterr().out)
    assert not body["valid"]
    assert "128" in body["findings"][0]["message"]


def test_schema_command(capsys):
    assert cli.main(["schema"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["format_version"] == 1
    assert "config" in doc and "report" in doc


def test_remote_run(monkeypatch, capsys):
    report = scenarios.run_scenario(
        models.ScenarioConfig(scenario="fixed-point", trials=1))
    calls = {}

    def fake_post(url, json=None, timeout=None):
        calls["url"] = url
        calls["json"] = json
        return httpx.Response(200, json=report.model_dump(),
                              request=httpx.Request("POST", url))

    monkeypatch.setattr(cli.httpx, "post", fake_post)
    code = cli.main(["run", "--server", "http://srv:9", "--set",
                     "scenario=fixed-point", "--quiet"])
    assert code == 0
    assert calls["url"] == "http://srv:9/run"
    assert calls["json"]["scenario"] == "fixed-point"
    out = json.loads(capsys.readouterr().out)
    assert out["records"] == json.loads(report.model_dump_json())["records"]


def test_remote_run_config_rejection(monkeypatch):
    def fake_post(url, json=None, timeout=None):
        return httpx.Response(422, json={"detail": "bad"},
                              request=httpx.Request("POST", url))

    monkeypatch.setattr(cli.httpx, "post", fake_post)
    assert cli.main(["run", "--server", "http://srv:9", "--set",
                     "scenario=fixed-point"]) == 2


def test_remote_run_connection_failure(monkeypatch):
    def fake_post(url, json=None, timeout=None):
        raise httpx.ConnectError("refused")

    monkeypatch.setattr(cli.httpx, "post", fake_post)
    assert cli.main(["run", "--server", "http://srv:9", "--set",
                     "scenario=fixed-point"]) == 3


def test_remote_server_failure_exits_1(monkeypatch):
    def fake_post(url, json=None, timeout=None):
        return httpx.Response(500, json={"detail": "numerical failure"},
                              request=httpx.Request("POST", url))

    monkeypatch.setattr(cli.httpx, "post", fake_post)
    assert cli.main(["run", "--server", "http://srv:9", "--set",
                     "scenario=fixed-point"]) == 1


def test_remote_validate(monkeypatch, capsys):
    def fake_post(url, json=None, timeout=None):
        return httpx.Response(200, json={"valid": False, "findings": [
            {"field": "trials", "message": "too small"}]},
            request=httpx.Request("POST", url))

    monkeypatch.setattr(cli.httpx, "post", fake_post)
    assert cli.main(["validate", "--server", "http://srv:9", "--set",
                     "scenario=fixed-point"]) == 2
    assert "too small" in capsys.readouterr().out


def test_console_invocation_subprocess():
    result = subprocess.run(
        [sys.executable, "-m", "ctclab.cli", "run",
         "--set", "scenario=fixed-point", "--set", "unitary=swap",
         "--set", "cr_state=maximally-mixed", "--quiet"],
        capture_output=True, text=True, timeout=120)
    assert result.returncode == 0
    report = json.loads(result.stdout)
    assert report["records"][0]["fixed_spectrum"] == [
        pytest.approx(0.5), pytest.approx(0.5)]
