from __future__ import annotations

import json
import subprocess
import sys

import jsonschema
import pytest

from ywkit import cli, suites
from ywkit.report import Report


def run(*args, env=None):
    return subprocess.run([sys.executable, "-m", "ywkit", *args], capture_output=True, text=True, env=env)


def test_ybe_sig2_passes():
    res = run("verify", "ybe", "--sig", "2")
    assert res.returncode == 0
    out = json.loads(res.stdout)
    jsonschema.validate(out, cli.REPORT_SCHEMA)
    assert out["body"]["passed"] is True


def test_poisson_report_contents():
    res = run("verify", "poisson", "--sig", "2", "--p", "2")
    assert res.returncode == 0
    names = [c["name"] for c in json.loads(res.stdout)["body"]["checks"]]
    for key in ("jacobi-truncated", "jacobi-untruncated", "ideal[", "central[", "independent["):
        assert any(key in n for n in names), key


@pytest.mark.parametrize("args", [
    ["verify", "ybe", "--sig", "2|−1"],
    ["verify", "ybe", "--sig", "2|-1"],
    ["verify", "twist", "--sig", "3", "--theta", "minus"],
    ["verify", "super", "--sig", "1|1"],
    ["verify", "fold", "--sig", "1|2"],
    ["verify", "nosuch"],
    ["verify"],
    ["verify", "ybe", "--format", "xml"],
    ["verify", "ybe", "--config", "/nonexistent.yaml"],
])
def test_config_errors_exit_2(args):
    res = run(*args)
    assert res.returncode == 2
    assert res.stdout == ""


def test_empty_suite_list(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("suites: []\n")
    assert run("verify", "--config", str(cfg)).returncode == 2


def test_schema_violation(tmp_path):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"suite": "ybe", "p": 0}))
    res = run("verify", "--config", str(cfg))
    assert res.returncode == 2 and "schema" in res.stderr


def test_constraint_named(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("suite: twist\nsig: 3\ntheta: minus\n")
    res = run("verify", "--config", str(cfg))
    assert res.returncode == 2 and "even N" in res.stderr


def test_bad_jobs_env():
    import os
    env = dict(os.environ, YWKIT_JOBS="many")
    assert run("verify", "ybe", "--sig", "2", env=env).returncode == 2


def test_config_file_drives_run(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("suite: nls\nmomenta: [[0, 3], ['1/2', 2]]\nm_max: 2\n")
    out = tmp_path / "r.json"
    res = run("verify", "--config", str(cfg), "--out", str(out))
    assert res.returncode == 0 and res.stdout == ""
    body = json.loads(out.read_text())["body"]
    assert any("momenta=['1/2', '2']" in c["name"] for c in body["checks"])


def test_determinism_byte_identical(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("suite: twist\nsig: 2\n")
    bodies = []
    for jobs in ("1", "2"):
        out = tmp_path / f"r{jobs}.json"
        assert run("verify", "--config", str(cfg), "--jobs", jobs, "--out", str(out)).returncode == 0
        bodies.append(json.dumps(json.loads(out.read_text())["body"], sort_keys=True, indent=2))
    assert bodies[0] == bodies[1]


def test_rationals_serialised_as_strings():
    res = run("verify", "drinfeld-fit", "--sig", "3")
    text = res.stdout
    assert '"-1/2"' in text and '"1/4"' in text


def _failing_case() -> Report:
    rep = Report("fake")
    rep.add("always-fails[x]", False, {"entry": [0, 1], "difference": "3/2"})
    rep.add("fine[x]", True)
    return rep


@pytest.mark.parametrize("fmt", ["json", "text"])
def test_failing_suite_exit_1_with_counterexample(monkeypatch, capsys, fmt):
    monkeypatch.setattr(suites, "build_cases", lambda name, cfg: [(_failing_case, ())])
    code = cli.main(["verify", "ybe", "--format", fmt])
    out = capsys.readouterr().out
    assert code == 1
    assert "3/2" in out
    if fmt == "text":
        assert out.index("COUNTEREXAMPLES") < out.index("fine[x]")
        assert out.rstrip().endswith("RESULT FAIL")


def test_internal_error_exit_3(monkeypatch, capsys):
    def boom():
        raise RuntimeError("kaput")
    monkeypatch.setattr(suites, "build_cases", lambda name, cfg: [(boom, ())])
    assert cli.main(["verify", "ybe"]) == 3
    assert "kaput" in capsys.readouterr().err


def test_text_format_all_pass(capsys):
    assert cli.main(["verify", "ybe", "--sig", "3", "--format", "text"]) == 0
    out = capsys.readouterr().out
    assert "COUNTEREXAMPLES" not in out and "RESULT PASS" in out


def test_published_schemas_match():
    from pathlib import Path
    docs = Path(__file__).resolve().parent.parent / "docs"
    assert json.loads((docs / "report.schema.json").read_text()) == cli.REPORT_SCHEMA
    assert json.loads((docs / "config.schema.json").read_text()) == cli.CONFIG_SCHEMA
