from __future__ import annotations

import json
from pathlib import Path

import pytest

from groupoidal.cli import DEMOS, JobSpec, main
from groupoidal.errors import InputError

JOBS = Path(__file__).resolve().parent.parent / "jobs"


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_toeplitz_job(capsys):
    code, out, _ = run(["run", str(JOBS / "toeplitz-ZN.json")], capsys)
    assert code == 0
    assert "omega_patterns: 3" in out
    assert "[PASS] psi0 separates the Omega points" in out


def test_cuntz_krieger_job(capsys):
    code, out, _ = run(["run", str(JOBS / "ck-goldenmean.json")], capsys)
    assert code == 0 and "[FAIL]" not in out


@pytest.mark.parametrize("name", sorted(p.name for p in JOBS.glob("*.json")))
def test_every_job_file_passes(name, capsys):
    code, out, _ = run(["run", str(JOBS / name)], capsys)
    assert code == 0, out


@pytest.mark.parametrize("name", list(DEMOS))
def test_every_demo_passes(name, capsys):
    code, out, _ = run(["demo", name], capsys)
    assert code == 0, out
    assert out.startswith(f"demo {name}:")


def test_parity_demo_reports_the_unmatched_pattern(capsys):
    code, out, _ = run(["demo", "parity-cone"], capsys)
    assert code == 0
    assert "unmatched_character_pattern_found: True" in out
    assert "witness_b_set" in out


def test_unknown_demo_lists_the_registry(capsys):
    code, out, err = run(["demo", "unknown"], capsys)
    assert code == 3
    assert "unknown demo" in err
    assert all(name in out for name in DEMOS)
    assert run(["demo", "--list"], capsys)[0] == 0


def test_malformed_job_reports_the_schema_path(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"kind": "odometer", "parameters": {"radices": [1, 2], "depth": 2}}))
    code, _, err = run(["run", str(bad)], capsys)
    assert code == 3 and "$.parameters.radices[0]" in err


def test_unreadable_and_invalid_json(tmp_path, capsys):
    assert run(["run", str(tmp_path / "missing.json")], capsys)[0] == 3
    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert run(["run", str(broken)], capsys)[0] == 3


def test_unknown_kind_and_extra_keys_are_rejected():
    with pytest.raises(InputError):
        JobSpec.from_json({"kind": "nonsense", "parameters": {}})
    with pytest.raises(InputError):
        JobSpec.from_json({"kind": "closure", "parameters": {"ground": 2, "generators": []}, "extra": 1})


def test_precondition_failures_exit_3(tmp_path, capsys):
    perm = tmp_path / "perm.json"
    perm.write_text(json.dumps({"kind": "cuntz-krieger", "parameters": {"matrix": [[0, 1], [1, 0]]}}))
    assert run(["run", str(perm)], capsys)[0] == 3


def test_cap_from_environment(monkeypatch, capsys):
    monkeypatch.setenv("GROUPOIDAL_MAX_ELEMENTS", "3")
    code, _, err = run(["run", str(JOBS / "closure-shift.json")], capsys)
    assert code == 1 and "partial_size" in err


def test_json_reports_are_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert run(["demo", "glimm", "--json", str(path)], capsys)[0] == 0
    assert a.read_bytes() == b.read_bytes()
    data = json.loads(a.read_text())
    assert data["ok"] is True


def test_flags_override_job_settings(capsys):
    code, out, _ = run(["demo", "cuntz-krieger", "--word-length", "2"], capsys)
    assert code == 0
    assert "words up to length 2" in out and "fragment: 16" in out
