import json

import jsonschema
import pytest

from sicverify import __version__, claims, cli
from sicverify.groups import SizeLimitError

REPORT_SCHEMA = {
    "type": "object",
    "required": ["artifact_version", "reports", "all_verified"],
    "additionalProperties": False,
    "properties": {
        "artifact_version": {"type": "string"},
        "all_verified": {"type": "boolean"},
        "reports": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["claim", "description", "paper_anchor", "status", "witnesses", "runtime_ms"],
                "additionalProperties": False,
                "properties": {
                    "claim": {"type": "string"},
                    "description": {"type": "string"},
                    "paper_anchor": {"type": "string"},
                    "status": {"enum": list(claims.STATUSES)},
                    "witnesses": {"type": "object"},
                    "runtime_ms": {"type": "integer"},
                },
            },
        },
    },
}


def test_registry_contract():
    reg = claims.registry()
    ids = [c.id for c in reg]
    assert len(reg) >= 14
    assert len(set(ids)) == len(ids)
    assert ids[:14] == [f"C{k}" for k in range(1, 15)]
    assert all(callable(c.runner) for c in reg)
    assert all(c.paper_anchor for c in reg)
    by_id = {c.id: c for c in reg}
    assert by_id["C7"].expected["units"] == 240
    assert [c.id for c in reg if c.finding] == ["C14"]


def test_verify_c7_json(capsys):
    code = cli.main(["verify", "--claims", "C7", "--format", "json"])
    doc = json.loads(capsys.readouterr().out)
    assert code == 0
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["artifact_version"] == __version__
    assert len(doc["reports"]) == 1
    rep = doc["reports"][0]
    assert rep["status"] == "verified" and rep["witnesses"]["units"] == 240
    assert rep["runtime_ms"] == 0
    assert doc["all_verified"] is True


def test_text_output_one_line_per_claim(capsys):
    code = cli.main(["verify", "--claims", "C3,C1,C13"])
    lines = capsys.readouterr().out.splitlines()
    assert code == 0
    assert [ln.split()[0] for ln in lines[:-1]] == ["C1", "C3", "C13"]
    assert all(ln.split()[1] == "verified" for ln in lines[:-1])
    assert "norm_sq=2" in lines[0]
    assert lines[-1] == "all_verified=true"


def test_unknown_claim_is_usage_error(capsys):
    assert cli.main(["verify", "--claims", "bogus"]) == 2
    assert "bogus" in capsys.readouterr().err
    with pytest.raises(KeyError):
        claims.run(["bogus"])


def test_bad_flags_are_usage_errors():
    assert cli.main(["verify", "--format", "xml"]) == 2
    assert cli.main(["verify", "--threads", "0"]) == 2
    assert cli.main([]) == 2


def test_list(capsys):
    assert cli.main(["list"]) == 0
    out = capsys.readouterr().out
    for k in range(1, 15):
        assert f"C{k} " in out
    assert "anchor:" in out and "[finding]" in out


def test_report_rerender(tmp_path, capsys):
    path = tmp_path / "r.json"
    assert cli.main(["verify", "--claims", "C1,C4", "--format", "json", "--output", str(path)]) == 0
    capsys.readouterr()
    assert cli.main(["report", str(path), "--format", "json"]) == 0
    assert capsys.readouterr().out == path.read_text()
    assert cli.main(["report", str(path)]) == 0
    assert capsys.readouterr().out.startswith("C1")
    assert cli.main(["report", str(tmp_path / "missing.json")]) == 2


def test_timings_flag(capsys):
    cli.main(["verify", "--claims", "C2", "--format", "json", "--timings"])
    doc = json.loads(capsys.readouterr().out)
    assert doc["reports"][0]["runtime_ms"] > 0


def _patched(monkeypatch, runner, finding=False):
    base = claims.registry

    def reg():
        out = base()
        out[0] = claims.Claim("C1", "x", "patched", "anchor", {"ok": True}, runner, finding=finding)
        return out

    monkeypatch.setattr(claims, "registry", reg)
    monkeypatch.setattr(cli, "registry", reg)


def test_failed_claim_exit_1(monkeypatch, capsys):
    _patched(monkeypatch, lambda ctx: {"ok": False})
    assert cli.main(["verify", "--claims", "C1"]) == 1
    assert "failed" in capsys.readouterr().out


def test_exception_is_failed(monkeypatch, capsys):
    def boom(ctx):
        raise ValueError("SIC check failed")
    _patched(monkeypatch, boom)
    assert cli.main(["verify", "--claims", "C1", "--format", "json"]) == 1
    doc = json.loads(capsys.readouterr().out)
    assert doc["reports"][0]["status"] == "failed" and doc["all_verified"] is False


def test_limit_exit_3(monkeypatch, capsys):
    def limit(ctx):
        raise SizeLimitError("closure exceeded 10 elements")
    _patched(monkeypatch, limit)
    assert cli.main(["verify", "--claims", "C1"]) == 3
    assert "inconclusive" in capsys.readouterr().out


def test_finding_never_gates(monkeypatch, capsys):
    _patched(monkeypatch, lambda ctx: {"ok": False}, finding=True)
    assert cli.main(["verify", "--claims", "C1"]) == 0
    assert "finding" in capsys.readouterr().out


def test_cache_dir_snapshots(tmp_path):
    calls = []

    def build():
        calls.append(1)
        return {"value": 42}

    ctx = claims.Context(cache_dir=tmp_path)
    assert ctx.memo("probe", build, snapshot=True) == {"value": 42}
    assert (tmp_path / f"probe-v{__version__}.pkl").exists()
    assert claims.Context(cache_dir=tmp_path).memo("probe", build, snapshot=True) == {"value": 42}
    assert len(calls) == 1
    # without a cache dir nothing is written and every context recomputes
    claims.Context().memo("probe", build, snapshot=True)
    assert len(calls) == 2


def test_deterministic_repeat(capsys):
    cli.main(["verify", "--claims", "C1,C3,C4,C5,C12,C13", "--format", "json"])
    first = capsys.readouterr().out
    cli.main(["verify", "--claims", "C1,C3,C4,C5,C12,C13", "--format", "json", "--threads", "2"])
    assert capsys.readouterr().out == first
