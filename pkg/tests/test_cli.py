"""CLI surface: every subcommand, output provenance, exit codes."""
from __future__ import annotations

import json

import pytest

from ekscan import cli


def run(capsys, *argv) -> tuple[int, str]:
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def test_eval_s_half(capsys):
    code, out = run(capsys, "eval", "--fn", "S", "--x", "1/2", "--bits", "128")
    assert code == 0
    assert out.startswith("S(1/2) = 0.93625573332842601")
    assert "bits=128" in out and "error_bound=2^-128" in out


def test_eval_json(capsys):
    code, out = run(capsys, "eval", "--fn", "T", "--x", "1/2", "--json")
    data = json.loads(out)
    assert data["value"].startswith("1.2806438353212647")
    assert data["bits"] == 128


def test_eval_domain_error_exit_code(capsys):
    code = cli.main(["eval", "--fn", "S", "--x", "-3"])
    assert code == 3  # domain error category


def test_ek_spot_value(capsys):
    code, out = run(capsys, "ek", "--q", "1531", "--json")
    rec = json.loads(out)
    assert code == 0
    assert abs(rec["mq"] - 2.5048094) < 1e-6
    assert rec["bits"] == 128 and rec["route"] == "S"


def test_ek_both_routes_reports_discrepancy(capsys):
    code, out = run(capsys, "ek", "--q", "101", "--path", "both", "--json")
    rec = json.loads(out)
    assert code == 0
    assert rec["route_discrepancy"] < 1e-11


def test_vscore_published(capsys):
    code, out = run(capsys, "vscore", "--q", "50040955631")
    assert code == 0
    assert "v(50040955631) = 1.219" in out
    assert "mr-deterministic" in out


def test_offsets_command(capsys, tmp_path):
    out_path = tmp_path / "b.csv"
    code, out = run(capsys, "offsets", "--count", "16", "--out", str(out_path))
    assert code == 0
    lines = out_path.read_text().splitlines()
    assert lines[0] == "i,b"
    assert lines[1] == "1,0" and lines[2] == "2,2"


def test_scan_verify_export_cycle(capsys, tmp_path):
    store = str(tmp_path / "store")
    code, out = run(
        capsys, "scan", "--from", "3", "--to", "60", "--store", store,
        "--mode", "mp", "--workers", "1",
    )
    assert code == 0 and "16 records" in out
    code, out = run(capsys, "verify", "--store", store)
    assert code == 0 and "OK" in out
    code, out = run(capsys, "export", "--store", store, "--kind", "mqnorm")
    assert code == 0
    assert out.splitlines()[0] == "q,mq_over_loglogq"
    assert len(out.splitlines()) == 17


def test_audit_command(capsys):
    code, out = run(capsys, "audit", "--q", "101", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["q"] == 101 and data["n"] == 50
    assert set(data["round_trip"]) == {"x", "y", "z", "w"}


def test_coeffs_command(capsys, tmp_path):
    code, out = run(capsys, "coeffs", "--bits", "32", "--out", str(tmp_path / "t.txt"))
    assert code == 0
    assert "gamma  = 0.577215664" in out
    assert (tmp_path / "t.txt").exists()


def test_usage_error_exit_code():
    with pytest.raises(SystemExit) as exc:
        cli.main(["definitely-not-a-command"])
    assert exc.value.code == 2
