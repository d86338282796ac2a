import json
import subprocess
import sys

import pytest

from bctp.cli import main
from bctp.reporting import parse_report

from conftest import DATA


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_evaluate_valid_text(capsys):
    code, out, err = run(capsys, "evaluate", "-i", DATA / "valid_portfolio.json")
    assert code == 0
    assert err == ""
    assert "records: 2" in out
    assert "PAY" in out and "CRM" in out


def test_evaluate_machine_reparses(capsys):
    code, out, _ = run(capsys, "evaluate", "-i", DATA / "valid_portfolio.json", "--format", "machine")
    assert code == 0
    assert len(parse_report(out).records) == 2


def test_evaluate_malformed_names_field(capsys):
    code, out, err = run(capsys, "evaluate", "-i", DATA / "malformed_portfolio.json")
    assert code == 2
    assert out == ""
    assert "malformed_portfolio.json" in err
    assert "functions[1].humans[0].responsibility" in err


def test_evaluate_duplicate_ids_prints_findings(capsys):
    code, out, err = run(capsys, "evaluate", "-i", DATA / "duplicate_ids.json")
    assert code == 1
    assert out == ""
    assert "duplicate-id" in err


@pytest.mark.parametrize("name, expected", [
    ("duplicate_ids.json", 1),
    ("rto_order.json", 1),
    ("valid_portfolio.json", 0),
    ("malformed_portfolio.json", 2),
])
def test_validate_exit_codes(capsys, name, expected):
    code, out, _ = run(capsys, "validate", "-i", DATA / name)
    assert code == expected


def test_validate_machine_findings(capsys):
    code, out, _ = run(capsys, "validate", "-i", DATA / "rto_order.json", "--format", "machine")
    assert code == 1
    assert [f["code"] for f in json.loads(out)] == ["rto-mao-order"]


def test_config_file_and_full_eval_flags(capsys):
    code, out, _ = run(capsys, "evaluate", "-i", DATA / "valid_portfolio.json", "-c", DATA / "config.json",
                       "--full-eval", "--format", "machine")
    assert code == 0
    records = parse_report(out).records
    assert all(r.compliance.value != "NotAssessed" for r in records)
    fingerprints = {r.config_fingerprint for r in records}
    assert len(fingerprints) == 1


def test_bad_config_is_exit_2(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text('{"effort_rate_hours_per_point": -1}')
    code, _, err = run(capsys, "evaluate", "-i", DATA / "valid_portfolio.json", "-c", cfg)
    assert code == 2
    assert "effort_rate_hours_per_point" in err


def test_whatif_zero_delta(capsys):
    code, out, _ = run(capsys, "whatif", "-i", DATA / "golden_portfolio.json", "--function", "CRM",
                       "--factor", "URF3", "--delta", 0, "--format", "machine")
    assert code == 0
    data = json.loads(out)
    assert data["delta_abfrp"] == 0 and data["delta_rte_hours"] == 0
    assert data["level_before"] == data["level_after"]


def test_whatif_unknown_references(capsys):
    code, _, err = run(capsys, "whatif", "-i", DATA / "golden_portfolio.json", "--function", "NOPE",
                       "--factor", "URF3", "--delta", 1)
    assert code == 1 and "NOPE" in err
    code, _, err = run(capsys, "whatif", "-i", DATA / "golden_portfolio.json", "--function", "CRM",
                       "--factor", "URF42", "--delta", 1)
    assert code == 1 and "URF42" in err


def test_simulate_degenerate_equals_point(capsys):
    # PAY + full evaluation: all URF ratings are 0 in the file, matching the ranges.
    code, out, _ = run(capsys, "simulate", "-i", DATA / "golden_portfolio.json", "--function", "PAY",
                       "--full-eval", "--ranges", DATA / "ranges_zero.json", "--samples", 50, "--format", "machine")
    assert code == 0
    summary = json.loads(out)
    _, ev_out, _ = run(capsys, "evaluate", "-i", DATA / "golden_portfolio.json", "--full-eval", "--format", "machine")
    pay = next(r for r in json.loads(ev_out)["records"] if r["function_id"] == "PAY")
    assert summary["rte_mean"] == pay["rte_hours"]
    assert summary["prob_meets_rto"] == 1.0


def test_simulate_outside_mbco_is_domain_error(capsys):
    code, _, err = run(capsys, "simulate", "-i", DATA / "golden_portfolio.json", "--function", "PAY",
                       "--samples", 10)
    assert code == 1 and "MBCO" in err


def test_simulate_is_repeatable(capsys):
    args = ("simulate", "-i", DATA / "golden_portfolio.json", "--function", "CRM", "--samples", 500, "--seed", 9)
    _, first, _ = run(capsys, *args)
    _, second, _ = run(capsys, *args)
    assert first == second


def test_ucp_prints_effort(capsys):
    code, out, _ = run(capsys, "ucp", "-i", DATA / "ucp_project.json")
    assert code == 0
    assert "9.6525" in out and "193.0500" in out
    code, out, _ = run(capsys, "ucp", "-i", DATA / "ucp_project.json", "--format", "machine")
    data = json.loads(out)
    assert data["ucp"] == pytest.approx(9.6525, rel=1e-9)
    assert data["effort_hours"] == pytest.approx(193.05, rel=1e-9)


def test_ucp_karner_classic(capsys):
    _, out, _ = run(capsys, "ucp", "-i", DATA / "ucp_project.json", "--profile", "karner-classic",
                    "--format", "machine")
    assert json.loads(out)["tcf"] == pytest.approx(1.35, rel=1e-12)


def test_usage_errors_exit_2(capsys):
    assert run(capsys, "evaluate")[0] == 2
    assert run(capsys, "frobnicate")[0] == 2
    assert run(capsys, "evaluate", "-i", DATA / "valid_portfolio.json", "--format", "pdf")[0] == 2


def test_help_exits_0(capsys):
    assert run(capsys, "--help")[0] == 0


def test_module_entry_point_is_byte_stable():
    cmd = [sys.executable, "-m", "bctp", "evaluate", "-i", str(DATA / "golden_portfolio.json")]
    first = subprocess.run(cmd, capture_output=True, check=True)
    second = subprocess.run(cmd, capture_output=True, check=True)
    assert first.stdout == second.stdout
    assert first.stderr == b""
