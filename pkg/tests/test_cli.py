"""End-to-end command behavior: exit codes, streams, files, flags."""
from __future__ import annotations

import json

import jsonschema
import pytest

from conftest import DATA, EXAMPLES, GOLDEN, run_cli

from restcheck import cli
from restcheck.oracle import FiniteModel, OracleResult, OracleStatus
from restcheck.report import REPORT_SCHEMA

BOOKING = str(EXAMPLES / "hotel_booking.model")
MUTATED = str(EXAMPLES / "hb_mutated_m1.model")
ISOLATED = str(DATA / "isolated.model")


def test_check_consistent_model():
    proc = run_cli("check", BOOKING)
    assert proc.returncode == 0
    assert proc.stdout.startswith(
        "CONSISTENT: 6 resources, 5 states, all satisfiable")
    assert proc.stderr == ""


def test_check_inconsistent_model():
    proc = run_cli("check", MUTATED)
    assert proc.returncode == 1
    assert proc.stdout.startswith("INCONSISTENT: 1 of 11 concepts unsatisfiable")
    assert "error[UNSAT_STATE] state 'processingPayment'" in proc.stdout
    assert proc.stderr == ""


def test_check_invalid_model():
    proc = run_cli("check", ISOLATED)
    assert proc.returncode == 2
    assert proc.stdout.startswith("INVALID: input could not be checked")
    assert "error[CONNECTIVITY]" in proc.stdout


def test_exit_code_matches_overall_field():
    for path, expected in ((BOOKING, "consistent"), (MUTATED, "inconsistent"),
                           (ISOLATED, "invalid")):
        proc = run_cli("check", path, "--format", "json")
        doc = json.loads(proc.stdout)
        assert doc["overall"] == expected
        assert proc.returncode == {"consistent": 0, "inconsistent": 1,
                                   "invalid": 2}[expected]


def test_json_output_validates_and_diagnostics_go_to_stderr():
    proc = run_cli("check", MUTATED, "--format", "json")
    doc = json.loads(proc.stdout)
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["model"] == "HotelBooking"
    unsat = [c for c in doc["concepts"] if c["status"] == "unsat"]
    assert [c["element"] for c in unsat] == ["processingPayment"]
    assert unsat[0]["kind"] == "state"
    assert unsat[0]["line"] > 0
    # the same diagnostic text a human would see, kept off stdout
    assert "error[UNSAT_STATE]" in proc.stderr
    assert "error[UNSAT_STATE]" not in proc.stdout


def test_report_can_be_written_to_a_file(tmp_path):
    out = tmp_path / "report.json"
    proc = run_cli("check", MUTATED, "--format", "json", "-o", str(out))
    assert proc.returncode == 1
    assert proc.stdout == ""
    jsonschema.validate(json.loads(out.read_text()), REPORT_SCHEMA)


def test_validate_runs_structural_checks_only():
    proc = run_cli("validate", BOOKING)
    assert proc.returncode == 0
    assert proc.stdout.startswith("VALID: model is well formed")

    proc = run_cli("validate", ISOLATED)
    assert proc.returncode == 2
    assert "error[CONNECTIVITY]" in proc.stdout

    # no reasoning happens, so the mutated model still validates
    proc = run_cli("validate", MUTATED)
    assert proc.returncode == 0


def test_translate_matches_golden_and_is_idempotent(tmp_path):
    proc = run_cli("translate", BOOKING)
    assert proc.returncode == 0
    assert proc.stdout == (GOLDEN / "hb.ofn").read_text()
    again = run_cli("translate", BOOKING)
    assert again.stdout == proc.stdout

    out = tmp_path / "m.ofn"
    assert run_cli("translate", BOOKING, "-o", str(out)).returncode == 0
    assert out.read_text() == proc.stdout


def test_translate_respects_base_iri():
    proc = run_cli("translate", BOOKING, "--base-iri", "http://x.test/v#")
    assert proc.stdout.splitlines()[0] == "Prefix(:=<http://x.test/v#>)"
    assert "Ontology(<http://x.test/v>" in proc.stdout


def test_translate_invalid_model_yields_no_document():
    proc = run_cli("translate", ISOLATED)
    assert proc.returncode == 2
    assert proc.stdout == ""
    assert "error[CONNECTIVITY]" in proc.stderr


def test_missing_file_is_an_io_error():
    proc = run_cli("check", "no/such/file.model")
    assert proc.returncode == 3
    assert proc.stdout == ""
    assert "cannot read" in proc.stderr


def test_unwritable_output_is_an_io_error(tmp_path):
    proc = run_cli("check", BOOKING, "-o", str(tmp_path / "no" / "dir" / "x"))
    assert proc.returncode == 3
    assert "cannot write" in proc.stderr


@pytest.mark.parametrize("value", ["bounded:0", "bounded:9", "full", "5"])
def test_bad_oracle_argument_is_a_usage_error(value):
    proc = run_cli("check", BOOKING, "--oracle", value)
    assert proc.returncode == 2
    assert "usage" in proc.stderr


def test_oracle_agreement_keeps_exit_zero():
    proc = run_cli("check", BOOKING, "--oracle", "bounded:3")
    assert proc.returncode == 0
    assert proc.stderr == ""


def test_oracle_disagreement_exit_code(monkeypatch, capsys):
    """Force the search to contradict the tableau and watch the front end."""
    def always_sat(ontology, fragment, bound):
        return OracleResult(OracleStatus.SAT, 1,
                            FiniteModel(1, {}, {}, {}))

    import restcheck.oracle
    monkeypatch.setattr(restcheck.oracle, "bounded_model_search", always_sat)
    code = cli.main(["check", MUTATED, "--oracle", "bounded:3"])
    assert code == 4
    err = capsys.readouterr().err
    assert "restcheck: oracle disagreement on 'processingPayment'" in err
