"""Report assembly and the two output renderings."""
from __future__ import annotations

import json

import jsonschema
import pytest

from restcheck.diagnostics import Code, Diagnostic, Severity, SourceSpan
from restcheck.report import (REPORT_SCHEMA, CheckReport, ConceptVerdict,
                              build_report, render_json, render_text)


def _span(line=3, col=5):
    return SourceSpan.point("m.model", line, col)


def _verdicts(*sat):
    return [ConceptVerdict(f"E{i}", "resource" if i % 2 == 0 else "state",
                           ok, _span(i + 1))
            for i, ok in enumerate(sat)]


def test_overall_verdict_mapping():
    assert build_report("M", [], []).overall == "invalid"
    assert build_report("M", _verdicts(True, True), []).overall == "consistent"
    assert build_report("M", _verdicts(True, False), []).overall == "inconsistent"


def test_text_rendering_headlines():
    assert render_text(build_report("M", _verdicts(True, True, True), [])) \
        .startswith("CONSISTENT: 2 resources, 1 states, all satisfiable")
    assert render_text(build_report("M", _verdicts(False, True), [])) \
        .startswith("INCONSISTENT: 1 of 2 concepts unsatisfiable")
    assert render_text(build_report("M", [], [])) \
        .startswith("INVALID: input could not be checked")
    # structural validation alone reports well-formedness
    assert render_text(CheckReport("M", "consistent", (), ())) \
        .startswith("VALID: model is well formed")


def test_text_rendering_orders_errors_first():
    warn = Diagnostic(Severity.WARNING, Code.NEGATIVE_BOUND, "w", _span(9))
    err = Diagnostic(Severity.ERROR, Code.CONNECTIVITY, "e", _span(2))
    text = render_text(build_report("M", [], [warn, err]))
    lines = text.splitlines()
    assert lines[1].startswith("error[")
    assert lines[2].startswith("warning[")


def test_json_rendering_matches_its_schema():
    diag = Diagnostic(Severity.ERROR, Code.UNSAT_STATE,
                      "state 's' can never be active", _span())
    report = build_report("M", _verdicts(True, False), [diag])
    doc = json.loads(render_json(report))
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert doc["schemaVersion"] == 1
    assert doc["model"] == "M"
    assert doc["overall"] == "inconsistent"
    assert doc["concepts"][0] == {"element": "E0", "kind": "resource",
                                  "status": "sat", "line": 1, "col": 5}
    assert doc["concepts"][1]["status"] == "unsat"
    assert doc["diagnostics"][0]["code"] == "UNSAT_STATE"
    assert doc["diagnostics"][0]["line"] == 3


def test_json_positions_default_to_zero_without_spans():
    report = build_report("M", [ConceptVerdict("E", "resource", True, None)],
                          [Diagnostic(Severity.ERROR, Code.PARSE, "m", None)])
    doc = json.loads(render_json(report))
    jsonschema.validate(doc, REPORT_SCHEMA)
    assert (doc["concepts"][0]["line"], doc["concepts"][0]["col"]) == (0, 0)
    assert (doc["diagnostics"][0]["line"], doc["diagnostics"][0]["col"]) == (0, 0)


def test_schema_rejects_unknown_fields():
    report = build_report("M", [], [])
    doc = json.loads(render_json(report))
    doc["extra"] = 1
    with pytest.raises(jsonschema.ValidationError):
        jsonschema.validate(doc, REPORT_SCHEMA)
