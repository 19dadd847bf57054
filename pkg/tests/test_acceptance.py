"""Release gate: one verdict line per criterion, echoed after the run."""
from __future__ import annotations

import json
import random
import time

import _generators
from _harness import (differential_case, dsl_fixed_point, ocl_fixed_point,
                      ofn_fixed_point)
from conftest import DATA, EXAMPLES, GOLDEN, record, run_cli

from restcheck.dsl import parse_model
from restcheck.ocl import format_ocl
from restcheck.oracle import OracleStatus, bounded_model_search
from restcheck.owl import serialize
from restcheck.reasoner import compile_tbox, is_satisfiable
from restcheck.translate import translate_models
from restcheck import owl

BOOKING = str(EXAMPLES / "hotel_booking.model")
MUTATED = str(EXAMPLES / "hb_mutated_m1.model")
SNIPPET = str(EXAMPLES / "snippet.model")


def test_criterion_1_corpus_model_is_consistent():
    start = time.perf_counter()
    proc = run_cli("check", BOOKING, "--format", "json")
    elapsed = time.perf_counter() - start
    doc = json.loads(proc.stdout) if proc.stdout else {}
    all_sat = (doc.get("overall") == "consistent"
               and all(c["status"] == "sat" for c in doc.get("concepts", ()))
               and len(doc.get("concepts", ())) == 11)
    cross = run_cli("check", BOOKING, "--oracle", "bounded:3")
    ok = (proc.returncode == 0 and all_sat and elapsed < 1.0
          and cross.returncode == 0 and cross.stderr == "")
    record(1, ok, f"booking model: exit {proc.returncode}, "
                  f"{len(doc.get('concepts', ()))} concepts all sat in "
                  f"{elapsed:.2f}s, bounded:3 agrees")


def test_criterion_2_forced_mutation_is_detected():
    proc = run_cli("check", MUTATED, "--format", "json")
    doc = json.loads(proc.stdout) if proc.stdout else {}
    unsat = [c["element"] for c in doc.get("concepts", ())
             if c["status"] == "unsat"]

    text = (EXAMPLES / "hb_mutated_m1.model").read_text()
    rm, bm = parse_model(text, "hb_mutated_m1.model")
    ontology, iris, _ = translate_models(rm, bm)
    fragment = iris.class_of_state("processingPayment")
    search = bounded_model_search(ontology, fragment, 4)

    ok = (proc.returncode == 1
          and unsat == ["processingPayment"]
          and search.status is OracleStatus.NO_MODEL_UP_TO_BOUND
          and search.bound == 4)
    record(2, ok, f"mutated model: exit {proc.returncode}, unsat={unsat}, "
                  f"independent search: {search.status.value} at {search.bound}")


def test_criterion_3_translation_matches_the_stored_documents():
    hb = run_cli("translate", BOOKING)
    sn = run_cli("translate", SNIPPET)
    hb_ok = hb.returncode == 0 and hb.stdout == (GOLDEN / "hb.ofn").read_text()
    sn_ok = sn.returncode == 0 and sn.stdout == (GOLDEN / "snippet.ofn").read_text()
    templates = [
        "SubClassOf(:R1 :R2)",
        "DisjointClasses(:r :R2 :C)",
        "SubClassOf(:C DataExactCardinality(1 :att))",
        "SubClassOf(:r ObjectMinCardinality(1 :a))",
        "SubClassOf(:r ObjectMaxCardinality(3 :a))",
        "SubClassOf(:State_S :r)",
        'EquivalentClasses(:State_S DataHasValue(:name "started"^^xsd:string))',
    ]
    lines = sn.stdout.splitlines()
    present = [t for t in templates if t in lines]
    ok = hb_ok and sn_ok and len(present) == len(templates)
    record(3, ok, f"translations byte-equal to stored documents: "
                  f"booking={hb_ok} snippet={sn_ok}, "
                  f"{len(present)}/{len(templates)} template axioms found")


def test_criterion_4_reasoner_unit_gate():
    decls = (owl.Declaration(owl.EntityKind.CLASS, "A"),
             owl.Declaration(owl.EntityKind.CLASS, "B"),
             owl.Declaration(owl.EntityKind.CLASS, "S"),
             owl.Declaration(owl.EntityKind.OBJECT_PROPERTY, "r"),
             owl.Declaration(owl.EntityKind.DATA_PROPERTY, "p"))

    def sat(concept, *axioms) -> bool:
        ont = owl.Ontology(owl.DEFAULT_BASE_IRI, decls + axioms)
        return is_satisfiable(compile_tbox(ont), concept).sat

    checks = {
        "min/max clash": not sat(owl.Intersection((owl.MinCard(2, "r"),
                                                   owl.MaxCard(1, "r")))),
        "disjoint meet": not sat(
            "S",
            owl.DisjointClasses((owl.Named("A"), owl.Named("B"))),
            owl.EquivalentClasses((owl.Named("S"),
                                   owl.Intersection((owl.Named("A"),
                                                     owl.Named("B")))))),
        "lone class": sat("A"),
        "two values": not sat(
            "A",
            owl.SubClassOf(owl.Named("A"), owl.DataHasValue(
                "p", owl.OwlLiteral("true", owl.DataType.BOOLEAN))),
            owl.SubClassOf(owl.Named("A"), owl.DataHasValue(
                "p", owl.OwlLiteral("false", owl.DataType.BOOLEAN)))),
    }
    start = time.perf_counter()
    checks["cycle"] = sat("A", owl.SubClassOf(owl.Named("A"),
                                              owl.Some("r", owl.Named("A"))))
    cycle_time = time.perf_counter() - start
    checks["cycle in time"] = cycle_time < 0.1
    failed = [k for k, v in checks.items() if not v]
    record(4, not failed,
           f"unit gate: {len(checks) - len(failed)}/{len(checks)} checks, "
           f"cycle decided in {cycle_time * 1000:.0f}ms"
           + (f", failed: {failed}" if failed else ""))


def test_criterion_5_differential_agreement():
    start = time.perf_counter()
    problems: list[str] = []
    sat_n = unsat_n = 0
    for seed in range(500):
        found, s, u = differential_case(seed)
        problems.extend(found)
        sat_n += s
        unsat_n += u
    elapsed = time.perf_counter() - start
    ok = not problems and elapsed < 60.0 and sat_n > 0 and unsat_n > 0
    record(5, ok, f"500 ontologies, {sat_n} sat / {unsat_n} unsat checks, "
                  f"{len(problems)} disagreements, {elapsed:.1f}s"
           + (f"; first: {problems[0]}" if problems else ""))


def test_criterion_6_structural_rejections():
    expected = {
        "isolated.model": "CONNECTIVITY",
        "dup_label.model": "DUPLICATE_LABEL",
        "collection_attr.model": "COLLECTION_HAS_ATTR",
        "normal_no_attr.model": "NORMAL_NO_ATTR",
        "min_gt_max.model": "BAD_CARDINALITY",
        "get_trigger.model": "PARSE",
    }
    wrong: list[str] = []
    for fixture, code in expected.items():
        proc = run_cli("check", str(DATA / fixture), "--format", "json")
        doc = json.loads(proc.stdout) if proc.stdout else {}
        codes = {d["code"] for d in doc.get("diagnostics", ())
                 if d["severity"] == "error"}
        if proc.returncode != 2 or codes != {code}:
            wrong.append(f"{fixture}: exit {proc.returncode}, codes {codes}")
    record(6, not wrong, f"{len(expected) - len(wrong)}/{len(expected)} "
                         f"defect fixtures exit 2 with their designated code"
           + (f"; {'; '.join(wrong)}" if wrong else ""))


def test_criterion_7_round_trips():
    problems: list[str] = []

    corpus = ["hotel_booking.model", "hb_mutated_m1.model", "snippet.model"]
    texts = [(EXAMPLES / n).read_text() for n in corpus]
    for name, text in zip(corpus, texts):
        why = dsl_fixed_point(text, name)
        if why:
            problems.append(why)
    for seed in range(200):
        why = dsl_fixed_point(_generators.model_text(random.Random(seed)),
                              f"model seed {seed}")
        if why:
            problems.append(why)

    for name in ("hb.ofn", "snippet.ofn"):
        why = ofn_fixed_point((GOLDEN / name).read_text(), name)
        if why:
            problems.append(why)
    for seed in range(200):
        text = serialize(_generators.ontology(random.Random(seed)))
        why = ofn_fixed_point(text, f"ontology seed {seed}")
        if why:
            problems.append(why)

    invariants = []
    for name, text in zip(corpus, texts):
        _, bm = parse_model(text, name)
        if bm is not None:
            invariants += [format_ocl(s.invariant) for s in bm.states
                           if s.invariant is not None]
    for seed in range(200):
        invariants.append(_generators.ocl_text(random.Random(seed)))
    for text in invariants:
        why = ocl_fixed_point(text)
        if why:
            problems.append(why)

    ok = not problems
    record(7, ok, f"fixed points: {3 + 200} models, {2 + 200} ontologies, "
                  f"{len(invariants)} constraints"
           + (f"; first failure: {problems[0]}" if problems else ""))
