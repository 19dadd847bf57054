"""The full checking pipeline.

Parse, validate, translate, classify with the tableau engine, and optionally
cross-check every verdict against the bounded model search.  The two decision
procedures are independent, so a disagreement between them is reported as its
own failure mode instead of silently trusting either side.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import dsl, oracle, owl, reasoner, translate
from .diagnostics import (Code, Diagnostic, ParseError, ResolveError, Severity,
                          error)
from .model import (BehavioralModel, ResourceModel, validate_behavioral_model,
                    validate_resource_model)
from .report import CheckReport, ConceptVerdict, build_report

EXIT_CONSISTENT = 0
EXIT_INCONSISTENT = 1
EXIT_INVALID = 2
EXIT_IO = 3
EXIT_DISAGREEMENT = 4


@dataclass(frozen=True)
class CheckOutcome:
    report: CheckReport
    exit_code: int
    ontology: owl.Ontology | None = field(default=None, compare=False)
    iris: translate.IriMap | None = field(default=None, compare=False)
    disagreements: tuple[str, ...] = ()


def parse_and_validate(text: str, file_name: str = "<input>"
                       ) -> tuple[ResourceModel | None,
                                  BehavioralModel | None,
                                  list[Diagnostic]]:
    """Front half of the pipeline; never raises, all trouble becomes diagnostics."""
    try:
        rm, bm = dsl.parse_model(text, file_name)
    except ParseError as exc:
        return None, None, [exc.to_diagnostic()]
    except ResolveError as exc:
        return None, None, exc.to_diagnostics()
    diagnostics = validate_resource_model(rm)
    if bm is not None:
        diagnostics += validate_behavioral_model(bm, rm)
    return rm, bm, diagnostics


def _has_errors(diagnostics: list[Diagnostic]) -> bool:
    return any(d.severity is Severity.ERROR for d in diagnostics)


def _witness_confirmed(ontology: owl.Ontology, fragment: str,
                       witness: reasoner.Witness | None, bound: int) -> int | None:
    """Size of a tableau witness the evaluator accepts, or None.

    A tableau witness obtained by redirecting blocked edges can break the
    distinctness needed by min-cardinalities, so its size only counts against
    the bounded search when the structure actually checks out.
    """
    if witness is None or not witness.faithful or witness.size > bound:
        return None
    fm = oracle.FiniteModel(witness.size, witness.classes,
                            witness.roles, witness.values)
    if oracle.violations(fm, ontology):
        return None
    if not oracle.eval_expr(fm, owl.Named(fragment), 0):
        return None
    return witness.size


def check_model(text: str, file_name: str = "<input>", *,
                base_iri: str = owl.DEFAULT_BASE_IRI,
                oracle_bound: int | None = None) -> CheckOutcome:
    rm, bm, diagnostics = parse_and_validate(text, file_name)
    name = rm.name if rm is not None else ""
    if rm is None or _has_errors(diagnostics):
        return CheckOutcome(build_report(name, [], diagnostics), EXIT_INVALID)

    ontology, iris, tdiags = translate.translate_models(rm, bm, base_iri)
    diagnostics += tdiags

    tbox = reasoner.compile_tbox(ontology)
    verdicts = reasoner.classify_all(tbox)

    concepts: list[ConceptVerdict] = []
    disagreements: list[str] = []
    for fragment, result in verdicts:
        entry = iris.element_for_class(fragment)
        if entry is None:  # every declared class came from the translator
            raise RuntimeError(f"class '{fragment}' has no source element")
        kind = "resource" if entry.kind is translate.ElementKind.RESOURCE else "state"
        concepts.append(ConceptVerdict(entry.name, kind, result.sat, entry.span))
        if not result.sat:
            if kind == "resource":
                diagnostics.append(error(
                    Code.UNSAT_RESOURCE,
                    f"resource '{entry.name}' can never be instantiated",
                    entry.span))
            else:
                diagnostics.append(error(
                    Code.UNSAT_STATE,
                    f"state '{entry.name}' can never be active",
                    entry.span))
        if oracle_bound is not None:
            checked = oracle.bounded_model_search(ontology, fragment, oracle_bound)
            if not result.sat and checked.status is oracle.OracleStatus.SAT:
                disagreements.append(
                    f"'{entry.name}': tableau reports unsatisfiable but a "
                    f"structure of size {checked.model.size} satisfies it")
            elif result.sat and checked.status is oracle.OracleStatus.NO_MODEL_UP_TO_BOUND:
                size = _witness_confirmed(ontology, fragment,
                                          result.witness, oracle_bound)
                if size is not None:
                    disagreements.append(
                        f"'{entry.name}': tableau produced a verified structure "
                        f"of size {size} but the bounded search found none up "
                        f"to {oracle_bound}")

    rep = build_report(rm.name, concepts, diagnostics)
    if disagreements:
        code = EXIT_DISAGREEMENT
    elif rep.overall == "inconsistent":
        code = EXIT_INCONSISTENT
    else:
        code = EXIT_CONSISTENT
    return CheckOutcome(rep, code, ontology, iris, tuple(disagreements))


def validate_model(text: str, file_name: str = "<input>") -> CheckOutcome:
    """Structural checks only; the report carries no concept verdicts."""
    rm, _, diagnostics = parse_and_validate(text, file_name)
    name = rm.name if rm is not None else ""
    rep = CheckReport(name,
                      "invalid" if rm is None or _has_errors(diagnostics)
                      else "consistent",
                      (), tuple(diagnostics))
    code = EXIT_INVALID if rep.overall == "invalid" else EXIT_CONSISTENT
    return CheckOutcome(rep, code)


def translate_model(text: str, file_name: str = "<input>", *,
                    base_iri: str = owl.DEFAULT_BASE_IRI
                    ) -> tuple[str | None, list[Diagnostic], int]:
    """Produce ontology text, or diagnostics explaining why not."""
    rm, bm, diagnostics = parse_and_validate(text, file_name)
    if rm is None or _has_errors(diagnostics):
        return None, diagnostics, EXIT_INVALID
    ontology, _, tdiags = translate.translate_models(rm, bm, base_iri)
    diagnostics += tdiags
    return owl.serialize(ontology), diagnostics, EXIT_CONSISTENT
