"""Textual syntax for resource and behavioral models.

A file holds one `resources` block and optionally one `behavior` block:

    resources Shop {
      root resource Order { attr status: string }
      collection items
      association items: Order -> items [1..1]
    }

    behavior OrderLife for Order {
      initial start
      state open { inv: "self.status = \"open\"" }
      transition start -> open on POST Order
    }

Comments run from '#' to end of line.  Parsing resolves every name; unbound
names are collected into a single ResolveError.  Structural rules beyond name
binding are left to the validators.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .diagnostics import ParseError, ResolveError, SourceSpan
from .model import (Association, AttributeDef, BehavioralModel, DataType,
                    ResourceDef, ResourceKind, ResourceModel, State, StateKind,
                    Transition, Trigger)
from .ocl import OclExpr, format_ocl, parse_ocl

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<nat>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:\\.|[^"\\\n])*")
  | (?P<arrow>->)
  | (?P<range>\.\.)
  | (?P<punct>[{}:\[\]*])
""", re.VERBOSE)

_KEYWORDS = {
    "resources", "resource", "collection", "root", "extends", "attr",
    "association", "behavior", "for", "state", "in", "region", "initial",
    "final", "transition", "on", "guard", "post", "inv",
    "string", "boolean", "integer", "decimal",
}

_TRIGGERS = {"PUT", "POST", "DELETE"}


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _lex(text: str, file: str) -> list[_Tok]:
    toks = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(file, line, col, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup or ""
        value = m.group()
        if kind not in ("ws", "comment"):
            toks.append(_Tok(kind, value, line, col))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    toks.append(_Tok("eof", "", line, col))
    return toks


def _unquote(text: str) -> str:
    return re.sub(r"\\(.)", lambda m: m.group(1), text[1:-1])


class _Parser:
    """Recursive descent over the token list."""

    def __init__(self, toks: list[_Tok], file: str):
        self.toks = toks
        self.file = file
        self.i = 0
        self.unresolved: list[tuple[str, int, int]] = []

    # -- token plumbing

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def at(self, text: str) -> bool:
        return self.peek().text == text and self.peek().kind in ("ident", "punct", "arrow", "range")

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.next()
            return True
        return False

    def fail(self, expected: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(self.file, tok.line, tok.col, f"expected {expected}, found {found}")

    def expect(self, text: str) -> _Tok:
        if not self.at(text):
            self.fail(f"'{text}'")
        return self.next()

    def ident(self, what: str = "an identifier") -> _Tok:
        tok = self.peek()
        if tok.kind != "ident" or tok.text in _KEYWORDS:
            self.fail(what)
        return self.next()

    def nat(self) -> _Tok:
        tok = self.peek()
        if tok.kind != "nat":
            self.fail("a number")
        return self.next()

    def string(self, what: str = "a quoted string") -> _Tok:
        tok = self.peek()
        if tok.kind != "string":
            self.fail(what)
        return self.next()

    def span(self, start: _Tok, end: _Tok | None = None) -> SourceSpan:
        end = end or self.toks[max(self.i - 1, 0)]
        return SourceSpan(self.file, start.line, start.col, end.line, end.col + len(end.text))

    # -- grammar

    def model(self) -> tuple[ResourceModel, BehavioralModel | None]:
        if not self.at("resources"):
            self.fail("'resources'")
        rm = self.resources_block()
        bm = None
        if self.at("behavior"):
            bm = self.behavior_block()
        if self.peek().kind != "eof":
            self.fail("'behavior' or end of input")
        self.resolve(rm, bm)
        return rm, bm

    def resources_block(self) -> ResourceModel:
        self.expect("resources")
        name = self.ident("a model name")
        self.expect("{")
        resources: list[ResourceDef] = []
        associations: list[Association] = []
        while not self.at("}"):
            if self.at("association"):
                associations.append(self.assoc_decl())
            elif self.at("root") or self.at("resource") or self.at("collection"):
                resources.append(self.resource_decl())
            else:
                self.fail("'resource', 'collection', 'association' or '}'")
        self.expect("}")
        return ResourceModel(name.text, tuple(resources), tuple(associations))

    def resource_decl(self) -> ResourceDef:
        start = self.peek()
        is_root = self.accept("root")
        if self.accept("resource"):
            kind = ResourceKind.NORMAL
        elif self.accept("collection"):
            kind = ResourceKind.COLLECTION
        else:
            self.fail("'resource' or 'collection'")
        name = self.ident("a resource name")
        parent = None
        if self.accept("extends"):
            parent = self.ident("a resource name").text
        attrs: list[AttributeDef] = []
        if self.accept("{"):
            while not self.at("}"):
                attrs.append(self.attr_decl())
            self.expect("}")
        return ResourceDef(name.text, kind, is_root, parent, tuple(attrs),
                           span=self.span(start))

    def attr_decl(self) -> AttributeDef:
        start = self.expect("attr")
        name = self.ident("an attribute name")
        self.expect(":")
        tok = self.peek()
        if tok.text not in ("string", "boolean", "integer", "decimal"):
            self.fail("'string', 'boolean', 'integer' or 'decimal'")
        self.next()
        return AttributeDef(name.text, DataType(tok.text), span=self.span(start))

    def assoc_decl(self) -> Association:
        start = self.expect("association")
        label = self.ident("an association label")
        self.expect(":")
        source = self.ident("a resource name")
        if self.peek().kind != "arrow":
            self.fail("'->'")
        self.next()
        target = self.ident("a resource name")
        self.expect("[")
        lo = int(self.nat().text)
        if self.peek().kind != "range":
            self.fail("'..'")
        self.next()
        if self.accept("*"):
            hi = None
        else:
            hi = int(self.nat().text)
        self.expect("]")
        return Association(label.text, source.text, target.text, lo, hi,
                           span=self.span(start))

    def behavior_block(self) -> BehavioralModel:
        self.expect("behavior")
        name = self.ident("a behavior name")
        self.expect("for")
        target = self.ident("a resource name")
        self.expect("{")
        states: list[State] = []
        while self.at("state") or self.at("initial") or self.at("final"):
            states.append(self.state_decl())
        transitions: list[Transition] = []
        while self.at("transition"):
            transitions.append(self.trans_decl())
        self.expect("}")
        # a state becomes composite once something is declared inside it
        parents = {s.parent for s in states if s.parent is not None}
        final_states = []
        for s in states:
            if s.name in parents and s.kind is StateKind.SIMPLE:
                s = State(s.name, StateKind.COMPOSITE, s.parent, s.region,
                          s.invariant, span=s.span)
            final_states.append(s)
        return BehavioralModel(name.text, target.text, tuple(final_states),
                               tuple(transitions))

    def state_decl(self) -> State:
        start = self.peek()
        if self.accept("initial"):
            name = self.ident("a state name")
            return State(name.text, StateKind.INITIAL, span=self.span(start))
        if self.accept("final"):
            name = self.ident("a state name")
            return State(name.text, StateKind.FINAL, span=self.span(start))
        self.expect("state")
        name = self.ident("a state name")
        parent = None
        region = 0
        if self.accept("in"):
            parent = self.ident("a state name").text
            if self.accept("region"):
                region = int(self.nat().text)
        invariant = None
        if self.accept("{"):
            if self.accept("inv"):
                self.expect(":")
                invariant = self.inv_text()
            self.expect("}")
        return State(name.text, StateKind.SIMPLE, parent, region, invariant,
                     span=self.span(start))

    def inv_text(self) -> OclExpr:
        tok = self.string("a quoted invariant")
        # positions inside the invariant are offset past the opening quote
        origin = SourceSpan.point(self.file, tok.line, tok.col + 1)
        return parse_ocl(_unquote(tok.text), origin)

    def trans_decl(self) -> Transition:
        start = self.expect("transition")
        source = self.ident("a state name")
        if self.peek().kind != "arrow":
            self.fail("'->'")
        self.next()
        target = self.ident("a state name")
        self.expect("on")
        tok = self.peek()
        if tok.text not in _TRIGGERS:
            if tok.text == "GET":
                raise ParseError(self.file, tok.line, tok.col,
                                 "expected 'PUT', 'POST' or 'DELETE', found 'GET'"
                                 " (GET has no side effects and cannot trigger a transition)")
            self.fail("'PUT', 'POST' or 'DELETE'")
        self.next()
        trigger = Trigger(tok.text)
        target_resource = None
        if self.peek().kind == "ident" and self.peek().text not in _KEYWORDS:
            target_resource = self.ident().text
        guard = post = ""
        if self.accept("guard"):
            guard = _unquote(self.string().text)
        if self.accept("post"):
            post = _unquote(self.string().text)
        return Transition(source.text, target.text, trigger, target_resource,
                          guard, post, span=self.span(start))

    # -- name resolution

    def resolve(self, rm: ResourceModel, bm: BehavioralModel | None):
        resource_names = {r.name for r in rm.resources}
        for r in rm.resources:
            if r.parent is not None and r.parent not in resource_names:
                self.note_unresolved(r.parent, r.span)
        for a in rm.associations:
            for end in (a.source, a.target):
                if end not in resource_names:
                    self.note_unresolved(end, a.span)
        if bm is not None:
            state_names = {s.name for s in bm.states}
            if bm.for_resource not in resource_names:
                self.note_unresolved(bm.for_resource, None)
            for s in bm.states:
                if s.parent is not None and s.parent not in state_names:
                    self.note_unresolved(s.parent, s.span)
            for t in bm.transitions:
                for end in (t.source, t.target):
                    if end not in state_names:
                        self.note_unresolved(end, t.span)
                if t.target_resource is not None and t.target_resource not in resource_names:
                    self.note_unresolved(t.target_resource, t.span)
        if self.unresolved:
            raise ResolveError(self.file, self.unresolved)

    def note_unresolved(self, name: str, span: SourceSpan | None):
        line, col = (span.line, span.col) if span else (1, 1)
        self.unresolved.append((name, line, col))


def parse_model(text: str, file_name: str = "<input>") -> tuple[ResourceModel, BehavioralModel | None]:
    """Parse a model file into its resource and optional behavioral model.

    Raises ParseError on syntax errors and ResolveError when names do not
    bind; both carry file positions.
    """
    parser = _Parser(_lex(text, file_name), file_name)
    return parser.model()


# --- formatting --------------------------------------------------------------


def format_model(rm: ResourceModel, bm: BehavioralModel | None = None) -> str:
    """Render models back to the textual syntax in a canonical layout."""
    out: list[str] = [f"resources {rm.name} {{"]
    for r in rm.resources:
        head = "  "
        if r.is_root:
            head += "root "
        head += "resource " if r.kind is ResourceKind.NORMAL else "collection "
        head += r.name
        if r.parent is not None:
            head += f" extends {r.parent}"
        if r.attributes:
            out.append(head + " {")
            for att in r.attributes:
                out.append(f"    attr {att.name}: {att.datatype.value}")
            out.append("  }")
        else:
            out.append(head)
    for a in rm.associations:
        hi = "*" if a.max is None else str(a.max)
        out.append(f"  association {a.label}: {a.source} -> {a.target} [{a.min}..{hi}]")
    out.append("}")
    if bm is not None:
        out.append("")
        out.append(f"behavior {bm.name} for {bm.for_resource} {{")
        for s in bm.states:
            if s.kind is StateKind.INITIAL:
                out.append(f"  initial {s.name}")
                continue
            if s.kind is StateKind.FINAL:
                out.append(f"  final {s.name}")
                continue
            head = f"  state {s.name}"
            if s.parent is not None:
                head += f" in {s.parent}"
                if s.region:
                    head += f" region {s.region}"
            if s.invariant is not None:
                inv = format_ocl(s.invariant).replace("\\", "\\\\").replace('"', '\\"')
                out.append(head + " {")
                out.append(f'    inv: "{inv}"')
                out.append("  }")
            else:
                out.append(head)
        for t in bm.transitions:
            line = f"  transition {t.source} -> {t.target} on {t.trigger.value}"
            if t.target_resource is not None:
                line += f" {t.target_resource}"
            if t.guard:
                line += f' guard "{_escape(t.guard)}"'
            if t.post:
                line += f' post "{_escape(t.post)}"'
            out.append(line)
        out.append("}")
    return "\n".join(out) + "\n"


def _escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')
