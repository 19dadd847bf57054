"""Parser and AST for the invariant expression language used on states.

The language is a small OCL-like fragment over navigation paths: attribute
equality against a literal, size comparisons on association ends, and and/or
combinations.  `and` binds tighter than `or`.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from .diagnostics import ParseError, SourceSpan
from .model import AttributeDef, Association, DataType

if TYPE_CHECKING:
    from .model import ResourceModel


class CmpOp(enum.Enum):
    EQ = "="
    GE = ">="
    LE = "<="
    GT = ">"
    LT = "<"


@dataclass(frozen=True)
class OclLiteral:
    """A typed literal as written in an invariant."""

    datatype: DataType
    lexical: str

    def format(self) -> str:
        if self.datatype is DataType.BOOLEAN:
            return "True" if self.lexical == "true" else "False"
        if self.datatype is DataType.STRING:
            escaped = self.lexical.replace("\\", "\\\\").replace('"', '\\"')
            return f'"{escaped}"'
        return self.lexical


@dataclass(frozen=True)
class NavPath:
    """Dot-separated navigation from the context resource."""

    segments: tuple[str, ...]

    def format(self) -> str:
        return ".".join(("self",) + self.segments)


@dataclass(frozen=True)
class AttrEq:
    path: NavPath
    value: OclLiteral
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class SizeCmp:
    path: NavPath
    op: CmpOp
    bound: int
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class OclAnd:
    args: tuple["OclExpr", ...]
    span: SourceSpan | None = field(default=None, compare=False)


@dataclass(frozen=True)
class OclOr:
    args: tuple["OclExpr", ...]
    span: SourceSpan | None = field(default=None, compare=False)


OclExpr = AttrEq | SizeCmp | OclAnd | OclOr


# --- lexer -------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<decimal>\d+\.\d+)
  | (?P<nat>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<string>"(?:\\.|[^"\\\n])*")
  | (?P<arrow>->)
  | (?P<cmp>>=|<=|=|>|<)
  | (?P<punct>[().-])
""", re.VERBOSE)

_KEYWORDS = {"self", "and", "or", "True", "False", "size"}


@dataclass(frozen=True)
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _lex(text: str, file: str, base_line: int, base_col: int) -> list[_Tok]:
    toks = []
    line, col = 1, 1
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(file, _abs_line(line, base_line), _abs_col(line, col, base_col),
                             f"unexpected character {text[pos]!r}")
        kind = m.lastgroup or ""
        value = m.group()
        if kind != "ws":
            toks.append(_Tok(kind, value, _abs_line(line, base_line), _abs_col(line, col, base_col)))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            col = len(value) - value.rfind("\n")
        else:
            col += len(value)
        pos = m.end()
    toks.append(_Tok("eof", "", _abs_line(line, base_line), _abs_col(line, col, base_col)))
    return toks


def _abs_line(line: int, base_line: int) -> int:
    return base_line + line - 1


def _abs_col(line: int, col: int, base_col: int) -> int:
    return base_col + col - 1 if line == 1 else col


def _unquote(text: str) -> str:
    body = text[1:-1]
    return re.sub(r"\\(.)", lambda m: m.group(1), body)


# --- parser ------------------------------------------------------------------


class _Parser:
    def __init__(self, toks: list[_Tok], file: str):
        self.toks = toks
        self.file = file
        self.i = 0

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def next(self) -> _Tok:
        tok = self.toks[self.i]
        self.i += 1
        return tok

    def fail(self, expected: str, tok: _Tok | None = None):
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        raise ParseError(self.file, tok.line, tok.col, f"expected {expected}, found {found}")

    def expect_text(self, text: str) -> _Tok:
        tok = self.peek()
        if tok.text != text:
            self.fail(f"'{text}'")
        return self.next()

    def expr(self) -> OclExpr:
        first = self.term()
        args = [first]
        while self.peek().text == "or":
            self.next()
            args.append(self.term())
        if len(args) == 1:
            return first
        # associativity: (a or b) or c is the same disjunction as a or b or c
        flat: list[OclExpr] = []
        for a in args:
            flat.extend(a.args) if isinstance(a, OclOr) else flat.append(a)
        return OclOr(tuple(flat), span=_span_of(args[0]))

    def term(self) -> OclExpr:
        first = self.prim()
        args = [first]
        while self.peek().text == "and":
            self.next()
            args.append(self.prim())
        if len(args) == 1:
            return first
        flat: list[OclExpr] = []
        for a in args:
            flat.extend(a.args) if isinstance(a, OclAnd) else flat.append(a)
        return OclAnd(tuple(flat), span=_span_of(args[0]))

    def prim(self) -> OclExpr:
        if self.peek().text == "(":
            self.next()
            inner = self.expr()
            self.expect_text(")")
            return inner
        start = self.peek()
        path = self.path()
        tok = self.peek()
        if tok.kind == "arrow":
            self.next()
            size = self.next()
            if size.text != "size":
                self.fail("'size'", size)
            self.expect_text("(")
            self.expect_text(")")
            op_tok = self.peek()
            if op_tok.kind != "cmp":
                self.fail("a comparison operator")
            op = CmpOp(self.next().text)
            bound_tok = self.peek()
            if bound_tok.kind != "nat":
                self.fail("a number", bound_tok)
            self.next()
            span = SourceSpan(self.file, start.line, start.col, bound_tok.line,
                              bound_tok.col + len(bound_tok.text))
            return SizeCmp(path, op, int(bound_tok.text), span=span)
        if tok.kind == "cmp" and tok.text == "=":
            self.next()
            lit, end = self.literal()
            span = SourceSpan(self.file, start.line, start.col, end.line, end.col + len(end.text))
            return AttrEq(path, lit, span=span)
        self.fail("'->' or '='")
        raise AssertionError("unreachable")

    def path(self) -> NavPath:
        segs: list[str] = []
        tok = self.peek()
        if tok.kind != "ident":
            self.fail("a navigation path")
        if tok.text == "self":
            self.next()
            self.expect_text(".")
            tok = self.peek()
        while True:
            if tok.kind != "ident" or tok.text in _KEYWORDS:
                self.fail("an identifier", tok)
            segs.append(self.next().text)
            if self.peek().text == ".":
                self.next()
                tok = self.peek()
            else:
                break
        return NavPath(tuple(segs))

    def literal(self) -> tuple[OclLiteral, _Tok]:
        tok = self.peek()
        if tok.text in ("True", "False"):
            self.next()
            return OclLiteral(DataType.BOOLEAN, tok.text.lower()), tok
        if tok.kind == "decimal":
            self.next()
            return OclLiteral(DataType.DECIMAL, tok.text), tok
        if tok.kind == "nat":
            self.next()
            return OclLiteral(DataType.INTEGER, tok.text), tok
        if tok.text == "-":
            self.next()
            num = self.peek()
            if num.kind == "decimal":
                self.next()
                return OclLiteral(DataType.DECIMAL, "-" + num.text), num
            if num.kind == "nat":
                self.next()
                return OclLiteral(DataType.INTEGER, "-" + num.text), num
            self.fail("a number", num)
        if tok.kind == "string":
            self.next()
            return OclLiteral(DataType.STRING, _unquote(tok.text)), tok
        self.fail("a literal")
        raise AssertionError("unreachable")


def _span_of(e: OclExpr) -> SourceSpan | None:
    return e.span


def parse_ocl(text: str, origin: SourceSpan | None = None) -> OclExpr:
    """Parse an invariant expression.

    When origin is given, positions in errors and spans are reported relative
    to it, so invariants embedded in a larger file point at the right place.
    """
    if origin is not None:
        file, base_line, base_col = origin.file, origin.line, origin.col
    else:
        file, base_line, base_col = "<ocl>", 1, 1
    parser = _Parser(_lex(text, file, base_line, base_col), file)
    expr = parser.expr()
    if parser.peek().kind != "eof":
        parser.fail("end of input")
    return expr


def format_ocl(expr: OclExpr) -> str:
    """Render an expression; parsing the result reconstructs the same tree."""
    return _fmt(expr, in_and=False)


def _fmt(expr: OclExpr, in_and: bool) -> str:
    if isinstance(expr, AttrEq):
        return f"{expr.path.format()} = {expr.value.format()}"
    if isinstance(expr, SizeCmp):
        return f"{expr.path.format()}->size() {expr.op.value} {expr.bound}"
    if isinstance(expr, OclAnd):
        return " and ".join(_fmt(a, in_and=True) for a in expr.args)
    text = " or ".join(_fmt(a, in_and=False) for a in expr.args)
    # an or-expression under an and needs the parentheses back
    return f"({text})" if in_and else text


# --- path resolution ---------------------------------------------------------


class PathError(Exception):
    """A navigation path does not fit the resource model."""


@dataclass(frozen=True)
class ResolvedPath:
    associations: tuple[Association, ...]
    resource: str
    attribute: AttributeDef | None = None


def resolve_path(rm: "ResourceModel", context: str, path: NavPath, *,
                 attribute: bool) -> ResolvedPath:
    """Walk a path from a context resource.

    With attribute=True the last segment must name an attribute of the
    resource the earlier segments navigate to; otherwise every segment is an
    association label.  Association segments must be labels of associations
    leaving the current resource.
    """
    if not path.segments:
        raise PathError("empty navigation path")
    nav = path.segments[:-1] if attribute else path.segments
    hops: list[Association] = []
    cur = context
    for seg in nav:
        assoc = next((a for a in rm.associations if a.label == seg and a.source == cur), None)
        if assoc is None:
            if rm.association(seg) is not None:
                raise PathError(f"association '{seg}' does not start at resource '{cur}'")
            raise PathError(f"no association '{seg}' on resource '{cur}'")
        hops.append(assoc)
        cur = assoc.target
    if not attribute:
        return ResolvedPath(tuple(hops), cur)
    att_name = path.segments[-1]
    att = next((a for a in rm.attributes_of(cur) if a.name == att_name), None)
    if att is None:
        raise PathError(f"resource '{cur}' has no attribute '{att_name}'")
    return ResolvedPath(tuple(hops), cur, att)
