"""Shared diagnostic types: source positions, error codes, and the exceptions
raised by the parsing layers."""

from __future__ import annotations

import enum
from dataclasses import dataclass


@dataclass(frozen=True)
class SourceSpan:
    """A 1-based region of an input file."""

    file: str
    line: int
    col: int
    end_line: int
    end_col: int

    @classmethod
    def point(cls, file: str, line: int, col: int) -> "SourceSpan":
        return cls(file, line, col, line, col)


class Severity(enum.Enum):
    ERROR = "error"
    WARNING = "warning"


class Code(enum.Enum):
    """Diagnostic codes reported by validation, translation and reasoning."""

    CONNECTIVITY = "CONNECTIVITY"
    DUPLICATE_LABEL = "DUPLICATE_LABEL"
    COLLECTION_HAS_ATTR = "COLLECTION_HAS_ATTR"
    NORMAL_NO_ATTR = "NORMAL_NO_ATTR"
    BAD_CARDINALITY = "BAD_CARDINALITY"
    UNRESOLVED_PATH = "UNRESOLVED_PATH"
    NO_PATH = "NO_PATH"
    PARSE = "PARSE"
    UNSAT_RESOURCE = "UNSAT_RESOURCE"
    UNSAT_STATE = "UNSAT_STATE"
    NEGATIVE_BOUND = "NEGATIVE_BOUND"


@dataclass(frozen=True)
class Diagnostic:
    severity: Severity
    code: Code
    message: str
    span: SourceSpan | None = None

    def format(self) -> str:
        text = f"{self.severity.value}[{self.code.value}] {self.message}"
        if self.span is not None:
            text += f" ({self.span.file}:{self.span.line}:{self.span.col})"
        return text


def error(code: Code, message: str, span: SourceSpan | None = None) -> Diagnostic:
    return Diagnostic(Severity.ERROR, code, message, span)


def warning(code: Code, message: str, span: SourceSpan | None = None) -> Diagnostic:
    return Diagnostic(Severity.WARNING, code, message, span)


class ParseError(Exception):
    """Syntax error with a file position, formatted as file:line:col: message."""

    def __init__(self, file: str, line: int, col: int, message: str):
        super().__init__(f"{file}:{line}:{col}: {message}")
        self.file = file
        self.line = line
        self.col = col
        self.message = message

    def to_diagnostic(self) -> Diagnostic:
        span = SourceSpan.point(self.file, self.line, self.col)
        return error(Code.PARSE, self.message, span)


class ResolveError(Exception):
    """One or more names in an otherwise well-formed input did not bind.

    Collects every unbound reference so a single run reports them all.
    """

    def __init__(self, file: str, items: list[tuple[str, int, int]]):
        names = ", ".join(f"'{n}'" for n, _, _ in items)
        super().__init__(f"{file}: unresolved name(s): {names}")
        self.file = file
        self.items = tuple(items)

    def to_diagnostics(self) -> list[Diagnostic]:
        out = []
        for name, line, col in self.items:
            span = SourceSpan.point(self.file, line, col)
            out.append(error(Code.UNRESOLVED_PATH, f"unresolved name '{name}'", span))
        return out
