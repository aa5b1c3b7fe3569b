"""
Diagnostics: codes stables, sévérité, position
"""

from dataclasses import dataclass
from enum import Enum
from typing import Iterable, List, Optional, Tuple

from core.syntax import SourceSpan


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


class DiagnosticCode(str, Enum):
    """Énumération documentée des codes de diagnostic"""

    # Syntaxe
    SYNTAX_ERROR = "SYNTAX_ERROR"
    SYNTAX_UNTERMINATED_COMMENT = "SYNTAX_UNTERMINATED_COMMENT"
    SYNTAX_PRIME_IDENT = "SYNTAX_PRIME_IDENT"
    SYNTAX_INT_OVERFLOW = "SYNTAX_INT_OVERFLOW"
    # Légalité
    LEGAL_UNDECLARED_PROC = "LEGAL_UNDECLARED_PROC"
    LEGAL_UNDECLARED_RESOURCE = "LEGAL_UNDECLARED_RESOURCE"
    LEGAL_DUP_FORMALS = "LEGAL_DUP_FORMALS"
    LEGAL_DUP_RESOURCE = "LEGAL_DUP_RESOURCE"
    LEGAL_OVERLAP_OWNED = "LEGAL_OVERLAP_OWNED"
    LEGAL_INV_MENTIONS_FOREIGN_OWNED = "LEGAL_INV_MENTIONS_FOREIGN_OWNED"
    LEGAL_DUP_PROC = "LEGAL_DUP_PROC"
    LEGAL_ARITY = "LEGAL_ARITY"
    LEGAL_DUP_LOCAL = "LEGAL_DUP_LOCAL"
    LEGAL_DUP_OWNED = "LEGAL_DUP_OWNED"
    LEGAL_DUP_FIELD = "LEGAL_DUP_FIELD"
    LEGAL_INIT_MAIN_PARAMS = "LEGAL_INIT_MAIN_PARAMS"
    # Aliasing
    ALIAS_DUP_REF = "ALIAS_DUP_REF"
    ALIAS_GLOBAL_CONFLICT = "ALIAS_GLOBAL_CONFLICT"
    # Concurrence
    CONC_REQ_MAIN = "CONC_REQ_MAIN"
    CONC_INTERFERENCE = "CONC_INTERFERENCE"
    NOTE_NO_MAIN = "NOTE_NO_MAIN"
    # Initialisation des ressources
    INIT_ORDER_DEP = "INIT_ORDER_DEP"
    INIT_FORBIDDEN_CONSTRUCT = "INIT_FORBIDDEN_CONSTRUCT"
    # Pilote
    IO_ERROR = "IO_ERROR"
    INTERNAL_ERROR = "INTERNAL_ERROR"


NO_SPAN = SourceSpan(0, 0, 0, 0)


@dataclass(frozen=True)
class Diagnostic:
    code: DiagnosticCode
    severity: Severity
    span: SourceSpan
    message: str
    related: Tuple[SourceSpan, ...] = ()

    @property
    def is_error(self) -> bool:
        return self.severity == Severity.ERROR

    def sort_key(self):
        return (self.code.value, self.span.line, self.span.column, self.message)


def error(code: DiagnosticCode, span: Optional[SourceSpan], message: str,
          related: Iterable[Optional[SourceSpan]] = ()) -> Diagnostic:
    return Diagnostic(
        code,
        Severity.ERROR,
        span or NO_SPAN,
        message,
        tuple(r for r in related if r is not None),
    )


def warning(code: DiagnosticCode, span: Optional[SourceSpan], message: str) -> Diagnostic:
    return Diagnostic(code, Severity.WARNING, span or NO_SPAN, message)


def sort_diagnostics(diagnostics: Iterable[Diagnostic]) -> List[Diagnostic]:
    """Ordre fixe: code puis position"""
    return sorted(diagnostics, key=Diagnostic.sort_key)


def has_errors(diagnostics: Iterable[Diagnostic]) -> bool:
    return any(d.is_error for d in diagnostics)
