"""Frontend package"""

from .diagnostics import Diagnostic, DiagnosticCode, Severity
from .parser import parse
from .legality import LegalityChecker
from .renamer import rename_apart

__all__ = ["Diagnostic", "DiagnosticCode", "Severity", "parse", "LegalityChecker", "rename_apart"]
