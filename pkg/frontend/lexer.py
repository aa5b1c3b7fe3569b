"""
Analyse lexicale du langage annoté
"""

import re
from dataclasses import dataclass
from typing import List, Optional, Tuple

from config.settings import INT_MAX, INT_MIN, KEYWORDS
from core.syntax import SourceSpan
from frontend.diagnostics import Diagnostic, DiagnosticCode, error
from utils.logger import setup_logger

logger = setup_logger(__name__)

# Symboles, du plus long au plus court
SYMBOLS = ("|->", "||", "->", "==", "!=", "&&", "(", ")", "[", "]", "{", "}", ";", ",", ":", "=", "^", "*")

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")
_PRIMES = re.compile(r"(?:'[A-Za-z0-9_]*)+")
_INT = re.compile(r"-?[0-9]+")
_SPACE = re.compile(r"[ \t\r\f\v]+")


@dataclass(frozen=True)
class Token:
    kind: str  # ident | int | keyword | op | eof
    text: str
    span: SourceSpan
    value: Optional[int] = None


class Lexer:
    """Découpage en tokens avec positions (ligne, colonne)"""

    def __init__(self, source: str):
        self.source = source
        self.pos = 0
        self.line = 1
        self.line_start = 0
        self.tokens: List[Token] = []
        self.diagnostics: List[Diagnostic] = []

    def _span(self, start: int, end: int, line: int, line_start: int) -> SourceSpan:
        return SourceSpan(start, end, line, start - line_start + 1)

    def _advance_to(self, end: int):
        """Avancer en comptant les retours à la ligne"""
        chunk = self.source[self.pos:end]
        newlines = chunk.count("\n")
        if newlines:
            self.line += newlines
            self.line_start = self.pos + chunk.rfind("\n") + 1
        self.pos = end

    def _push(self, kind: str, start: int, end: int, value: Optional[int] = None):
        text = self.source[start:end]
        self.tokens.append(Token(kind, text, self._span(start, end, self.line, self.line_start), value))
        self.pos = end

    def _skip_comment(self) -> bool:
        """Ignorer un commentaire; False si non terminé"""
        if self.source.startswith("//", self.pos):
            end = self.source.find("\n", self.pos)
            self._advance_to(len(self.source) if end < 0 else end)
            return True
        start = self.pos
        end = self.source.find("*/", self.pos + 2)
        if end < 0:
            span = self._span(start, start + 2, self.line, self.line_start)
            self.diagnostics.append(error(
                DiagnosticCode.SYNTAX_UNTERMINATED_COMMENT, span, "commentaire /* non terminé"))
            self._advance_to(len(self.source))
            return False
        self._advance_to(end + 2)
        return True

    def tokenize(self) -> Tuple[List[Token], List[Diagnostic]]:
        """
        Produire la liste des tokens

        Returns:
            Tuple (tokens terminés par eof, diagnostics lexicaux)
        """
        source = self.source
        while self.pos < len(source):
            char = source[self.pos]
            if char == "\n":
                self._advance_to(self.pos + 1)
                continue
            match = _SPACE.match(source, self.pos)
            if match:
                self.pos = match.end()
                continue
            if source.startswith("//", self.pos) or source.startswith("/*", self.pos):
                if not self._skip_comment():
                    break
                continue

            match = _IDENT.match(source, self.pos)
            if match:
                start, end = match.span()
                primes = _PRIMES.match(source, end)
                if primes:
                    end = primes.end()
                    self.diagnostics.append(error(
                        DiagnosticCode.SYNTAX_PRIME_IDENT,
                        self._span(start, end, self.line, self.line_start),
                        f"identifiant '{source[start:end]}' contenant ' (réservé aux noms frais)",
                    ))
                kind = "keyword" if source[start:end] in KEYWORDS else "ident"
                self._push(kind, start, end)
                continue

            if not source.startswith("->", self.pos):
                match = _INT.match(source, self.pos)
                if match:
                    start, end = match.span()
                    value = int(match.group())
                    if not INT_MIN <= value <= INT_MAX:
                        self.diagnostics.append(error(
                            DiagnosticCode.SYNTAX_INT_OVERFLOW,
                            self._span(start, end, self.line, self.line_start),
                            f"constante {match.group()} hors de l'intervalle 64 bits signé",
                        ))
                        value = 0
                    self._push("int", start, end, value)
                    continue

            symbol = next((s for s in SYMBOLS if source.startswith(s, self.pos)), None)
            if symbol:
                self._push("op", self.pos, self.pos + len(symbol))
                continue

            self.diagnostics.append(error(
                DiagnosticCode.SYNTAX_ERROR,
                self._span(self.pos, self.pos + 1, self.line, self.line_start),
                f"caractère inattendu {char!r}",
            ))
            self.pos += 1

        self.tokens.append(Token("eof", "", self._span(self.pos, self.pos, self.line, self.line_start)))
        logger.debug(f"Lexer: {len(self.tokens)} tokens, {len(self.diagnostics)} diagnostics")
        return self.tokens, self.diagnostics


def tokenize(source: str) -> Tuple[List[Token], List[Diagnostic]]:
    return Lexer(source).tokenize()
