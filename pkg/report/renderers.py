"""
Rendu des résultats: diagnostics, VCs, analyses et classification
"""

import json
from typing import Dict, Iterable, List, Optional

from config.settings import OBLIGATION_ID
from core.analysis import ParMap, Summaries
from core.conditions import ClassificationReport
from core.printer import heap_str, si_lines
from core.syntax import EMPTY, Program, SourceSpan
from core.vcgen import VcOutput
from frontend.diagnostics import Diagnostic
from utils.logger import setup_logger

logger = setup_logger(__name__)

BODY_PAD = " " * len("  body: ")


def _line(span: Optional[SourceSpan]) -> int:
    return span.line if span is not None else 0


def _column(span: Optional[SourceSpan]) -> int:
    return span.column if span is not None else 0


def _length(span: Optional[SourceSpan]) -> int:
    return span.length if span is not None else 0


class TextRenderer:
    """Sortie texte lisible (format par défaut)"""

    def __init__(self, filename: str):
        self.filename = filename

    def location(self, span: Optional[SourceSpan]) -> str:
        return f"{self.filename}:{_line(span)}:{_column(span)}"

    def diagnostics(self, diagnostics: Iterable[Diagnostic]) -> List[str]:
        """`<file>:<line>:<col>: <severity> [<code>] <message>`"""
        lines = []
        for diag in diagnostics:
            message = diag.message
            if diag.related:
                message += " (voir " + ", ".join(self.location(span) for span in diag.related) + ")"
            lines.append(f"{self.location(diag.span)}: {diag.severity.value} [{diag.code.value}] {message}")
        return lines

    def vcs(self, output: VcOutput) -> List[str]:
        lines = [f"// sfcheck: {self.filename}"]
        if output.main_pre_replaced:
            lines.append("// précondition de main remplacée par la postcondition de init")
        lines.append(f"// {len(output.vcs)} vc, {len(output.obligations)} obligation(s)")
        for vc in output.vcs:
            body = si_lines(vc.body)
            lines.append("")
            lines.append(f"vc {vc.id} @ {self.filename}:{_line(vc.origin)}")
            lines.append(f"  pre:  {heap_str(vc.pre)}")
            lines.append(f"  body: {body[0]}")
            lines.extend(BODY_PAD + line for line in body[1:])
            lines.append(f"  post: {heap_str(vc.post)}")
        if output.obligations:
            lines.append("")
        for obligation in output.obligations:
            lines.append(f"entail {obligation.id}: {heap_str(obligation.lhs)} |- {heap_str(obligation.rhs)}")
        return lines

    def analysis(self, program: Program, s: Summaries, par: ParMap) -> List[str]:
        lines = []
        for proc in program.procedures:
            name = proc.name
            lines.append(
                f"proc {name}: vars={s.vars[name]!r} mod={s.mod[name]!r} "
                f"req={s.req[name]!r} par={par.get(name, EMPTY)!r}"
            )
        return lines

    def classification(self, report: ClassificationReport) -> List[str]:
        return [
            f"var {name}: {var_class.value} ({report.reasons[name]})"
            for name, var_class in report.classes.items()
        ]


class StructuredRenderer:
    """JSON Lines: un enregistrement par ligne, clés triées"""

    def __init__(self, filename: str):
        self.filename = filename

    @staticmethod
    def dump(record: Dict) -> str:
        return json.dumps(record, sort_keys=True, ensure_ascii=False)

    def span_record(self, span: Optional[SourceSpan]) -> Dict:
        return {
            "file": self.filename,
            "line": _line(span),
            "column": _column(span),
            "length": _length(span),
        }

    def diagnostics(self, diagnostics: Iterable[Diagnostic]) -> List[str]:
        return [
            self.dump({
                "kind": "diagnostic",
                "code": diag.code.value,
                "severity": diag.severity.value,
                "message": diag.message,
                "related": [self.span_record(span) for span in diag.related],
                **self.span_record(diag.span),
            })
            for diag in diagnostics
        ]

    def vcs(self, output: VcOutput) -> List[str]:
        lines = [self.dump({
            "kind": "header",
            "file": self.filename,
            "main_pre_replaced": output.main_pre_replaced,
            "fresh_counter_final": output.fresh_counter_final,
        })]
        for vc in output.vcs:
            lines.append(self.dump({
                "kind": "vc",
                "id": vc.id,
                "pre": heap_str(vc.pre),
                "body": si_lines(vc.body),
                "post": heap_str(vc.post),
                **self.span_record(vc.origin),
            }))
        for obligation in output.obligations:
            lines.append(self.dump({
                "kind": "obligation",
                "id": obligation.id or OBLIGATION_ID,
                "lhs": heap_str(obligation.lhs),
                "rhs": heap_str(obligation.rhs),
                **self.span_record(obligation.origin),
            }))
        return lines

    def analysis(self, program: Program, s: Summaries, par: ParMap) -> List[str]:
        return [
            self.dump({
                "kind": "summary",
                "proc": proc.name,
                "vars": list(s.vars[proc.name]),
                "mod": list(s.mod[proc.name]),
                "req": list(s.req[proc.name]),
                "par": list(par.get(proc.name, EMPTY)),
                "iterations": s.iterations,
            })
            for proc in program.procedures
        ]

    def classification(self, report: ClassificationReport) -> List[str]:
        return [
            self.dump({
                "kind": "class",
                "var": name,
                "class": var_class.value,
                "reason": report.reasons[name],
            })
            for name, var_class in report.classes.items()
        ]


def make_renderer(output_format: str, filename: str):
    """Renderer correspondant au format demandé"""
    if output_format == "structured":
        return StructuredRenderer(filename)
    return TextRenderer(filename)
