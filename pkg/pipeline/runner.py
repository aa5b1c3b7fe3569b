"""
Pilote du pipeline: parse -> légalité -> renommage -> analyses -> conditions -> VCs
"""

import sys
from dataclasses import dataclass, field
from typing import List, Optional, TextIO, Tuple

from config.run_config import RunConfig
from config.settings import EXIT_CLEAN, EXIT_DIAGNOSTICS, EXIT_FRONTEND, EXIT_INTERNAL
from core.analysis import ParallelismAnalyzer, ParMap, Summaries, VariableAnalyzer
from core.conditions import ConditionChecker
from core.syntax import Program
from core.vcgen import VCGenerator, VcOutput
from frontend.diagnostics import Diagnostic, DiagnosticCode, error, has_errors, sort_diagnostics
from frontend.legality import LegalityChecker
from frontend.parser import parse
from frontend.renamer import rename_apart
from report.renderers import make_renderer
from utils.logger import setup_logger

logger = setup_logger(__name__)


@dataclass
class PipelineResult:
    """Résultat d'une exécution: code de sortie, diagnostics, lignes de sortie"""

    exit_code: int
    diagnostics: List[Diagnostic] = field(default_factory=list)
    output: List[str] = field(default_factory=list)
    program: Optional[Program] = None
    summaries: Optional[Summaries] = None
    par: Optional[ParMap] = None
    vc_output: Optional[VcOutput] = None


class PipelineRunner:
    """Enchaînement des étapes pour un fichier d'entrée"""

    def __init__(self, config: RunConfig):
        """
        Initialiser le pipeline

        Args:
            config: Configuration de l'exécution
        """
        self.config = config
        self.renderer = make_renderer(config.output_format, config.input_path)

    def read_source(self) -> Tuple[Optional[str], List[Diagnostic]]:
        """Lire le fichier d'entrée (diagnostic IO_ERROR si illisible)"""
        try:
            with open(self.config.input_path, encoding="utf-8") as handle:
                return handle.read(), []
        except (OSError, UnicodeDecodeError) as e:
            logger.error(f"Lecture impossible de {self.config.input_path}: {e}")
            return None, [error(DiagnosticCode.IO_ERROR, None, f"lecture impossible: {e}")]

    def run_frontend(self, source: str) -> Tuple[Optional[Program], List[Diagnostic]]:
        """Parse, légalité et renommage; programme None en cas d'erreur"""
        program, diagnostics = parse(source)
        if program is None or has_errors(diagnostics):
            return None, diagnostics
        diagnostics = LegalityChecker.check_legal(program)
        if has_errors(diagnostics):
            return None, diagnostics
        return rename_apart(program), diagnostics

    def run_analysis(self, program: Program) -> Tuple[Summaries, ParMap]:
        summaries = VariableAnalyzer.proc_summaries(program)
        par = ParallelismAnalyzer.par_map(program)
        logger.info(f"Analyses: {len(program.procedures)} procédure(s), {summaries.iterations} tour(s)")
        return summaries, par

    def run(self) -> PipelineResult:
        """
        Exécuter le pipeline

        Returns:
            PipelineResult (codes 0 propre, 1 diagnostics, 2 frontend/IO, 3 interne)
        """
        try:
            logger.info(f"Analyse de {self.config.input_path}")
            source, diagnostics = self.read_source()
            if source is None:
                return PipelineResult(EXIT_FRONTEND, diagnostics)

            program, diagnostics = self.run_frontend(source)
            if program is None:
                return PipelineResult(EXIT_FRONTEND, sort_diagnostics(diagnostics))

            result = PipelineResult(EXIT_CLEAN, list(diagnostics), program=program)
            result.summaries, result.par = self.run_analysis(program)

            if self.config.dump_analysis:
                result.output += self.renderer.analysis(program, result.summaries, result.par)
            if self.config.classify:
                report = ConditionChecker.classify_vars(program, result.summaries)
                result.output += self.renderer.classification(report)

            if self.config.check or self.config.emit_vcs:
                result.diagnostics += ConditionChecker.check_conditions(program, result.summaries)
                result.diagnostics = sort_diagnostics(result.diagnostics)
                if has_errors(result.diagnostics):
                    result.exit_code = EXIT_DIAGNOSTICS
                elif self.config.emit_vcs:
                    result.vc_output = VCGenerator(program, result.summaries, result.par).program_vcs()
                    result.output += self.renderer.vcs(result.vc_output)

            logger.info(f"Terminé: code {result.exit_code}, {len(result.diagnostics)} diagnostic(s)")
            return result

        except Exception as e:
            logger.error(f"Erreur interne: {e}", exc_info=True)
            return PipelineResult(
                EXIT_INTERNAL,
                [error(DiagnosticCode.INTERNAL_ERROR, None, f"erreur interne: {type(e).__name__}: {e}")],
            )

    def write(self, result: PipelineResult, stdout: TextIO = None, stderr: TextIO = None):
        """Diagnostics sur le flux d'erreur, VCs et analyses sur la sortie"""
        stdout = stdout or sys.stdout
        stderr = stderr or sys.stderr
        for line in self.renderer.diagnostics(result.diagnostics):
            stderr.write(line + "\n")
        if not result.output:
            return
        text = "\n".join(result.output) + "\n"
        if self.config.output_path:
            with open(self.config.output_path, "w", encoding="utf-8") as handle:
                handle.write(text)
        else:
            stdout.write(text)

    def execute(self) -> int:
        result = self.run()
        try:
            self.write(result)
        except OSError as e:
            logger.error(f"Écriture impossible de {self.config.output_path}: {e}")
            sys.stderr.write("\n".join(self.renderer.diagnostics(
                [error(DiagnosticCode.IO_ERROR, None, f"écriture impossible: {e}")])) + "\n")
            return EXIT_FRONTEND
        return result.exit_code
