"""
Contraintes de légalité des programmes annotés
"""

from collections import Counter
from typing import Iterable, List

from core.syntax import (
    Call,
    Local,
    PointsTo,
    Program,
    SymbolicHeap,
    While,
    With,
    fv,
    subcommands,
)
from config.settings import INIT_PROC, MAIN_PROC
from frontend.diagnostics import Diagnostic, DiagnosticCode, error, sort_diagnostics
from utils.logger import setup_logger

logger = setup_logger(__name__)


def _duplicates(names: Iterable[str]) -> List[str]:
    counts = Counter(names)
    return sorted(name for name, count in counts.items() if count > 1)


class LegalityChecker:
    """Vérification groupée de toutes les contraintes (aucun arrêt au premier échec)"""

    @staticmethod
    def check_legal(program: Program) -> List[Diagnostic]:
        """
        Vérifier la légalité d'un programme

        (a) appels et régions: procédure/ressource déclarée
        (b) formels distincts
        (c) ressources distinctes
        (d) listes de protection deux à deux disjointes
        (e) fv(R_i) disjoint des variables protégées par r_j, i != j

        Args:
            program: Programme analysé

        Returns:
            Liste de diagnostics (vide ssi programme légal)
        """
        diagnostics: List[Diagnostic] = []
        diagnostics += LegalityChecker._check_declarations(program)
        diagnostics += LegalityChecker._check_resources(program)
        diagnostics += LegalityChecker._check_bodies(program)
        logger.info(f"Légalité: {len(diagnostics)} violation(s)")
        return sort_diagnostics(diagnostics)

    @staticmethod
    def _check_declarations(program: Program) -> List[Diagnostic]:
        diagnostics = []
        seen_procs = set()
        for proc in program.procedures:
            if proc.name in seen_procs:
                diagnostics.append(error(
                    DiagnosticCode.LEGAL_DUP_PROC, proc.span,
                    f"procédure '{proc.name}' déclarée plusieurs fois"))
            seen_procs.add(proc.name)

            for name in _duplicates(proc.ref_params + proc.val_params):
                diagnostics.append(error(
                    DiagnosticCode.LEGAL_DUP_FORMALS, proc.span,
                    f"paramètre formel '{name}' répété dans '{proc.name}'"))

            if proc.name in (INIT_PROC, MAIN_PROC) and (proc.ref_params or proc.val_params):
                diagnostics.append(error(
                    DiagnosticCode.LEGAL_INIT_MAIN_PARAMS, proc.span,
                    f"'{proc.name}' ne doit pas avoir de paramètres"))
        return diagnostics

    @staticmethod
    def _check_resources(program: Program) -> List[Diagnostic]:
        diagnostics = []
        seen = {}
        for decl in program.resources:
            if decl.name in seen:
                diagnostics.append(error(
                    DiagnosticCode.LEGAL_DUP_RESOURCE, decl.span,
                    f"ressource '{decl.name}' déclarée plusieurs fois", [seen[decl.name].span]))
            else:
                seen[decl.name] = decl
            for name in _duplicates(decl.owned):
                diagnostics.append(error(
                    DiagnosticCode.LEGAL_DUP_OWNED, decl.span,
                    f"variable '{name}' répétée dans la liste de protection de '{decl.name}'"))

        resources = program.resources
        for i, first in enumerate(resources):
            for j, second in enumerate(resources):
                if i == j:
                    continue
                if i < j:
                    for name in sorted(set(first.owned) & set(second.owned)):
                        diagnostics.append(error(
                            DiagnosticCode.LEGAL_OVERLAP_OWNED, second.span,
                            f"variable '{name}' protégée à la fois par '{first.name}' et '{second.name}'",
                            [first.span]))
                for name in fv(first.invariant) & set(second.owned):
                    diagnostics.append(error(
                        DiagnosticCode.LEGAL_INV_MENTIONS_FOREIGN_OWNED, first.span,
                        f"l'invariant de '{first.name}' mentionne '{name}', protégée par '{second.name}'",
                        [second.span]))
        return diagnostics

    @staticmethod
    def _check_heap(heap: SymbolicHeap) -> List[Diagnostic]:
        diagnostics = []
        for atom in heap.spatial:
            if isinstance(atom, PointsTo):
                for name in _duplicates(field for field, _ in atom.fields):
                    diagnostics.append(error(
                        DiagnosticCode.LEGAL_DUP_FIELD, atom.span or heap.span,
                        f"champ '{name}' répété dans une cellule"))
        return diagnostics

    @staticmethod
    def _check_bodies(program: Program) -> List[Diagnostic]:
        diagnostics = []
        for decl in program.resources:
            diagnostics += LegalityChecker._check_heap(decl.invariant)

        bodies = [(proc.name, proc.body) for proc in program.procedures]
        bodies += [(decl.name, decl.initializer) for decl in program.resources if decl.initializer is not None]
        for proc in program.procedures:
            diagnostics += LegalityChecker._check_heap(proc.spec.pre)
            diagnostics += LegalityChecker._check_heap(proc.spec.post)

        for owner, body in bodies:
            for sub in subcommands(body):
                if isinstance(sub, Call):
                    diagnostics += LegalityChecker._check_call(program, sub)
                elif isinstance(sub, With) and program.resource(sub.resource) is None:
                    diagnostics.append(error(
                        DiagnosticCode.LEGAL_UNDECLARED_RESOURCE, sub.span,
                        f"ressource '{sub.resource}' non déclarée (dans '{owner}')"))
                elif isinstance(sub, Local):
                    for name in _duplicates(sub.names):
                        diagnostics.append(error(
                            DiagnosticCode.LEGAL_DUP_LOCAL, sub.span,
                            f"variable locale '{name}' répétée"))
                elif isinstance(sub, While):
                    diagnostics += LegalityChecker._check_heap(sub.invariant)
        return diagnostics

    @staticmethod
    def _check_call(program: Program, call: Call) -> List[Diagnostic]:
        callee = program.procedure(call.proc)
        if callee is None:
            return [error(
                DiagnosticCode.LEGAL_UNDECLARED_PROC, call.span,
                f"procédure '{call.proc}' non déclarée")]
        if len(call.refs) != len(callee.ref_params) or len(call.vals) != len(callee.val_params):
            return [error(
                DiagnosticCode.LEGAL_ARITY, call.span,
                f"appel de '{call.proc}' avec {len(call.refs)};{len(call.vals)} arguments, "
                f"{len(callee.ref_params)};{len(callee.val_params)} attendus",
                [callee.span])]
        return []
