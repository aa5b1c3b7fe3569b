"""
Conditions sur les variables: aliasing, concurrence, initialiseurs de ressources,
et rapport de classification des variables
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterable, List, Set

from config.settings import INIT_PROC, MAIN_PROC
from core.analysis import Summaries, VariableAnalyzer
from core.syntax import (
    EMPTY,
    Assign,
    Call,
    Command,
    Local,
    Lookup,
    New,
    Par,
    Prim,
    Program,
    VarSet,
    With,
    calls_in,
    fv,
    fv_all,
    subcommands,
)
from frontend.diagnostics import Diagnostic, DiagnosticCode, error, sort_diagnostics, warning
from utils.logger import setup_logger

logger = setup_logger(__name__)


class VarClass(str, Enum):
    LOCAL = "Local"
    PROCESS_LOCAL = "ProcessLocal"
    GLOBAL_CONSTANT = "GlobalConstant"
    PROTECTED = "Protected"
    PROCESS_PROTECTED = "ProcessProtected"


@dataclass(frozen=True)
class ClassificationReport:
    """Classe et justification de chaque identifiant du programme"""

    classes: Dict[str, VarClass]
    reasons: Dict[str, str]

    def members(self, var_class: VarClass) -> VarSet:
        return VarSet(name for name, cls in self.classes.items() if cls == var_class)


def occurring_identifiers(program: Program) -> VarSet:
    """Tous les identifiants de variable du programme (libres ou liés)"""
    names = EMPTY
    bodies = []
    for decl in program.resources:
        names = names | decl.owned | fv(decl.invariant)
        if decl.initializer is not None:
            bodies.append(decl.initializer)
    for proc in program.procedures:
        names = names | proc.formals | fv(proc.spec)
        bodies.append(proc.body)
    for body in bodies:
        names = names | fv(body)
        for sub in subcommands(body):
            if isinstance(sub, Local):
                names = names | sub.names
    return names


def written_identifiers(program: Program) -> VarSet:
    """Cibles syntaxiques d'affectation, y compris dans les CCR"""
    bodies = [proc.body for proc in program.procedures]
    bodies += [decl.initializer for decl in program.resources if decl.initializer is not None]
    names: Set[str] = set()
    for body in bodies:
        for sub in subcommands(body):
            if isinstance(sub, Prim) and isinstance(sub.stmt, (Assign, Lookup, New)):
                names.add(sub.stmt.target)
            elif isinstance(sub, Call):
                names.update(sub.refs)
    return VarSet(names)


class ConditionChecker:
    """Conditions d'aliasing, de concurrence et d'initialisation"""

    # -- aliasing --------------------------------------------------------

    @staticmethod
    def check_aliasing(program: Program, s: Summaries) -> List[Diagnostic]:
        """
        Paramètres effectifs par référence distincts et disjoints de vars(f)

        Args:
            program: Programme légal et renommé
            s: Résumés vars/mod/req

        Returns:
            Diagnostics ALIAS_DUP_REF / ALIAS_GLOBAL_CONFLICT
        """
        diagnostics = []
        for proc in program.procedures:
            for call in calls_in(proc.body):
                duplicated = sorted({name for name in call.refs if call.refs.count(name) > 1})
                if duplicated:
                    diagnostics.append(error(
                        DiagnosticCode.ALIAS_DUP_REF, call.span,
                        f"paramètres par référence répétés dans l'appel de '{call.proc}': "
                        f"{', '.join(duplicated)}"))
                for name in VarSet(call.refs) & s._lookup(s.vars, call.proc):
                    diagnostics.append(error(
                        DiagnosticCode.ALIAS_GLOBAL_CONFLICT, call.span,
                        f"'{name}' passé par référence à '{call.proc}' qui l'utilise comme globale"))
        return sort_diagnostics(diagnostics)

    # -- concurrence -----------------------------------------------------

    @staticmethod
    def call_mod(call: Call, s: Summaries) -> VarSet:
        return s._lookup(s.mod, call.proc) | call.refs

    @staticmethod
    def call_vars(call: Call, s: Summaries) -> VarSet:
        return s._lookup(s.vars, call.proc) | call.refs | fv_all(call.vals)

    @staticmethod
    def _interference(program: Program, s: Summaries, par: Par,
                      writer: Call, reader: Call) -> List[Diagnostic]:
        reader_spec = program.procedure(reader.proc).spec
        touched = fv(reader_spec) | ConditionChecker.call_vars(reader, s)
        return [
            error(
                DiagnosticCode.CONC_INTERFERENCE, par.span,
                f"'{name}' modifiée par '{writer.proc}' et mentionnée par '{reader.proc}' "
                f"dans une composition parallèle")
            for name in ConditionChecker.call_mod(writer, s) & touched
        ]

    @staticmethod
    def check_concurrency(program: Program, s: Summaries) -> List[Diagnostic]:
        """
        Conditions de concurrence

        req(main) vide (variables protégées seulement dans les CCR), et pour chaque
        f(x;E) || f'(x';E'): mod de chaque branche disjoint de fv(P',Q') union vars
        de l'autre branche, dans les deux sens.

        Args:
            program: Programme légal et renommé
            s: Résumés vars/mod/req

        Returns:
            Diagnostics CONC_REQ_MAIN, CONC_INTERFERENCE, NOTE_NO_MAIN
        """
        diagnostics = []
        main = program.procedure(MAIN_PROC)
        if main is None:
            diagnostics.append(warning(
                DiagnosticCode.NOTE_NO_MAIN, program.span,
                "aucune procédure 'main': vérification de req(main) ignorée"))
        elif s.req[MAIN_PROC]:
            diagnostics.append(error(
                DiagnosticCode.CONC_REQ_MAIN, main.span,
                f"main accède à des variables protégées hors CCR: req(main) = {s.req[MAIN_PROC]!r}"))

        for proc in program.procedures:
            for sub in subcommands(proc.body):
                if isinstance(sub, Par):
                    diagnostics += ConditionChecker._interference(program, s, sub, sub.left, sub.right)
                    diagnostics += ConditionChecker._interference(program, s, sub, sub.right, sub.left)
        return sort_diagnostics(diagnostics)

    # -- initialiseurs ---------------------------------------------------

    @staticmethod
    def _forbidden(command: Command, owner: str) -> List[Diagnostic]:
        diagnostics = []
        par_children = set()
        for sub in subcommands(command):
            if isinstance(sub, Par):
                par_children.update((id(sub.left), id(sub.right)))
                diagnostics.append(error(
                    DiagnosticCode.INIT_FORBIDDEN_CONSTRUCT, sub.span,
                    f"composition parallèle interdite dans '{owner}'"))
            elif isinstance(sub, Call) and id(sub) not in par_children:
                diagnostics.append(error(
                    DiagnosticCode.INIT_FORBIDDEN_CONSTRUCT, sub.span,
                    f"appel de procédure '{sub.proc}' interdit dans '{owner}'"))
            elif isinstance(sub, With):
                diagnostics.append(error(
                    DiagnosticCode.INIT_FORBIDDEN_CONSTRUCT, sub.span,
                    f"région critique interdite dans '{owner}'"))
        return diagnostics

    @staticmethod
    def check_resource_init(program: Program, s: Summaries) -> List[Diagnostic]:
        """
        Contraintes sur init et les initialiseurs C_1..C_n

        Pour chaque i (ordre de déclaration) et chaque j < i:
        mod(C_i) inter vars(C_j) = vide et vars(C_i) inter mod(C_j) = vide.
        Ni init ni les C_i ne contiennent d'appel, de || ou de CCR.

        Args:
            program: Programme légal
            s: Résumés vars/mod/req

        Returns:
            Diagnostics INIT_ORDER_DEP / INIT_FORBIDDEN_CONSTRUCT
        """
        diagnostics = []
        init = program.procedure(INIT_PROC)
        if init is not None:
            diagnostics += ConditionChecker._forbidden(init.body, INIT_PROC)

        earlier = []
        for decl in program.resources:
            if decl.initializer is None:
                continue
            owner = f"initialiseur de {decl.name}"
            diagnostics += ConditionChecker._forbidden(decl.initializer, owner)
            mod_i = VariableAnalyzer.mod_cmd(decl.initializer, s, program)
            vars_i = VariableAnalyzer.vars_cmd(decl.initializer, s, program)
            for previous, mod_j, vars_j in earlier:
                clash = (mod_i & vars_j) | (vars_i & mod_j)
                if clash:
                    diagnostics.append(error(
                        DiagnosticCode.INIT_ORDER_DEP, decl.initializer.span or decl.span,
                        f"l'initialiseur de '{decl.name}' dépend de celui de '{previous.name}' "
                        f"via {clash!r}",
                        [previous.initializer.span or previous.span]))
            earlier.append((decl, mod_i, vars_i))
        return sort_diagnostics(diagnostics)

    @staticmethod
    def check_conditions(program: Program, s: Summaries) -> List[Diagnostic]:
        """Toutes les conditions, fusionnées dans l'ordre code puis position"""
        diagnostics = (
            ConditionChecker.check_aliasing(program, s)
            + ConditionChecker.check_concurrency(program, s)
            + ConditionChecker.check_resource_init(program, s)
        )
        logger.info(f"Conditions: {len(diagnostics)} diagnostic(s)")
        return sort_diagnostics(diagnostics)

    # -- classification --------------------------------------------------

    @staticmethod
    def _call_closure(program: Program, root: str) -> VarSet:
        reached = {root}
        pending = [root]
        while pending:
            proc = program.procedure(pending.pop())
            if proc is None:
                continue
            for call in calls_in(proc.body):
                if call.proc not in reached:
                    reached.add(call.proc)
                    pending.append(call.proc)
        return VarSet(reached)

    @staticmethod
    def _branch_mentions(program: Program, branch: Call) -> VarSet:
        names = VarSet(branch.refs) | fv_all(branch.vals)
        for name in ConditionChecker._call_closure(program, branch.proc):
            proc = program.procedure(name)
            names = names | fv(proc.spec) | fv(proc.body)
        return names

    @staticmethod
    def unconfined(program: Program) -> VarSet:
        """Variables mentionnées par les deux branches d'une même composition parallèle"""
        shared = EMPTY
        for proc in program.procedures:
            for sub in subcommands(proc.body):
                if isinstance(sub, Par):
                    shared = shared | (ConditionChecker._branch_mentions(program, sub.left)
                                       & ConditionChecker._branch_mentions(program, sub.right))
        return shared

    @staticmethod
    def classify_vars(program: Program, s: Summaries) -> ClassificationReport:
        """
        Classer chaque identifiant dans l'une des cinq classes

        Args:
            program: Programme légal et renommé
            s: Résumés vars/mod/req

        Returns:
            ClassificationReport (partition des identifiants du programme)
        """
        classes: Dict[str, VarClass] = {}
        reasons: Dict[str, str] = {}

        def assign(names: Iterable[str], var_class: VarClass, reason: str):
            for name in names:
                if name not in classes:
                    classes[name] = var_class
                    reasons[name] = reason

        everything = occurring_identifiers(program)
        written = written_identifiers(program)

        locals_ = EMPTY
        bodies = [proc.body for proc in program.procedures]
        bodies += [decl.initializer for decl in program.resources if decl.initializer is not None]
        for body in bodies:
            for sub in subcommands(body):
                if isinstance(sub, Local):
                    locals_ = locals_ | sub.names
        value_params = EMPTY.union(*(proc.val_params for proc in program.procedures))
        ref_params = EMPTY.union(*(proc.ref_params for proc in program.procedures))

        assign(locals_, VarClass.LOCAL, "liée par local")
        assign(value_params, VarClass.LOCAL, "paramètre par valeur")
        for decl in program.resources:
            assign(decl.owned, VarClass.PROTECTED, f"protégée par {decl.name}")
        for decl in program.resources:
            for name in fv(decl.invariant):
                if name in written:
                    assign([name], VarClass.PROCESS_PROTECTED, f"dans l'invariant de {decl.name}, modifiée")
                else:
                    assign([name], VarClass.GLOBAL_CONSTANT, f"dans l'invariant de {decl.name}, jamais modifiée")

        assign(ref_params & written, VarClass.PROCESS_LOCAL, "paramètre par référence, modifié")
        assign(ref_params - written, VarClass.GLOBAL_CONSTANT, "paramètre par référence jamais modifié")
        unconfined = ConditionChecker.unconfined(program)
        for name in everything:
            if name not in written:
                assign([name], VarClass.GLOBAL_CONSTANT, "globale jamais modifiée")
            elif name in unconfined:
                assign([name], VarClass.PROCESS_LOCAL, "globale modifiée, non confinée")
            else:
                assign([name], VarClass.PROCESS_LOCAL, "globale modifiée, confinée à un processus")

        logger.info(f"Classification: {len(classes)} identifiant(s)")
        return ClassificationReport(dict(sorted(classes.items())), dict(sorted(reasons.items())))
