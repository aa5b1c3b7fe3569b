"""
Analyses vars / mod / req (plus petit point fixe sur les procédures) et par(f)
"""

from dataclasses import dataclass, replace
from typing import Dict, Iterable, Optional, Set, Tuple

from core.syntax import (
    EMPTY,
    Assign,
    Call,
    Command,
    Dispose,
    If,
    Local,
    Lookup,
    Mutate,
    New,
    Par,
    Prim,
    ProcDecl,
    Program,
    ResSet,
    Seq,
    Skip,
    VarSet,
    While,
    With,
    calls_in,
    fv,
    fv_all,
    seq_items,
    subcommands,
)
from utils.errors import ContractViolation
from utils.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class Summaries:
    """Valeurs par procédure de vars, mod et req, et nombre de tours du point fixe"""

    vars: Dict[str, VarSet]
    mod: Dict[str, VarSet]
    req: Dict[str, ResSet]
    iterations: int = 0

    @staticmethod
    def bottom(program: Program) -> "Summaries":
        names = [proc.name for proc in program.procedures]
        return Summaries(
            {name: EMPTY for name in names},
            {name: EMPTY for name in names},
            {name: EMPTY for name in names},
        )

    def _lookup(self, table: Dict[str, VarSet], proc: str) -> VarSet:
        if proc not in table:
            raise ContractViolation(f"procédure '{proc}' non déclarée")
        return table[proc]


ParMap = Dict[str, VarSet]


class VariableAnalyzer:
    """Équations de vars, mod, req et er"""

    # -- ressources --------------------------------------------------------

    @staticmethod
    def _resource(program: Program, name: str):
        decl = program.resource(name)
        if decl is None:
            raise ContractViolation(f"ressource '{name}' non déclarée")
        return decl

    @staticmethod
    def owned(resources: Iterable[str], program: Program) -> VarSet:
        """owned(r) = union des listes de protection"""
        names = EMPTY
        for name in resources:
            names = names | VariableAnalyzer._resource(program, name).owned
        return names

    @staticmethod
    def vars_of_resources(resources: Iterable[str], program: Program) -> VarSet:
        """vars(r) = owned(r) union fv(R_i)"""
        names = EMPTY
        for name in resources:
            decl = VariableAnalyzer._resource(program, name)
            names = names | decl.owned | fv(decl.invariant)
        return names

    @staticmethod
    def er(modified: Iterable[str], accessed: Iterable[str], program: Program,
           trace: Optional[Set[str]] = None) -> ResSet:
        """
        Ressources à acquérir avant de modifier `modified` et d'accéder à `accessed`

        { r(x)R | A inter x non vide, ou M inter (x union fv(R)) non vide }

        Args:
            modified: Ensemble M
            accessed: Ensemble A
            program: Programme (environnement de ressources)
            trace: Ensemble optionnel recevant les ressources produites

        Returns:
            Ensemble de noms de ressources
        """
        modified = VarSet(modified)
        accessed = VarSet(accessed)
        result = ResSet(
            decl.name
            for decl in program.resources
            if accessed & decl.owned or modified & (VarSet(decl.owned) | fv(decl.invariant))
        )
        if trace is not None:
            trace.update(result)
        return result

    # -- instructions primitives -----------------------------------------

    @staticmethod
    def vars_stmt(stmt) -> VarSet:
        if isinstance(stmt, (Assign, Lookup)):
            return fv(stmt.expr) | {stmt.target}
        if isinstance(stmt, Mutate):
            return fv(stmt.expr) | fv(stmt.value)
        if isinstance(stmt, New):
            return VarSet((stmt.target,))
        if isinstance(stmt, Dispose):
            return fv(stmt.expr)
        raise TypeError(f"instruction inconnue: {stmt!r}")

    @staticmethod
    def mod_stmt(stmt) -> VarSet:
        if isinstance(stmt, (Assign, Lookup, New)):
            return VarSet((stmt.target,))
        return EMPTY

    # -- commandes -------------------------------------------------------

    @staticmethod
    def _call_vars(call: Call, s: Summaries) -> VarSet:
        return s._lookup(s.vars, call.proc) | call.refs | fv_all(call.vals)

    @staticmethod
    def _call_mod(call: Call, s: Summaries) -> VarSet:
        return s._lookup(s.mod, call.proc) | call.refs

    @staticmethod
    def vars_cmd(command: Command, s: Summaries, program: Program) -> VarSet:
        """Variables mentionnées sans protection"""
        vars_cmd = VariableAnalyzer.vars_cmd
        if isinstance(command, Prim):
            return VariableAnalyzer.vars_stmt(command.stmt)
        if isinstance(command, Skip):
            return EMPTY
        if isinstance(command, Seq):
            return EMPTY.union(*(vars_cmd(item, s, program) for item in seq_items(command)))
        if isinstance(command, If):
            return (fv(command.cond)
                    | vars_cmd(command.then_branch, s, program)
                    | vars_cmd(command.else_branch, s, program))
        if isinstance(command, While):
            return fv(command.invariant) | fv(command.cond) | vars_cmd(command.body, s, program)
        if isinstance(command, Call):
            return VariableAnalyzer._call_vars(command, s)
        if isinstance(command, Par):
            return VariableAnalyzer._call_vars(command.left, s) | VariableAnalyzer._call_vars(command.right, s)
        if isinstance(command, With):
            decl = VariableAnalyzer._resource(program, command.resource)
            inner = (fv(command.guard) | vars_cmd(command.body, s, program)) - fv(decl.invariant)
            return inner | (VariableAnalyzer.mod_cmd(command.body, s, program) - decl.owned)
        if isinstance(command, Local):
            return vars_cmd(command.body, s, program) - command.names
        raise TypeError(f"commande inconnue: {command!r}")

    @staticmethod
    def mod_cmd(command: Command, s: Summaries, program: Program) -> VarSet:
        """Variables modifiées sans protection"""
        mod_cmd = VariableAnalyzer.mod_cmd
        if isinstance(command, Prim):
            return VariableAnalyzer.mod_stmt(command.stmt)
        if isinstance(command, Skip):
            return EMPTY
        if isinstance(command, Seq):
            return EMPTY.union(*(mod_cmd(item, s, program) for item in seq_items(command)))
        if isinstance(command, If):
            return mod_cmd(command.then_branch, s, program) | mod_cmd(command.else_branch, s, program)
        if isinstance(command, While):
            return mod_cmd(command.body, s, program)
        if isinstance(command, Call):
            return VariableAnalyzer._call_mod(command, s)
        if isinstance(command, Par):
            return VariableAnalyzer._call_mod(command.left, s) | VariableAnalyzer._call_mod(command.right, s)
        if isinstance(command, With):
            return mod_cmd(command.body, s, program) - VariableAnalyzer.owned([command.resource], program)
        if isinstance(command, Local):
            return mod_cmd(command.body, s, program) - command.names
        raise TypeError(f"commande inconnue: {command!r}")

    @staticmethod
    def _call_req(call: Call, s: Summaries, program: Program, trace: Optional[Set[str]]) -> ResSet:
        return s._lookup(s.req, call.proc) | VariableAnalyzer.er(call.refs, fv_all(call.vals), program, trace)

    @staticmethod
    def req_cmd(command: Command, s: Summaries, program: Program,
                trace: Optional[Set[str]] = None) -> ResSet:
        """Ressources requises avant d'exécuter la commande"""
        er = VariableAnalyzer.er

        def req(sub: Command) -> ResSet:
            return VariableAnalyzer.req_cmd(sub, s, program, trace)

        if isinstance(command, Prim):
            stmt = command.stmt
            return er(VariableAnalyzer.mod_stmt(stmt), VariableAnalyzer.vars_stmt(stmt), program, trace)
        if isinstance(command, Skip):
            return EMPTY
        if isinstance(command, Seq):
            return EMPTY.union(*(req(item) for item in seq_items(command)))
        if isinstance(command, If):
            return (req(command.then_branch) | req(command.else_branch)
                    | er(EMPTY, fv(command.cond), program, trace))
        if isinstance(command, While):
            return req(command.body) | er(EMPTY, fv(command.invariant) | fv(command.cond), program, trace)
        if isinstance(command, Call):
            return VariableAnalyzer._call_req(command, s, program, trace)
        if isinstance(command, Par):
            return (VariableAnalyzer._call_req(command.left, s, program, trace)
                    | VariableAnalyzer._call_req(command.right, s, program, trace))
        if isinstance(command, With):
            VariableAnalyzer._resource(program, command.resource)
            return (req(command.body) | er(EMPTY, fv(command.guard), program, trace)) - {command.resource}
        if isinstance(command, Local):
            return req(command.body)
        raise TypeError(f"commande inconnue: {command!r}")

    # -- procédures ------------------------------------------------------

    @staticmethod
    def proc_equations(proc: ProcDecl, s: Summaries, program: Program,
                       trace: Optional[Set[str]] = None) -> Tuple[VarSet, VarSet, ResSet]:
        """Membres droits des équations de vars(f), mod(f), req(f)"""
        formals = proc.formals
        spec_vars = fv(proc.spec)
        vars_f = (VariableAnalyzer.vars_cmd(proc.body, s, program) | spec_vars) - formals
        mod_f = VariableAnalyzer.mod_cmd(proc.body, s, program) - formals
        req_f = (VariableAnalyzer.req_cmd(proc.body, s, program, trace)
                 | VariableAnalyzer.er(EMPTY, spec_vars - formals, program, trace))
        return vars_f, mod_f, req_f

    @staticmethod
    def proc_summaries(program: Program) -> Summaries:
        """
        Plus petite solution des équations par itération de Kleene

        Itération chaotique: à chaque tour, toutes les procédures dans l'ordre de
        déclaration, avec mise à jour immédiate; arrêt au premier tour stable.

        Args:
            program: Programme légal et renommé

        Returns:
            Résumés par procédure
        """
        table = Summaries.bottom(program)
        rounds = 0
        changed = True
        while changed:
            changed = False
            rounds += 1
            for proc in program.procedures:
                vars_f, mod_f, req_f = VariableAnalyzer.proc_equations(proc, table, program)
                if (vars_f, mod_f, req_f) != (table.vars[proc.name], table.mod[proc.name], table.req[proc.name]):
                    table.vars[proc.name] = vars_f
                    table.mod[proc.name] = mod_f
                    table.req[proc.name] = req_f
                    changed = True
        logger.debug(f"Point fixe vars/mod/req atteint en {rounds} tour(s)")
        return replace(table, iterations=rounds)

    @staticmethod
    def req_witnesses(program: Program, s: Summaries) -> Dict[str, ResSet]:
        """
        Ressources produites par au moins un appel à er dans la dérivation de req(f)

        La dérivation d'un appel inclut celle de l'appelé (clôture sur le graphe d'appel).
        """
        direct: Dict[str, ResSet] = {}
        callees: Dict[str, VarSet] = {}
        for proc in program.procedures:
            trace: Set[str] = set()
            VariableAnalyzer.proc_equations(proc, s, program, trace)
            direct[proc.name] = ResSet(trace)
            callees[proc.name] = VarSet(call.proc for call in calls_in(proc.body))
        witnesses = dict(direct)
        changed = True
        while changed:
            changed = False
            for name in witnesses:
                extended = witnesses[name].union(*(witnesses[callee] for callee in callees[name]))
                if extended != witnesses[name]:
                    witnesses[name] = extended
                    changed = True
        return witnesses


class ParallelismAnalyzer:
    """par(f): procédures pouvant s'exécuter en parallèle avec f"""

    @staticmethod
    def par_map(program: Program) -> ParMap:
        """
        Plus petite solution des deux règles de clôture

        1. f'(..) || f(..) ou f(..) || f'(..) dans le programme: f' dans par(f)
        2. f' appelé (seul ou en parallèle) dans C_f: par(f) inclus dans par(f')

        Args:
            program: Programme légal

        Returns:
            Dictionnaire procédure -> ensemble de procédures
        """
        par: ParMap = {proc.name: EMPTY for proc in program.procedures}
        bodies = [proc.body for proc in program.procedures]
        bodies += [decl.initializer for decl in program.resources if decl.initializer is not None]

        pairs = []
        for body in bodies:
            for sub in subcommands(body):
                if isinstance(sub, Par):
                    pairs.append((sub.left.proc, sub.right.proc))

        def grow(name: str, extra: Iterable[str]) -> bool:
            if name not in par:
                raise ContractViolation(f"procédure '{name}' non déclarée")
            extended = par[name] | VarSet(extra)
            if extended == par[name]:
                return False
            par[name] = extended
            return True

        rounds = 0
        changed = True
        while changed:
            changed = False
            rounds += 1
            for left, right in pairs:
                changed |= grow(left, [right])
                changed |= grow(right, [left])
            for proc in program.procedures:
                for call in calls_in(proc.body):
                    changed |= grow(call.proc, par[proc.name])
        logger.debug(f"Point fixe par(f) atteint en {rounds} tour(s)")
        return par
