"""
Renommage des variables liées (formels et `local`)
"""

from dataclasses import replace
from typing import Dict, Set

from core.syntax import (
    Call,
    Command,
    FreshSupply,
    If,
    Local,
    Par,
    Prim,
    ProcDecl,
    Program,
    ResourceDecl,
    Seq,
    Skip,
    VarSet,
    While,
    With,
    fv,
    renaming,
    seq_items,
    seq_of,
    subcommands,
    subst,
)
from utils.logger import setup_logger

logger = setup_logger(__name__)


def global_vars(program: Program) -> VarSet:
    """
    Variables globales: identifiants libres au niveau programme

    Listes de protection, fv des invariants et des initialiseurs, et toute
    variable non liée là où elle apparaît dans une procédure.
    """
    names = VarSet()
    for decl in program.resources:
        names = names | decl.owned | fv(decl.invariant)
        if decl.initializer is not None:
            names = names | fv(decl.initializer)
    for proc in program.procedures:
        names = names | ((fv(proc.spec) | fv(proc.body)) - proc.formals)
    return names


def bound_vars(program: Program) -> VarSet:
    """Tous les noms liés (formels et `local`), déclarations comprises"""
    names = VarSet()
    bodies = [decl.initializer for decl in program.resources if decl.initializer is not None]
    for proc in program.procedures:
        names = names | proc.formals
        bodies.append(proc.body)
    for body in bodies:
        for sub in subcommands(body):
            if isinstance(sub, Local):
                names = names | sub.names
    return names


class Renamer:
    """
    Alpha-renommage: variables liées deux à deux distinctes et distinctes des
    globales; aucune variable de postcondition n'est liée par `local` dans le corps
    """

    def __init__(self, program: Program):
        self.program = program
        self.taken: Set[str] = set(global_vars(program))
        self.supply = FreshSupply(global_vars(program) | bound_vars(program))
        self.renamed = 0

    def bind(self, name: str) -> str:
        """Choisir le nom d'un lieur: conservé s'il est libre, frais sinon"""
        if name in self.taken:
            name = self.supply.fresh(name)
            self.renamed += 1
        self.taken.add(name)
        return name

    def rename_program(self) -> Program:
        resources = tuple(self._rename_resource(decl) for decl in self.program.resources)
        procedures = tuple(self._rename_proc(proc) for proc in self.program.procedures)
        logger.info(f"Renommage: {self.renamed} lieur(s) renommé(s)")
        return replace(self.program, resources=resources, procedures=procedures)

    def _rename_resource(self, decl: ResourceDecl) -> ResourceDecl:
        if decl.initializer is None:
            return decl
        return replace(decl, initializer=self._rename_command(decl.initializer, {}))

    def _rename_proc(self, proc: ProcDecl) -> ProcDecl:
        env: Dict[str, str] = {}
        for name in proc.ref_params + proc.val_params:
            env[name] = self.bind(name)
        return replace(
            proc,
            ref_params=tuple(env[name] for name in proc.ref_params),
            val_params=tuple(env[name] for name in proc.val_params),
            spec=subst(proc.spec, renaming(env)),
            body=self._rename_command(proc.body, env),
        )

    def _rename_call(self, call: Call, env: Dict[str, str]) -> Call:
        return replace(
            call,
            refs=tuple(env.get(name, name) for name in call.refs),
            vals=tuple(subst(val, renaming(env)) for val in call.vals),
        )

    def _rename_command(self, command: Command, env: Dict[str, str]) -> Command:
        mapping = renaming(env)
        if isinstance(command, Skip):
            return command
        if isinstance(command, Prim):
            return replace(command, stmt=subst(command.stmt, mapping))
        if isinstance(command, Seq):
            return seq_of(self._rename_command(item, env) for item in seq_items(command))
        if isinstance(command, If):
            return replace(
                command,
                cond=subst(command.cond, mapping),
                then_branch=self._rename_command(command.then_branch, env),
                else_branch=self._rename_command(command.else_branch, env),
            )
        if isinstance(command, While):
            return replace(
                command,
                invariant=subst(command.invariant, mapping),
                cond=subst(command.cond, mapping),
                body=self._rename_command(command.body, env),
            )
        if isinstance(command, Call):
            return self._rename_call(command, env)
        if isinstance(command, Par):
            return replace(
                command,
                left=self._rename_call(command.left, env),
                right=self._rename_call(command.right, env),
            )
        if isinstance(command, With):
            return replace(
                command,
                guard=subst(command.guard, mapping),
                body=self._rename_command(command.body, env),
            )
        if isinstance(command, Local):
            inner = dict(env)
            for name in command.names:
                inner[name] = self.bind(name)
            return replace(
                command,
                names=tuple(inner[name] for name in command.names),
                body=self._rename_command(command.body, inner),
            )
        raise TypeError(f"commande inconnue: {command!r}")


def rename_apart(program: Program) -> Program:
    """
    Renommer les variables liées d'un programme légal

    Args:
        program: Programme légal

    Returns:
        Variante alpha-équivalente satisfaisant les hypothèses simplificatrices
    """
    return Renamer(program).rename_program()
