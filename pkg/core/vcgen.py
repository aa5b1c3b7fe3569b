"""
Génération des conditions de vérification: chop / vcg, instrumentation des CCR
et obligations d'initialisation
"""

from dataclasses import dataclass, replace
from typing import List, Optional, Tuple

from config.settings import INIT_CONTEXT, INIT_PROC, MAIN_PROC, OBLIGATION_ID
from core.analysis import ParMap, Summaries, VariableAnalyzer
from core.conditions import occurring_identifiers
from core.syntax import (
    EMPTY,
    Assume,
    Call,
    Command,
    Emp,
    Eq,
    FreshSupply,
    If,
    IfSI,
    Jsr,
    Local,
    Par,
    Prim,
    PrimSI,
    Program,
    Seq,
    SeqSI,
    Skip,
    SourceSpan,
    Spec,
    SymbolicHeap,
    SymbolicInstr,
    Var,
    VarSet,
    While,
    With,
    conjoin,
    fv,
    negate,
    seq_items,
    seq_of,
    seq_si_of,
    star,
    subst,
    subst_varset,
    true_emp,
)
from utils.errors import ContractViolation
from utils.logger import setup_logger

logger = setup_logger(__name__)


@dataclass(frozen=True)
class VC:
    """Triplet {pre} SI {post} sur instructions sans boucle"""

    id: str
    pre: SymbolicHeap
    body: SymbolicInstr
    post: SymbolicHeap
    origin: Optional[SourceSpan] = None


@dataclass(frozen=True)
class Obligation:
    """Implication lhs |- rhs, émise et jamais déchargée"""

    id: str
    lhs: SymbolicHeap
    rhs: SymbolicHeap
    origin: Optional[SourceSpan] = None


@dataclass(frozen=True)
class VcOutput:
    vcs: Tuple[VC, ...]
    obligations: Tuple[Obligation, ...]
    fresh_counter_final: int
    main_pre_replaced: bool = False


class VCGenerator:
    """
    Découpage des corps de procédure en VCs

    Un seul FreshSupply partagé par toute la génération: les noms frais sont deux
    à deux distincts sur l'ensemble de la sortie.
    """

    def __init__(self, program: Program, summaries: Summaries, par: ParMap,
                 supply: Optional[FreshSupply] = None):
        self.program = program
        self.summaries = summaries
        self.par = par
        self.supply = supply or FreshSupply(occurring_identifiers(program))

    # -- chop ------------------------------------------------------------

    def chop(self, g: str, command: Command) -> Tuple[SymbolicInstr, List[VC]]:
        """
        Instruction symbolique de `command` et VCs des boucles internes

        Args:
            g: Procédure englobante (contexte de par)
            command: Commande à découper

        Returns:
            (SI, VCs sans identifiant, dans l'ordre du corps)
        """
        if isinstance(command, Prim):
            return PrimSI(command.stmt, span=command.span), []
        if isinstance(command, Skip):
            return Assume((), span=command.span), []
        if isinstance(command, Seq):
            instrs, vcs = [], []
            for item in seq_items(command):
                instr, item_vcs = self.chop(g, item)
                instrs.append(instr)
                vcs += item_vcs
            return seq_si_of(instrs), vcs
        if isinstance(command, If):
            then_si, then_vcs = self.chop(g, command.then_branch)
            else_si, else_vcs = self.chop(g, command.else_branch)
            return IfSI(command.cond, then_si, else_si, span=command.span), then_vcs + else_vcs
        if isinstance(command, While):
            return self._chop_while(g, command)
        if isinstance(command, Call):
            init, body = self._call_jsrs(command)
            return SeqSI(init, body, span=command.span), []
        if isinstance(command, Par):
            return self._chop_par(g, command), []
        if isinstance(command, With):
            return self._chop_with(g, command)
        if isinstance(command, Local):
            return self.chop(g, command.body)
        raise TypeError(f"commande inconnue: {command!r}")

    def _chop_while(self, g: str, loop: While) -> Tuple[SymbolicInstr, List[VC]]:
        body_si, inner = self.chop(g, loop.body)
        invariant = loop.invariant
        body_vc = VC("", conjoin(invariant, [loop.cond]), body_si, invariant, loop.span)
        mods = VariableAnalyzer.mod_cmd(loop.body, self.summaries, self.program)
        jsr = Jsr(mods, invariant, conjoin(invariant, [negate(loop.cond)]), span=loop.span)
        return jsr, [body_vc] + inner

    def _call_jsrs(self, call: Call) -> Tuple[Jsr, Jsr]:
        callee = self.program.procedure(call.proc)
        if callee is None:
            raise ContractViolation(f"procédure '{call.proc}' non déclarée")
        fresh = [self.supply.fresh(name) for name in callee.val_params]
        names = dict(zip(callee.ref_params, call.refs))
        names.update(zip(callee.val_params, fresh))
        sigma = {old: Var(new) for old, new in names.items()}

        bindings = tuple(Eq(Var(new), value) for new, value in zip(fresh, call.vals))
        init = Jsr(EMPTY, true_emp(), SymbolicHeap(bindings, (Emp(),)), span=call.span)
        mods = subst_varset(VariableAnalyzer.mod_cmd(callee.body, self.summaries, self.program), names)
        body = Jsr(mods, subst(callee.spec.pre, sigma), subst(callee.spec.post, sigma), span=call.span)
        return init, body

    def _chop_par(self, g: str, par: Par) -> SymbolicInstr:
        halves = []
        for call in (par.left, par.right):
            match self.chop(g, call):
                case (SeqSI(Jsr() as init, Jsr() as body), []):
                    halves.append((init, body))
                case other:
                    raise ContractViolation(f"forme inattendue pour un appel parallèle: {other!r}")
        (left_init, left_body), (right_init, right_body) = halves
        init = Jsr(
            EMPTY,
            true_emp(),
            SymbolicHeap(left_init.post.pure + right_init.post.pure, (Emp(),)),
            span=par.span,
        )
        body = Jsr(
            left_body.mods | right_body.mods,
            star(left_body.pre, right_body.pre),
            star(left_body.post, right_body.post),
            span=par.span,
        )
        return SeqSI(init, body, span=par.span)

    def interfering(self, g: str, resource: str) -> VarSet:
        """u = fv(R) inter union des mod(f) pour f dans par(g)"""
        decl = self.program.resource(resource)
        if decl is None:
            raise ContractViolation(f"ressource '{resource}' non déclarée")
        modified = EMPTY.union(*(self.summaries.mod[f] for f in self.par.get(g, EMPTY)))
        return fv(decl.invariant) & modified

    def _chop_with(self, g: str, region: With) -> Tuple[SymbolicInstr, List[VC]]:
        decl = self.program.resource(region.resource)
        if decl is None:
            raise ContractViolation(f"ressource '{region.resource}' non déclarée")
        body_si, inner = self.chop(g, region.body)
        invariant = decl.invariant
        entry = Jsr(EMPTY, true_emp(), conjoin(invariant, [region.guard]), span=region.span)
        exit_mods = VarSet(decl.owned) | self.interfering(g, region.resource)
        exit_jsr = Jsr(exit_mods, invariant, true_emp(), span=region.span)
        return SeqSI(entry, SeqSI(body_si, exit_jsr), span=region.span), inner

    # -- vcg -------------------------------------------------------------

    def vcg(self, g: str, spec: Spec, command: Command,
            origin: Optional[SourceSpan] = None) -> List[VC]:
        """
        VCs d'une procédure: {pre} SI {post} suivie des VCs des boucles

        Args:
            g: Contexte (nom de procédure ou contexte d'initialisation)
            spec: Pré et postcondition
            command: Corps
            origin: Position de la déclaration

        Returns:
            VCs identifiées `<g>#<n>`
        """
        body_si, inner = self.chop(g, command)
        vcs = [VC("", spec.pre, body_si, spec.post, origin)] + inner
        return [replace(vc, id=f"{g}#{index}") for index, vc in enumerate(vcs)]

    # -- programme -------------------------------------------------------

    def program_vcs(self) -> VcOutput:
        """
        Ensemble complet des VCs et obligations du programme

        VC d'initialisation d'abord (contexte `<init>`), puis les procédures
        hors init dans l'ordre de déclaration. Si init est déclarée, la
        précondition de main est remplacée par la postcondition de init.

        Returns:
            VcOutput déterministe
        """
        program = self.program
        init = program.procedure(INIT_PROC)
        main = program.procedure(MAIN_PROC)
        invariants = [decl.invariant for decl in program.resources]

        if init is not None:
            init_pre, init_body, init_post = init.spec.pre, init.body, init.spec.post
            init_origin = init.span
        else:
            init_pre, init_post = true_emp(), true_emp()
            init_body = seq_of(decl.initializer for decl in program.resources if decl.initializer is not None)
            init_origin = program.span
        vcs = self.vcg(INIT_CONTEXT, Spec(init_pre, star(init_post, *invariants)), init_body, init_origin)

        replaced = init is not None and main is not None
        for proc in program.procedures:
            if proc.name == INIT_PROC:
                continue
            spec = proc.spec
            if replaced and proc.name == MAIN_PROC:
                spec = replace(spec, pre=init.spec.post)
            vcs += self.vcg(proc.name, spec, proc.body, proc.span)

        obligations = []
        if replaced:
            obligations.append(Obligation(
                OBLIGATION_ID,
                init.spec.post,
                star(*invariants, main.spec.pre),
                main.span,
            ))

        logger.info(f"VCGen: {len(vcs)} VC(s), {len(obligations)} obligation(s), "
                    f"{self.supply.counter} nom(s) frais")
        return VcOutput(tuple(vcs), tuple(obligations), self.supply.counter, replaced)


def program_vcs(program: Program, summaries: Summaries, par: ParMap) -> VcOutput:
    return VCGenerator(program, summaries, par).program_vcs()
