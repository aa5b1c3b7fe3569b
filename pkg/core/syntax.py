"""
Syntaxe abstraite: expressions, commandes, assertions (tas symboliques),
déclarations et instructions symboliques, avec variables libres et substitution
"""

from dataclasses import dataclass, field, replace
from typing import Dict, Iterable, List, Optional, Tuple, Union

from config.settings import FRESH_SEPARATOR
from utils.errors import SubstitutionError


@dataclass(frozen=True)
class SourceSpan:
    """Position dans le source: offsets + ligne/colonne (1-based)"""

    start: int
    end: int
    line: int
    column: int

    @property
    def length(self) -> int:
        return self.end - self.start


class VarSet(frozenset):
    """
    Ensemble de noms à itération lexicographique

    Toutes les opérations ensemblistes retournent un VarSet, ce qui garantit
    un ordre d'itération stable partout (sorties déterministes).
    """

    def __iter__(self):
        return iter(sorted(frozenset.__iter__(self)))

    def __repr__(self) -> str:
        return "{" + ",".join(self) + "}"

    def union(self, *others: Iterable[str]) -> "VarSet":
        return VarSet(frozenset.union(self, *others))

    def intersection(self, *others: Iterable[str]) -> "VarSet":
        return VarSet(frozenset.intersection(self, *others))

    def difference(self, *others: Iterable[str]) -> "VarSet":
        return VarSet(frozenset.difference(self, *others))

    def __or__(self, other):
        return self.union(other)

    __ror__ = __or__

    def __and__(self, other):
        return self.intersection(other)

    __rand__ = __and__

    def __sub__(self, other):
        return self.difference(other)

    def __rsub__(self, other):
        return VarSet(frozenset(other).difference(self))


# Ensembles de ressources: même représentation que les ensembles de variables
ResSet = VarSet
EMPTY = VarSet()


def varset(*names: str) -> VarSet:
    return VarSet(names)


@dataclass(frozen=True)
class Node:
    """Nœud de syntaxe; la position n'entre pas dans l'égalité structurelle"""

    span: Optional[SourceSpan] = field(default=None, compare=False, repr=False, kw_only=True)


# ---------------------------------------------------------------------------
# Expressions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Var(Node):
    name: str


@dataclass(frozen=True)
class Nil(Node):
    pass


@dataclass(frozen=True)
class IntConst(Node):
    value: int


@dataclass(frozen=True)
class Xor(Node):
    left: "Expr"
    right: "Expr"


Expr = Union[Var, Nil, IntConst, Xor]


# Conditions booléennes et atomes purs (même représentation)
@dataclass(frozen=True)
class Eq(Node):
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neq(Node):
    left: Expr
    right: Expr


BoolExpr = Union[Eq, Neq]
PureAtom = BoolExpr
PureFormula = Tuple[PureAtom, ...]


def negate(cond: BoolExpr) -> BoolExpr:
    """Négation d'une condition: Eq <-> Neq"""
    if isinstance(cond, Eq):
        return Neq(cond.left, cond.right, span=cond.span)
    return Eq(cond.left, cond.right, span=cond.span)


# ---------------------------------------------------------------------------
# Assertions: tas symboliques
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Emp(Node):
    pass


@dataclass(frozen=True)
class PointsTo(Node):
    addr: Expr
    fields: Tuple[Tuple[str, Expr], ...]


@dataclass(frozen=True)
class PredAtom(Node):
    name: str
    args: Tuple[Expr, ...]


SpatialAtom = Union[Emp, PointsTo, PredAtom]


@dataclass(frozen=True)
class SymbolicHeap(Node):
    """(/\\ pure) /\\ (* spatial)"""

    pure: PureFormula = ()
    spatial: Tuple[SpatialAtom, ...] = (Emp(),)


def true_emp() -> SymbolicHeap:
    return SymbolicHeap((), (Emp(),))


def conjoin(heap: SymbolicHeap, atoms: Iterable[PureAtom]) -> SymbolicHeap:
    """Ajouter des atomes purs en fin de partie pure"""
    return replace(heap, pure=heap.pure + tuple(atoms))


def star(*heaps: SymbolicHeap) -> SymbolicHeap:
    """Étoile: parties pures et spatiales concaténées dans l'ordre"""
    pure: Tuple[PureAtom, ...] = ()
    spatial: Tuple[SpatialAtom, ...] = ()
    for heap in heaps:
        pure += heap.pure
        spatial += heap.spatial
    return SymbolicHeap(pure, spatial or (Emp(),))


@dataclass(frozen=True)
class Spec(Node):
    pre: SymbolicHeap
    post: SymbolicHeap


# ---------------------------------------------------------------------------
# Instructions primitives et commandes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Assign(Node):
    target: str
    expr: Expr


@dataclass(frozen=True)
class Lookup(Node):
    target: str
    expr: Expr
    field_name: str


@dataclass(frozen=True)
class Mutate(Node):
    expr: Expr
    field_name: str
    value: Expr


@dataclass(frozen=True)
class New(Node):
    target: str


@dataclass(frozen=True)
class Dispose(Node):
    expr: Expr


Stmt = Union[Assign, Lookup, Mutate, New, Dispose]


@dataclass(frozen=True)
class Prim(Node):
    stmt: Stmt


@dataclass(frozen=True)
class Skip(Node):
    """Bloc vide"""


@dataclass(frozen=True)
class Seq(Node):
    first: "Command"
    second: "Command"


@dataclass(frozen=True)
class If(Node):
    cond: BoolExpr
    then_branch: "Command"
    else_branch: "Command"


@dataclass(frozen=True)
class While(Node):
    invariant: SymbolicHeap
    cond: BoolExpr
    body: "Command"


@dataclass(frozen=True)
class Call(Node):
    proc: str
    refs: Tuple[str, ...]
    vals: Tuple[Expr, ...]


@dataclass(frozen=True)
class Par(Node):
    left: Call
    right: Call


@dataclass(frozen=True)
class With(Node):
    resource: str
    guard: BoolExpr
    body: "Command"


@dataclass(frozen=True)
class Local(Node):
    names: Tuple[str, ...]
    body: "Command"


Command = Union[Prim, Skip, Seq, If, While, Call, Par, With, Local]


def seq_of(commands: Iterable["Command"]) -> "Command":
    """Séquence imbriquée à droite; séquence vide = Skip"""
    items = list(commands)
    if not items:
        return Skip()
    result = items[-1]
    for command in reversed(items[:-1]):
        result = Seq(command, result)
    return result


def seq_items(command: "Command") -> List["Command"]:
    """
    Composantes d'une séquence, dans l'ordre, sans récursion

    Un bloc est une chaîne de Seq aussi longue que le bloc: les parcours
    l'itèrent au lieu de la descendre récursivement.

    Args:
        command: Commande (une non-Seq donne une liste à un élément)

    Returns:
        Commandes non-Seq de la chaîne
    """
    items = []
    pending = [command]
    while pending:
        node = pending.pop()
        if isinstance(node, Seq):
            pending.append(node.second)
            pending.append(node.first)
        else:
            items.append(node)
    return items


def subcommands(command: "Command") -> Iterable["Command"]:
    """Parcours préfixe de toutes les sous-commandes (command incluse)"""
    pending = [command]
    while pending:
        node = pending.pop()
        yield node
        match node:
            case Seq(first, second):
                pending += [second, first]
            case If(_, then_branch, else_branch):
                pending += [else_branch, then_branch]
            case While(_, _, body) | With(_, _, body) | Local(_, body):
                pending.append(body)
            case Par(left, right):
                pending += [right, left]


def calls_in(command: "Command") -> Iterable[Call]:
    """Tous les appels de procédure, y compris les branches de Par"""
    for sub in subcommands(command):
        if isinstance(sub, Call):
            yield sub


# ---------------------------------------------------------------------------
# Déclarations
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResourceDecl(Node):
    name: str
    owned: Tuple[str, ...]
    invariant: SymbolicHeap
    initializer: Optional["Command"] = None


@dataclass(frozen=True)
class ProcDecl(Node):
    name: str
    ref_params: Tuple[str, ...]
    val_params: Tuple[str, ...]
    spec: Spec
    body: "Command"

    @property
    def formals(self) -> VarSet:
        return VarSet(self.ref_params + self.val_params)


@dataclass(frozen=True)
class Program(Node):
    resources: Tuple[ResourceDecl, ...] = ()
    procedures: Tuple[ProcDecl, ...] = ()

    def resource(self, name: str) -> Optional[ResourceDecl]:
        for decl in self.resources:
            if decl.name == name:
                return decl
        return None

    def procedure(self, name: str) -> Optional[ProcDecl]:
        for decl in self.procedures:
            if decl.name == name:
                return decl
        return None


# ---------------------------------------------------------------------------
# Instructions symboliques (sans boucle)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Assume(Node):
    pure: PureFormula = ()


@dataclass(frozen=True)
class PrimSI(Node):
    stmt: Stmt


@dataclass(frozen=True)
class Jsr(Node):
    mods: VarSet
    pre: SymbolicHeap
    post: SymbolicHeap


@dataclass(frozen=True)
class IfSI(Node):
    cond: BoolExpr
    then_branch: "SymbolicInstr"
    else_branch: "SymbolicInstr"


@dataclass(frozen=True)
class SeqSI(Node):
    first: "SymbolicInstr"
    second: "SymbolicInstr"


SymbolicInstr = Union[Assume, PrimSI, Jsr, IfSI, SeqSI]


def si_items(instr: "SymbolicInstr") -> List["SymbolicInstr"]:
    """Composantes d'une SeqSI, dans l'ordre, sans récursion"""
    items = []
    pending = [instr]
    while pending:
        node = pending.pop()
        if isinstance(node, SeqSI):
            pending.append(node.second)
            pending.append(node.first)
        else:
            items.append(node)
    return items


def seq_si_of(instrs: Iterable["SymbolicInstr"]) -> "SymbolicInstr":
    """SeqSI imbriquée à droite; séquence vide = assume()"""
    items = list(instrs)
    if not items:
        return Assume(())
    result = items[-1]
    for instr in reversed(items[:-1]):
        result = SeqSI(instr, result)
    return result


# ---------------------------------------------------------------------------
# Variables libres
# ---------------------------------------------------------------------------

def fv(node) -> VarSet:
    """
    Variables libres d'un nœud

    Les formels ne sont pas liés ici; seul `local` lie ses variables.

    Args:
        node: Expr, BoolExpr, atome, SymbolicHeap, Stmt, Command ou Spec

    Returns:
        Ensemble des identifiants libres
    """
    match node:
        case Var(name):
            return VarSet((name,))
        case Nil() | IntConst() | Emp() | Skip():
            return EMPTY
        case Xor(left, right) | Eq(left, right) | Neq(left, right):
            return fv(left) | fv(right)
        case PointsTo(addr, fields):
            return fv(addr).union(*(fv(value) for _, value in fields))
        case PredAtom(_, args):
            return EMPTY.union(*(fv(arg) for arg in args))
        case SymbolicHeap(pure, spatial):
            return EMPTY.union(*(fv(atom) for atom in pure + spatial))
        case Spec(pre, post):
            return fv(pre) | fv(post)
        case Assign(target, expr) | Lookup(target, expr, _):
            return fv(expr) | {target}
        case Mutate(expr, _, value):
            return fv(expr) | fv(value)
        case New(target):
            return VarSet((target,))
        case Dispose(expr):
            return fv(expr)
        case Prim(stmt):
            return fv(stmt)
        case Seq():
            return fv_all(seq_items(node))
        case If(cond, then_branch, else_branch):
            return fv(cond) | fv(then_branch) | fv(else_branch)
        case While(invariant, cond, body):
            return fv(invariant) | fv(cond) | fv(body)
        case Call(_, refs, vals):
            return VarSet(refs).union(*(fv(val) for val in vals))
        case Par(left, right):
            return fv(left) | fv(right)
        case With(_, guard, body):
            return fv(guard) | fv(body)
        case Local(names, body):
            return fv(body) - names
    raise TypeError(f"fv: nœud non supporté {type(node).__name__}")


def fv_all(nodes: Iterable) -> VarSet:
    return EMPTY.union(*(fv(node) for node in nodes))


# ---------------------------------------------------------------------------
# Substitution
# ---------------------------------------------------------------------------

def _subst_ident(name: str, mapping: Dict[str, Expr]) -> str:
    """Substitution sur une position qui exige un identifiant"""
    if name not in mapping:
        return name
    target = mapping[name]
    if not isinstance(target, Var):
        raise SubstitutionError(f"impossible de substituer une expression non-variable à '{name}'")
    return target.name


def subst(node, mapping: Dict[str, Expr]):
    """
    Substitution simultanée des variables libres

    Les noms de prédicats et de champs ne sont jamais substitués.

    Args:
        node: Expr, BoolExpr, atome, SymbolicHeap, Spec ou Stmt
        mapping: Identifiant -> expression

    Returns:
        Nœud de même nature
    """
    if not mapping:
        return node
    match node:
        case Var(name):
            return mapping.get(name, node)
        case Nil() | IntConst() | Emp():
            return node
        case Xor(left, right) | Eq(left, right) | Neq(left, right):
            return replace(node, left=subst(left, mapping), right=subst(right, mapping))
        case PointsTo(addr, fields):
            return replace(
                node,
                addr=subst(addr, mapping),
                fields=tuple((name, subst(value, mapping)) for name, value in fields),
            )
        case PredAtom(_, args):
            return replace(node, args=tuple(subst(arg, mapping) for arg in args))
        case SymbolicHeap(pure, spatial):
            return replace(
                node,
                pure=tuple(subst(atom, mapping) for atom in pure),
                spatial=tuple(subst(atom, mapping) for atom in spatial),
            )
        case Spec(pre, post):
            return replace(node, pre=subst(pre, mapping), post=subst(post, mapping))
        case Assign(target, expr):
            return replace(node, target=_subst_ident(target, mapping), expr=subst(expr, mapping))
        case Lookup(target, expr, _):
            return replace(node, target=_subst_ident(target, mapping), expr=subst(expr, mapping))
        case Mutate(expr, _, value):
            return replace(node, expr=subst(expr, mapping), value=subst(value, mapping))
        case New(target):
            return replace(node, target=_subst_ident(target, mapping))
        case Dispose(expr):
            return replace(node, expr=subst(expr, mapping))
    raise SubstitutionError(f"subst: nœud non supporté {type(node).__name__}")


def subst_varset(names: Iterable[str], mapping: Dict[str, str]) -> VarSet:
    """Image d'un ensemble de noms par un renommage (identité hors domaine)"""
    return VarSet(mapping.get(name, name) for name in names)


def renaming(mapping: Dict[str, str]) -> Dict[str, Expr]:
    """Renommage Ident -> Ident vu comme substitution Ident -> Var"""
    return {old: Var(new) for old, new in mapping.items()}


# ---------------------------------------------------------------------------
# Noms frais
# ---------------------------------------------------------------------------

class FreshSupply:
    """
    Générateur monotone de noms frais base'n

    Le parser refuse `'` dans les identifiants: un nom frais ne peut donc pas
    apparaître dans un programme source. Les noms de `avoid` (p. ex. déjà
    produits par un renommage) sont sautés.
    """

    def __init__(self, avoid: Iterable[str] = (), start: int = 0):
        self.avoid = set(avoid)
        self.counter = start

    def fresh(self, base: str) -> str:
        stem = base.split(FRESH_SEPARATOR, 1)[0]
        while True:
            self.counter += 1
            name = f"{stem}{FRESH_SEPARATOR}{self.counter}"
            if name not in self.avoid:
                self.avoid.add(name)
                return name
