"""
Pretty-printer canonique (grammaire du frontend, réanalysable)
"""

from typing import List

from core.syntax import (
    Assign,
    Assume,
    Call,
    Command,
    Dispose,
    Emp,
    Eq,
    If,
    IfSI,
    IntConst,
    Jsr,
    Local,
    Lookup,
    Mutate,
    New,
    Nil,
    Par,
    PointsTo,
    PredAtom,
    Prim,
    PrimSI,
    ProcDecl,
    Program,
    ResourceDecl,
    Seq,
    SeqSI,
    Skip,
    SymbolicHeap,
    SymbolicInstr,
    Var,
    While,
    With,
    Xor,
    seq_items,
    si_items,
)

INDENT = "  "


def expr_str(expr) -> str:
    """Expression; `^` associatif à gauche, parenthèses pour un Xor à droite"""
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, Nil):
        return "nil"
    if isinstance(expr, IntConst):
        return str(expr.value)
    if isinstance(expr, Xor):
        right = expr_str(expr.right)
        if isinstance(expr.right, Xor):
            right = f"({right})"
        return f"{expr_str(expr.left)} ^ {right}"
    raise TypeError(f"expression inconnue: {expr!r}")


def bexpr_str(cond) -> str:
    op = "==" if isinstance(cond, Eq) else "!="
    return f"{expr_str(cond.left)} {op} {expr_str(cond.right)}"


def pure_str(pure) -> str:
    if not pure:
        return "true"
    return " && ".join(bexpr_str(atom) for atom in pure)


def spatial_atom_str(atom) -> str:
    if isinstance(atom, Emp):
        return "emp"
    if isinstance(atom, PointsTo):
        fields = ", ".join(f"{name}: {expr_str(value)}" for name, value in atom.fields)
        return f"{expr_str(atom.addr)}|->[{fields}]"
    if isinstance(atom, PredAtom):
        return f"{atom.name}({', '.join(expr_str(arg) for arg in atom.args)})"
    raise TypeError(f"atome spatial inconnu: {atom!r}")


def heap_str(heap: SymbolicHeap) -> str:
    spatial = " * ".join(spatial_atom_str(atom) for atom in heap.spatial) or "emp"
    if not heap.pure:
        return spatial
    return f"{pure_str(heap.pure)}; {spatial}"


def stmt_str(stmt) -> str:
    if isinstance(stmt, Assign):
        return f"{stmt.target} = {expr_str(stmt.expr)};"
    if isinstance(stmt, Lookup):
        return f"{stmt.target} = {expr_str(stmt.expr)}->{stmt.field_name};"
    if isinstance(stmt, Mutate):
        return f"{expr_str(stmt.expr)}->{stmt.field_name} = {expr_str(stmt.value)};"
    if isinstance(stmt, New):
        return f"{stmt.target} = new();"
    if isinstance(stmt, Dispose):
        return f"dispose({expr_str(stmt.expr)});"
    raise TypeError(f"instruction inconnue: {stmt!r}")


def call_str(call: Call) -> str:
    refs = ", ".join(call.refs)
    vals = ", ".join(expr_str(val) for val in call.vals)
    return f"{call.proc}({refs}; {vals})" if vals else f"{call.proc}({refs};)"


def block_lines(command: Command, depth: int) -> List[str]:
    """Corps de bloc `{ ... }` (accolades exclues), une commande par ligne"""
    pad = INDENT * depth
    if isinstance(command, Skip):
        return []
    if isinstance(command, Seq):
        return [line for item in seq_items(command) for line in block_lines(item, depth)]
    if isinstance(command, Local):
        return [f"{pad}local {', '.join(command.names)};"] + block_lines(command.body, depth)
    if isinstance(command, Prim):
        return [pad + stmt_str(command.stmt)]
    if isinstance(command, Call):
        return [f"{pad}{call_str(command)};"]
    if isinstance(command, Par):
        return [f"{pad}{call_str(command.left)} || {call_str(command.right)};"]
    if isinstance(command, If):
        return (
            [f"{pad}if ({bexpr_str(command.cond)}) {{"]
            + block_lines(command.then_branch, depth + 1)
            + [f"{pad}}} else {{"]
            + block_lines(command.else_branch, depth + 1)
            + [f"{pad}}}"]
        )
    if isinstance(command, While):
        return (
            [f"{pad}while ({bexpr_str(command.cond)}) [{heap_str(command.invariant)}] {{"]
            + block_lines(command.body, depth + 1)
            + [f"{pad}}}"]
        )
    if isinstance(command, With):
        return (
            [f"{pad}with {command.resource} when ({bexpr_str(command.guard)}) {{"]
            + block_lines(command.body, depth + 1)
            + [f"{pad}}}"]
        )
    raise TypeError(f"commande inconnue: {command!r}")


def block_str(command: Command, depth: int = 0) -> str:
    lines = block_lines(command, depth + 1)
    if not lines:
        return "{ }"
    return "{\n" + "\n".join(lines) + "\n" + INDENT * depth + "}"


def resource_str(decl: ResourceDecl) -> str:
    text = f"resource {decl.name}({', '.join(decl.owned)}) [{heap_str(decl.invariant)}]"
    if decl.initializer is not None:
        text += " " + block_str(decl.initializer)
    return text


def proc_str(decl: ProcDecl) -> str:
    params = f"{', '.join(decl.ref_params)}; {', '.join(decl.val_params)}".strip()
    return (
        f"{decl.name}({params}) [{heap_str(decl.spec.pre)}] "
        f"{block_str(decl.body)} [{heap_str(decl.spec.post)}]"
    )


def program_str(program: Program) -> str:
    parts = [resource_str(decl) for decl in program.resources]
    parts += [proc_str(decl) for decl in program.procedures]
    return "\n\n".join(parts) + "\n"


def si_lines(instr: SymbolicInstr, depth: int = 0) -> List[str]:
    """Instruction symbolique, une instruction par ligne"""
    pad = INDENT * depth
    if isinstance(instr, Assume):
        return [f"{pad}assume({pure_str(instr.pure)})"]
    if isinstance(instr, PrimSI):
        return [pad + stmt_str(instr.stmt)]
    if isinstance(instr, Jsr):
        return [f"{pad}jsr[{','.join(instr.mods)}] {{{heap_str(instr.pre)}}} {{{heap_str(instr.post)}}}"]
    if isinstance(instr, SeqSI):
        return [line for item in si_items(instr) for line in si_lines(item, depth)]
    if isinstance(instr, IfSI):
        return (
            [f"{pad}if ({bexpr_str(instr.cond)}) {{"]
            + si_lines(instr.then_branch, depth + 1)
            + [f"{pad}}} else {{"]
            + si_lines(instr.else_branch, depth + 1)
            + [f"{pad}}}"]
        )
    raise TypeError(f"instruction symbolique inconnue: {instr!r}")

