import pytest
from conftest import prepare

from core.conditions import occurring_identifiers
from core.syntax import (
    EMPTY,
    Assign,
    Assume,
    Call,
    Emp,
    Eq,
    IfSI,
    IntConst,
    Jsr,
    Nil,
    Neq,
    Par,
    PointsTo,
    PredAtom,
    PrimSI,
    SeqSI,
    SymbolicHeap,
    Var,
    While,
    conjoin,
    fv,
    star,
    subcommands,
    true_emp,
    varset,
)
from core.vcgen import VCGenerator, program_vcs
from utils.errors import ContractViolation


def generate(source: str):
    program, summaries, par = prepare(source)
    return program, program_vcs(program, summaries, par)


def leaves(instr):
    """Feuilles d'une instruction symbolique, dans l'ordre"""
    if isinstance(instr, SeqSI):
        return leaves(instr.first) + leaves(instr.second)
    if isinstance(instr, IfSI):
        return leaves(instr.then_branch) + leaves(instr.else_branch)
    return [instr]


def vc_by_id(output, vc_id):
    (vc,) = [vc for vc in output.vcs if vc.id == vc_id]
    return vc


def heap(*spatial, pure=()):
    return SymbolicHeap(tuple(pure), tuple(spatial))


EMP = heap(Emp())


def test_vc_count_matches_loops_and_procedures(corpus_file):
    program, output = generate(corpus_file.read_text(encoding="utf-8"))
    loops = sum(
        isinstance(sub, While)
        for proc in program.procedures if proc.name != "init"
        for sub in subcommands(proc.body)
    )
    procs = [proc for proc in program.procedures if proc.name != "init"]
    assert len(output.vcs) == 1 + len(procs) + loops
    assert output.vcs[0].id == "<init>#0"


def test_call_with_refs_and_values(corpus_source):
    _, output = generate(corpus_source("call_refs"))
    main = vc_by_id(output, "main#0")
    steps = leaves(main.body)
    assert steps[:2] == [PrimSI(Assign("x", IntConst(0))), PrimSI(Assign("y", IntConst(1)))]

    swap_init, swap_body = steps[2], steps[3]
    assert swap_init == Jsr(EMPTY, true_emp(), EMP)
    assert swap_body.mods == {"x", "y"}
    assert swap_body.pre == heap(Emp(), pure=[Eq(Var("x"), IntConst(0))])
    assert swap_body.post == heap(Emp(), pure=[Eq(Var("y"), IntConst(0))])

    store_init, store_body = steps[5], steps[6]
    assert store_init.post == heap(Emp(), pure=[Eq(Var("v'1"), IntConst(3))])
    assert store_body.mods == EMPTY
    assert store_body.pre == heap(PointsTo(Var("z"), (("t", Var("v'1")),)))
    assert output.fresh_counter_final == 1


def test_call_by_value_gets_fresh_copy(corpus_source):
    _, output = generate(corpus_source("list_dispose"))
    init, body = [step for step in leaves(vc_by_id(output, "main#0").body) if isinstance(step, Jsr)]
    assert init.post.pure == (Eq(Var("l'1"), Var("a")),)
    assert body.mods == {"l'1"}
    assert body.pre == heap(PredAtom("list", (Var("l'1"),)))
    assert body.post == EMP


def test_recursive_calls_draw_distinct_names(corpus_source):
    _, output = generate(corpus_source("recursion"))
    bindings = [
        atom
        for vc in output.vcs
        for step in leaves(vc.body)
        if isinstance(step, Jsr) and step.mods == EMPTY
        for atom in step.post.pure
    ]
    assert bindings == [
        Eq(Var("t'1"), Var("l")),
        Eq(Var("t'2"), Var("r")),
        Eq(Var("t'3"), Var("root")),
    ]
    assert output.fresh_counter_final == 3


def test_every_call_starts_with_binding_jsr(corpus_file):
    program, summaries, par = prepare(corpus_file.read_text(encoding="utf-8"))
    occurring = occurring_identifiers(program)
    for proc in program.procedures:
        generator = VCGenerator(program, summaries, par)
        for sub in subcommands(proc.body):
            if not isinstance(sub, (Call, Par)):
                continue
            instr, vcs = generator.chop(proc.name, sub)
            assert vcs == []
            assert isinstance(instr, SeqSI)
            init = instr.first
            assert init.mods == EMPTY
            assert init.pre == true_emp()
            assert init.post.spatial == (Emp(),)
            for atom in init.post.pure:
                assert atom.left.name not in occurring


def test_call_pre_mentions_only_actuals_and_fresh_names(corpus_file):
    program, summaries, par = prepare(corpus_file.read_text(encoding="utf-8"))
    generator = VCGenerator(program, summaries, par)
    for proc in program.procedures:
        for sub in subcommands(proc.body):
            if isinstance(sub, Call):
                calls = [sub]
            elif isinstance(sub, Par):
                calls = [sub.left, sub.right]
            else:
                continue
            instr, _ = generator.chop(proc.name, sub)
            allowed = {atom.left.name for atom in instr.first.post.pure}
            for call in calls:
                callee = program.procedure(call.proc)
                allowed |= (set(fv(callee.spec.pre)) - set(callee.formals)) | set(call.refs)
            assert set(fv(instr.second.pre)) <= allowed, (proc.name, call.proc)


def test_parallel_call_merges_both_branches(corpus_source):
    _, output = generate(corpus_source("ccr_buffer"))
    init, body = leaves(vc_by_id(output, "main#0").body)[1:]
    assert init.post.pure == (Eq(Var("x'1"), Var("p")),)
    assert body.mods == {"q"}
    assert body.pre == star(heap(PointsTo(Var("x'1"), (("d", IntConst(0)),))), EMP)
    assert body.post == star(EMP, heap(PointsTo(Var("q"), (("d", IntConst(0)),))))


def test_ccr_exit_havocs_owned_and_interfered_variables(corpus_source):
    _, output = generate(corpus_source("ccr_interference"))
    entry, assign, exit_jsr = leaves(vc_by_id(output, "g#0").body)
    invariant = heap(Emp(), pure=[Eq(Var("x"), Var("y"))])
    assert entry == Jsr(EMPTY, true_emp(), conjoin(invariant, [Eq(Var("x"), Var("x"))]))
    assert assign == PrimSI(Assign("x", IntConst(1)))
    assert exit_jsr == Jsr(varset("x", "y"), invariant, true_emp())


def test_ccr_exit_without_interference(corpus_source):
    _, output = generate(corpus_source("ccr_buffer"))
    exit_jsr = leaves(vc_by_id(output, "put#0").body)[-1]
    assert exit_jsr.mods == {"c", "full"}


def test_while_loop_vcs(corpus_source):
    _, output = generate(corpus_source("list_dispose"))
    invariant = heap(PredAtom("list", (Var("l"),)))
    (jsr,) = leaves(vc_by_id(output, "dispose_list#0").body)
    assert jsr == Jsr(varset("l", "t"), invariant, conjoin(invariant, [Eq(Var("l"), Nil())]))

    loop = vc_by_id(output, "dispose_list#1")
    assert loop.pre == conjoin(invariant, [Neq(Var("l"), Nil())])
    assert loop.post == invariant
    assert len(leaves(loop.body)) == 3


def test_init_post_replaces_main_pre(corpus_source):
    _, output = generate(corpus_source("init_main"))
    assert [vc.id for vc in output.vcs] == ["<init>#0", "incr#0", "main#0"]
    init_post = heap(Emp(), pure=[Eq(Var("n"), IntConst(0))])

    init_vc = output.vcs[0]
    assert init_vc.pre == EMP
    assert init_vc.post == star(init_post, EMP)
    assert vc_by_id(output, "main#0").pre == init_post

    assert output.main_pre_replaced
    (obligation,) = output.obligations
    assert obligation.id == "init-main"
    assert obligation.lhs == init_post
    assert obligation.rhs == star(EMP, EMP)


def test_initializers_sequenced_when_no_init(corpus_source):
    _, output = generate(corpus_source("two_resources"))
    init_vc = output.vcs[0]
    assert leaves(init_vc.body) == [PrimSI(Assign("x", IntConst(0))), PrimSI(Assign("y", IntConst(1)))]
    assert init_vc.pre == true_emp()
    assert init_vc.post == star(true_emp(), EMP, EMP)
    assert output.obligations == ()
    assert not output.main_pre_replaced


def test_empty_program_yields_trivial_init_vc():
    _, output = generate("")
    (vc,) = output.vcs
    assert vc.id == "<init>#0"
    assert vc.body == Assume(())
    assert output.fresh_counter_final == 0


def test_empty_body_is_assume():
    _, output = generate("f() [emp] { } [emp]")
    assert vc_by_id(output, "f#0").body == Assume(())


def test_fresh_names_are_globally_distinct(corpus_file):
    program, output = generate(corpus_file.read_text(encoding="utf-8"))
    occurring = occurring_identifiers(program)
    fresh = [
        atom.left.name
        for vc in output.vcs
        for step in leaves(vc.body)
        if isinstance(step, Jsr)
        for atom in step.post.pure
        if isinstance(atom, Eq) and isinstance(atom.left, Var) and atom.left.name not in occurring
    ]
    assert len(fresh) == len(set(fresh))
    assert output.fresh_counter_final >= len(fresh)


def test_generation_is_deterministic(corpus_file):
    source = corpus_file.read_text(encoding="utf-8")
    assert generate(source)[1] == generate(source)[1]


def test_undeclared_names_violate_contract(corpus_source):
    program, summaries, par = prepare(corpus_source("straight"))
    generator = VCGenerator(program, summaries, par)
    with pytest.raises(ContractViolation):
        generator.chop("main", Call("ghost", (), ()))
    with pytest.raises(ContractViolation):
        generator.interfering("main", "ghost")
