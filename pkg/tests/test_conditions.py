import pytest
from conftest import parse_ok, prepare
from test_legality import CASES as LEGALITY_CASES

from core.analysis import VariableAnalyzer
from core.conditions import ConditionChecker, VarClass, occurring_identifiers
from core.syntax import Call, If, Local, Par, Prim, Seq, Skip, While, With, fv, fv_all
from frontend.diagnostics import DiagnosticCode, has_errors
from frontend.legality import LegalityChecker
from frontend.renamer import rename_apart

D = DiagnosticCode


def diagnostics_of(source: str):
    """Légalité, puis conditions si le programme est légal"""
    program = parse_ok(source)
    legality = LegalityChecker.check_legal(program)
    if has_errors(legality):
        return legality
    program = rename_apart(program)
    summaries = VariableAnalyzer.proc_summaries(program)
    return ConditionChecker.check_conditions(program, summaries)


def codes_of(source: str):
    return {d.code for d in diagnostics_of(source)}


CALLEE_AB = "f(a, b;) [emp] { a = 1; b = 2; } [emp]\n"
CALLEE_G = "f(a;) [emp] { a = g; } [emp]\n"
WRITER_READER = "a() [emp] { z = 1; } [emp]\nb() [emp] { w = z; } [emp]\n"

CONDITION_CASES = [
    ("alias_dup_ref", CALLEE_AB + "main() [emp] { local x; f(x, x;); } [emp]", {D.ALIAS_DUP_REF}),
    ("alias_distinct_refs", CALLEE_AB + "main() [emp] { local x, y; f(x, y;); } [emp]", set()),
    ("alias_global_conflict", CALLEE_G + "main() [emp] { f(g;); } [emp]", {D.ALIAS_GLOBAL_CONFLICT}),
    ("alias_local_ref", CALLEE_G + "main() [emp] { local x; f(x;); } [emp]", set()),
    ("req_main", "resource r(x) [emp]\nmain() [emp] { y = x; } [emp]", {D.CONC_REQ_MAIN}),
    ("req_main_in_ccr", "resource r(x) [emp]\nmain() [emp] { with r when (x == 0) { y = x; } } [emp]", set()),
    ("req_main_via_callee",
     "resource r(x) [emp]\nleaf() [emp] { x = 1; } [emp]\nmain() [emp] { leaf(); } [emp]", {D.CONC_REQ_MAIN}),
    ("interference_left_writes", WRITER_READER + "main() [emp] { a() || b(); } [emp]", {D.CONC_INTERFERENCE}),
    ("interference_right_writes", WRITER_READER + "main() [emp] { b() || a(); } [emp]", {D.CONC_INTERFERENCE}),
    ("interference_via_spec",
     "a() [emp] { z = 1; } [emp]\nb() [z|->[f: 0]] { } [emp]\nmain() [emp] { a() || b(); } [emp]",
     {D.CONC_INTERFERENCE}),
    ("interference_via_ref",
     "a(p;) [emp] { p = 1; } [emp]\nb(; v) [emp] { w = v; } [emp]\n"
     "main() [emp] { local k; a(k;) || b(; k); } [emp]", {D.CONC_INTERFERENCE}),
    ("no_interference",
     "a() [emp] { z = 1; } [emp]\nb() [emp] { w = 2; } [emp]\nmain() [emp] { a() || b(); } [emp]", set()),
    ("init_order_dep",
     "resource r(x) [emp] { x = 0; s = 1; }\nresource q(y) [emp] { y = s; }\nmain() [emp] { } [emp]",
     {D.INIT_ORDER_DEP}),
    ("init_order_ok",
     "resource r(x) [emp] { x = 0; s = 1; }\nresource q(y) [emp] { y = 0; }\nmain() [emp] { } [emp]", set()),
    ("init_with_forbidden",
     "resource r(x) [emp]\ninit() [emp] { with r when (x == 0) { x = 1; } } [emp]\nmain() [emp] { } [emp]",
     {D.INIT_FORBIDDEN_CONSTRUCT}),
    ("initializer_call_forbidden",
     "f() [emp] { } [emp]\nresource r(x) [emp] { f(); }\nmain() [emp] { } [emp]", {D.INIT_FORBIDDEN_CONSTRUCT}),
    ("initializer_par_forbidden",
     "f() [emp] { } [emp]\nresource r(x) [emp] { f() || f(); }\nmain() [emp] { } [emp]",
     {D.INIT_FORBIDDEN_CONSTRUCT}),
    ("init_plain", "resource r(x) [emp]\ninit() [emp] { x = 0; } [emp]\nmain() [emp] { } [emp]", set()),
    ("no_main", "f() [emp] { } [emp]", {D.NOTE_NO_MAIN}),
]

ALL_CASES = LEGALITY_CASES + CONDITION_CASES


@pytest.mark.parametrize("source,expected", [(s, e) for _, s, e in ALL_CASES], ids=[c[0] for c in ALL_CASES])
def test_labeled_corpus(source, expected):
    assert codes_of(source) == expected


def test_interference_reported_once_per_direction():
    source = "a() [emp] { z = 1; } [emp]\nb() [emp] { z = 2; } [emp]\nmain() [emp] { a() || b(); } [emp]"
    diagnostics = [d for d in diagnostics_of(source) if d.code == D.CONC_INTERFERENCE]
    assert len(diagnostics) == 2
    assert {d.message.split("'")[3] for d in diagnostics} == {"a", "b"}


def test_interference_points_at_parallel_command():
    source = WRITER_READER + "main() [emp] {\n  a() || b();\n} [emp]"
    (diagnostic,) = diagnostics_of(source)
    assert (diagnostic.span.line, diagnostic.span.column) == (4, 3)


def test_init_order_dep_relates_earlier_initializer():
    source = (
        "resource r(x) [emp] { s = 1; }\n"
        "resource q(y) [emp] { y = s; }\n"
        "main() [emp] { } [emp]"
    )
    (diagnostic,) = diagnostics_of(source)
    assert diagnostic.code == D.INIT_ORDER_DEP
    assert diagnostic.span.line == 2
    assert [span.line for span in diagnostic.related] == [1]


def test_no_main_is_only_a_warning():
    diagnostics = diagnostics_of("f() [emp] { } [emp]")
    assert not has_errors(diagnostics)


def test_single_procedure_without_par_flags_at_most_req_main():
    source = "resource r(x) [emp]\nmain() [emp] { y = x; z = y; if (z == 0) { x = 1; } } [emp]"
    assert codes_of(source) <= {D.CONC_REQ_MAIN}


@pytest.mark.parametrize("source", [s for _, s, _ in CONDITION_CASES], ids=[c[0] for c in CONDITION_CASES])
def test_checks_invariant_under_renaming(source):
    program = parse_ok(source)
    renamed = rename_apart(program)
    raw = ConditionChecker.check_conditions(program, VariableAnalyzer.proc_summaries(program))
    after = ConditionChecker.check_conditions(renamed, VariableAnalyzer.proc_summaries(renamed))
    assert sorted(d.code for d in raw) == sorted(d.code for d in after)


def test_corpus_is_condition_clean(corpus_file):
    program, summaries, _ = prepare(corpus_file.read_text(encoding="utf-8"))
    assert not has_errors(ConditionChecker.check_conditions(program, summaries))


# -- vérification syntaxique de la condition 1 --------------------------------

def uses(command, held):
    """Paires (variable, ressources détenues) pour chaque mention dans `command`"""
    match command:
        case Skip():
            return []
        case Prim(stmt):
            return [(name, held) for name in fv(stmt)]
        case Seq(first, second):
            return uses(first, held) + uses(second, held)
        case If(cond, then_branch, else_branch):
            return [(n, held) for n in fv(cond)] + uses(then_branch, held) + uses(else_branch, held)
        case While(invariant, cond, body):
            return [(n, held) for n in fv(invariant) | fv(cond)] + uses(body, held)
        case Call(_, refs, vals):
            return [(n, held) for n in set(refs) | set(fv_all(vals))]
        case Par(left, right):
            return uses(left, held) + uses(right, held)
        case With(resource, guard, body):
            inner = held | {resource}
            return [(n, inner) for n in fv(guard)] + uses(body, inner)
        case Local(_, body):
            return uses(body, held)
    raise AssertionError(command)


def test_protected_variables_only_inside_their_ccr(corpus_file):
    program, summaries, _ = prepare(corpus_file.read_text(encoding="utf-8"))
    if program.procedure("main") is None:
        pytest.skip("pas de main")
    reachable = ConditionChecker._call_closure(program, "main")
    owner = {name: decl.name for decl in program.resources for name in decl.owned}
    for proc_name in reachable:
        proc = program.procedure(proc_name)
        mentions = [(n, frozenset()) for n in fv(proc.spec)] + uses(proc.body, frozenset())
        for name, held in mentions:
            if name in owner:
                assert owner[name] in held, (proc_name, name)


# -- classification -------------------------------------------------------------

def classify(source: str):
    program, summaries, _ = prepare(source)
    return program, ConditionChecker.classify_vars(program, summaries)


def test_classification_of_buffer(corpus_source):
    _, report = classify(corpus_source("ccr_buffer"))
    assert report.members(VarClass.PROTECTED) == {"c", "full"}
    assert report.members(VarClass.LOCAL) == {"x", "p", "q"}
    assert report.members(VarClass.PROCESS_LOCAL) == {"y"}
    assert report.reasons["y"] == "paramètre par référence, modifié"


def test_read_only_ref_param_is_constant():
    _, report = classify(
        "peek(v;) [emp] { w = v; } [emp]\n"
        "main() [emp] { local a; peek(a;); } [emp]")
    assert report.classes["v"] == VarClass.GLOBAL_CONSTANT
    assert report.reasons["v"] == "paramètre par référence jamais modifié"
    assert report.classes["a"] == VarClass.LOCAL
    assert report.classes["w"] == VarClass.PROCESS_LOCAL


def test_invariant_variable_classes(corpus_source):
    _, report = classify(corpus_source("ccr_interference"))
    assert report.classes["x"] == VarClass.PROTECTED
    assert report.classes["y"] == VarClass.PROCESS_PROTECTED

    _, report = classify("resource r(x) [x == k; emp]\nmain() [emp] { } [emp]")
    assert report.classes["k"] == VarClass.GLOBAL_CONSTANT


def test_global_constant_and_confinement(corpus_source):
    _, report = classify(corpus_source("recursion"))
    assert report.classes["root"] == VarClass.GLOBAL_CONSTANT

    _, report = classify(corpus_source("parallel"))
    assert report.classes["a"] == VarClass.PROCESS_LOCAL
    assert "confinée" in report.reasons["a"] and "non" not in report.reasons["a"]

    _, report = classify(WRITER_READER + "main() [emp] { a() || b(); } [emp]")
    assert report.classes["z"] == VarClass.PROCESS_LOCAL
    assert "non confinée" in report.reasons["z"]


def test_classification_is_a_partition(corpus_file):
    program, report = classify(corpus_file.read_text(encoding="utf-8"))
    assert set(report.classes) == set(occurring_identifiers(program))
    assert sum(len(report.members(cls)) for cls in VarClass) == len(report.classes)
