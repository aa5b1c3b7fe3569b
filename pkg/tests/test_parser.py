from conftest import parse_ok

from core.printer import expr_str, heap_str, program_str
from core.syntax import (
    Assign,
    Call,
    Dispose,
    Emp,
    Eq,
    If,
    IntConst,
    Local,
    Lookup,
    Mutate,
    Neq,
    New,
    Nil,
    Par,
    PointsTo,
    PredAtom,
    Prim,
    Seq,
    Skip,
    SymbolicHeap,
    Var,
    While,
    With,
    Xor,
)
from frontend.diagnostics import DiagnosticCode
from frontend.lexer import tokenize
from frontend.parser import parse


def codes(diagnostics):
    return [d.code for d in diagnostics]


# -- lexer ---------------------------------------------------------------

def test_tokenize_points_to_and_negative_int():
    tokens, diagnostics = tokenize("x|->[t: -3]")
    assert diagnostics == []
    assert [t.text for t in tokens] == ["x", "|->", "[", "t", ":", "-3", "]", ""]
    assert tokens[5].value == -3


def test_tokenize_arrow_is_not_a_negative_number():
    tokens, _ = tokenize("y = x->tl;")
    assert [t.text for t in tokens][:5] == ["y", "=", "x", "->", "tl"]


def test_tokenize_tracks_lines_and_columns():
    tokens, _ = tokenize("// commentaire\n  main")
    assert (tokens[0].span.line, tokens[0].span.column) == (2, 3)


def test_prime_identifiers_are_rejected():
    _, diagnostics = tokenize("x'1 = 0;")
    assert codes(diagnostics) == [DiagnosticCode.SYNTAX_PRIME_IDENT]


def test_unterminated_comment():
    _, diagnostics = tokenize("main /* jamais fermé")
    assert codes(diagnostics) == [DiagnosticCode.SYNTAX_UNTERMINATED_COMMENT]


def test_int_overflow():
    _, diagnostics = tokenize("x = 99999999999999999999;")
    assert codes(diagnostics) == [DiagnosticCode.SYNTAX_INT_OVERFLOW]


def test_unexpected_character():
    _, diagnostics = tokenize("x = #;")
    assert codes(diagnostics) == [DiagnosticCode.SYNTAX_ERROR]


# -- grammaire -------------------------------------------------------------

def test_parse_resource_with_initializer():
    program = parse_ok("resource r(x, y) [x == 0; emp] { x = 0; }")
    decl = program.resources[0]
    assert decl.name == "r"
    assert decl.owned == ("x", "y")
    assert decl.invariant.pure == (Eq(Var("x"), IntConst(0)),)
    assert decl.invariant.spatial == (Emp(),)
    assert decl.initializer == Prim(Assign("x", IntConst(0)))


def test_parse_procedure_parameters():
    program = parse_ok("f(a, b; v) [emp] { } [emp]  g(u, w) [emp] { } [emp]")
    f, g = program.procedures
    assert (f.ref_params, f.val_params) == (("a", "b"), ("v",))
    assert (g.ref_params, g.val_params) == ((), ("u", "w"))
    assert f.body == Skip()


def test_parse_every_statement_form():
    program = parse_ok("""
        main() [emp] {
          x = y ^ (z ^ nil);
          x = new();
          x = y->tl;
          y->tl = -1;
          dispose(x);
        } [emp]
    """)
    stmts = []
    command = program.procedures[0].body
    while isinstance(command, Seq):
        stmts.append(command.first.stmt)
        command = command.second
    stmts.append(command.stmt)
    assert stmts == [
        Assign("x", Xor(Var("y"), Xor(Var("z"), Nil()))),
        New("x"),
        Lookup("x", Var("y"), "tl"),
        Mutate(Var("y"), "tl", IntConst(-1)),
        Dispose(Var("x")),
    ]


def test_parse_control_and_concurrency_forms():
    program = parse_ok("""
        main() [emp] {
          if (x == nil) { x = 1; }
          while (x != nil) [list(x)] { x = x->tl; }
          with r when (c == 0) { c = 1; }
          f(a; 3) || g(;);
          f(a; x);
        } [emp]
    """)
    body = program.procedures[0].body
    first, rest = body.first, body.second
    assert first == If(Eq(Var("x"), Nil()), Prim(Assign("x", IntConst(1))), Skip())
    invariant = SymbolicHeap((), (PredAtom("list", (Var("x"),)),))
    assert rest.first == While(invariant, Neq(Var("x"), Nil()), Prim(Lookup("x", Var("x"), "tl")))
    assert rest.second.first == With("r", Eq(Var("c"), IntConst(0)), Prim(Assign("c", IntConst(1))))
    assert rest.second.second.first == Par(Call("f", ("a",), (IntConst(3),)), Call("g", (), ()))
    assert rest.second.second.second == Call("f", ("a",), (Var("x"),))


def test_local_scopes_over_rest_of_block():
    program = parse_ok("main() [emp] { a = 1; local t, u; t = a; } [emp]")
    body = program.procedures[0].body
    assert body == Seq(
        Prim(Assign("a", IntConst(1))),
        Local(("t", "u"), Prim(Assign("t", Var("a")))),
    )


def test_assertion_forms():
    program = parse_ok("f() [true; emp * p|->[hd: a, tl: nil] * tree(t)] { } [x != y && y == 0; emp]")
    spec = program.procedures[0].spec
    assert spec.pre.pure == ()
    assert spec.pre.spatial == (
        Emp(),
        PointsTo(Var("p"), (("hd", Var("a")), ("tl", Nil()))),
        PredAtom("tree", (Var("t"),)),
    )
    assert spec.post.pure == (Neq(Var("x"), Var("y")), Eq(Var("y"), IntConst(0)))


def test_spans_point_at_source():
    program = parse_ok("\nmain() [emp] {\n  x = 1;\n} [emp]")
    proc = program.procedures[0]
    assert (proc.span.line, proc.span.column) == (2, 1)
    assert (proc.body.span.line, proc.body.span.column) == (3, 3)


# -- erreurs ---------------------------------------------------------------

def test_syntax_error_yields_no_program():
    program, diagnostics = parse("main() [emp] { x = ; } [emp]")
    assert program is None
    assert codes(diagnostics) == [DiagnosticCode.SYNTAX_ERROR]
    assert diagnostics[0].span.line == 1


def test_parser_recovers_at_statement_boundaries():
    _, diagnostics = parse("main() [emp] {\n  x = ;\n  y = ;\n  z = 1;\n} [emp]")
    assert codes(diagnostics) == [DiagnosticCode.SYNTAX_ERROR, DiagnosticCode.SYNTAX_ERROR]
    assert [d.span.line for d in diagnostics] == [2, 3]


def test_reference_argument_must_be_identifier():
    _, diagnostics = parse("main() [emp] { f(nil; 1); } [emp]")
    assert codes(diagnostics) == [DiagnosticCode.SYNTAX_ERROR]


def test_keyword_cannot_be_variable():
    _, diagnostics = parse("main() [emp] { while = 1; } [emp]")
    assert DiagnosticCode.SYNTAX_ERROR in codes(diagnostics)


# -- impression ------------------------------------------------------------

def test_printer_parenthesises_right_xor():
    assert expr_str(Xor(Var("a"), Xor(Var("b"), Var("c")))) == "a ^ (b ^ c)"
    assert expr_str(Xor(Xor(Var("a"), Var("b")), Var("c"))) == "a ^ b ^ c"


def test_heap_printing():
    program = parse_ok("f() [x == nil; x|->[t: 0] * emp] { } [emp]")
    assert heap_str(program.procedures[0].spec.pre) == "x == nil; x|->[t: 0] * emp"
    assert heap_str(program.procedures[0].spec.post) == "emp"


def test_round_trip_on_corpus(corpus_file):
    program = parse_ok(corpus_file.read_text(encoding="utf-8"))
    printed = program_str(program)
    assert parse_ok(printed) == program
    assert program_str(parse_ok(printed)) == printed
