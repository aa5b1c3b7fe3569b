"""
Parser à descente récursive du langage annoté (programmes, commandes, assertions)
"""

from typing import List, Optional, Tuple

from core.syntax import (
    Assign,
    Call,
    Command,
    Dispose,
    Emp,
    Eq,
    Expr,
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
    ProcDecl,
    Program,
    ResourceDecl,
    Skip,
    SourceSpan,
    Spec,
    SymbolicHeap,
    Var,
    While,
    With,
    Xor,
    seq_of,
)
from frontend.diagnostics import Diagnostic, DiagnosticCode, error
from frontend.lexer import Token, tokenize
from utils.errors import ParseError
from utils.logger import setup_logger

logger = setup_logger(__name__)


class Parser:
    """Parser du langage annoté, avec resynchronisation au niveau des commandes"""

    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.index = 0
        self.diagnostics: List[Diagnostic] = []

    # -- outils ----------------------------------------------------------

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    @property
    def previous(self) -> Token:
        return self.tokens[max(0, self.index - 1)]

    def peek(self, kind: str, text: Optional[str] = None, offset: int = 0) -> Optional[Token]:
        position = min(self.index + offset, len(self.tokens) - 1)
        token = self.tokens[position]
        if token.kind != kind:
            return None
        if text is not None and token.text != text:
            return None
        return token

    def accept(self, kind: str, text: Optional[str] = None) -> Optional[Token]:
        token = self.peek(kind, text)
        if token is not None:
            self.index += 1
        return token

    def expect(self, kind: str, text: Optional[str] = None) -> Token:
        token = self.peek(kind, text)
        if token is None:
            self.fail(f"attendu {text!r}" if text else f"attendu un {kind}")
        self.index += 1
        return token

    def fail(self, message: str):
        token = self.current
        found = "fin de fichier" if token.kind == "eof" else repr(token.text)
        raise ParseError(f"erreur de syntaxe: {message}, trouvé {found}", token.span)

    def span_from(self, start: Token) -> SourceSpan:
        end = self.previous.span
        return SourceSpan(start.span.start, max(end.end, start.span.end), start.span.line, start.span.column)

    def record(self, exc: ParseError):
        self.diagnostics.append(error(DiagnosticCode.SYNTAX_ERROR, exc.span, exc.message))

    # -- programme -------------------------------------------------------

    def parse_program(self) -> Program:
        """
        program ::= (resource | proc)*

        Returns:
            Programme (éventuellement partiel si des diagnostics existent)
        """
        start = self.current
        resources = []
        procedures = []
        try:
            while not self.peek("eof"):
                if self.peek("keyword", "resource"):
                    resources.append(self.parse_resource())
                elif self.peek("ident"):
                    procedures.append(self.parse_proc())
                else:
                    self.fail("attendu une déclaration de ressource ou de procédure")
        except ParseError as exc:
            self.record(exc)
        return Program(tuple(resources), tuple(procedures), span=self.span_from(start))

    def parse_resource(self) -> ResourceDecl:
        start = self.expect("keyword", "resource")
        name = self.expect("ident").text
        self.expect("op", "(")
        owned = self.parse_identlist(")")
        self.expect("op", ")")
        invariant = self.parse_bracketed_assertion()
        initializer = self.parse_block() if self.peek("op", "{") else None
        return ResourceDecl(name, owned, invariant, initializer, span=self.span_from(start))

    def parse_proc(self) -> ProcDecl:
        start = self.expect("ident")
        refs, vals = self.parse_formals()
        pre = self.parse_bracketed_assertion()
        body = self.parse_block()
        post = self.parse_bracketed_assertion()
        spec = Spec(pre, post, span=pre.span)
        return ProcDecl(start.text, refs, vals, spec, body, span=self.span_from(start))

    def parse_formals(self) -> Tuple[Tuple[str, ...], Tuple[str, ...]]:
        """`(p1, p2; v1)`; sans `;` tous les paramètres sont passés par valeur"""
        self.expect("op", "(")
        first = self.parse_identlist(";", ")")
        if self.accept("op", ";"):
            second = self.parse_identlist(")")
            self.expect("op", ")")
            return first, second
        self.expect("op", ")")
        return (), first

    def parse_identlist(self, *closers: str) -> Tuple[str, ...]:
        names = []
        if any(self.peek("op", closer) for closer in closers):
            return ()
        names.append(self.expect("ident").text)
        while self.accept("op", ","):
            names.append(self.expect("ident").text)
        return tuple(names)

    # -- commandes -------------------------------------------------------

    def parse_block(self) -> Command:
        """block ::= "{" cmd* "}" ; une séquence s'imbrique à droite"""
        start = self.expect("op", "{")
        command = self.parse_commands()
        self.expect("op", "}")
        if isinstance(command, Skip):
            return Skip(span=self.span_from(start))
        return command

    def parse_commands(self) -> Command:
        """Commandes jusqu'à `}`; `local` porte sur la fin du bloc"""
        commands: List[Command] = []
        while not self.peek("op", "}") and not self.peek("eof"):
            if self.peek("keyword", "local"):
                start = self.expect("keyword", "local")
                try:
                    names = self.parse_identlist(";")
                    if not names:
                        self.fail("liste de variables locales vide")
                    self.expect("op", ";")
                except ParseError as exc:
                    self.record(exc)
                    self.synchronize()
                    continue
                body = self.parse_commands()
                commands.append(Local(names, body, span=self.span_from(start)))
                break
            try:
                commands.append(self.parse_cmd())
            except ParseError as exc:
                self.record(exc)
                self.synchronize()
        return seq_of(commands)

    def synchronize(self):
        """Resynchronisation: après le prochain `;` ou avant le `}` englobant"""
        depth = 0
        while not self.peek("eof"):
            if self.peek("op", "{"):
                depth += 1
            elif self.peek("op", "}"):
                if depth == 0:
                    return
                depth -= 1
            elif self.peek("op", ";") and depth == 0:
                self.index += 1
                return
            self.index += 1

    def parse_cmd(self) -> Command:
        start = self.current
        if self.accept("keyword", "if"):
            cond = self.parse_paren_bexpr()
            then_branch = self.parse_block()
            else_branch = self.parse_block() if self.accept("keyword", "else") else Skip()
            return If(cond, then_branch, else_branch, span=self.span_from(start))
        if self.accept("keyword", "while"):
            cond = self.parse_paren_bexpr()
            invariant = self.parse_bracketed_assertion()
            body = self.parse_block()
            return While(invariant, cond, body, span=self.span_from(start))
        if self.accept("keyword", "with"):
            resource = self.expect("ident").text
            self.expect("keyword", "when")
            guard = self.parse_paren_bexpr()
            body = self.parse_block()
            return With(resource, guard, body, span=self.span_from(start))
        if self.accept("keyword", "dispose"):
            self.expect("op", "(")
            expr = self.parse_expr()
            self.expect("op", ")")
            self.expect("op", ";")
            return self.prim(Dispose(expr, span=self.span_from(start)), start)
        if self.peek("ident") and self.peek("op", "(", offset=1):
            call = self.parse_call()
            if self.accept("op", "||"):
                other = self.parse_call()
                self.expect("op", ";")
                return Par(call, other, span=self.span_from(start))
            self.expect("op", ";")
            return call
        if self.peek("ident") and self.peek("op", "=", offset=1):
            target = self.expect("ident").text
            self.expect("op", "=")
            if self.accept("keyword", "new"):
                self.expect("op", "(")
                self.expect("op", ")")
                self.expect("op", ";")
                return self.prim(New(target, span=self.span_from(start)), start)
            expr = self.parse_expr()
            if self.accept("op", "->"):
                field_name = self.expect("ident").text
                self.expect("op", ";")
                return self.prim(Lookup(target, expr, field_name, span=self.span_from(start)), start)
            self.expect("op", ";")
            return self.prim(Assign(target, expr, span=self.span_from(start)), start)
        expr = self.parse_expr()
        self.expect("op", "->")
        field_name = self.expect("ident").text
        self.expect("op", "=")
        value = self.parse_expr()
        self.expect("op", ";")
        return self.prim(Mutate(expr, field_name, value, span=self.span_from(start)), start)

    def prim(self, stmt, start: Token) -> Prim:
        return Prim(stmt, span=self.span_from(start))

    def parse_call(self) -> Call:
        """f(x1, x2; E1, E2) ; sans `;` la liste est celle des arguments par valeur"""
        start = self.expect("ident")
        self.expect("op", "(")
        first = self.parse_exprlist(";", ")")
        if self.accept("op", ";"):
            refs = []
            for expr in first:
                if not isinstance(expr, Var):
                    raise ParseError("erreur de syntaxe: paramètre par référence non identifiant", expr.span)
                refs.append(expr.name)
            vals = self.parse_exprlist(")")
            self.expect("op", ")")
            return Call(start.text, tuple(refs), vals, span=self.span_from(start))
        self.expect("op", ")")
        return Call(start.text, (), first, span=self.span_from(start))

    def parse_exprlist(self, *closers: str) -> Tuple[Expr, ...]:
        if any(self.peek("op", closer) for closer in closers):
            return ()
        exprs = [self.parse_expr()]
        while self.accept("op", ","):
            exprs.append(self.parse_expr())
        return tuple(exprs)

    # -- expressions -----------------------------------------------------

    def parse_expr(self) -> Expr:
        """expr ::= primary ("^" primary)* (associatif à gauche)"""
        start = self.current
        expr = self.parse_primary()
        while self.accept("op", "^"):
            right = self.parse_primary()
            expr = Xor(expr, right, span=self.span_from(start))
        return expr

    def parse_primary(self) -> Expr:
        start = self.current
        if self.accept("ident"):
            return Var(start.text, span=start.span)
        if self.accept("keyword", "nil"):
            return Nil(span=start.span)
        if self.accept("int"):
            return IntConst(start.value, span=start.span)
        if self.accept("op", "("):
            expr = self.parse_expr()
            self.expect("op", ")")
            return expr
        self.fail("attendu une expression")

    def parse_bexpr(self):
        start = self.current
        left = self.parse_expr()
        if self.accept("op", "=="):
            return Eq(left, self.parse_expr(), span=self.span_from(start))
        if self.accept("op", "!="):
            return Neq(left, self.parse_expr(), span=self.span_from(start))
        self.fail("attendu '==' ou '!='")

    def parse_paren_bexpr(self):
        self.expect("op", "(")
        cond = self.parse_bexpr()
        self.expect("op", ")")
        return cond

    # -- assertions ------------------------------------------------------

    def parse_bracketed_assertion(self) -> SymbolicHeap:
        self.expect("op", "[")
        heap = self.parse_assertion()
        self.expect("op", "]")
        return heap

    def parse_assertion(self) -> SymbolicHeap:
        """assertion ::= pure ";" spatial | spatial"""
        start = self.current
        pure: Tuple = ()
        if self.accept("keyword", "true"):
            self.expect("op", ";")
        elif self.starts_pure():
            pure = self.parse_pure()
            self.expect("op", ";")
        spatial = self.parse_spatial()
        return SymbolicHeap(pure, spatial, span=self.span_from(start))

    def starts_pure(self) -> bool:
        """Lookahead: une expression suivie de `==`/`!=`"""
        if self.peek("keyword", "emp") or (self.peek("ident") and self.peek("op", "(", offset=1)):
            return False
        saved = self.index
        try:
            self.parse_expr()
            return bool(self.peek("op", "==") or self.peek("op", "!="))
        except ParseError:
            return False
        finally:
            self.index = saved

    def parse_pure(self) -> Tuple:
        atoms = [self.parse_bexpr()]
        while self.accept("op", "&&"):
            atoms.append(self.parse_bexpr())
        return tuple(atoms)

    def parse_spatial(self) -> Tuple:
        atoms = [self.parse_satom()]
        while self.accept("op", "*"):
            atoms.append(self.parse_satom())
        return tuple(atoms)

    def parse_satom(self):
        start = self.current
        if self.accept("keyword", "emp"):
            return Emp(span=start.span)
        if self.peek("ident") and self.peek("op", "(", offset=1):
            name = self.expect("ident").text
            self.expect("op", "(")
            args = self.parse_exprlist(")")
            self.expect("op", ")")
            return PredAtom(name, args, span=self.span_from(start))
        addr = self.parse_expr()
        self.expect("op", "|->")
        self.expect("op", "[")
        fields = []
        if not self.peek("op", "]"):
            fields.append(self.parse_fieldbind())
            while self.accept("op", ","):
                fields.append(self.parse_fieldbind())
        self.expect("op", "]")
        return PointsTo(addr, tuple(fields), span=self.span_from(start))

    def parse_fieldbind(self) -> Tuple[str, Expr]:
        name = self.expect("ident").text
        self.expect("op", ":")
        return name, self.parse_expr()


def parse(source: str) -> Tuple[Optional[Program], List[Diagnostic]]:
    """
    Analyser un texte source

    Args:
        source: Texte du programme

    Returns:
        Tuple (programme ou None, diagnostics de syntaxe)
    """
    tokens, diagnostics = tokenize(source)
    parser = Parser(tokens)
    program = parser.parse_program()
    diagnostics = diagnostics + parser.diagnostics
    if diagnostics:
        logger.info(f"Analyse syntaxique: {len(diagnostics)} erreur(s)")
        return None, diagnostics
    logger.info(
        f"Analyse syntaxique: {len(program.resources)} ressource(s), "
        f"{len(program.procedures)} procédure(s)"
    )
    return program, []
