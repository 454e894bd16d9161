"""Hand-written lexer and recursive-descent parser for queries and types.

Concrete grammar (binary operators listed loosest to tightest):

    expr   ::= "let" ID "=" expr "in" expr
             | "if" expr "then" expr "else" expr
             | binary expression over:  or  and  ==  union/diff  +  not
    postfix::= atom ("." ID)*
    atom   ::= INT | "true" | "false" | ID
             | "sum" "(" expr ")" | "flatten" "(" expr ")" | "count" "(" expr ")"
             | "empty" (":" type)?
             | "{" expr ("," expr)* "}"
             | "{" expr "|" gen ("," (gen | expr))* "}"
             | "(" ID ":" expr ("," ID ":" expr)* ")"
             | "(" expr ")"
    gen    ::= ID "<-" expr
    type   ::= "int" | "bool" | "{" type "}" | "(" ID ":" type ("," ID ":" type)* ")"

Annotated types add an optional ``^{c1,...,cn}`` suffix to every type node;
an omitted suffix means the empty annotation.
"""

from __future__ import annotations

from dataclasses import dataclass

from .analysis import ATBag, ATBool, ATInt, ATRecord, AType
from .errors import ParseError
from .syntax import (
    Add,
    And,
    BagLit,
    BagType,
    BoolLit,
    BoolType,
    Comp,
    Count,
    Diff,
    Empty,
    Eq,
    Expr,
    Flatten,
    Gen,
    Guard,
    If,
    IntLit,
    IntType,
    Let,
    Not,
    Or,
    Proj,
    RecordExpr,
    RecordType,
    Singleton,
    Sum,
    SurfaceComp,
    Type,
    Union,
    Var,
)

KEYWORDS = frozenset(
    """let in if then else true false not and or union diff
       sum flatten count empty int bool""".split()
)

_PUNCT = ("==", "<-", "=", "+", "|", "{", "}", "(", ")", ",", ".", ":", "^", "[", "]")


@dataclass(frozen=True)
class Token:
    kind: str  # "id", "int", "kw", "punct", "eof"
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    i, line, col = 0, 1, 1
    n = len(text)
    while i < n:
        ch = text[i]
        if ch == "\n":
            i, line, col = i + 1, line + 1, 1
            continue
        if ch in " \t\r":
            i, col = i + 1, col + 1
            continue
        if ch == "#":  # comment to end of line
            while i < n and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit() or (ch == "-" and i + 1 < n and text[i + 1].isdigit()):
            j = i + 1
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(Token("int", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i + 1
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            word = text[i:j]
            kind = "kw" if word in KEYWORDS else "id"
            tokens.append(Token(kind, word, line, col))
            col += j - i
            i = j
            continue
        for p in _PUNCT:
            if text.startswith(p, i):
                tokens.append(Token("punct", p, line, col))
                i += len(p)
                col += len(p)
                break
        else:
            raise ParseError(f"unexpected character {ch!r}", line, col)
    tokens.append(Token("eof", "", line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.pos = 0

    # -- token plumbing ----------------------------------------------------

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        if tok.kind != "eof":
            self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.text == text and tok.kind in ("punct", "kw")

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.advance()
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if not self.at(text):
            raise ParseError(f"expected {text!r}, found {self._describe(tok)}", tok.line, tok.col)
        return self.advance()

    def expect_ident(self, what: str = "identifier") -> str:
        tok = self.peek()
        if tok.kind != "id":
            raise ParseError(f"expected {what}, found {self._describe(tok)}", tok.line, tok.col)
        self.advance()
        return tok.text

    @staticmethod
    def _describe(tok: Token) -> str:
        return "end of input" if tok.kind == "eof" else repr(tok.text)

    def fail(self, expected: str) -> ParseError:
        tok = self.peek()
        return ParseError(f"expected {expected}, found {self._describe(tok)}", tok.line, tok.col)

    # -- expressions -------------------------------------------------------

    def expr(self) -> Expr:
        if self.at("let"):
            self.advance()
            name = self.expect_ident("binder name")
            self.expect("=")
            bound = self.expr()
            self.expect("in")
            return Let(name, bound, self.expr())
        if self.at("if"):
            self.advance()
            cond = self.expr()
            self.expect("then")
            then = self.expr()
            self.expect("else")
            return If(cond, then, self.expr())
        return self.or_expr()

    def or_expr(self) -> Expr:
        e = self.and_expr()
        while self.accept("or"):
            e = Or(e, self.and_expr())
        return e

    def and_expr(self) -> Expr:
        e = self.eq_expr()
        while self.accept("and"):
            e = And(e, self.eq_expr())
        return e

    def eq_expr(self) -> Expr:
        e = self.bag_expr()
        while self.accept("=="):
            e = Eq(e, self.bag_expr())
        return e

    def bag_expr(self) -> Expr:
        e = self.add_expr()
        while True:
            if self.accept("union"):
                e = Union(e, self.add_expr())
            elif self.accept("diff"):
                e = Diff(e, self.add_expr())
            else:
                return e

    def add_expr(self) -> Expr:
        e = self.unary()
        while self.accept("+"):
            e = Add(e, self.unary())
        return e

    def unary(self) -> Expr:
        if self.accept("not"):
            return Not(self.unary())
        return self.postfix()

    def postfix(self) -> Expr:
        e = self.atom()
        while self.accept("."):
            e = Proj(e, self.expect_ident("field name"))
        return e

    def atom(self) -> Expr:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            return IntLit(int(tok.text))
        if tok.kind == "id":
            self.advance()
            return Var(tok.text)
        if self.accept("true"):
            return BoolLit(True)
        if self.accept("false"):
            return BoolLit(False)
        for kw, node in (("sum", Sum), ("flatten", Flatten), ("count", Count)):
            if self.at(kw):
                self.advance()
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return node(arg)
        if self.accept("empty"):
            if self.accept(":"):
                ascription = self.type_()
                if not isinstance(ascription, BagType):
                    raise ParseError(
                        f"empty-collection ascription must be a bag type, got {ascription}",
                        tok.line,
                        tok.col,
                    )
                return Empty(ascription.elem)
            return Empty(None)
        if self.at("{"):
            return self.braces()
        if self.at("("):
            return self.parens()
        raise self.fail("an expression")

    def braces(self) -> Expr:
        open_tok = self.expect("{")
        first = self.expr()
        if self.accept("|"):
            clauses = [self.generator()]
            while self.accept(","):
                clauses.append(self.clause())
            self.expect("}")
            try:
                return SurfaceComp(first, tuple(clauses))
            except ValueError as exc:
                raise ParseError(str(exc), open_tok.line, open_tok.col) from None
        items = [first]
        while self.accept(","):
            items.append(self.expr())
        self.expect("}")
        return BagLit(tuple(items))

    def generator(self) -> Gen:
        var = self.expect_ident("generator binder")
        self.expect("<-")
        return Gen(var, self.expr())

    def clause(self) -> Gen | Guard:
        if self.peek().kind == "id" and self.peek(1).text == "<-":
            return self.generator()
        return Guard(self.expr())

    def parens(self) -> Expr:
        open_tok = self.expect("(")
        if self.peek().kind == "id" and self.peek(1).text == ":":
            fields = [self.record_field()]
            while self.accept(","):
                fields.append(self.record_field())
            self.expect(")")
            try:
                return RecordExpr(tuple(fields))
            except ValueError as exc:
                raise ParseError(str(exc), open_tok.line, open_tok.col) from None
        e = self.expr()
        self.expect(")")
        return e

    def record_field(self) -> tuple[str, Expr]:
        name = self.expect_ident("field name")
        self.expect(":")
        return name, self.expr()

    # -- types ---------------------------------------------------------------

    def type_(self) -> Type:
        if self.accept("int"):
            return IntType()
        if self.accept("bool"):
            return BoolType()
        if self.accept("{"):
            elem = self.type_()
            self.expect("}")
            return BagType(elem)
        if self.accept("("):
            fields = [self.type_field()]
            while self.accept(","):
                fields.append(self.type_field())
            self.expect(")")
            tok = self.peek()
            try:
                return RecordType(tuple(fields))
            except ValueError as exc:
                raise ParseError(str(exc), tok.line, tok.col) from None
        raise self.fail("a type")

    def type_field(self) -> tuple[str, Type]:
        name = self.expect_ident("field name")
        self.expect(":")
        return name, self.type_()

    # -- annotated types -------------------------------------------------------

    def atype(self) -> AType:
        if self.accept("int"):
            return ATInt(self.annotation_suffix())
        if self.accept("bool"):
            return ATBool(self.annotation_suffix())
        if self.accept("{"):
            elem = self.atype()
            self.expect("}")
            return ATBag(elem, self.annotation_suffix())
        if self.accept("("):
            fields = [self.atype_field()]
            while self.accept(","):
                fields.append(self.atype_field())
            self.expect(")")
            tok = self.peek()
            try:
                return ATRecord(tuple(fields), self.annotation_suffix())
            except ValueError as exc:
                raise ParseError(str(exc), tok.line, tok.col) from None
        raise self.fail("an annotated type")

    def atype_field(self) -> tuple[str, AType]:
        name = self.expect_ident("field name")
        self.expect(":")
        return name, self.atype()

    def annotation_suffix(self) -> frozenset[str]:
        if not self.accept("^"):
            return frozenset()
        self.expect("{")
        colors: set[str] = set()
        if not self.at("}"):
            colors.add(self.color())
            while self.accept(","):
                colors.add(self.color())
        self.expect("}")
        return frozenset(colors)

    def color(self) -> str:
        tok = self.peek()
        if tok.kind in ("id", "int", "kw"):
            self.advance()
            return tok.text
        raise self.fail("a color name")

    # -- entry points ------------------------------------------------------

    def finish(self) -> None:
        tok = self.peek()
        if tok.kind != "eof":
            raise ParseError(f"unexpected trailing input {tok.text!r}", tok.line, tok.col)


def parse(text: str) -> Expr:
    """Parse a query into a surface tree (may contain sugar nodes)."""
    p = _Parser(text)
    e = p.expr()
    p.finish()
    return e


def parse_type(text: str) -> Type:
    p = _Parser(text)
    t = p.type_()
    p.finish()
    return t


def parse_atype(text: str) -> AType:
    p = _Parser(text)
    t = p.atype()
    p.finish()
    return t
