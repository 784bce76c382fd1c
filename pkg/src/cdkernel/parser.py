"""Recursive-descent parser for ``.cd`` source files.

A file is a sequence of items::

    #mode cd                       -- or il-bot
    const c, e
    function f/1, g/2
    predicate P/1, Q/0
    hyp h : forall a. P(a)         -- global hypothesis, in scope for every def
    def name : <formula> := <proof term>
    #check name                    -- also #normalize, #translate, #extract
    #reject name EigenvariableViolation

``--`` starts a comment.  Formula precedence, tightest first, is
``~``/quantifiers, ``&``, ``|``, ``->``; the binary connectives associate to
the right.  A quantifier scopes over the next unary formula only, so
``forall a. (P(a) | Q) -> (forall a. P(a)) | Q`` is an implication.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Optional

from .syntax import (And, Atom, BOT, Case, CDAxiom, Const, DUM, Efq, Exists,
                     ExElim, ExIntro, F, FOApp, FOLam, Forall, Formula, Func,
                     Imp, Inj, Lam, Or, Pair, PApp, ProofTerm, Proj, PVar,
                     Signature, Var, FOTerm)
from .typechecker import ErrorKind, Mode

KEYWORDS = frozenset({
    "forall", "exists", "bot", "fun", "gen", "case", "of", "inl", "inr",
    "pack", "unpack", "as", "in", "efq", "D", "F",
    "def", "hyp", "const", "function", "predicate",
})
COMMANDS = ("check", "normalize", "translate", "extract")

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+|--[^\n]*)
  | (?P<nl>\n)
  | (?P<directive>\#[A-Za-z][\w-]*[^\n]*)
  | (?P<op>->|=>|:=|[()\[\]{},.:|&~@/])
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
""", re.VERBOSE)


class ParseError(Exception):
    def __init__(self, line: int, column: int, expected: str, found: str = ""):
        self.line = line
        self.column = column
        self.expected = expected
        self.found = found
        msg = f"{line}:{column}: expected {expected}"
        if found:
            msg += f", found {found}"
        super().__init__(msg)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int

    def describe(self) -> str:
        return "end of input" if self.kind == "eof" else repr(self.text)


def tokenize(source: str) -> list[Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(line, pos - line_start + 1, "a token",
                             repr(source[pos]))
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind != "ws":
            tokens.append(Token(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


@dataclass
class Definition:
    name: str
    formula: Formula
    term: ProofTerm
    line: int = 0
    expect_error: Optional[ErrorKind] = None


@dataclass
class SourceFile:
    mode: Mode = Mode.CD
    signature: Signature = field(default_factory=Signature)
    hypotheses: dict[str, Formula] = field(default_factory=dict)
    definitions: list[Definition] = field(default_factory=list)
    directives: list[tuple[str, str]] = field(default_factory=list)

    def definition(self, name: str) -> Definition:
        for d in self.definitions:
            if d.name == name:
                return d
        raise KeyError(name)

    def selected(self, command: str) -> list[Definition]:
        """Definitions a command acts on: the ones named by ``#command``
        directives if there are any, otherwise every definition that is not
        expected to be rejected."""
        named = [n for c, n in self.directives if c == command]
        if named:
            return [self.definition(n) for n in named]
        return [d for d in self.definitions if d.expect_error is None]


class Parser:
    def __init__(self, source: str, signature: Optional[Signature] = None):
        self.tokens = tokenize(source)
        self.pos = 0
        self.signature = signature
        self.directive_lines: list[int] = []

    # -- token helpers -----------------------------------------------------

    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        t = self.tok
        return t.kind in ("op", "ident") and t.text == text

    def advance(self) -> Token:
        t = self.tok
        self.pos += 1
        return t

    def fail(self, expected: str):
        t = self.tok
        raise ParseError(t.line, t.column, expected, t.describe())

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(repr(text))
        return self.advance()

    def ident(self, what: str = "an identifier") -> str:
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            self.fail(what)
        self.advance()
        return t.text

    def expect_eof(self) -> None:
        if self.tok.kind != "eof":
            self.fail("end of input")

    # -- first-order terms -------------------------------------------------

    def binder(self) -> str:
        t = self.tok
        name = self.ident("a variable name")
        sig = self.signature
        if sig is not None and (name in sig.constants or name in sig.functions):
            raise ParseError(t.line, t.column, "a variable name",
                             f"declared symbol {name!r}")
        return name

    def fo_term(self) -> FOTerm:
        t = self.tok
        name = self.ident("a first-order term")
        sig = self.signature
        if self.at("("):
            self.advance()
            args = [self.fo_term()]
            while self.at(","):
                self.advance()
                args.append(self.fo_term())
            self.expect(")")
            if sig is not None:
                if name not in sig.functions:
                    raise ParseError(t.line, t.column, "a declared function", repr(name))
                if sig.functions[name] != len(args):
                    raise ParseError(t.line, t.column,
                                     f"{sig.functions[name]} arguments for {name}",
                                     f"{len(args)}")
            return Func(name, tuple(args))
        if name == DUM.name or (sig is not None and name in sig.constants):
            return Const(name)
        if sig is not None and name in sig.functions:
            raise ParseError(t.line, t.column,
                             f"arguments for function {name}", self.tok.describe())
        return Var(name)

    # -- formulas ----------------------------------------------------------

    def formula(self) -> Formula:
        left = self.disjunction()
        if self.at("->"):
            self.advance()
            return Imp(left, self.formula())
        return left

    def disjunction(self) -> Formula:
        left = self.conjunction()
        if self.at("|"):
            self.advance()
            return Or(left, self.disjunction())
        return left

    def conjunction(self) -> Formula:
        left = self.unary()
        if self.at("&"):
            self.advance()
            return And(left, self.conjunction())
        return left

    def unary(self) -> Formula:
        if self.at("~"):
            self.advance()
            return Imp(self.unary(), BOT)
        if self.at("forall") or self.at("exists"):
            quant = Forall if self.advance().text == "forall" else Exists
            var = self.binder()
            self.expect(".")
            return quant(var, self.unary())
        if self.at("bot"):
            self.advance()
            return BOT
        if self.at("("):
            self.advance()
            a = self.formula()
            self.expect(")")
            return a
        t = self.tok
        if t.kind != "ident" or t.text in KEYWORDS:
            self.fail("a formula")
        name = self.advance().text
        args: list[FOTerm] = []
        if self.at("("):
            self.advance()
            if not self.at(")"):
                args.append(self.fo_term())
                while self.at(","):
                    self.advance()
                    args.append(self.fo_term())
            self.expect(")")
        sig = self.signature
        if sig is not None:
            if name not in sig.predicates:
                raise ParseError(t.line, t.column, "a declared predicate", repr(name))
            if sig.predicates[name] != len(args):
                raise ParseError(t.line, t.column,
                                 f"{sig.predicates[name]} arguments for {name}",
                                 f"{len(args)}")
        return Atom(name, tuple(args))

    def bracketed_formula(self) -> Formula:
        self.expect("[")
        a = self.formula()
        self.expect("]")
        return a

    # -- proof terms -------------------------------------------------------

    def term(self) -> ProofTerm:
        if self.at("fun"):
            self.advance()
            self.expect("(")
            var = self.ident("a proof variable")
            self.expect(":")
            dom = self.formula()
            self.expect(")")
            self.expect("=>")
            return Lam(var, dom, self.term())
        if self.at("gen"):
            self.advance()
            var = self.binder()
            self.expect("=>")
            return FOLam(var, self.term())
        if self.at("case"):
            self.advance()
            scrut = self.term()
            self.expect("of")
            self.expect("{")
            self.expect("inl")
            x1 = self.ident("a proof variable")
            self.expect("=>")
            b1 = self.term()
            self.expect("|")
            self.expect("inr")
            x2 = self.ident("a proof variable")
            self.expect("=>")
            b2 = self.term()
            self.expect("}")
            return Case(scrut, x1, b1, x2, b2)
        if self.at("unpack"):
            self.advance()
            scrut = self.term()
            self.expect("as")
            self.expect("(")
            alpha = self.binder()
            self.expect(",")
            x = self.ident("a proof variable")
            self.expect(")")
            self.expect("in")
            return ExElim(scrut, alpha, x, self.term())
        return self.application()

    def starts_argument(self) -> bool:
        t = self.tok
        if t.kind == "ident":
            return t.text not in KEYWORDS or t.text in ("F", "D", "pack", "efq", "inl", "inr")
        return t.kind == "op" and t.text == "("

    def application(self) -> ProofTerm:
        if not self.starts_argument():
            self.fail("a proof term")
        t = self.prefix()
        while True:
            if self.at("@"):
                self.advance()
                t = FOApp(t, self.fo_term())
            elif self.starts_argument():
                t = PApp(t, self.prefix())
            else:
                return t

    def prefix(self) -> ProofTerm:
        if self.at("inl") or self.at("inr"):
            index = 0 if self.advance().text == "inl" else 1
            if not self.at("["):
                self.fail("'[' (injections need a disjunction annotation)")
            ann = self.bracketed_formula()
            return Inj(index, self.prefix(), ann)
        return self.postfix()

    def postfix(self) -> ProofTerm:
        t = self.atom()
        while self.at(".") and self.peek().kind == "int":
            self.advance()
            tok = self.advance()
            if tok.text not in ("0", "1"):
                raise ParseError(tok.line, tok.column, "projection index 0 or 1", tok.text)
            t = Proj(t, int(tok.text))
        return t

    def atom(self) -> ProofTerm:
        if self.at("F"):
            self.advance()
            return F
        if self.at("D"):
            self.advance()
            if not self.at("["):
                self.fail("'[' (the axiom constant needs its instance)")
            return CDAxiom(self.bracketed_formula())
        if self.at("pack"):
            self.advance()
            if not self.at("["):
                self.fail("'[' (pack needs an existential annotation)")
            ann = self.bracketed_formula()
            self.expect("(")
            m = self.fo_term()
            self.expect(",")
            body = self.term()
            self.expect(")")
            return ExIntro(m, body, ann)
        if self.at("efq"):
            self.advance()
            if not self.at("["):
                self.fail("'[' (efq needs its target atom)")
            atom = self.bracketed_formula()
            self.expect("(")
            body = self.term()
            self.expect(")")
            return Efq(atom, body)
        if self.at("("):
            self.advance()
            if self.tok.kind == "ident" and self.tok.text not in KEYWORDS and self.peek().text == ":":
                name = self.advance().text
                self.advance()
                ann = self.formula()
                self.expect(")")
                return PVar(name, ann)
            first = self.term()
            if self.at(","):
                self.advance()
                second = self.term()
                self.expect(")")
                return Pair(first, second)
            self.expect(")")
            return first
        return PVar(self.ident("a proof term"))

    # -- files -------------------------------------------------------------

    def source_file(self) -> SourceFile:
        src = SourceFile(signature=self.signature or Signature())
        self.signature = src.signature
        seen: set[str] = set()
        while self.tok.kind != "eof":
            t = self.tok
            if t.kind == "directive":
                self.advance()
                self.directive(src, t)
            elif self.at("const"):
                self.advance()
                for name in self.name_list():
                    src.signature.constants.add(name)
            elif self.at("function") or self.at("predicate"):
                table = (src.signature.functions if self.advance().text == "function"
                         else src.signature.predicates)
                self.arity_list(table)
            elif self.at("hyp"):
                self.advance()
                name = self.ident("a hypothesis name")
                if name in src.hypotheses:
                    raise ParseError(t.line, t.column, "a fresh hypothesis name", repr(name))
                self.expect(":")
                src.hypotheses[name] = self.formula()
            elif self.at("def"):
                self.advance()
                name = self.ident("a definition name")
                if name in seen:
                    raise ParseError(t.line, t.column, "a fresh definition name", repr(name))
                seen.add(name)
                self.expect(":")
                a = self.formula()
                self.expect(":=")
                body = self.term()
                src.definitions.append(Definition(name, a, body, t.line))
            else:
                self.fail("a declaration, definition or directive")
        for (command, name), line in zip(src.directives, self.directive_lines):
            if name not in seen:
                raise ParseError(line, 1, f"a definition named {name!r} for #{command}")
        return src

    def name_list(self) -> list[str]:
        names = [self.ident()]
        while self.at(","):
            self.advance()
            names.append(self.ident())
        return names

    def arity_list(self, table: dict[str, int]) -> None:
        while True:
            name = self.ident()
            self.expect("/")
            tok = self.tok
            if tok.kind != "int":
                self.fail("an arity")
            self.advance()
            table[name] = int(tok.text)
            if not self.at(","):
                return
            self.advance()

    def directive(self, src: SourceFile, t: Token) -> None:
        word, *rest = t.text[1:].split()
        if word == "mode":
            try:
                src.mode = Mode(rest[0] if rest else "")
            except ValueError:
                raise ParseError(t.line, t.column, "'#mode cd' or '#mode il-bot'", t.text) from None
        elif word in COMMANDS and len(rest) == 1:
            src.directives.append((word, rest[0]))
            self.directive_lines.append(t.line)
        elif word == "reject" and len(rest) == 2:
            try:
                kind = ErrorKind(rest[1])
            except ValueError:
                raise ParseError(t.line, t.column, "an error kind", rest[1]) from None
            try:
                src.definition(rest[0]).expect_error = kind
            except KeyError:
                raise ParseError(t.line, t.column, "a previously defined name", rest[0]) from None
        else:
            raise ParseError(t.line, t.column, "a known directive", t.text)


def parse(source: str) -> SourceFile:
    return Parser(source).source_file()


def parse_formula(text: str, signature: Optional[Signature] = None) -> Formula:
    p = Parser(text, signature)
    a = p.formula()
    p.expect_eof()
    return a


def parse_term(text: str, signature: Optional[Signature] = None) -> ProofTerm:
    p = Parser(text, signature)
    t = p.term()
    p.expect_eof()
    return t


def parse_fo_term(text: str, signature: Optional[Signature] = None) -> FOTerm:
    p = Parser(text, signature)
    m = p.fo_term()
    p.expect_eof()
    return m


def format_source(src: SourceFile) -> str:
    """Render a source file back to text; ``parse(format_source(s))`` gives ``s`` back."""
    from .printer import show_formula, show_proof

    lines = [f"#mode {src.mode.value}"]
    sig = src.signature
    consts = sorted(sig.constants - {DUM.name})
    if consts:
        lines.append("const " + ", ".join(consts))
    if sig.functions:
        lines.append("function " + ", ".join(f"{n}/{k}" for n, k in sig.functions.items()))
    if sig.predicates:
        lines.append("predicate " + ", ".join(f"{n}/{k}" for n, k in sig.predicates.items()))
    for name, a in src.hypotheses.items():
        lines.append(f"hyp {name} : {show_formula(a)}")
    for d in src.definitions:
        lines.append("")
        lines.append(f"def {d.name} : {show_formula(d.formula)}")
        lines.append(f"  := {show_proof(d.term)}")
        if d.expect_error is not None:
            lines.append(f"#reject {d.name} {d.expect_error.value}")
    if src.directives:
        lines.append("")
    for command, name in src.directives:
        lines.append(f"#{command} {name}")
    return "\n".join(lines) + "\n"
