import pytest
from hypothesis import given

from cdkernel import (Atom, BOT, CDAxiom, ErrorKind, Forall, Imp, Lam, Mode,
                      Or, ParseError, PVar, Var, alpha_equal, parse,
                      parse_formula, parse_term, show)
from cdkernel.generate import SIGNATURE
from cdkernel.parser import format_source, parse_fo_term, tokenize
from cdkernel.syntax import (And, Const, Exists, ExElim, FOApp, FOLam, Func,
                             Proj, Signature)

from conftest import CORPUS, SIG, fml, term
from strategies import formulas, typed_terms

P = lambda m: Atom("P", (m,))  # noqa: E731
a = Var("a")


def test_lambda():
    assert parse_term("fun (x : P) => x") == Lam("x", Atom("P"), PVar("x"))


def test_axiom_constant():
    t = parse_term("D[forall a. (P(a) | Q) -> (forall a. P(a)) | Q]")
    assert t == CDAxiom(Imp(Forall("a", Or(P(a), Atom("Q"))), Or(Forall("a", P(a)), Atom("Q"))))


def test_injection_needs_an_annotation():
    with pytest.raises(ParseError) as info:
        parse_term("inl t")
    e = info.value
    assert e.expected.startswith("'['")
    assert (e.line, e.column) == (1, 5)
    assert str(e).startswith("1:5: expected '['")


def test_formula_precedence():
    assert fml("~P(a) & Q | T -> Q") == Imp(Or(And(Imp(P(a), BOT), Atom("Q")), Atom("T")), Atom("Q"))
    assert fml("Q -> T -> Q") == Imp(Atom("Q"), Imp(Atom("T"), Atom("Q")))
    assert fml("Q & T & Q") == And(Atom("Q"), And(Atom("T"), Atom("Q")))
    # quantifiers bind tightly: the scope is the next unary formula
    assert fml("forall a. P(a) | Q") == Or(Forall("a", P(a)), Atom("Q"))
    assert fml("exists a. ~P(a)") == Exists("a", Imp(P(a), BOT))
    assert fml("forall a. forall b. R(a, b)") == Forall("a", Forall("b", Atom("R", (a, Var("b")))))


def test_first_order_terms():
    assert parse_fo_term("f(g(c, a))", SIG) == Func("f", (Func("g", (Const("c"), a)),))
    assert parse_fo_term("dum", SIG) == Const("dum")
    assert parse_fo_term("zz", SIG) == Var("zz")
    with pytest.raises(ParseError):
        parse_fo_term("f(c, c)", SIG)
    with pytest.raises(ParseError):
        parse_formula("P(c, c)", SIG)


def test_term_grammar():
    t = term("fun (h : forall a. P(a)) => (h @ c, h @ f(c)).1")
    assert isinstance(t.body, Proj) and t.body.index == 1
    t = term("unpack e as (a, x) in g @ a x")
    assert isinstance(t, ExElim) and t.body == term("(g @ a) x")
    assert term("gen a => h @ a") == FOLam("a", FOApp(PVar("h"), a))
    assert term("(x : Q)") == PVar("x", Atom("Q"))
    assert term("f x y") == term("(f x) y")


def test_binders_cannot_reuse_declared_symbols():
    with pytest.raises(ParseError):
        parse_formula("forall c. P(c)", SIG)
    with pytest.raises(ParseError):
        parse_term("gen f => x", SIG)


def test_comments_and_positions():
    toks = tokenize("-- a comment\n  fun (x : P) => x -- trailing\n")
    assert (toks[0].text, toks[0].line, toks[0].column) == ("fun", 2, 3)
    with pytest.raises(ParseError) as info:
        parse("#mode cd\npredicate P/0\ndef d : P :=\n  fun (x : P) => )\n")
    assert (info.value.line, info.value.column) == (4, 18)


def test_source_file_structure():
    src = parse("""#mode il-bot
const k
function h/2
predicate W/1
hyp g : W(k)
def one : W(k) := g
def two : bot := F
#reject two Mismatch
#normalize one
""")
    assert src.mode is Mode.IL_BOT
    assert src.signature.constants == {"k", "dum"}
    assert src.signature.functions == {"h": 2}
    assert src.hypotheses == {"g": Atom("W", (Const("k"),))}
    assert src.definition("two").expect_error is ErrorKind.MISMATCH
    assert [d.name for d in src.selected("normalize")] == ["one"]
    assert [d.name for d in src.selected("check")] == ["one"]


def test_undeclared_symbols_are_parse_errors():
    # an undeclared lowercase name is a free first-order variable
    assert parse("predicate P/1\ndef d : P(k) := x\n").definitions[0].formula == P(Var("k"))
    with pytest.raises(ParseError):
        parse("predicate P/1\ndef d : Z(k) := x\n")
    with pytest.raises(ParseError):
        parse("predicate P/1\ndef d : P(k, k) := x\n")
    with pytest.raises(ParseError):
        parse("#reject missing Mismatch\n")
    with pytest.raises(ParseError):
        parse("#mode classical\n")


def test_print_parse_round_trip_on_corpus():
    files = sorted(CORPUS.glob("*.cd"))
    assert files
    for path in files:
        src = parse(path.read_text())
        again = parse(format_source(src))
        assert again.mode == src.mode
        assert again.hypotheses == src.hypotheses
        assert again.directives == src.directives
        assert len(again.definitions) == len(src.definitions)
        for d1, d2 in zip(src.definitions, again.definitions):
            assert d1.name == d2.name and d1.expect_error == d2.expect_error
            assert alpha_equal(d1.formula, d2.formula) and alpha_equal(d1.term, d2.term)
            assert d1.term == d2.term
        assert format_source(again) == format_source(src)


@given(formulas)
def test_formula_round_trip(f):
    sig = Signature({"c"}, {"f": 1, "g": 2}, {"P": 1, "Q": 0, "R": 2})
    assert parse_formula(show(f), sig) == f


@given(typed_terms)
def test_term_round_trip(pair):
    t, a = pair
    assert parse_term(show(t), SIGNATURE) == t
    assert parse_formula(show(a), SIGNATURE) == a
