import pytest
from hypothesis import given, strategies as st

from brouwer.formula import (
    BOTTOM, And, Impl, MRule, Or, ParseError, Substitution, Var, apply_substitution,
    free_vars, is_positive, parse_formula, print_formula, size,
)

from conftest import formulas

p, q, r = Var("p"), Var("q"), Var("r")


def test_parse_examples():
    assert parse_formula("(p -> q) -> (p | r)") == Impl(Impl(p, q), Or(p, r))
    assert parse_formula("false") == BOTTOM
    assert parse_formula("~p") == Impl(p, BOTTOM)


def test_precedence_and_associativity():
    assert parse_formula("p -> q -> r") == Impl(p, Impl(q, r))
    assert parse_formula("p | q & r") == Or(p, And(q, r))
    assert parse_formula("p & q | r -> p") == Impl(Or(And(p, q), r), p)
    assert parse_formula("p & q & r") == And(And(p, q), r)
    assert parse_formula("~~p") == Impl(Impl(p, BOTTOM), BOTTOM)
    assert parse_formula("~p & q") == And(Impl(p, BOTTOM), q)


@pytest.mark.parametrize("text,pos", [("p & & q", 4), ("p # q", 2), ("(p -> q", 7), ("", 0)])
def test_parse_errors_carry_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_formula(text)
    assert info.value.pos == pos


def test_printing():
    assert print_formula(parse_formula("p -> (q -> r)")) == "p->(q->r)"
    assert print_formula(parse_formula("(p -> q) -> r")) == "(p->q)->r"
    assert print_formula(parse_formula("p | (q | r)")) == "p|(q|r)"
    assert print_formula(parse_formula("(p | q) | r")) == "p|q|r"
    assert print_formula(parse_formula("~p | ~~p")) == "~p|~~p"
    assert print_formula(parse_formula("(p | q) & r")) == "(p|q)&r"


@given(formulas())
def test_round_trip(f):
    assert parse_formula(print_formula(f)) == f


def test_free_vars_and_positivity():
    assert free_vars(parse_formula("(p -> q) -> (p | r)")) == ("p", "q", "r")
    assert free_vars(BOTTOM) == ()
    assert free_vars(Impl(p, p)) == ("p",)
    assert is_positive(parse_formula("(p -> q) -> (p | r)"))
    assert not is_positive(Impl(p, BOTTOM))
    assert is_positive(And(p, q))
    assert size(parse_formula("(p -> q) -> (p | r)")) == 3


def test_substitution_example():
    s = Substitution({"p": BOTTOM, "q": Impl(q, q)})
    assert apply_substitution(s, Or(p, q)) == Or(BOTTOM, Impl(q, q))
    assert Substitution()(Or(p, q)) == Or(p, q)
    assert not s.positive


@given(formulas(), formulas(), formulas(), formulas())
def test_composition(f, a, b, c):
    s1 = Substitution({"p": a, "q": b})
    s2 = Substitution({"q": c, "r": a})
    assert s2(s1(f)) == s1.compose(s2)(f)


@given(formulas(bottom=False), formulas(bottom=False), formulas(bottom=False))
def test_positive_substitution_preserves_positivity(f, a, b):
    s = Substitution({"p": a, "r": b})
    assert s.positive and is_positive(s(f))


@given(formulas(), formulas())
def test_substitution_json_round_trip(a, b):
    s = Substitution({"p": a, "q": b})
    assert Substitution.from_json(s.to_json()) == s


def test_rules():
    r1 = MRule.from_text("p | q / p, q")
    assert r1 == MRule((Or(p, q),), (q, p))
    assert MRule.from_json(r1.to_json()) == r1
    assert MRule.from_text("/") == MRule()
    assert MRule.from_text("∅ / p").premises == ()
    assert MRule((p, p), ()).premises == (p,)
    assert str(MRule()) == "∅ / ∅"
    with pytest.raises(ParseError):
        MRule.from_text("p, q")
