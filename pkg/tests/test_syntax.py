import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.lark import from_lark
from lark import Lark

from cfx.cfe import Mu, Var
from cfx.errors import CfxError, DuplicateBinder, ExpressionSyntaxError, UnboundPlaceholder
from cfx.regex import EPS, PHI, Alt, Cat, Star, Sym, deriv
from cfx.syntax import GRAMMAR, parse_cfe, parse_regex, parse_word, render, render_word

from tests.corpus import CFE_FIXTURES, E, R

X, Y, Z = Sym("x"), Sym("y"), Sym("z")


def test_parse_regex_precedence():
    assert parse_regex("x*.y*") == Cat(Star(X), Star(Y))
    assert parse_regex("x+y.z") == Alt(X, Cat(Y, Z))
    assert parse_regex("x.y*") == Cat(X, Star(Y))
    assert parse_regex("(x+y)*") == Star(Alt(X, Y))
    assert parse_regex("0+1") == Alt(PHI, EPS)


def test_juxtaposition_is_concatenation():
    assert parse_regex("x y*") == parse_regex("x.y*")


def test_sum_and_concatenation_are_right_associative():
    assert parse_regex("x+y+z") == Alt(X, Alt(Y, Z))
    assert parse_regex("x.y.z") == Cat(X, Cat(Y, Z))


def test_render_uses_minimal_parentheses():
    assert render(deriv(R("(x+y)*"), "x")) == "(1+0).(x+y)*"
    assert render(R("x*.y*")) == "x*.y*"
    assert render(Alt(Alt(X, Y), X)) == "(x+y)+x"
    assert render(Cat(Cat(X, Y), X)) == "(x.y).x"
    assert render(Star(Star(X))) == "x**"


def test_render_mu():
    assert render(E("mu a. x.a+1")) == "mu a. x.a+1"
    assert render(Cat(E("mu a. x.a+1"), Y)) == "(mu a. x.a+1).y"


@pytest.mark.parametrize("text", ["x+", "(x", "x..y", "*", ""])
def test_malformed_regex(text):
    with pytest.raises(ExpressionSyntaxError):
        parse_regex(text)


def test_regex_rejects_mu_and_long_names():
    with pytest.raises(ExpressionSyntaxError):
        parse_regex("mu a. x.a+1")
    with pytest.raises(ExpressionSyntaxError):
        parse_regex("xy")


def test_parse_cfe_binds_placeholders():
    assert parse_cfe("mu a. x.a+1") == Mu("a", Alt(Cat(X, Var("a")), EPS))


def test_parse_cfe_scope_ends_with_the_mu():
    e = parse_cfe("(mu a. x.a+1).a")
    assert e.right == Sym("a")


def test_parse_cfe_desugars_stars():
    assert parse_cfe("x*") == Mu("s0", Alt(Cat(X, Var("s0")), EPS))


def test_star_binders_avoid_used_names():
    e = parse_cfe("mu s0. x*.s0+1")
    assert e == Mu("s0", Alt(Cat(Mu("s1", Alt(Cat(X, Var("s1")), EPS)), Var("s0")), EPS))


def test_parse_cfe_errors():
    with pytest.raises(UnboundPlaceholder):
        parse_cfe("x.abc")
    with pytest.raises(DuplicateBinder):
        parse_cfe("mu a. mu a. a")
    with pytest.raises(ExpressionSyntaxError):
        parse_cfe("mu . x")


def test_words():
    assert parse_word("1") == ""
    assert parse_word(" xy ") == "xy"
    assert render_word("") == "1"
    assert render_word("xy") == "xy"


@pytest.mark.parametrize("text", ["x*.y*", "(x+y)*", "(1+0).(x+y)*", "((x.y)*.x)*", "x+y.z", "0"])
def test_regex_render_roundtrip(text):
    r = R(text)
    assert parse_regex(render(r)) == r


@pytest.mark.parametrize("text", CFE_FIXTURES)
def test_cfe_render_roundtrip(text):
    e = E(text)
    assert parse_cfe(render(e)) == e


@settings(max_examples=200, deadline=None)
@given(from_lark(Lark(GRAMMAR, parser="lalr"), explicit={"NAME": st.sampled_from(["x", "y", "a", "b"])}))
def test_generated_sentences_parse_or_fail_cleanly(text):
    try:
        e = parse_cfe(text)
    except CfxError:
        return
    assert parse_cfe(render(e)) == e
