import pytest

from cfx.cfe import (
    Mu, Var, binders, binding_subst, cfe_nullable, check_well_formed, enumerate_words,
    free_placeholders, is_guarded, substitute, subterm_list, subterms, unfold,
)
from cfx.errors import DuplicateBinder, NotAMu, UnboundPlaceholder
from cfx.regex import EPS, PHI, Alt, Cat, Sym

from tests.corpus import (
    ANY, CFE_FIXTURES, DYCK, GUARDED, INNER_LEFT_REC, LEFT_REC, NESTED, NESTED_GUARDED,
    NONPRODUCTIVE, UNGUARDED_XNYN, XNYN, XSTAR, E,
)

X, Y = Sym("x"), Sym("y")


def test_well_formed_accepts_closed_expressions():
    for text in CFE_FIXTURES:
        check_well_formed(E(text))


def test_unbound_placeholder():
    with pytest.raises(UnboundPlaceholder) as exc_info:
        check_well_formed(Cat(X, Var("a")))
    assert exc_info.value.name == "a"


def test_duplicate_binder_in_separate_branches():
    inner = Mu("a", Alt(Cat(X, Var("a")), EPS))
    with pytest.raises(DuplicateBinder):
        check_well_formed(Cat(inner, inner))


def test_substitute_stops_at_shadowing_binder():
    shadow = Mu("a", Var("a"))
    assert substitute(Cat(Var("a"), shadow), "a", X) == Cat(X, shadow)


def test_unfold():
    e = E(XSTAR)
    assert unfold(e) == Alt(Cat(X, e), EPS)
    with pytest.raises(NotAMu):
        unfold(X)


def test_enumerate_words_examples():
    assert enumerate_words(E(XNYN), 4) == {"", "xy", "xxyy"}
    assert enumerate_words(E(DYCK), 4) == {"", "xy", "xxyy", "xyxy"}
    assert enumerate_words(E(NONPRODUCTIVE), 5) == set()
    assert enumerate_words(E(LEFT_REC), 3) == {"", "x", "xx", "xxx"}


def test_enumerate_words_respects_the_bound():
    assert all(len(w) <= 3 for w in enumerate_words(E(ANY), 3))
    assert len(enumerate_words(E(ANY), 3)) == 1 + 2 + 4 + 8


@pytest.mark.parametrize("text", CFE_FIXTURES)
def test_unfold_preserves_language(text):
    e = E(text)
    if not isinstance(e, Mu):
        return
    assert enumerate_words(unfold(e), 5) == enumerate_words(e, 5)


def test_nullable():
    assert cfe_nullable(E(XNYN))
    assert not cfe_nullable(E(NONPRODUCTIVE))
    assert not cfe_nullable(E("x.(mu a. y.a+1)"))
    assert cfe_nullable(E(INNER_LEFT_REC))


@pytest.mark.parametrize("text", CFE_FIXTURES)
def test_nullable_agrees_with_words(text):
    e = E(text)
    assert cfe_nullable(e) == ("" in enumerate_words(e, 0))


@pytest.mark.parametrize("text", GUARDED)
def test_guarded_fixtures(text):
    assert is_guarded(E(text))


@pytest.mark.parametrize("text", [LEFT_REC, NONPRODUCTIVE, UNGUARDED_XNYN, INNER_LEFT_REC, NESTED])
def test_unguarded_fixtures(text):
    assert not is_guarded(E(text))


def test_guards_must_be_distinct():
    assert not is_guarded(E("mu a. x.a+x+1"))
    assert not is_guarded(E("mu a. x.a+x.y"))
    assert is_guarded(E("mu a. x.a+y.a"))


def test_subterms_are_post_order():
    e = E(XSTAR)
    order = subterm_list(e)
    assert order[-1] == e
    assert order.index(X) < order.index(Cat(X, Var("a")))
    assert subterms(e) == {X, Var("a"), Cat(X, Var("a")), EPS, Alt(Cat(X, Var("a")), EPS), e}


def test_binders():
    e = E(NESTED_GUARDED)
    found = binders(e)
    assert set(found) == {"a", "b"}
    assert found["a"] == e


def test_binding_closes_nested_binders():
    e = E("mu a. (mu b. a.b)")
    outer = e
    inner_closed = Mu("b", Cat(outer, Var("b")))
    binding = binding_subst(e)
    assert binding["a"] == outer
    assert binding["b"] == inner_closed
    assert "a" in binding and len(binding) == 2


def test_free_placeholders():
    assert free_placeholders(Cat(X, Var("a"))) == {"a"}
    assert free_placeholders(Mu("a", Cat(Var("a"), Var("b")))) == {"b"}
    assert free_placeholders(E(XNYN)) == set()


@pytest.mark.parametrize("text", CFE_FIXTURES)
def test_binding_closes_every_subterm(text):
    e = E(text)
    binding = binding_subst(e)
    for name in binding.mapping:
        assert free_placeholders(binding[name]) == set()
    for f in subterms(e):
        assert free_placeholders(binding.apply(f)) == set()


def test_binding_images_repeat_binder_names():
    e = E(INNER_LEFT_REC)
    image = binding_subst(e)["b"]
    assert image == Mu("b", Cat(Var("b"), e))
    with pytest.raises(DuplicateBinder):
        check_well_formed(image)


def test_binding_is_idempotent():
    for text in CFE_FIXTURES:
        binding = binding_subst(E(text))
        for name in binding.mapping:
            image = binding[name]
            assert binding.apply(image) == image


def test_phi_has_no_words():
    assert enumerate_words(PHI, 5) == set()
