from __future__ import annotations

import pytest
from helpers import GOEDEL, GOEDEL_ENV, N, T, term
from hypothesis import given, settings
from hypothesis import strategies as st

from horco.enumerate import enumerate_terms
from horco.terms import (
    App,
    ApplicationTypeMismatch,
    Arrow,
    BVar,
    FreshSupply,
    FVar,
    Lam,
    NonArrowApplied,
    Sym,
    UnboundVariable,
    UndeclaredSymbol,
    abstract,
    arrow,
    beta_normalize,
    beta_reducts,
    beta_step,
    eta_normalize,
    instantiate,
    is_algebraic,
    is_beta_normal,
    is_miller_pattern,
    lam,
    open_body,
    positions,
    rename_free,
    replace_at,
    show,
    show_type,
    spine,
    subterm_at,
    substitute,
    substitute_many,
    type_of,
    type_positions,
    uncurry,
)

TERMS_T = enumerate_terms(GOEDEL, GOEDEL_ENV, T, 4)
TERMS_NT = enumerate_terms(GOEDEL, GOEDEL_ENV, arrow(N, T), 4)


def test_arrow_is_right_associative():
    assert arrow(N, T, N) == Arrow(N, Arrow(T, N))
    assert uncurry(arrow(N, arrow(N, T), T)) == ((N, arrow(N, T)), T)
    assert show_type(arrow(arrow(N, T), T)) == "(N -> T) -> T"


def test_type_positions_root_and_sides():
    ps = dict(type_positions(arrow(N, T)))
    assert ps[()] == arrow(N, T)
    assert ps[(1,)] == N and ps[(2,)] == T


def test_size_counts_symbols_variables_and_binders():
    assert term("s (s 0)").size == 3
    assert term("rec (s x) u v").size == 5
    assert lam("y", N, FVar("u")).size == 2


def test_type_of_recursor_application():
    assert type_of(term("rec (s x) u v"), GOEDEL_ENV, GOEDEL) == T
    assert type_of(term("rec x"), GOEDEL_ENV, GOEDEL) == arrow(T, arrow(N, T, T), T)


@pytest.mark.parametrize(
    "t, exc",
    [
        (App(Sym("0"), Sym("0")), NonArrowApplied),
        (App(Sym("s"), FVar("u")), ApplicationTypeMismatch),
        (Sym("nope"), UndeclaredSymbol),
        (FVar("q"), UnboundVariable),
        (BVar(0), UnboundVariable),
    ],
)
def test_type_errors(t, exc):
    with pytest.raises(exc):
        type_of(t, GOEDEL_ENV, GOEDEL)


def test_alpha_equivalent_abstractions_are_equal():
    a = lam("y", N, App(Sym("s"), FVar("y")))
    b = lam("z", N, App(Sym("s"), FVar("z")))
    assert a == b and hash(a) == hash(b)
    assert a != lam("z", T, App(Sym("s"), FVar("z")))


def test_open_and_abstract_are_inverse():
    body = App(App(FVar("v"), BVar(0)), FVar("u"))
    lm = Lam(N, body)
    opened = open_body(lm, "k")
    assert opened == App(App(FVar("v"), FVar("k")), FVar("u"))
    assert abstract(opened, "k") == body
    assert instantiate(body, Sym("0")) == App(App(FVar("v"), Sym("0")), FVar("u"))


def test_substitution_avoids_capture():
    t = lam("y", N, App(FVar("w"), FVar("x")))
    r = substitute(t, "x", FVar("y"))
    assert isinstance(r, Lam)
    assert r.fvs == {"w", "y"}
    assert open_body(r, "fresh") == App(FVar("w"), FVar("y"))


def test_substitute_many_is_simultaneous():
    t = App(App(Sym("plus"), FVar("x")), FVar("y"))
    r = substitute_many(t, {"x": FVar("y"), "y": FVar("x")})
    assert r == App(App(Sym("plus"), FVar("y")), FVar("x"))


def test_beta_reduction():
    redex = App(lam("y", N, App(Sym("s"), FVar("y"))), Sym("0"))
    assert beta_step(redex) == App(Sym("s"), Sym("0"))
    assert not is_beta_normal(redex)
    two = App(App(lam("a", N, lam("b", N, FVar("a"))), Sym("0")), App(Sym("s"), Sym("0")))
    assert beta_normalize(two) == Sym("0")
    assert len(beta_reducts(App(Sym("s"), redex))) == 1


def test_eta_normalize():
    assert eta_normalize(lam("y", N, App(Sym("s"), FVar("y")))) == Sym("s")
    keep = lam("y", N, App(App(FVar("v"), FVar("y")), FVar("u")))
    assert eta_normalize(keep) == keep


def test_miller_patterns():
    F = FVar("F")
    assert is_miller_pattern(lam("y", N, App(F, FVar("y"))))
    assert not is_miller_pattern(lam("y", N, App(F, App(Sym("s"), FVar("y")))))
    assert not is_miller_pattern(lam("y", N, App(App(FVar("G"), FVar("y")), FVar("y"))))


def test_algebraic():
    assert is_algebraic(term("s (s x)"))
    assert not is_algebraic(term("v x u"))
    assert not is_algebraic(lam("y", N, FVar("u")))


def test_positions_and_replacement():
    t = term("rec (s x) u v")
    assert subterm_at(t, (1, 1, 2)) == term("s x")
    assert subterm_at(t, (1, 1, 2, 2)) == FVar("x")
    r = replace_at(t, (1, 1, 2), Sym("0"), GOEDEL_ENV, GOEDEL)
    assert r == term("rec 0 u v")
    with pytest.raises(Exception):
        replace_at(t, (1, 1, 2), FVar("u"), GOEDEL_ENV, GOEDEL)


def test_fresh_supply_avoids_and_records():
    fs = FreshSupply({"x#1": T})
    a = fs.fresh("x", N)
    assert a != "x#1" and fs.env[a] == N
    b = fs.fresh("x", N, avoid={a})
    assert b not in (a, "x#1") and fs.env[b] == N


def test_show_uses_binder_names():
    t = lam("y", N, App(App(FVar("v"), FVar("y")), FVar("u")))
    assert show(t) == "\\y. v y u"
    assert show(t, annotate=True) == "\\y:N. v y u"


def test_spine():
    head, args = spine(term("rec (s x) u v"))
    assert head == Sym("rec") and len(args) == 3


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(TERMS_T + TERMS_NT))
def test_every_position_round_trips_through_replace(t):
    for p in positions(t):
        s = subterm_at(t, p)
        if s.loose == 0:
            assert replace_at(t, p, s, GOEDEL_ENV, GOEDEL) == t


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(TERMS_T), st.sampled_from(enumerate_terms(GOEDEL, GOEDEL_ENV, N, 3)))
def test_substitution_preserves_types(t, w):
    assert type_of(substitute_many(t, {"x": w}), GOEDEL_ENV, GOEDEL) == T


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(TERMS_T + TERMS_NT))
def test_renaming_is_invertible(t):
    there = rename_free(t, {"x": "x'", "u": "u'"})
    assert rename_free(there, {"x'": "x", "u'": "u"}) == t
