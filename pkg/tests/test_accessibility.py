from __future__ import annotations

from itertools import product

from helpers import GOEDEL, GOEDEL_ENV, PROCESS, PROCESS_ENV, B, N, term

from horco.accessibility import (
    AccMode,
    AccSearch,
    acc_greater,
    accessible_args,
    occurs_only_positively,
    pos_of_base,
    pos_signed,
)
from horco.certificates import Validator
from horco.closure import ClosureConfig
from horco.signature import Signature
from horco.terms import App, Arrow, Base, FreshSupply, FVar, SimpleType, Sym, arrow, lam, type_positions

A = Base("A")
MENDLER = Signature({"c": arrow(arrow(B, N), B), "f": arrow(B, B, N)})


def types_up_to(depth: int) -> set[SimpleType]:
    if depth == 0:
        return {A, B}
    smaller = types_up_to(depth - 1)
    return smaller | {Arrow(x, y) for x, y in product(smaller, smaller)}


def test_signed_positions_of_small_types():
    assert pos_signed(B, "+") == {()}
    assert pos_signed(B, "-") == set()
    assert pos_signed(arrow(B, N), "+") == {(2,)}
    assert pos_signed(arrow(B, N), -1) == {(1,)}
    assert pos_of_base(B, arrow(B, N)) == {(1,)}
    assert not occurs_only_positively(N, arrow(arrow(N, N), N))
    assert occurs_only_positively(N, arrow(arrow(N, A), A))
    assert not occurs_only_positively(N, arrow(arrow(arrow(N, A), A), A))


def test_signed_positions_partition_the_leaves():
    tys = types_up_to(2)
    for ty in tys:
        plus, minus = pos_signed(ty, 1), pos_signed(ty, -1)
        leaves = {p for p, sub in type_positions(ty) if isinstance(sub, Base)}
        assert plus & minus == set()
        assert plus | minus == leaves
    assert len(tys) > 30


def test_accessible_arguments():
    assert accessible_args(PROCESS, "sum", AccMode.POSITIVE) == {1}
    assert accessible_args(PROCESS, "seq", AccMode.POSITIVE) == {1, 2}
    assert accessible_args(PROCESS, "sum", AccMode.BASE_ONLY) == set()
    assert accessible_args(MENDLER, "c", AccMode.POSITIVE) == set()
    assert accessible_args(GOEDEL, "rec", AccMode.BASE_ONLY) == {1, 2}
    assert accessible_args(GOEDEL, "rec", AccMode.POSITIVE) == {1, 2}


def test_base_only_and_positive_agree_on_first_order_symbols():
    sig = Signature({"p": arrow(N, N, N), "q": arrow(A, N, B), "z": N})
    for f in sig:
        full = set(range(1, sig.arity(f) + 1))
        assert accessible_args(sig, f, AccMode.BASE_ONLY) == full
        assert accessible_args(sig, f, AccMode.POSITIVE) == full


def test_accessible_subterm_that_is_not_a_subterm():
    env = dict(PROCESS_ENV)
    l = term("seq (sum p) x", PROCESS, env)
    r = acc_greater(PROCESS, env, l, term("sum p", PROCESS, env), App(FVar("p"), FVar("y")))
    assert r and r.proof.rule == ">base"
    assert r.proof.info["vars"] == ("y",)


def test_base_argument_is_accessible():
    env = dict(GOEDEL_ENV)
    l = term("rec (s x) u v", GOEDEL, env)
    r = acc_greater(GOEDEL, env, l, term("s x", GOEDEL, env), FVar("x"))
    assert r and r.proof.info["vars"] == ()


def test_variables_of_the_anchor_cannot_be_introduced():
    env = dict(PROCESS_ENV)
    l = term("seq (sum p) (p y)", PROCESS, env)
    assert not acc_greater(PROCESS, env, l, term("sum p", PROCESS, env), term("p y", PROCESS, env))


def test_mendler_constructor_is_not_accessible():
    env = {"w": arrow(B, N), "z": B}
    l = App(Sym("f"), App(Sym("c"), FVar("w")))
    r = acc_greater(MENDLER, env, l, App(Sym("c"), FVar("w")), App(FVar("w"), FVar("z")))
    assert not r and not r.limited


def test_abstraction_on_the_left():
    # \d. sum p  >  p, opening the binder and then applying p to the new variable
    env = dict(PROCESS_ENV)
    l = term("seq (sum p) x", PROCESS, env)
    a = lam("d", PROCESS_ENV["y"], term("sum p", PROCESS, env))
    r = acc_greater(PROCESS, env, l, a, FVar("p"), budget=6)
    assert r and r.proof.rule == ">lam"
    assert r.proof.premises[0].rule == ">base"


def test_certificates_replay():
    supply = FreshSupply(PROCESS_ENV)
    l = term("seq (sum p) x", PROCESS, PROCESS_ENV)
    search = AccSearch(PROCESS, supply, l, AccMode.POSITIVE)
    r = search.greater(term("sum p", PROCESS, PROCESS_ENV), App(FVar("p"), FVar("y")), 4)
    v = Validator(PROCESS, supply.env, ClosureConfig(acc_mode=AccMode.POSITIVE))
    assert v.check(r.proof)
    v_base = Validator(PROCESS, supply.env, ClosureConfig(acc_mode=AccMode.BASE_ONLY))
    assert not v_base.check(r.proof)


def test_budget_zero_is_limited():
    r = acc_greater(GOEDEL, GOEDEL_ENV, term("s x"), term("s x"), FVar("x"), budget=0)
    assert r.limited
