from __future__ import annotations

import pytest
from helpers import ARITH, ARITH_ENV, GOEDEL, GOEDEL_ENV, N, term
from hypothesis import given, settings
from hypothesis import strategies as st

from horco.certificates import Validator
from horco.enumerate import enumerate_terms
from horco.oracles import oracle_rpo
from horco.orderings import FORCO, HORPO, RPO, NotFirstOrder, forco_greater, horpo_greater, is_first_order_rule, rpo_greater
from horco.selftest import ho_setup
from horco.signature import Signature, Status
from horco.terms import FVar, arrow, lam, substitute_many, type_of


def fo(text):
    return term(text, ARITH, ARITH_ENV)


FO_TERMS = enumerate_terms(ARITH, {"x": N, "y": N}, N, 4)


def test_rpo_textbook_example():
    r = rpo_greater(ARITH, fo("plus (s x) y"), fo("s (plus x y)"))
    assert r
    assert Validator(ARITH, ARITH_ENV).check(r.proof)
    assert rpo_greater(ARITH, fo("times (s x) y"), fo("plus (times x y) y"))


def test_rpo_is_irreflexive_and_ignores_variables():
    t = fo("plus (s x) y")
    assert not rpo_greater(ARITH, t, t)
    assert not rpo_greater(ARITH, fo("x"), fo("y"))
    assert not rpo_greater(ARITH, fo("s x"), fo("y"))


def test_rpo_rejects_higher_order_input():
    with pytest.raises(NotFirstOrder):
        rpo_greater(GOEDEL, term("v x u"), term("u"))
    with pytest.raises(NotFirstOrder):
        forco_greater(GOEDEL, term("v x u"), term("u"))


def test_mul_status_permutes_arguments():
    sig = Signature(ARITH.symbols, ARITH.prec_decls, {"plus": Status.MUL})
    assert rpo_greater(sig, fo("plus (s x) y"), fo("plus y x"))
    assert not rpo_greater(ARITH, fo("plus x y"), fo("plus y x"))
    assert not rpo_greater(sig, fo("plus x y"), fo("plus y x"))


def test_forco_rules():
    r = forco_greater(ARITH, fo("plus x y"), fo("y"))
    assert r.proof.rule == "arg"
    r = forco_greater(ARITH, fo("plus (s x) y"), fo("s (plus x y)"))
    assert r and r.proof.rule == "prec"
    r = forco_greater(ARITH, fo("plus (s (s x)) y"), fo("x"))
    assert r and r.proof.rule == "red"
    assert not forco_greater(ARITH, fo("s 0"), fo("s 0"))
    assert Validator(ARITH, ARITH_ENV).check(r.proof)


def test_rpo_and_forco_agree_on_small_terms():
    rpo, forco = RPO(ARITH), FORCO(ARITH)
    for t in FO_TERMS:
        for u in FO_TERMS:
            assert bool(rpo.greater(t, u)) == bool(forco.greater(t, u)) == oracle_rpo(ARITH, t, u)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(FO_TERMS), st.sampled_from(FO_TERMS), st.sampled_from(FO_TERMS[:40]), st.sampled_from(FO_TERMS[:40]))
def test_rpo_is_stable_under_substitution(t, u, a, b):
    if rpo_greater(ARITH, t, u):
        sigma = {"x": a, "y": b}
        assert rpo_greater(ARITH, substitute_many(t, sigma), substitute_many(u, sigma))


def test_horpo_recursor_rule():
    r = horpo_greater(GOEDEL, GOEDEL_ENV, term("rec (s x) u v"), term("v x (rec x u v)"))
    assert r
    used = r.proof.rules_used()
    assert {"horpo-5", "horpo-4", "horpo-1"} <= set(used)
    h = HORPO(GOEDEL, GOEDEL_ENV)
    r = h.greater(term("rec (s x) u v"), term("v x (rec x u v)"))
    assert Validator(GOEDEL, h.supply.env).check(r.proof)


def test_horpo_argument_rule_needs_equal_types():
    assert horpo_greater(GOEDEL, GOEDEL_ENV, term("rec 0 u v"), term("u")).proof.rule == "horpo-1"
    assert not horpo_greater(GOEDEL, GOEDEL_ENV, term("rec x u v"), term("x"))


def test_horpo_abstractions():
    body_t, body_u = term("rec (s x) u v"), term("v x (rec x u v)")
    a = lam("x", N, body_t)
    b = lam("x", N, body_u)
    r = horpo_greater(GOEDEL, GOEDEL_ENV, a, b)
    assert r and r.proof.rule == "horpo-7"
    assert not horpo_greater(GOEDEL, GOEDEL_ENV, a, lam("y", N, body_t))


def test_restricted_application_rule():
    sig, env, _ = ho_setup()
    t = term("v (s x) (h u)", sig, env)
    u = term("v x u", sig, env)
    assert horpo_greater(sig, env, t, u)
    assert not horpo_greater(sig, env, t, u, restrict_app=True)
    assert horpo_greater(sig, env, term("v (s x) u", sig, env), u, restrict_app=True)


def test_horpo_answers_respect_types_and_variables():
    sig, env, types = ho_setup()
    h = HORPO(sig, env)
    v = Validator(sig, h.supply.env)
    positives = 0
    for ty in types:
        ts = enumerate_terms(sig, env, ty, 3)
        for t in ts:
            for u in ts:
                r = h.greater(t, u)
                if r:
                    positives += 1
                    assert type_of(t, env, sig) == type_of(u, env, sig)
                    assert u.fvs <= t.fvs
                    assert v.check(r.proof)
    assert positives > 20


def test_first_order_rule_detection():
    assert is_first_order_rule(ARITH, ARITH_ENV, fo("plus (s x) y"), fo("s (plus x y)"))
    assert not is_first_order_rule(GOEDEL, GOEDEL_ENV, term("rec 0 u v"), term("u"))
    assert not is_first_order_rule(ARITH, {"x": arrow(N, N)}, FVar("x"))
    assert not is_first_order_rule(GOEDEL, GOEDEL_ENV, lam("x", N, FVar("u")))
