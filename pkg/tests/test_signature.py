from __future__ import annotations

import pytest
from helpers import ARITH, GOEDEL, N
from hypothesis import given
from hypothesis import strategies as st

from horco.signature import Prec, PrecDecl, Signature, Status
from horco.terms import UndeclaredSymbol, arrow


def test_precedence_is_transitive():
    assert ARITH.prec_compare("times", "0") is Prec.GREATER
    assert ARITH.prec_compare("0", "times") is Prec.LESS
    assert ARITH.prec_compare("s", "s") is Prec.EQUIVALENT


def test_unrelated_symbols_are_incomparable():
    assert GOEDEL.prec_compare("s", "0") is Prec.INCOMPARABLE


def test_equivalence_merges_classes():
    sig = Signature({"f": N, "g": N, "h": N}, [("f", "~", "g"), ("g", ">", "h")])
    assert sig.prec_compare("f", "h") is Prec.GREATER
    assert sig.equivalent("g", "f")
    assert sig.validate() == []


def test_default_status_is_left_to_right():
    assert GOEDEL.status_of("s") is Status.LEX_LR
    assert GOEDEL.arity("rec") == 3


def test_cycle_is_reported():
    sig = Signature({"f": N, "g": N}, [("f", ">", "g"), ("g", ">", "f")])
    kinds = [v.kind for v in sig.validate()]
    assert "PrecedenceCycle" in kinds


def test_status_mismatch_across_equivalent_symbols():
    sig = Signature({"f": N, "g": N}, [("f", "~", "g")], {"f": Status.MUL})
    assert [v.kind for v in sig.validate()] == ["StatusMismatch"]


def test_undeclared_symbols():
    sig = Signature({"f": N}, [("f", ">", "g")], {"h": Status.MUL})
    assert [v.kind for v in sig.validate()] == ["UndeclaredSymbol", "UndeclaredSymbol"]
    with pytest.raises(UndeclaredSymbol):
        sig.prec_compare("f", "g")


def test_bad_operator():
    with pytest.raises(ValueError):
        PrecDecl("f", "<", "g")


@given(st.lists(st.tuples(st.sampled_from("abcde"), st.sampled_from("abcde")), max_size=6))
def test_acyclic_precedence_is_a_strict_order(edges):
    # only add edges going "down" the alphabet, so the graph is acyclic
    decls = [(a, ">", b) for a, b in edges if a < b]
    sig = Signature({c: arrow(N, N) for c in "abcde"}, decls)
    assert sig.validate() == []
    for f in "abcde":
        assert sig.prec_compare(f, f) is Prec.EQUIVALENT
        for g in "abcde":
            if sig.greater(f, g):
                assert sig.prec_compare(g, f) is Prec.LESS
                for h in "abcde":
                    if sig.greater(g, h):
                        assert sig.greater(f, h)
