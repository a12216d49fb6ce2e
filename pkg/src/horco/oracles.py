"""Direct, unoptimised reference implementations used to cross-check the engines."""

from __future__ import annotations

from collections import Counter
from collections.abc import Callable, Sequence
from itertools import combinations

from .orderings import NotFirstOrder
from .signature import Prec, Signature, Status
from .terms import Sym, Term, is_algebraic, spine


def oracle_rpo(sig: Signature, t: Term, u: Term) -> bool:
    """Textbook recursive path ordering by plain recursion, no memo, no certificates."""
    for s in (t, u):
        if not is_algebraic(s) or s.loose:
            raise NotFirstOrder(repr(s))
    return _rpo(sig, t, u)


def _rpo(sig: Signature, t: Term, u: Term) -> bool:
    f, ts = spine(t)
    if not isinstance(f, Sym):
        return False
    if any(ti == u or _rpo(sig, ti, u) for ti in ts):
        return True
    g, us = spine(u)
    if not isinstance(g, Sym):
        return False
    p = sig.prec_compare(f.name, g.name)
    if p is Prec.GREATER:
        return all(_rpo(sig, t, uj) for uj in us)
    if p is Prec.EQUIVALENT:
        def gt(a: Term, b: Term) -> bool:
            return _rpo(sig, a, b)

        status = sig.status_of(f.name)
        if status is Status.MUL:
            ok = oracle_mul(gt, ts, us)
        else:
            a, b = (ts, us) if status is Status.LEX_LR else (ts[::-1], us[::-1])
            ok = _lex(gt, a, b)
        return ok and all(_rpo(sig, t, uj) for uj in us)
    return False


def _lex(gt: Callable[[Term, Term], bool], a: Sequence[Term], b: Sequence[Term]) -> bool:
    for x, y in zip(a, b):
        if x != y:
            return gt(x, y)
    return False


def oracle_mul(gt: Callable, left: Sequence, right: Sequence) -> bool:
    """Multiset extension by brute force over every way of splitting ``left``.

    For each non-empty set of indices ``X`` removed from ``left``, what is
    left over must be contained in ``right`` and every element of ``right``
    not accounted for must be below some removed element.
    """
    left, right = list(left), list(right)
    for k in range(1, len(left) + 1):
        for idx in combinations(range(len(left)), k):
            removed = [left[i] for i in idx]
            kept = Counter(left[i] for i in range(len(left)) if i not in idx)
            rest = Counter(right)
            if kept - rest:
                continue
            added = rest - kept
            if all(any(bool(gt(x, y)) for x in removed) for y in added.elements()):
                return True
    return False
