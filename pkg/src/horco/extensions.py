"""Lexicographic, multiset and status extensions of an arbitrary comparator.

A comparator is any callable ``cmp(a, b) -> Answer``.  "Equal" inside the
extensions always means alpha-equivalence, i.e. structural equality.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Callable, Iterator, Sequence
from itertools import product

from .proof import NO, Answer, Derivation, SeqGreater, StatGreater, no_or_limited, yes
from .signature import Prec, Signature, Status
from .terms import Term

Comparator = Callable[[Term, Term], Answer]


def lex_ext(
    cmp: Comparator,
    left: Sequence[Term],
    right: Sequence[Term],
    direction: str = "lr",
    *,
    rel: str = "?",
    anchor: Term | None = None,
) -> Answer:
    """Lexicographic extension scanning left-to-right (``lr``) or right-to-left (``rl``).

    The first non-equal pair decides.  Running out of one sequence before any
    strict difference is a No, whatever the lengths.
    """
    if direction not in ("lr", "rl"):
        raise ValueError(direction)
    left, right = tuple(left), tuple(right)
    n, m = len(left), len(right)
    for k in range(min(n, m)):
        i, j = (k, k) if direction == "lr" else (n - 1 - k, m - 1 - k)
        a, b = left[i], right[j]
        if a == b:
            continue
        r = cmp(a, b)
        if not r:
            return r
        concl = SeqGreater(f"lex-{direction}", rel, left, right, anchor)
        return yes(Derivation("lex", concl, (r.proof,), {"index": (i + 1, j + 1)}))
    return NO


def _kept_choices(common: Counter) -> Iterator[Counter]:
    """Sub-multisets of ``common``, largest first."""
    items = list(common.items())
    ranges = [range(c, -1, -1) for _, c in items]
    choices = []
    for counts in product(*ranges):
        choices.append(Counter({t: c for (t, _), c in zip(items, counts) if c}))
    choices.sort(key=lambda k: -sum(k.values()))
    yield from choices


def mul_ext(
    cmp: Comparator,
    left: Sequence[Term],
    right: Sequence[Term],
    *,
    rel: str = "?",
    anchor: Term | None = None,
) -> Answer:
    """Dershowitz-Manna multiset extension.

    Searches for a non-empty ``X`` taken out of ``left`` and a ``Y`` with
    ``right = (left - X) + Y`` such that each element of ``Y`` is dominated
    by some element of ``X``.  The elements kept on both sides are chosen by
    backtracking, maximal choice first.
    """
    left, right = tuple(left), tuple(right)
    ca, cb = Counter(left), Counter(right)
    cache: dict[tuple[Term, Term], Answer] = {}
    limited = False

    def compare(x: Term, y: Term) -> Answer:
        key = (x, y)
        if key not in cache:
            cache[key] = cmp(x, y)
        return cache[key]

    for kept in _kept_choices(ca & cb):
        removed = ca - kept
        if not removed:
            continue
        added = cb - kept
        doms, proofs = [], []
        for y in added.elements():
            for x in removed:
                r = compare(x, y)
                if r:
                    doms.append(x)
                    proofs.append(r.proof)
                    break
                limited |= r.limited
            else:
                break
        else:
            concl = SeqGreater("mul", rel, left, right, anchor)
            info = {
                "removed": tuple(removed.elements()),
                "added": tuple(added.elements()),
                "dominators": tuple(doms),
            }
            return yes(Derivation("mul", concl, tuple(proofs), info))
    return no_or_limited(limited)


def status_compare(
    cmp: Comparator,
    sig: Signature,
    f: str,
    left: Sequence[Term],
    g: str,
    right: Sequence[Term],
    *,
    rel: str = "?",
    anchor: Term | None = None,
) -> Answer:
    """``(f, left) >stat (g, right)``: precedence first, then ``f``'s status."""
    p = sig.prec_compare(f, g)
    if p is Prec.GREATER:
        concl = StatGreater(rel, f, tuple(left), g, tuple(right), anchor)
        return yes(Derivation("prec-edge", concl, (), {"f": f, "g": g}))
    if p is not Prec.EQUIVALENT:
        return NO
    return extend(cmp, sig.status_of(f), left, right, rel=rel, anchor=anchor)


def extend(
    cmp: Comparator,
    status: Status,
    left: Sequence[Term],
    right: Sequence[Term],
    *,
    rel: str = "?",
    anchor: Term | None = None,
) -> Answer:
    if status is Status.MUL:
        return mul_ext(cmp, left, right, rel=rel, anchor=anchor)
    direction = "rl" if status is Status.LEX_RL else "lr"
    return lex_ext(cmp, left, right, direction, rel=rel, anchor=anchor)


def first_yes(alternatives: Sequence[Callable[[], Answer]]) -> Answer:
    limited = False
    for alt in alternatives:
        r = alt()
        if r:
            return r
        limited |= r.limited
    return no_or_limited(limited)
