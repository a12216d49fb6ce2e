"""Exhaustive enumeration of well-typed terms, for property checks."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from functools import lru_cache
from math import comb

from .terms import Arrow, Base, BVar, FVar, Lam, SimpleType, Sym, Term, mk_app, show, uncurry

DEFAULT_CAP = 8


class CapExceeded(ValueError):
    pass


def _compositions(total: int, parts: int) -> list[tuple[int, ...]]:
    """Ordered ways to write ``total`` as ``parts`` positive integers."""
    if parts == 0:
        return [()] if total == 0 else []
    out = []
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return out


class _Enumerator:
    def __init__(self, sig: Mapping[str, SimpleType], env: Mapping[str, SimpleType]):
        self.heads: list[tuple[Term, SimpleType]] = [(Sym(f), ty) for f, ty in sorted(sig.items())]
        self.heads += [(FVar(x), ty) for x, ty in sorted(env.items())]
        self.memo: dict[tuple[SimpleType, int, tuple[SimpleType, ...]], list[Term]] = {}

    def exact(self, ty: SimpleType, size: int, ctx: tuple[SimpleType, ...]) -> list[Term]:
        """Beta-normal terms of type ``ty`` and exactly ``size`` nodes; ``ctx[0]`` is the innermost binder."""
        key = (ty, size, ctx)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out: list[Term] = []
        if size >= 1:
            heads = self.heads + [(BVar(i), bty) for i, bty in enumerate(ctx)]
            for head, hty in heads:
                doms: list[SimpleType] = []
                cur = hty
                while True:
                    if cur == ty:
                        self._spines(head, doms, size - 1, ctx, out)
                    if not isinstance(cur, Arrow):
                        break
                    doms.append(cur.dom)
                    cur = cur.cod
            if isinstance(ty, Arrow) and size >= 2:
                for body in self.exact(ty.cod, size - 1, (ty.dom,) + ctx):
                    out.append(Lam(ty.dom, body, "x"))
        self.memo[key] = out
        return out

    def _spines(self, head: Term, doms: Sequence[SimpleType], budget: int, ctx, out: list[Term]) -> None:
        for sizes in _compositions(budget, len(doms)):
            choices = [self.exact(d, s, ctx) for d, s in zip(doms, sizes)]
            if any(not c for c in choices):
                continue
            self._product(head, choices, 0, [], out)

    def _product(self, head, choices, k, acc, out) -> None:
        if k == len(choices):
            out.append(mk_app(head, acc))
            return
        for a in choices[k]:
            acc.append(a)
            self._product(head, choices, k + 1, acc, out)
            acc.pop()


def enumerate_terms(
    sig: Mapping[str, SimpleType],
    env: Mapping[str, SimpleType],
    target_type: SimpleType,
    max_size: int,
    cap: int = DEFAULT_CAP,
) -> list[Term]:
    """Every beta-normal term of ``target_type`` with at most ``max_size`` nodes.

    Symbols and the variables of ``env`` are the available heads.  Terms are
    de Bruijn, hence alpha-canonical, and come sorted by size then printed form.
    """
    if max_size > cap:
        raise CapExceeded(f"size {max_size} exceeds the cap {cap}")
    en = _Enumerator(sig, env)
    out: list[Term] = []
    for n in range(1, max_size + 1):
        out.extend(sorted(en.exact(target_type, n, ()), key=show))
    return out


def count_terms(sig: Mapping[str, SimpleType], env: Mapping[str, SimpleType], target: Base, max_size: int) -> int:
    """Number of terms of base type ``target`` and size at most ``max_size``.

    Only for signatures whose symbols take base-type arguments.  Counted by a
    recurrence on sizes, independently of :func:`enumerate_terms`.
    """
    heads = [uncurry(ty) for ty in list(sig.values()) + list(env.values())]
    for doms, _ in heads:
        if not all(isinstance(d, Base) for d in doms):
            raise ValueError("count_terms needs a first-order signature")

    @lru_cache(maxsize=None)
    def exact(b: Base, n: int) -> int:
        if n <= 0:
            return 0
        total = 0
        for doms, cod in heads:
            if cod == b:
                total += seq(doms, n - 1)
        return total

    @lru_cache(maxsize=None)
    def seq(doms: tuple[Base, ...], n: int) -> int:
        if not doms:
            return 1 if n == 0 else 0
        return sum(exact(doms[0], k) * seq(doms[1:], n - k) for k in range(1, n + 1))

    return sum(exact(target, n) for n in range(1, max_size + 1))


def unary_count(max_size: int, constants: int) -> int:
    """Closed form for one unary symbol plus ``constants`` nullary heads: ``constants * max_size``."""
    return constants * max_size if max_size > 0 else 0


def binary_tree_count(n_nodes: int) -> int:
    """Catalan number: full binary trees with ``n_nodes`` internal nodes."""
    return comb(2 * n_nodes, n_nodes) // (n_nodes + 1)
