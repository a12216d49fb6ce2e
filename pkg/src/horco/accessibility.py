"""Signed positions in types, accessible arguments and the accessibility ordering."""

from __future__ import annotations

import enum
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from itertools import product

from .proof import LIMITED, NO, Answer, Derivation, Greater, no_or_limited, yes
from .signature import Signature
from .terms import (
    App,
    Arrow,
    Base,
    FreshSupply,
    FVar,
    Lam,
    Position,
    SimpleType,
    Sym,
    Term,
    beta_reducts,
    mk_app,
    open_body,
    spine,
    type_of,
    type_positions,
    uncurry,
)

# How far (>red) chases beta-reducts of one intermediate term.
RED_DEPTH = 3


class AccMode(enum.Enum):
    BASE_ONLY = "base"
    POSITIVE = "positive"


def pos_of_base(base: Base | str, ty: SimpleType) -> set[Position]:
    """Positions of the occurrences of ``base`` in ``ty``."""
    if isinstance(base, str):
        base = Base(base)
    return {p for p, sub in type_positions(ty) if sub == base}


def pos_signed(ty: SimpleType, sign: int | str) -> set[Position]:
    """Positive (``+``/``1``) or negative (``-``/``-1``) positions of ``ty``.

    Base types sit at a positive position only; the sign flips on the left
    of an arrow.
    """
    s = {"+": 1, "-": -1}.get(sign, sign) if isinstance(sign, str) else sign
    if s not in (1, -1):
        raise ValueError(f"bad sign {sign!r}")
    if isinstance(ty, Base):
        return {()} if s == 1 else set()
    return {(1,) + p for p in pos_signed(ty.dom, -s)} | {(2,) + p for p in pos_signed(ty.cod, s)}


def occurs_only_positively(base: Base, ty: SimpleType) -> bool:
    return pos_of_base(base, ty) <= pos_signed(ty, 1)


def accessible_args(sig: Mapping[str, SimpleType], f: str, mode: AccMode) -> frozenset[int]:
    """1-based indices of the accessible arguments of ``f``.

    Types are fully uncurried, so the codomain is always a base type.
    """
    doms, cod = uncurry(sig[f])
    if mode is AccMode.BASE_ONLY:
        return frozenset(i for i, t in enumerate(doms, 1) if isinstance(t, Base))
    return frozenset(i for i, t in enumerate(doms, 1) if occurs_only_positively(cod, t))


def symbol_application(t: Term, sig: Mapping[str, SimpleType]) -> tuple[str, tuple[Term, ...]] | None:
    """``(g, args)`` when ``t`` is a symbol applied to all its arguments."""
    head, args = spine(t)
    if isinstance(head, Sym) and head.name in sig and len(args) == len(uncurry(sig[head.name])[0]):
        return head.name, args
    return None


def base_step_ok(
    sig: Mapping[str, SimpleType], mode: AccMode, g: str, i: int, a_i: Term, a_i_type: SimpleType
) -> tuple[SimpleType, ...] | None:
    """Types of the extra variables (>base) may apply ``a_i`` to, or None.

    ``a_i`` must be of type ``Bs -> B`` with ``B`` the codomain of ``g``; a
    plain base-type argument (the only kind accessible in BASE_ONLY mode) is
    taken as it is.
    """
    if i not in accessible_args(sig, g, mode):
        return None
    if isinstance(a_i_type, Base):
        return ()
    doms, cod = uncurry(a_i_type)
    if cod != uncurry(sig[g])[1]:
        return None
    return doms


@dataclass
class AccSearch:
    """One accessibility query family anchored at ``anchor`` (the ``l`` of ``>^l``)."""

    sig: Signature
    supply: FreshSupply
    anchor: Term
    mode: AccMode = AccMode.POSITIVE
    memo: dict[tuple[Term, Term, int], Answer] = field(default_factory=dict)

    def type_of(self, t: Term) -> SimpleType:
        return type_of(t, self.supply.env, self.sig)

    def greater(self, a: Term, b: Term, budget: int) -> Answer:
        key = (a, b, budget)
        if key not in self.memo:
            self.memo[key] = self._greater(a, b, budget)
        return self.memo[key]

    def _concl(self, a: Term, b: Term) -> Greater:
        return Greater("acc", a, b, self.anchor)

    def _greater(self, a: Term, b: Term, budget: int) -> Answer:
        if budget <= 0:
            return LIMITED
        limited = False
        if isinstance(a, Lam):
            r = self._lam(a, b, budget)
            if r:
                return r
            limited |= r.limited
        for step in self._base_steps(a, b):
            m = step.conclusion.right
            if m == b:
                return yes(step)
            r = self._reduce_to(step, b)
            if r is not None:
                return yes(r)
            if budget > 1:
                for d in self._with_reducts(step):
                    r = self.greater(d.conclusion.right, b, budget - 1)
                    if r:
                        return yes(Derivation(">trans", self._concl(a, b), (d, r.proof)))
                    limited |= r.limited
            else:
                limited = True
        return no_or_limited(limited)

    def _lam(self, a: Lam, b: Term, budget: int) -> Answer:
        try:
            bty = self.type_of(b)
        except Exception:
            return NO
        if not isinstance(bty, Arrow) or bty.dom != a.annot:
            return NO
        avoid = set(b.fvs) | set(self.anchor.fvs) | set(a.fvs)
        x = self.supply.fresh(a.hint, a.annot, avoid)
        r = self.greater(open_body(a, x), App(b, FVar(x)), budget - 1)
        if not r:
            return r
        return yes(Derivation(">lam", self._concl(a, b), (r.proof,), {"var": x}))

    def _base_steps(self, a: Term, goal: Term) -> Iterable[Derivation]:
        """Every (>base) conclusion ``a >^l a_i ys`` worth trying for ``goal``."""
        sa = symbol_application(a, self.sig)
        if sa is None:
            return
        g, args = sa
        if not isinstance(uncurry(self.sig[g])[1], Base):
            return
        banned = set(self.anchor.fvs)
        usable = sorted(v for v in goal.fvs if v not in banned)
        for i, a_i in enumerate(args, 1):
            try:
                a_ty = self.type_of(a_i)
            except Exception:
                continue
            slots = base_step_ok(self.sig, self.mode, g, i, a_i, a_ty)
            if slots is None:
                continue
            options = []
            taken = banned | set(a.fvs) | set(goal.fvs)
            for k, ty in enumerate(slots):
                opts = [v for v in usable if self.supply.env.get(v) == ty]
                y = self.supply.fresh("y", ty, taken)
                taken.add(y)
                opts.append(y)
                options.append(opts)
            for ys in product(*options):
                m = mk_app(a_i, [FVar(y) for y in ys])
                yield Derivation(">base", self._concl(a, m), (), {"index": i, "vars": tuple(ys)})

    def _with_reducts(self, step: Derivation) -> list[Derivation]:
        """``step`` followed by every chain of up to RED_DEPTH (>red) steps."""
        out = [step]
        frontier = [step]
        seen = {step.conclusion.right}
        for _ in range(RED_DEPTH):
            nxt = []
            for d in frontier:
                for c in beta_reducts(d.conclusion.right):
                    if c in seen:
                        continue
                    seen.add(c)
                    nd = Derivation(">red", self._concl(d.conclusion.left, c), (d,))
                    nxt.append(nd)
            out.extend(nxt)
            frontier = nxt
        return out

    def _reduce_to(self, step: Derivation, goal: Term) -> Derivation | None:
        for d in self._with_reducts(step):
            if d.conclusion.right == goal:
                return d
        return None


def acc_greater(
    sig: Signature,
    env: Mapping[str, SimpleType] | FreshSupply,
    l: Term,
    a: Term,
    b: Term,
    budget: int = 8,
    mode: AccMode = AccMode.POSITIVE,
) -> Answer:
    """Decide ``a >^l b`` in the accessibility ordering within ``budget``."""
    supply = env if isinstance(env, FreshSupply) else FreshSupply(env)
    return AccSearch(sig, supply, l, mode).greater(a, b, budget)
