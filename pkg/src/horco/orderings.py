"""Syntax-directed path orderings: first-order RPO, its computability-style
presentation, and the monomorphic higher-order recursive path ordering."""

from __future__ import annotations

from collections.abc import Mapping

from .extensions import extend, first_yes, mul_ext
from .proof import NO, Answer, Derivation, Greater, yes
from .signature import Prec, Signature, Status
from .terms import (
    App,
    Base,
    FreshSupply,
    Lam,
    SimpleType,
    Sym,
    Term,
    TermError,
    is_algebraic,
    mk_app,
    open_body,
    show,
    spine,
    symbols_of,
    type_of,
    uncurry,
)


class NotFirstOrder(ValueError):
    pass


def _require_fo(*terms: Term) -> None:
    for t in terms:
        if not is_algebraic(t) or t.loose:
            raise NotFirstOrder(show(t))


class RPO:
    """Recursive path ordering with a memo that may be shared across queries."""

    rel = "rpo"

    def __init__(self, sig: Signature):
        self.sig = sig
        self.memo: dict[tuple[Term, Term], Answer] = {}

    def greater(self, t: Term, u: Term) -> Answer:
        key = (t, u)
        r = self.memo.get(key)
        if r is None:
            r = self.memo[key] = self._greater(t, u)
        return r

    def _concl(self, t: Term, u: Term) -> Greater:
        return Greater(self.rel, t, u)

    def _greater(self, t: Term, u: Term) -> Answer:
        f, ts = spine(t)
        if not isinstance(f, Sym):
            return NO
        # (1) some argument is greater or equal
        for i, ti in enumerate(ts, 1):
            if ti == u:
                return yes(Derivation("rpo-1", self._concl(t, u), (), {"index": i}))
        for i, ti in enumerate(ts, 1):
            r = self.greater(ti, u)
            if r:
                return yes(Derivation("rpo-1", self._concl(t, u), (r.proof,), {"index": i}))
        g, us = spine(u)
        if not isinstance(g, Sym):
            return NO
        p = self.sig.prec_compare(f.name, g.name)
        if p is Prec.GREATER:
            proofs = self._dominates_all(t, us)
            if proofs is not None:
                return yes(Derivation("rpo-2", self._concl(t, u), proofs))
        elif p is Prec.EQUIVALENT:
            ext = extend(self.greater, self.sig.status_of(f.name), ts, us, rel=self.rel)
            if ext:
                proofs = self._dominates_all(t, us)
                if proofs is not None:
                    return yes(Derivation("rpo-3", self._concl(t, u), (ext.proof,) + proofs))
        return NO

    def _dominates_all(self, t: Term, us: tuple[Term, ...]) -> tuple[Derivation, ...] | None:
        proofs = []
        for uj in us:
            r = self.greater(t, uj)
            if not r:
                return None
            proofs.append(r.proof)
        return tuple(proofs)


def rpo_greater(sig: Signature, t: Term, u: Term, engine: RPO | None = None) -> Answer:
    _require_fo(t, u)
    return (engine or RPO(sig)).greater(t, u)


class FORCO:
    """First-order recursive computability ordering, inductive presentation.

    (red) only goes through the arguments of the left-hand side, which are
    the intermediates needed to simulate the subterm case of RPO.
    """

    rel = "forco"

    def __init__(self, sig: Signature):
        self.sig = sig
        self.memo: dict[tuple[Term, Term], Answer] = {}

    def greater(self, t: Term, u: Term) -> Answer:
        key = (t, u)
        r = self.memo.get(key)
        if r is None:
            r = self.memo[key] = self._greater(t, u)
        return r

    def _concl(self, t: Term, u: Term) -> Greater:
        return Greater(self.rel, t, u)

    def _arg(self, t: Term, i: int) -> Derivation:
        return Derivation("arg", self._concl(t, spine(t)[1][i - 1]), (), {"index": i})

    def _greater(self, t: Term, u: Term) -> Answer:
        f, ts = spine(t)
        if not isinstance(f, Sym):
            return NO
        for i, ti in enumerate(ts, 1):
            if ti == u:
                return yes(self._arg(t, i))
        g, us = spine(u)
        if isinstance(g, Sym):
            p = self.sig.prec_compare(f.name, g.name)
            if p in (Prec.GREATER, Prec.EQUIVALENT):
                r = self._prec_or_call(t, u, f.name, ts, g.name, us, p)
                if r:
                    return r
        for i, ti in enumerate(ts, 1):
            r = self.greater(ti, u)
            if r:
                return yes(Derivation("red", self._concl(t, u), (self._arg(t, i), r.proof)))
        return NO

    def _prec_or_call(self, t, u, f, ts, g, us, p) -> Answer:
        proofs = []
        for uj in us:
            r = self.greater(t, uj)
            if not r:
                return NO
            proofs.append(r.proof)
        if p is Prec.GREATER:
            return yes(Derivation("prec", self._concl(t, u), tuple(proofs), {"f": f, "g": g}))
        ext = extend(self.greater, self.sig.status_of(f), ts, us, rel=self.rel)
        if not ext:
            return NO
        return yes(Derivation("call", self._concl(t, u), tuple(proofs) + (ext.proof,), {"f": f, "g": g}))


def forco_greater(sig: Signature, t: Term, u: Term, engine: FORCO | None = None) -> Answer:
    _require_fo(t, u)
    return (engine or FORCO(sig)).greater(t, u)


class HORPO:
    """Monomorphic higher-order recursive path ordering.

    Every rule requires both sides to have the same type.  ``restrict_app``
    limits rule (6) to pairs where one side is strictly greater and the other
    is equal.
    """

    rel = "horpo"

    def __init__(
        self,
        sig: Signature,
        env: Mapping[str, SimpleType] | FreshSupply,
        restrict_app: bool = False,
    ):
        self.sig = sig
        self.supply = env if isinstance(env, FreshSupply) else FreshSupply(env)
        self.restrict_app = restrict_app
        self.memo: dict[tuple[Term, Term], Answer] = {}
        self._types: dict[Term, SimpleType | None] = {}

    def type_of(self, t: Term) -> SimpleType | None:
        ty = self._types.get(t, False)
        if ty is False:
            try:
                ty = type_of(t, self.supply.env, self.sig)
            except TermError:
                ty = None
            self._types[t] = ty
        return ty

    def greater(self, t: Term, u: Term) -> Answer:
        key = (t, u)
        r = self.memo.get(key)
        if r is None:
            r = self.memo[key] = self._greater(t, u)
        return r

    def _concl(self, t: Term, u: Term) -> Greater:
        return Greater(self.rel, t, u)

    def _greater(self, t: Term, u: Term) -> Answer:
        if t == u:
            return NO
        ty = self.type_of(t)
        if ty is None or ty != self.type_of(u):
            return NO
        f, ts = spine(t)
        if isinstance(f, Sym):
            r = first_yes(
                [
                    lambda: self._rule1(t, u, ts),
                    lambda: self._rules234(t, u, f.name, ts),
                    lambda: self._rule5(t, u, ts),
                ]
            )
            if r:
                return r
        if isinstance(t, App) and isinstance(u, App):
            r = self._rule6(t, u)
            if r:
                return r
        if isinstance(t, Lam) and isinstance(u, Lam) and t.annot == u.annot:
            return self._rule7(t, u)
        return NO

    def _rule1(self, t: Term, u: Term, ts: tuple[Term, ...]) -> Answer:
        for i, ti in enumerate(ts, 1):
            if ti == u:
                return yes(Derivation("horpo-1", self._concl(t, u), (), {"index": i}))
        for i, ti in enumerate(ts, 1):
            r = self.greater(ti, u)
            if r:
                return yes(Derivation("horpo-1", self._concl(t, u), (r.proof,), {"index": i}))
        return NO

    def _p(self, t: Term, ts: tuple[Term, ...], v: Term) -> tuple[tuple, Derivation | None] | None:
        """Evidence for ``P(f, ts, v)``: a tag plus an optional premise."""
        r = self.greater(t, v)
        if r:
            return ("self", 0), r.proof
        for j, tj in enumerate(ts, 1):
            if tj == v:
                return ("arg-eq", j), None
        for j, tj in enumerate(ts, 1):
            r = self.greater(tj, v)
            if r:
                return ("arg", j), r.proof
        return None

    def _p_all(self, t, ts, vs) -> tuple[tuple, tuple[Derivation, ...]] | None:
        tags, proofs = [], []
        for v in vs:
            e = self._p(t, ts, v)
            if e is None:
                return None
            tags.append(e[0])
            if e[1] is not None:
                proofs.append(e[1])
        return tuple(tags), tuple(proofs)

    def _rules234(self, t: Term, u: Term, f: str, ts: tuple[Term, ...]) -> Answer:
        g, us = spine(u)
        if not isinstance(g, Sym):
            return NO
        p = self.sig.prec_compare(f, g.name)
        if p is Prec.GREATER:
            ev = self._p_all(t, ts, us)
            if ev is None:
                return NO
            return yes(Derivation("horpo-2", self._concl(t, u), ev[1], {"p": ev[0]}))
        if p is not Prec.EQUIVALENT:
            return NO
        status = self.sig.status_of(f)
        ext = extend(self.greater, status, ts, us, rel=self.rel)
        if not ext:
            return ext
        if status is Status.MUL:
            return yes(Derivation("horpo-3", self._concl(t, u), (ext.proof,)))
        ev = self._p_all(t, ts, us)
        if ev is None:
            return NO
        return yes(Derivation("horpo-4", self._concl(t, u), (ext.proof,) + ev[1], {"p": ev[0]}))

    def _rule5(self, t: Term, u: Term, ts: tuple[Term, ...]) -> Answer:
        h, us = spine(u)
        for k in range(len(us)):
            parts = (mk_app(h, us[:k]),) + us[k:]
            if len(parts) < 2:
                continue
            ev = self._p_all(t, ts, parts)
            if ev is not None:
                return yes(Derivation("horpo-5", self._concl(t, u), ev[1], {"p": ev[0], "split": k}))
        return NO

    def _rule6(self, t: App, u: App) -> Answer:
        left, right = (t.fun, t.arg), (u.fun, u.arg)
        if self.restrict_app:
            if left[1] == right[1]:
                r = self.greater(left[0], right[0])
                if r:
                    return yes(Derivation("horpo-6", self._concl(t, u), (r.proof,), {"strict": 1}))
            if left[0] == right[0]:
                r = self.greater(left[1], right[1])
                if r:
                    return yes(Derivation("horpo-6", self._concl(t, u), (r.proof,), {"strict": 2}))
            return NO
        ext = mul_ext(self.greater, left, right, rel=self.rel)
        if not ext:
            return ext
        return yes(Derivation("horpo-6", self._concl(t, u), (ext.proof,)))

    def _rule7(self, t: Lam, u: Lam) -> Answer:
        x = self.supply.fresh(t.hint, t.annot, set(t.fvs) | set(u.fvs))
        r = self.greater(open_body(t, x), open_body(u, x))
        if not r:
            return r
        return yes(Derivation("horpo-7", self._concl(t, u), (r.proof,), {"var": x}))


def horpo_greater(
    sig: Signature,
    env: Mapping[str, SimpleType] | FreshSupply,
    t: Term,
    u: Term,
    restrict_app: bool = False,
    engine: HORPO | None = None,
) -> Answer:
    return (engine or HORPO(sig, env, restrict_app)).greater(t, u)


def is_first_order_rule(sig: Mapping[str, SimpleType], env: Mapping[str, SimpleType], *terms: Term) -> bool:
    """Algebraic terms whose symbols take base-type arguments and whose variables are base-typed."""
    for t in terms:
        if not is_algebraic(t) or t.loose:
            return False
        for v in t.fvs:
            if not isinstance(env.get(v), Base):
                return False
        for s in symbols_of(t):
            if not all(isinstance(d, Base) for d in uncurry(sig[s])[0]):
                return False
    return True
