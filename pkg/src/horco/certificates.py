"""Replay of derivation certificates.

Each node is checked locally: its conclusion must follow from the
conclusions of its premises by the named rule.  No search is performed;
precedence and accessibility are re-queried, freshness and alpha-equalities
are re-checked, and extension steps are recomputed from the recorded data.
"""

from __future__ import annotations

from collections import Counter
from collections.abc import Mapping
from dataclasses import dataclass

from .accessibility import accessible_args, base_step_ok, symbol_application
from .closure import CALL_REL, CallOrder, ClosureConfig, RewriteSystem, open_at, plug
from .proof import Derivation, Greater, Member, SeqGreater, StatGreater
from .signature import Prec, Signature, Status
from .terms import (
    App,
    FVar,
    Lam,
    SimpleType,
    Sym,
    Term,
    TermError,
    beta_reducts,
    mk_app,
    open_body,
    spine,
    subterm_at,
    type_of,
)


class Invalid(Exception):
    pass


@dataclass(frozen=True)
class CertificateCheck:
    ok: bool
    path: tuple[int, ...] = ()
    reason: str = ""
    rule: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise Invalid(msg)


_KIND = {Status.LEX_LR: "lex-lr", Status.LEX_RL: "lex-rl", Status.MUL: "mul"}


class Validator:
    def __init__(
        self,
        sig: Signature,
        env: Mapping[str, SimpleType],
        config: ClosureConfig | None = None,
        horpo_restrict_app: bool | None = None,
    ):
        self.sig = sig
        self.env = env
        self.config = config or ClosureConfig()
        self.restrict_app = horpo_restrict_app

    # ---- entry -----------------------------------------------------------

    def check(self, d: Derivation) -> CertificateCheck:
        stack: list[tuple[Derivation, tuple[int, ...]]] = [(d, ())]
        while stack:
            node, path = stack.pop()
            try:
                self.node(node)
            except Invalid as e:
                return CertificateCheck(False, path, str(e), node.rule)
            except (TermError, KeyError, IndexError, TypeError, ValueError, StopIteration) as e:
                return CertificateCheck(False, path, f"malformed node: {e!r}", node.rule)
            for i, p in reversed(list(enumerate(node.premises))):
                stack.append((p, path + (i,)))
        return CertificateCheck(True)

    def node(self, d: Derivation) -> None:
        handler = getattr(self, "_r_" + d.rule.replace("-", "_").replace(">", "acc_"), None)
        _need(handler is not None, f"unknown rule {d.rule}")
        handler(d)

    # ---- helpers ---------------------------------------------------------

    def type_of(self, t: Term) -> SimpleType:
        return type_of(t, self.env, self.sig)

    def _premises(self, d: Derivation, n: int) -> tuple[Derivation, ...]:
        _need(len(d.premises) == n, f"expected {n} premises, got {len(d.premises)}")
        return d.premises

    def _member(self, d: Derivation) -> Member:
        c = d.conclusion
        _need(isinstance(c, Member), "conclusion is not a closure membership")
        return c

    def _same_closure(self, c: Member, p: Derivation) -> Member:
        pc = p.conclusion
        _need(isinstance(pc, Member) and pc.head == c.head and pc.args == c.args, "premise is about another closure")
        return pc

    def _greater(self, d: Derivation, rels: tuple[str, ...]) -> Greater:
        c = d.conclusion
        _need(isinstance(c, Greater) and c.rel in rels, f"{d.rule} must conclude a {'/'.join(rels)} comparison")
        return c

    def _is_greater(self, p: Derivation, rel: str, left: Term, right: Term, anchor: Term | None = None) -> None:
        c = p.conclusion
        _need(
            isinstance(c, Greater) and c.rel == rel and c.left == left and c.right == right and c.anchor == anchor,
            f"premise should conclude {rel} on the expected pair",
        )

    def _fresh_var(self, x: str, ty: SimpleType, avoid: frozenset[str] | set[str]) -> None:
        _need(x not in avoid, f"variable {x} is not fresh")
        _need(self.env.get(x) == ty, f"variable {x} has no type {ty} in the environment")

    @staticmethod
    def _fv(ts) -> set[str]:
        out: set[str] = set()
        for t in ts:
            out |= t.fvs
        return out

    # ---- closure membership ---------------------------------------------

    def _r_arg(self, d: Derivation) -> None:
        c = d.conclusion
        i = d.info["index"]
        if isinstance(c, Greater):  # first-order computability ordering
            _need(c.rel == "forco", "arg on a non-forco comparison")
            self._premises(d, 0)
            f, ts = spine(c.left)
            _need(isinstance(f, Sym) and 1 <= i <= len(ts) and ts[i - 1] == c.right, "not an argument")
            return
        c = self._member(d)
        self._premises(d, 0)
        _need(1 <= i <= len(c.args) and c.args[i - 1] == c.goal, "goal is not the indexed argument")

    def _r_decomp_symb(self, d: Derivation) -> None:
        c = self._member(d)
        (p,) = self._premises(d, 1)
        w = self._same_closure(c, p).goal
        sa = symbol_application(w, self.sig)
        _need(sa is not None, "premise is not a fully applied symbol")
        g, us = sa
        i = d.info["index"]
        _need(i in accessible_args(self.sig, g, self.config.acc_mode), f"argument {i} of {g} is not accessible")
        _need(us[i - 1] == c.goal, "goal is not the indexed argument")

    def _r_decomp_lam(self, d: Derivation) -> None:
        _need(self.config.miller_rules, "pattern decompositions are disabled")
        c = self._member(d)
        (p,) = self._premises(d, 1)
        w = self._same_closure(c, p).goal
        _need(isinstance(w, Lam), "premise is not an abstraction")
        y = d.info["var"]
        self._fresh_var(y, w.annot, self._fv(c.args) | w.fvs)
        _need(open_body(w, y) == c.goal, "goal is not the opened body")

    def _r_decomp_app_left(self, d: Derivation) -> None:
        _need(self.config.miller_rules, "pattern decompositions are disabled")
        c = self._member(d)
        (p,) = self._premises(d, 1)
        w = self._same_closure(c, p).goal
        y = d.info["var"]
        _need(isinstance(w, App) and w.arg == FVar(y), "premise is not an application to the variable")
        _need(y not in self._fv(c.args) and y not in w.fun.fvs, f"{y} is not fresh")
        _need(w.fun == c.goal, "goal is not the function part")

    def _r_prec(self, d: Derivation) -> None:
        c = d.conclusion
        if isinstance(c, Greater):
            _need(c.rel == "forco", "prec on a non-forco comparison")
            f, ts = spine(c.left)
            g, us = spine(c.right)
            _need(isinstance(f, Sym) and isinstance(g, Sym), "not symbol applications")
            _need(self.sig.prec_compare(f.name, g.name) is Prec.GREATER, f"{f.name} > {g.name} does not hold")
            ps = self._premises(d, len(us))
            for p, uj in zip(ps, us):
                self._is_greater(p, "forco", c.left, uj)
            return
        c = self._member(d)
        self._premises(d, 0)
        _need(isinstance(c.goal, Sym), "goal is not a symbol")
        _need(self.sig.prec_compare(c.head, c.goal.name) is Prec.GREATER, f"{c.head} > {c.goal.name} does not hold")

    def _r_call(self, d: Derivation) -> None:
        c = d.conclusion
        if isinstance(c, Greater):
            _need(c.rel == "forco", "call on a non-forco comparison")
            f, ts = spine(c.left)
            g, us = spine(c.right)
            _need(isinstance(f, Sym) and isinstance(g, Sym), "not symbol applications")
            _need(self.sig.prec_compare(f.name, g.name) is Prec.EQUIVALENT, f"{f.name} ~ {g.name} does not hold")
            ps = self._premises(d, len(us) + 1)
            for p, uj in zip(ps, us):
                self._is_greater(p, "forco", c.left, uj)
            self._ext(ps[-1], self.sig.status_of(f.name), "forco", ts, us, None)
            return
        c = self._member(d)
        g, us = spine(c.goal)
        _need(isinstance(g, Sym) and us, "goal is not an applied symbol")
        _need(self.sig.prec_compare(c.head, g.name) is Prec.EQUIVALENT, f"{c.head} ~ {g.name} does not hold")
        status = self.sig.status_of(c.head)
        if status is not Status.LEX_LR:
            _need(
                len(us) == self.sig.arity(g.name) and len(c.args) == self.sig.arity(c.head),
                "multiset and right-to-left calls need full applications",
            )
        ps = self._premises(d, len(us) + 1)
        for p, uj in zip(ps, us):
            _need(self._same_closure(c, p).goal == uj, "call argument premise mismatch")
        order = self.config.call_order
        anchor = mk_app(Sym(c.head), c.args) if order is CallOrder.ACCESSIBILITY else None
        self._ext(ps[-1], status, CALL_REL[order], c.args, us, anchor)

    def _r_app(self, d: Derivation) -> None:
        c = self._member(d)
        _need(isinstance(c.goal, App), "goal is not an application")
        pu, pv = self._premises(d, 2)
        _need(self._same_closure(c, pu).goal == c.goal.fun, "function premise mismatch")
        _need(self._same_closure(c, pv).goal == c.goal.arg, "argument premise mismatch")
        ty = self.type_of(c.goal.fun)
        _need(ty.dom == self.type_of(c.goal.arg), "ill-typed application")

    def _r_var(self, d: Derivation) -> None:
        c = self._member(d)
        self._premises(d, 0)
        _need(isinstance(c.goal, FVar), "goal is not a variable")
        _need(c.goal.name not in self._fv(c.args), f"{c.goal.name} is free in the arguments")

    def _r_lam(self, d: Derivation) -> None:
        c = self._member(d)
        _need(isinstance(c.goal, Lam), "goal is not an abstraction")
        (p,) = self._premises(d, 1)
        x = d.info["var"]
        self._fresh_var(x, c.goal.annot, self._fv(c.args) | c.goal.fvs)
        _need(self._same_closure(c, p).goal == open_body(c.goal, x), "body premise mismatch")

    def _r_red(self, d: Derivation) -> None:
        c = d.conclusion
        if isinstance(c, Greater):
            _need(c.rel == "forco", "red on a non-forco comparison")
            p1, p2 = self._premises(d, 2)
            g1 = self._greater(p1, ("forco",))
            _need(g1.left == c.left, "first premise starts elsewhere")
            self._is_greater(p2, "forco", g1.right, c.right)
            return
        _need(self.config.red_rule, "the (red) rule is disabled")
        c = self._member(d)
        p1, p2 = self._premises(d, 2)
        w = self._same_closure(c, p1).goal
        self._is_greater(p2, "horco", w, c.goal)
        _need(p2.rule in ("cont", "trans"), "reduction premise is not a horco derivation")

    # ---- whorco / horco ---------------------------------------------------

    def _r_rule(self, d: Derivation) -> None:
        c = self._greater(d, ("whorco",))
        f, ls = spine(c.left)
        _need(isinstance(f, Sym), "left-hand side is not headed by a symbol")
        _need(c.right.fvs <= c.left.fvs, "right-hand side has extra free variables")
        _need(self.type_of(c.left) == self.type_of(c.right), "sides have different types")
        (p,) = self._premises(d, 1)
        pc = p.conclusion
        _need(isinstance(pc, Member) and pc.head == f.name and pc.args == ls and pc.goal == c.right, "closure premise mismatch")

    def _r_cont(self, d: Derivation) -> None:
        c = self._greater(d, ("horco",))
        (p,) = self._premises(d, 1)
        pos, opened = tuple(d.info["position"]), tuple(d.info["opened"])
        binders = self._binders(c.left, pos)
        _need(len(binders) == len(opened) and len(set(opened)) == len(opened), "opened variables do not match binders")
        avoid = c.left.fvs | c.right.fvs
        for x, ty in zip(opened, binders):
            self._fresh_var(x, ty, avoid)
        a = open_at(c.left, pos, opened)
        pc = self._greater(p, ("whorco",))
        _need(p.rule == "rule", "context premise is not a whorco derivation")
        _need(pc.left == a, "premise does not start at the position")
        _need(plug(c.left, pos, opened, pc.right) == c.right, "contexts differ")

    def _binders(self, t: Term, p: tuple[int, ...]) -> list[SimpleType]:
        out = []
        for step in p:
            if isinstance(t, Lam):
                _need(step == 1, "invalid position")
                out.append(t.annot)
                t = t.body
            elif isinstance(t, App):
                _need(step in (1, 2), "invalid position")
                t = t.fun if step == 1 else t.arg
            else:
                raise Invalid("invalid position")
        return out

    def _r_trans(self, d: Derivation) -> None:
        c = self._greater(d, ("horco",))
        p1, p2 = self._premises(d, 2)
        g1 = self._greater(p1, ("horco",))
        _need(g1.left == c.left, "chain starts elsewhere")
        self._is_greater(p2, "horco", g1.right, c.right)

    def _r_subterm(self, d: Derivation) -> None:
        c = self._greater(d, ("subterm",))
        self._premises(d, 0)
        pos = tuple(d.info["position"])
        _need(len(pos) > 0 and c.right.loose == 0, "not a proper closed subterm")
        _need(subterm_at(c.left, pos) == c.right, "subterm mismatch")

    # ---- accessibility ----------------------------------------------------

    def _r_acc_base(self, d: Derivation) -> None:
        c = self._greater(d, ("acc",))
        self._premises(d, 0)
        _need(c.anchor is not None, "missing anchor")
        sa = symbol_application(c.left, self.sig)
        _need(sa is not None, "left side is not a fully applied symbol")
        g, args = sa
        i, ys = d.info["index"], tuple(d.info["vars"])
        _need(1 <= i <= len(args), "bad index")
        a_i = args[i - 1]
        slots = base_step_ok(self.sig, self.config.acc_mode, g, i, a_i, self.type_of(a_i))
        _need(slots is not None, f"argument {i} of {g} is not accessible")
        _need(len(slots) == len(ys), "wrong number of extra variables")
        for y, ty in zip(ys, slots):
            _need(y not in c.anchor.fvs, f"{y} is free in the anchor")
            _need(self.env.get(y) == ty, f"{y} has the wrong type")
        _need(c.right == mk_app(a_i, [FVar(y) for y in ys]), "right side mismatch")

    def _r_acc_lam(self, d: Derivation) -> None:
        c = self._greater(d, ("acc",))
        _need(isinstance(c.left, Lam), "left side is not an abstraction")
        (p,) = self._premises(d, 1)
        x = d.info["var"]
        self._fresh_var(x, c.left.annot, c.right.fvs | c.anchor.fvs | c.left.fvs)
        self._is_greater(p, "acc", open_body(c.left, x), App(c.right, FVar(x)), c.anchor)

    def _r_acc_red(self, d: Derivation) -> None:
        c = self._greater(d, ("acc",))
        (p,) = self._premises(d, 1)
        pc = self._greater(p, ("acc",))
        _need(pc.left == c.left and pc.anchor == c.anchor, "premise mismatch")
        _need(c.right in beta_reducts(pc.right), "not a beta step")

    def _r_acc_trans(self, d: Derivation) -> None:
        c = self._greater(d, ("acc",))
        p1, p2 = self._premises(d, 2)
        g1 = self._greater(p1, ("acc",))
        _need(g1.left == c.left and g1.anchor == c.anchor, "chain starts elsewhere")
        self._is_greater(p2, "acc", g1.right, c.right, c.anchor)

    # ---- extensions -------------------------------------------------------

    def _ext(self, p: Derivation, status: Status, rel, left, right, anchor) -> None:
        pc = p.conclusion
        if isinstance(pc, StatGreater):
            raise Invalid("status premise must be an extension comparison here")
        _need(isinstance(pc, SeqGreater), "premise is not an extension comparison")
        _need(pc.kind == _KIND[status], f"extension {pc.kind} does not match status {status.value}")
        _need(pc.rel == rel and pc.left == tuple(left) and pc.right == tuple(right) and pc.anchor == anchor,
              "extension premise mismatch")

    def _r_lex(self, d: Derivation) -> None:
        c = d.conclusion
        _need(isinstance(c, SeqGreater) and c.kind in ("lex-lr", "lex-rl"), "lex must conclude a lex comparison")
        (p,) = self._premises(d, 1)
        i, j = d.info["index"]
        n, m = len(c.left), len(c.right)
        k = i - 1 if c.kind == "lex-lr" else n - i
        _need(0 <= k < min(n, m), "index out of range")
        _need((i, j) == ((k + 1, k + 1) if c.kind == "lex-lr" else (n - k, m - k)), "indices are not aligned")
        for q in range(k):
            a, b = (q, q) if c.kind == "lex-lr" else (n - 1 - q, m - 1 - q)
            _need(c.left[a] == c.right[b], "earlier positions are not equal")
        self._is_greater(p, c.rel, c.left[i - 1], c.right[j - 1], c.anchor)

    def _r_mul(self, d: Derivation) -> None:
        c = d.conclusion
        _need(isinstance(c, SeqGreater) and c.kind == "mul", "mul must conclude a multiset comparison")
        X, Y, doms = (tuple(d.info[k]) for k in ("removed", "added", "dominators"))
        _need(len(X) > 0, "nothing removed")
        cl, cr, cx, cy = Counter(c.left), Counter(c.right), Counter(X), Counter(Y)
        _need(not (cx - cl), "removed elements are not on the left")
        _need(cl - cx + cy == cr and not (cx - cl), "right side is not (left - removed) + added")
        _need(len(doms) == len(Y), "one dominator per added element")
        ps = self._premises(d, len(Y))
        for p, x, y in zip(ps, doms, Y):
            _need(x in cx, "dominator was not removed")
            self._is_greater(p, c.rel, x, y, c.anchor)

    def _r_prec_edge(self, d: Derivation) -> None:
        c = d.conclusion
        _need(isinstance(c, StatGreater), "prec-edge must conclude a status comparison")
        self._premises(d, 0)
        _need(self.sig.prec_compare(c.f, c.g) is Prec.GREATER, f"{c.f} > {c.g} does not hold")

    # ---- RPO --------------------------------------------------------------

    def _r_rpo_1(self, d: Derivation) -> None:
        self._arg_geq(d, "rpo")

    def _arg_geq(self, d: Derivation, rel: str) -> None:
        c = self._greater(d, (rel,))
        f, ts = spine(c.left)
        i = d.info["index"]
        _need(isinstance(f, Sym) and 1 <= i <= len(ts), "bad argument index")
        if not d.premises:
            _need(ts[i - 1] == c.right, "argument is not equal to the right side")
        else:
            (p,) = self._premises(d, 1)
            self._is_greater(p, rel, ts[i - 1], c.right)

    def _r_rpo_2(self, d: Derivation) -> None:
        c = self._greater(d, ("rpo",))
        f, ts = spine(c.left)
        g, us = spine(c.right)
        _need(isinstance(f, Sym) and isinstance(g, Sym), "not symbol applications")
        _need(self.sig.prec_compare(f.name, g.name) is Prec.GREATER, f"{f.name} > {g.name} does not hold")
        for p, uj in zip(self._premises(d, len(us)), us):
            self._is_greater(p, "rpo", c.left, uj)

    def _r_rpo_3(self, d: Derivation) -> None:
        c = self._greater(d, ("rpo",))
        f, ts = spine(c.left)
        g, us = spine(c.right)
        _need(isinstance(f, Sym) and isinstance(g, Sym), "not symbol applications")
        _need(self.sig.prec_compare(f.name, g.name) is Prec.EQUIVALENT, f"{f.name} ~ {g.name} does not hold")
        ps = self._premises(d, len(us) + 1)
        self._ext(ps[0], self.sig.status_of(f.name), "rpo", ts, us, None)
        for p, uj in zip(ps[1:], us):
            self._is_greater(p, "rpo", c.left, uj)

    # ---- HORPO ------------------------------------------------------------

    def _horpo_head(self, d: Derivation) -> tuple[Greater, Sym, tuple[Term, ...]]:
        c = self._greater(d, ("horpo",))
        _need(self.type_of(c.left) == self.type_of(c.right), "sides have different types")
        f, ts = spine(c.left)
        _need(isinstance(f, Sym), "left side is not headed by a symbol")
        return c, f, ts

    def _p_evidence(self, c: Greater, ts, vs, tags, premises) -> None:
        tags = [tuple(t) for t in tags]
        _need(len(tags) == len(vs), "one piece of evidence per argument")
        ps = iter(premises)
        used = 0
        for (kind, j), v in zip(tags, vs):
            if kind == "self":
                self._is_greater(next(ps), "horpo", c.left, v)
                used += 1
            elif kind == "arg-eq":
                _need(1 <= j <= len(ts) and ts[j - 1] == v, "argument is not equal")
            elif kind == "arg":
                _need(1 <= j <= len(ts), "bad argument index")
                self._is_greater(next(ps), "horpo", ts[j - 1], v)
                used += 1
            else:
                raise Invalid(f"unknown evidence {kind}")
        _need(used == len(premises), "unused premises")

    def _r_horpo_1(self, d: Derivation) -> None:
        self._horpo_head(d)
        self._arg_geq(d, "horpo")

    def _r_horpo_2(self, d: Derivation) -> None:
        c, f, ts = self._horpo_head(d)
        g, us = spine(c.right)
        _need(isinstance(g, Sym), "right side is not headed by a symbol")
        _need(self.sig.prec_compare(f.name, g.name) is Prec.GREATER, f"{f.name} > {g.name} does not hold")
        self._p_evidence(c, ts, us, d.info["p"], d.premises)

    def _r_horpo_3(self, d: Derivation) -> None:
        c, f, ts = self._horpo_head(d)
        g, us = spine(c.right)
        _need(isinstance(g, Sym) and self.sig.prec_compare(f.name, g.name) is Prec.EQUIVALENT, "symbols not equivalent")
        _need(self.sig.status_of(f.name) is Status.MUL, "status is not mul")
        (p,) = self._premises(d, 1)
        self._ext(p, Status.MUL, "horpo", ts, us, None)

    def _r_horpo_4(self, d: Derivation) -> None:
        c, f, ts = self._horpo_head(d)
        g, us = spine(c.right)
        _need(isinstance(g, Sym) and self.sig.prec_compare(f.name, g.name) is Prec.EQUIVALENT, "symbols not equivalent")
        status = self.sig.status_of(f.name)
        _need(status is not Status.MUL, "status is mul")
        _need(len(d.premises) >= 1, "missing extension premise")
        self._ext(d.premises[0], status, "horpo", ts, us, None)
        self._p_evidence(c, ts, us, d.info["p"], d.premises[1:])

    def _r_horpo_5(self, d: Derivation) -> None:
        c, f, ts = self._horpo_head(d)
        h, us = spine(c.right)
        k = d.info["split"]
        _need(0 <= k < len(us), "bad split")
        parts = (mk_app(h, us[:k]),) + us[k:]
        _need(len(parts) >= 2, "right side is not an application")
        self._p_evidence(c, ts, parts, d.info["p"], d.premises)

    def _r_horpo_6(self, d: Derivation) -> None:
        c = self._greater(d, ("horpo",))
        _need(self.type_of(c.left) == self.type_of(c.right), "sides have different types")
        t, u = c.left, c.right
        _need(isinstance(t, App) and isinstance(u, App), "not applications")
        (p,) = self._premises(d, 1)
        strict = d.info.get("strict")
        if strict is None:
            _need(self.restrict_app is not True, "unrestricted application rule used")
            self._ext(p, Status.MUL, "horpo", (t.fun, t.arg), (u.fun, u.arg), None)
        elif strict == 1:
            _need(t.arg == u.arg, "arguments differ")
            self._is_greater(p, "horpo", t.fun, u.fun)
        else:
            _need(t.fun == u.fun, "functions differ")
            self._is_greater(p, "horpo", t.arg, u.arg)

    def _r_horpo_7(self, d: Derivation) -> None:
        c = self._greater(d, ("horpo",))
        t, u = c.left, c.right
        _need(isinstance(t, Lam) and isinstance(u, Lam) and t.annot == u.annot, "not matching abstractions")
        (p,) = self._premises(d, 1)
        x = d.info["var"]
        self._fresh_var(x, t.annot, t.fvs | u.fvs)
        self._is_greater(p, "horpo", open_body(t, x), open_body(u, x))


def validate_certificate(
    sys: RewriteSystem | Signature,
    d: Derivation,
    env: Mapping[str, SimpleType] | None = None,
    config: ClosureConfig | None = None,
    horpo_restrict_app: bool | None = None,
) -> CertificateCheck:
    """Replay ``d`` node by node; returns the path of the first bad node."""
    if isinstance(sys, RewriteSystem):
        sig, config = sys.sig, config or sys.config
    else:
        sig = sys
    return Validator(sig, env or {}, config, horpo_restrict_app).check(d)

