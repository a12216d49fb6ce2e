"""Computability-closure membership and the orderings built from it.

``whorco`` relates ``f ls`` to every well-typed term of the same type and no
new free variables that lies in the closure of ``ls``; ``horco`` closes it
under contexts and ``horco+`` chains a bounded number of ``horco`` steps.

Every search is bounded by a budget.  Structural recursion (app, lam, call
arguments) keeps the budget, while each comparison of call arguments and each
(red) step costs one unit, so a finite derivation is always found once the
budget is large enough and exhaustion is reported as ``DepthLimited``.
"""

from __future__ import annotations

import enum
from collections.abc import Iterator, Mapping, Sequence
from dataclasses import dataclass, field

from .accessibility import AccMode, AccSearch, accessible_args, symbol_application
from .extensions import extend
from .proof import LIMITED, NO, Answer, Derivation, Greater, Member, no_or_limited, rename_derivation, yes
from .signature import Prec, Signature, Status
from .terms import (
    App,
    FreshSupply,
    FVar,
    Lam,
    Position,
    SimpleType,
    Sym,
    Term,
    TermError,
    abstract,
    mk_app,
    open_body,
    rename_free,
    show,
    spine,
    subterms,
    type_of,
)


class CallOrder(enum.Enum):
    SUBTERM = "subterm"
    ACCESSIBILITY = "acc"
    RECURSIVE = "recursive"


# Relation names used in the certificates for each way of comparing call arguments.
CALL_REL = {CallOrder.SUBTERM: "subterm", CallOrder.ACCESSIBILITY: "acc", CallOrder.RECURSIVE: "horco"}


@dataclass(frozen=True)
class ClosureConfig:
    acc_mode: AccMode = AccMode.POSITIVE
    call_order: CallOrder = CallOrder.ACCESSIBILITY
    miller_rules: bool = False
    red_rule: bool = False
    depth_budget: int = 12
    trans_budget: int = 3

    def __post_init__(self) -> None:
        if self.depth_budget < 1 or self.trans_budget < 1:
            raise ValueError("budgets must be at least 1")


class MalformedRule(ValueError):
    def __init__(self, reason: str):
        super().__init__(reason)
        self.reason = reason


@dataclass(frozen=True, eq=False)
class Rule:
    lhs: Term
    rhs: Term
    env: Mapping[str, SimpleType] = field(default_factory=dict)

    def __str__(self) -> str:
        return f"{show(self.lhs)} -> {show(self.rhs)}"


@dataclass
class RewriteSystem:
    sig: Signature
    rules: Sequence[Rule] = ()
    theory: Sequence[Rule] = ()
    config: ClosureConfig = field(default_factory=ClosureConfig)


class Orientation(enum.Enum):
    ORIENTED = "Oriented"
    NOT_ORIENTED = "NotOriented"
    DEPTH_LIMITED = "DepthLimited"


@dataclass(frozen=True)
class Verdict:
    rule: Rule
    status: Orientation
    certificate: Derivation | None = None
    env: Mapping[str, SimpleType] = field(default_factory=dict)
    reason: str = ""

    def __bool__(self) -> bool:
        return self.status is Orientation.ORIENTED


def orientation(answer: Answer) -> Orientation:
    if answer:
        return Orientation.ORIENTED
    return Orientation.DEPTH_LIMITED if answer.limited else Orientation.NOT_ORIENTED


# --------------------------------------------------------------------------
# Aligned positions of two terms


@dataclass(frozen=True)
class Divergence:
    left: Term
    right: Term
    position: Position
    opened: tuple[str, ...]
    single: bool  # the two terms agree everywhere outside ``position``


def divergences(
    t: Term, u: Term, supply: FreshSupply, avoid: set[str] | None = None
) -> Iterator[Divergence]:
    """Pairs of aligned, differing subterms, outermost-leftmost first.

    Binders met on the way are opened with a shared fresh variable, so every
    pair is closed.
    """
    avoid = set(t.fvs) | set(u.fvs) if avoid is None else avoid

    def go(a: Term, b: Term, p: Position, opened: tuple[str, ...], single: bool):
        if a == b:
            return
        yield Divergence(a, b, p, opened, single)
        if isinstance(a, App) and isinstance(b, App):
            fun_eq, arg_eq = a.fun == b.fun, a.arg == b.arg
            yield from go(a.fun, b.fun, p + (1,), opened, single and arg_eq)
            yield from go(a.arg, b.arg, p + (2,), opened, single and fun_eq)
        elif isinstance(a, Lam) and isinstance(b, Lam) and a.annot == b.annot:
            x = supply.fresh(a.hint, a.annot, avoid | set(opened))
            yield from go(open_body(a, x), open_body(b, x), p + (1,), opened + (x,), single)

    yield from go(t, u, (), (), True)


def plug(t: Term, p: Position, opened: Sequence[str], b: Term) -> Term:
    """``t`` with the subterm at ``p`` replaced by ``b``, whose free
    variables ``opened`` are re-bound by the binders crossed on the way."""
    for x in opened:
        b = abstract(b, x, 0)
    return _plug(t, p, b)


def _plug(t: Term, p: Position, b: Term) -> Term:
    if not p:
        return b
    if isinstance(t, App):
        return App(_plug(t.fun, p[1:], b), t.arg) if p[0] == 1 else App(t.fun, _plug(t.arg, p[1:], b))
    if isinstance(t, Lam):
        return Lam(t.annot, _plug(t.body, p[1:], b), t.hint)
    raise ValueError(f"bad position {p}")


def open_at(t: Term, p: Position, opened: Sequence[str]) -> Term:
    """Subterm at ``p`` with the crossed binders instantiated by ``opened``."""
    names = iter(opened)
    for step in p:
        if isinstance(t, Lam):
            t = open_body(t, next(names))
        else:
            t = t.fun if step == 1 else t.arg
    return t


# --------------------------------------------------------------------------
# Closure membership


class Closure:
    """Membership in the computability closure of ``f ls``."""

    def __init__(self, engine: Engine, f: str, ls: tuple[Term, ...]):
        self.engine = engine
        self.f = f
        self.ls = ls
        self.anchor = mk_app(Sym(f), ls)
        self.banned = frozenset(self.anchor.fvs)
        self.memo: dict[tuple[Term, int], Answer] = {}
        self._acc: AccSearch | None = None
        self.accessible = self._accessible_set()

    @property
    def sig(self) -> Signature:
        return self.engine.sig

    @property
    def config(self) -> ClosureConfig:
        return self.engine.config

    def _member(self, goal: Term) -> Member:
        return Member(self.f, self.ls, goal)

    def _accessible_set(self) -> list[tuple[Term, Derivation, frozenset[str]]]:
        """Arguments and everything reachable from them by decomposition.

        The third component lists the variables introduced by (decomp-lam);
        they may be renamed when matching a goal.
        """
        supply = self.engine.supply
        out: list[tuple[Term, Derivation, frozenset[str]]] = []
        seen: set[Term] = set()
        todo = [
            (li, Derivation("arg", self._member(li), (), {"index": i}), frozenset())
            for i, li in enumerate(self.ls, 1)
        ]
        while todo:
            w, d, holes = todo.pop(0)
            if w in seen:
                continue
            seen.add(w)
            out.append((w, d, holes))
            sa = symbol_application(w, self.sig)
            if sa is not None:
                g, us = sa
                for i in sorted(accessible_args(self.sig, g, self.config.acc_mode)):
                    ui = us[i - 1]
                    todo.append((ui, Derivation("decomp-symb", self._member(ui), (d,), {"index": i}), holes))
            if not self.config.miller_rules:
                continue
            if isinstance(w, Lam):
                y = supply.fresh(w.hint, w.annot, self.banned | w.fvs)
                body = open_body(w, y)
                todo.append((body, Derivation("decomp-lam", self._member(body), (d,), {"var": y}), holes | {y}))
            elif isinstance(w, App) and isinstance(w.arg, FVar):
                y = w.arg.name
                if y not in self.banned and y not in w.fun.fvs:
                    u = w.fun
                    todo.append((u, Derivation("decomp-app-left", self._member(u), (d,), {"var": y}), holes))
        return out

    def _from_accessible(self, goal: Term) -> Derivation | None:
        for w, d, holes in self.accessible:
            if w == goal:
                return d
        for w, d, holes in self.accessible:
            if holes:
                rho = match_renaming(w, goal, holes, self.banned)
                if rho:
                    return rename_derivation(d, rho)
        return None

    def member(self, goal: Term, budget: int) -> Answer:
        key = (goal, budget)
        r = self.memo.get(key)
        if r is None:
            r = self.memo[key] = self._search(goal, budget)
        return r

    def _search(self, goal: Term, budget: int) -> Answer:
        d = self._from_accessible(goal)
        if d is not None:
            return yes(d)
        concl = self._member(goal)
        limited = False
        if isinstance(goal, FVar) and goal.name not in self.banned:
            return yes(Derivation("var", concl, (), {"var": goal.name}))
        if isinstance(goal, Sym) and self.sig.prec_compare(self.f, goal.name) is Prec.GREATER:
            return yes(Derivation("prec", concl, (), {"f": self.f, "g": goal.name}))
        head, args = spine(goal)
        if isinstance(head, Sym) and args and self.sig.prec_compare(self.f, head.name) is Prec.EQUIVALENT:
            r = self._call(goal, head.name, args, budget)
            if r:
                return r
            limited |= r.limited
        if isinstance(goal, App):
            ru = self.member(goal.fun, budget)
            if ru:
                rv = self.member(goal.arg, budget)
                if rv:
                    return yes(Derivation("app", concl, (ru.proof, rv.proof)))
                limited |= rv.limited
            limited |= ru.limited
        if isinstance(goal, Lam):
            x = self.engine.supply.fresh(goal.hint, goal.annot, self.banned | goal.fvs)
            r = self.member(open_body(goal, x), budget)
            if r:
                return yes(Derivation("lam", concl, (r.proof,), {"var": x}))
            limited |= r.limited
        if self.config.red_rule:
            r = self._red(goal, budget)
            if r:
                return r
            limited |= r.limited
        return no_or_limited(limited)

    def _call(self, goal: Term, g: str, us: tuple[Term, ...], budget: int) -> Answer:
        status = self.sig.status_of(self.f)
        if status is not Status.LEX_LR and not (
            len(us) == self.sig.arity(g) and len(self.ls) == self.sig.arity(self.f)
        ):
            return NO
        proofs = []
        for u in us:
            r = self.member(u, budget)
            if not r:
                return r
            proofs.append(r.proof)
        ext = extend(
            lambda a, b: self.compare(a, b, budget),
            status,
            self.ls,
            us,
            rel=CALL_REL[self.config.call_order],
            anchor=self.anchor if self.config.call_order is CallOrder.ACCESSIBILITY else None,
        )
        if not ext:
            return ext
        info = {"f": self.f, "g": g}
        return yes(Derivation("call", self._member(goal), tuple(proofs) + (ext.proof,), info))

    def compare(self, a: Term, b: Term, budget: int) -> Answer:
        """The relation used on call arguments, as selected by ``call_order``."""
        order = self.config.call_order
        if order is CallOrder.SUBTERM:
            return strict_subterm(a, b)
        if budget <= 1:
            return LIMITED
        if order is CallOrder.ACCESSIBILITY:
            if self._acc is None:
                self._acc = AccSearch(self.sig, self.engine.supply, self.anchor, self.config.acc_mode)
            return self._acc.greater(a, b, budget - 1)
        return self.engine.horco_plus(a, b, self.config.trans_budget, budget - 1)

    def _red(self, goal: Term, budget: int) -> Answer:
        if budget <= 1:
            return LIMITED
        limited = False
        for w, d, holes in self.accessible:
            if holes or w == goal:
                continue
            r = self.engine.horco_plus(w, goal, self.config.trans_budget, budget - 1)
            if r:
                return yes(Derivation("red", self._member(goal), (d, r.proof)))
            limited |= r.limited
        return no_or_limited(limited)


def strict_subterm(a: Term, b: Term) -> Answer:
    """``b`` is a proper subterm of ``a`` with no variable bound in ``a``."""
    if b.loose:
        return NO
    for p, s in subterms(a):
        if p and s == b:
            return yes(Derivation("subterm", Greater("subterm", a, b), (), {"position": p}))
    return NO


def match_renaming(
    w: Term, goal: Term, holes: frozenset[str], banned: frozenset[str]
) -> dict[str, str] | None:
    """Injective renaming of ``holes`` (to variables outside ``banned``) mapping ``w`` to ``goal``."""
    rho: dict[str, str] = {}

    def go(a: Term, b: Term) -> bool:
        if isinstance(a, FVar) and a.name in holes:
            if not isinstance(b, FVar) or b.name in banned:
                return False
            prev = rho.get(a.name)
            if prev is None:
                if b.name in rho.values() or (b.name in w.fvs and b.name not in holes):
                    return False
                rho[a.name] = b.name
                return True
            return prev == b.name
        if isinstance(a, App) and isinstance(b, App):
            return go(a.fun, b.fun) and go(a.arg, b.arg)
        if isinstance(a, Lam) and isinstance(b, Lam):
            return a.annot == b.annot and go(a.body, b.body)
        return a == b

    if not go(w, goal):
        return None
    return {k: v for k, v in rho.items() if k != v} or None


# --------------------------------------------------------------------------
# The orderings


class Engine:
    """Shared state for one family of queries over a fixed typing environment.

    Memo tables and the fresh-name supply are owned by the engine, so an
    engine must not be shared between threads; create one per worker.
    """

    def __init__(
        self,
        sig: Signature,
        config: ClosureConfig | None = None,
        env: Mapping[str, SimpleType] | FreshSupply | None = None,
    ):
        self.sig = sig
        self.config = config or ClosureConfig()
        self.supply = env if isinstance(env, FreshSupply) else FreshSupply(env)
        self._closures: dict[tuple[str, tuple[Term, ...]], Closure] = {}
        self._whorco: dict[tuple[Term, Term, int], Answer] = {}
        self._horco: dict[tuple[Term, Term, int], Answer] = {}
        self._plus: dict[tuple[Term, Term, int, int], Answer] = {}
        self._types: dict[Term, SimpleType | None] = {}

    @property
    def env(self) -> Mapping[str, SimpleType]:
        return self.supply.env

    def type_of(self, t: Term) -> SimpleType | None:
        ty = self._types.get(t, False)
        if ty is False:
            try:
                ty = type_of(t, self.supply.env, self.sig)
            except TermError:
                ty = None
            self._types[t] = ty
        return ty

    def closure(self, f: str, ls: Sequence[Term]) -> Closure:
        key = (f, tuple(ls))
        c = self._closures.get(key)
        if c is None:
            c = self._closures[key] = Closure(self, f, tuple(ls))
        return c

    def whorco(self, t: Term, u: Term, budget: int) -> Answer:
        key = (t, u, budget)
        r = self._whorco.get(key)
        if r is None:
            r = self._whorco[key] = self._whorco_search(t, u, budget)
        return r

    def _whorco_search(self, t: Term, u: Term, budget: int) -> Answer:
        if budget <= 0:
            return LIMITED
        head, ls = spine(t)
        if not isinstance(head, Sym) or not u.fvs <= t.fvs:
            return NO
        ty = self.type_of(t)
        if ty is None or ty != self.type_of(u):
            return NO
        r = self.closure(head.name, ls).member(u, budget)
        if not r:
            return r
        return yes(Derivation("rule", Greater("whorco", t, u), (r.proof,)))

    def horco(self, t: Term, u: Term, budget: int) -> Answer:
        key = (t, u, budget)
        r = self._horco.get(key)
        if r is None:
            r = self._horco[key] = self._horco_search(t, u, budget)
        return r

    def _horco_search(self, t: Term, u: Term, budget: int) -> Answer:
        limited = False
        for dv in divergences(t, u, self.supply):
            if not dv.single:
                continue
            r = self.whorco(dv.left, dv.right, budget)
            if r:
                return yes(self._cont(t, u, dv, r.proof))
            limited |= r.limited
        return no_or_limited(limited)

    def _cont(self, t: Term, u: Term, dv: Divergence, proof: Derivation) -> Derivation:
        info = {"position": dv.position, "opened": dv.opened}
        return Derivation("cont", Greater("horco", t, u), (proof,), info)

    def horco_plus(self, t: Term, u: Term, steps: int, budget: int) -> Answer:
        key = (t, u, steps, budget)
        r = self._plus.get(key)
        if r is None:
            r = self._plus[key] = self._plus_search(t, u, steps, budget)
        return r

    def _plus_search(self, t: Term, u: Term, steps: int, budget: int) -> Answer:
        r = self.horco(t, u, budget)
        if r or steps <= 1:
            return r
        limited = r.limited
        for dv in divergences(t, u, self.supply):
            if dv.single:
                continue  # already covered by the single-step attempt
            w = self.whorco(dv.left, dv.right, budget)
            if not w:
                limited |= w.limited
                continue
            v = plug(t, dv.position, dv.opened, dv.right)
            rest = self.horco_plus(v, u, steps - 1, budget)
            if rest:
                first = self._cont(t, v, dv, w.proof)
                return yes(Derivation("trans", Greater("horco", t, u), (first, rest.proof)))
            limited |= rest.limited
        return no_or_limited(limited)


# --------------------------------------------------------------------------
# Public entry points


def _engine(sys: RewriteSystem, env, engine: Engine | None) -> Engine:
    return engine if engine is not None else Engine(sys.sig, sys.config, env)


def cc_member(
    sys: RewriteSystem,
    f: str,
    ls: Sequence[Term],
    goal: Term,
    env: Mapping[str, SimpleType] | None = None,
    bound_ctx: frozenset[str] = frozenset(),
    budget: int | None = None,
    engine: Engine | None = None,
) -> Answer:
    """Is ``goal`` in the computability closure of ``f ls``?

    ``bound_ctx`` names variables bound by enclosing abstractions; they must
    not occur free in ``ls``.
    """
    banned = set().union(*(l.fvs for l in ls)) if ls else set()
    if bound_ctx & banned:
        raise ValueError("bound variables clash with the free variables of the arguments")
    eng = _engine(sys, env, engine)
    return eng.closure(f, ls).member(goal, budget or sys.config.depth_budget)


def whorco_greater(sys, t, u, env=None, budget=None, engine=None) -> Answer:
    return _engine(sys, env, engine).whorco(t, u, budget or sys.config.depth_budget)


def horco_greater(sys, t, u, env=None, budget=None, engine=None) -> Answer:
    return _engine(sys, env, engine).horco(t, u, budget or sys.config.depth_budget)


def horco_trans_greater(sys, t, u, steps=3, env=None, budget=None, engine=None) -> Answer:
    if steps < 1:
        raise ValueError("steps must be at least 1")
    return _engine(sys, env, engine).horco_plus(t, u, steps, budget or sys.config.depth_budget)


def rule_problems(sig: Signature, rule: Rule) -> str | None:
    head, _ = spine(rule.lhs)
    if not isinstance(head, Sym):
        return f"left-hand side {show(rule.lhs)} is not headed by a symbol"
    extra = sorted(rule.rhs.fvs - rule.lhs.fvs)
    if extra:
        return "right-hand side has variables not in the left-hand side: " + ", ".join(extra)
    try:
        tl = type_of(rule.lhs, rule.env, sig)
        tr = type_of(rule.rhs, rule.env, sig)
    except TermError as e:
        return f"ill-typed rule: {e}"
    if tl != tr:
        return f"sides have different types {tl} and {tr}"
    return None


def check_rule(sys: RewriteSystem, rule: Rule, engine: Engine | None = None) -> Verdict:
    problem = rule_problems(sys.sig, rule)
    if problem:
        raise MalformedRule(problem)
    eng = engine or Engine(sys.sig, sys.config, rule.env)
    r = eng.whorco(rule.lhs, rule.rhs, sys.config.depth_budget)
    return Verdict(rule, orientation(r), r.proof, dict(eng.env))


@dataclass(frozen=True)
class TheoryIssue:
    kind: str  # NonSymmetricTheory | CollapsingTheoryRule | ErasingTheoryRule | TheoryNotInClosure | MalformedRule
    rule: Rule
    message: str


@dataclass
class SystemReport:
    violations: list
    theory_issues: list[TheoryIssue]
    theory_certificates: list[tuple[Rule, Derivation, Mapping[str, SimpleType]]]
    verdicts: list[Verdict]

    @property
    def status(self) -> Orientation:
        if self.violations or self.theory_issues:
            return Orientation.NOT_ORIENTED
        statuses = {v.status for v in self.verdicts}
        if Orientation.NOT_ORIENTED in statuses:
            return Orientation.NOT_ORIENTED
        if Orientation.DEPTH_LIMITED in statuses:
            return Orientation.DEPTH_LIMITED
        return Orientation.ORIENTED


def canonical_pair(rule: Rule) -> tuple[Term, Term]:
    """Both sides with free variables renamed by order of first occurrence."""
    order: list[str] = []
    for t in (rule.lhs, rule.rhs):
        for _, s in subterms(t):
            if isinstance(s, FVar) and s.name not in order:
                order.append(s.name)
    mapping = {x: f"v#{i}" for i, x in enumerate(order)}
    return rename_free(rule.lhs, mapping), rename_free(rule.rhs, mapping)


def check_theory(sys: RewriteSystem) -> tuple[list[TheoryIssue], list]:
    issues: list[TheoryIssue] = []
    certs = []
    present = {canonical_pair(e) for e in sys.theory}
    for e in sys.theory:
        if canonical_pair(Rule(e.rhs, e.lhs)) not in present:
            issues.append(TheoryIssue("NonSymmetricTheory", e, f"the reverse of {e} is missing"))
        problem = rule_problems(sys.sig, e)
        rhead, rargs = spine(e.rhs)
        if not isinstance(rhead, Sym):
            issues.append(TheoryIssue("CollapsingTheoryRule", e, f"{e} has no symbol at the head of its right-hand side"))
            continue
        if problem:
            issues.append(TheoryIssue("MalformedRule", e, problem))
            continue
        if e.lhs.fvs != e.rhs.fvs:
            issues.append(TheoryIssue("ErasingTheoryRule", e, f"{e} does not keep every variable"))
            continue
        f, ls = spine(e.lhs)
        eng = Engine(sys.sig, sys.config, e.env)
        closure = eng.closure(f.name, ls)
        for ri in rargs:
            r = closure.member(ri, sys.config.depth_budget)
            if r:
                certs.append((e, r.proof, dict(eng.env)))
            else:
                issues.append(
                    TheoryIssue("TheoryNotInClosure", e, f"{show(ri)} is not in the closure of {show(e.lhs)}")
                )
    return issues, certs


def check_system(sys: RewriteSystem) -> SystemReport:
    violations = sys.sig.validate()
    issues, certs = check_theory(sys)
    verdicts = []
    for rule in sys.rules:
        problem = rule_problems(sys.sig, rule)
        if problem:
            verdicts.append(Verdict(rule, Orientation.NOT_ORIENTED, None, dict(rule.env), problem))
        else:
            verdicts.append(check_rule(sys, rule))
    return SystemReport(violations, issues, certs, verdicts)
