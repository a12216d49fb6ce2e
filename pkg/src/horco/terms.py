"""Simply-typed lambda terms with curried constants.

Bound variables are nameless (de Bruijn indices, 0 = innermost binder) and
free variables are named, so alpha-equivalence is plain structural equality.
Every node caches its hash, its free-variable set, the number of enclosing
binders it needs (``loose``) and its size, which keeps memo tables cheap.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from typing import Union

Position = tuple[int, ...]


class TermError(Exception):
    """Base class for errors raised by term operations."""


class UndeclaredSymbol(TermError):
    pass


class UnboundVariable(TermError):
    pass


class IllTyped(TermError):
    pass


class ApplicationTypeMismatch(IllTyped):
    pass


class NonArrowApplied(IllTyped):
    pass


class TypeMismatch(IllTyped):
    pass


class InvalidPosition(TermError):
    pass


class InternalLimit(TermError):
    pass


# --------------------------------------------------------------------------
# Types


@dataclass(frozen=True)
class Base:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Arrow:
    dom: SimpleType
    cod: SimpleType

    def __str__(self) -> str:
        dom = f"({self.dom})" if isinstance(self.dom, Arrow) else str(self.dom)
        return f"{dom} -> {self.cod}"


SimpleType = Union[Base, Arrow]


def arrow(*types: SimpleType) -> SimpleType:
    """Right-associated arrow: ``arrow(A, B, C)`` is ``A -> (B -> C)``."""
    result = types[-1]
    for ty in reversed(types[:-1]):
        result = Arrow(ty, result)
    return result


def uncurry(ty: SimpleType) -> tuple[tuple[SimpleType, ...], Base]:
    """Split ``T1 -> ... -> Tn -> B`` into ``((T1, ..., Tn), B)``."""
    doms = []
    while isinstance(ty, Arrow):
        doms.append(ty.dom)
        ty = ty.cod
    return tuple(doms), ty


def type_positions(ty: SimpleType) -> Iterator[tuple[Position, SimpleType]]:
    yield (), ty
    if isinstance(ty, Arrow):
        for p, sub in type_positions(ty.dom):
            yield (1,) + p, sub
        for p, sub in type_positions(ty.cod):
            yield (2,) + p, sub


def subtypes(ty: SimpleType) -> set[SimpleType]:
    return {sub for _, sub in type_positions(ty)}


# --------------------------------------------------------------------------
# Terms


class Term:
    __slots__ = ()


@dataclass(frozen=True, eq=False)
class Sym(Term):
    name: str
    _hash: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("Sym", self.name)))

    def __eq__(self, other: object) -> bool:
        return self is other or (isinstance(other, Sym) and other.name == self.name)

    def __hash__(self) -> int:
        return self._hash

    fvs = frozenset()
    loose = 0
    size = 1


@dataclass(frozen=True, eq=False)
class FVar(Term):
    name: str
    _hash: int = field(init=False, repr=False)
    fvs: frozenset = field(init=False, repr=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "_hash", hash(("FVar", self.name)))
        object.__setattr__(self, "fvs", frozenset((self.name,)))

    def __eq__(self, other: object) -> bool:
        return self is other or (isinstance(other, FVar) and other.name == self.name)

    def __hash__(self) -> int:
        return self._hash

    loose = 0
    size = 1


@dataclass(frozen=True, eq=False)
class BVar(Term):
    index: int
    _hash: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError("negative de Bruijn index")
        object.__setattr__(self, "_hash", hash(("BVar", self.index)))

    def __eq__(self, other: object) -> bool:
        return self is other or (isinstance(other, BVar) and other.index == self.index)

    def __hash__(self) -> int:
        return self._hash

    fvs = frozenset()
    size = 1

    @property
    def loose(self) -> int:
        return self.index + 1


@dataclass(frozen=True, eq=False)
class App(Term):
    fun: Term
    arg: Term
    _hash: int = field(init=False, repr=False)
    fvs: frozenset = field(init=False, repr=False)
    loose: int = field(init=False, repr=False)
    size: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        f, a = self.fun, self.arg
        object.__setattr__(self, "_hash", hash(("App", f._hash, a._hash)))
        object.__setattr__(self, "fvs", f.fvs | a.fvs if a.fvs else f.fvs)
        object.__setattr__(self, "loose", max(f.loose, a.loose))
        object.__setattr__(self, "size", f.size + a.size)

    def __eq__(self, other: object) -> bool:
        return self is other or (
            isinstance(other, App)
            and other._hash == self._hash
            and other.fun == self.fun
            and other.arg == self.arg
        )

    def __hash__(self) -> int:
        return self._hash


@dataclass(frozen=True, eq=False)
class Lam(Term):
    annot: SimpleType
    body: Term
    hint: str = field(default="x", compare=False)
    _hash: int = field(init=False, repr=False)
    fvs: frozenset = field(init=False, repr=False)
    loose: int = field(init=False, repr=False)
    size: int = field(init=False, repr=False)

    def __post_init__(self) -> None:
        b = self.body
        object.__setattr__(self, "_hash", hash(("Lam", self.annot, b._hash)))
        object.__setattr__(self, "fvs", b.fvs)
        object.__setattr__(self, "loose", max(b.loose - 1, 0))
        object.__setattr__(self, "size", b.size + 1)

    def __eq__(self, other: object) -> bool:
        return self is other or (
            isinstance(other, Lam)
            and other._hash == self._hash
            and other.annot == self.annot
            and other.body == self.body
        )

    def __hash__(self) -> int:
        return self._hash


TypingEnv = Mapping[str, SimpleType]


def mk_app(head: Term, args: Iterable[Term]) -> Term:
    for a in args:
        head = App(head, a)
    return head


def spine(t: Term) -> tuple[Term, tuple[Term, ...]]:
    """Return ``(head, args)`` with ``t == mk_app(head, args)``."""
    args = []
    while isinstance(t, App):
        args.append(t.arg)
        t = t.fun
    args.reverse()
    return t, tuple(args)


def free_vars(t: Term) -> set[str]:
    return set(t.fvs)


def symbols_of(t: Term) -> set[str]:
    if isinstance(t, Sym):
        return {t.name}
    if isinstance(t, App):
        return symbols_of(t.fun) | symbols_of(t.arg)
    if isinstance(t, Lam):
        return symbols_of(t.body)
    return set()


def alpha_eq(t: Term, u: Term) -> bool:
    return t == u


def is_algebraic(t: Term) -> bool:
    """No abstraction and no applied variable."""
    head, args = spine(t)
    if isinstance(head, Lam):
        return False
    if args and not isinstance(head, Sym):
        return False
    return all(is_algebraic(a) for a in args)


def is_closed_under_binders(t: Term) -> bool:
    return t.loose == 0


# --------------------------------------------------------------------------
# Typing


def _symbol_type(sig: Mapping[str, SimpleType], name: str) -> SimpleType:
    try:
        return sig[name]
    except KeyError:
        raise UndeclaredSymbol(name) from None


def type_of(
    t: Term,
    env: TypingEnv,
    sig: Mapping[str, SimpleType],
    ctx: tuple[SimpleType, ...] = (),
) -> SimpleType:
    """Type of ``t``; ``ctx`` holds binder types, innermost first."""
    if isinstance(t, Sym):
        return _symbol_type(sig, t.name)
    if isinstance(t, FVar):
        try:
            return env[t.name]
        except KeyError:
            raise UnboundVariable(t.name) from None
    if isinstance(t, BVar):
        if t.index >= len(ctx):
            raise UnboundVariable(f"loose bound variable #{t.index}")
        return ctx[t.index]
    if isinstance(t, Lam):
        return Arrow(t.annot, type_of(t.body, env, sig, (t.annot,) + ctx))
    fun_ty = type_of(t.fun, env, sig, ctx)
    if not isinstance(fun_ty, Arrow):
        raise NonArrowApplied(f"{show(t.fun)} : {fun_ty} is applied to an argument")
    arg_ty = type_of(t.arg, env, sig, ctx)
    if arg_ty != fun_ty.dom:
        raise ApplicationTypeMismatch(
            f"{show(t.fun)} expects {fun_ty.dom}, got {show(t.arg)} : {arg_ty}"
        )
    return fun_ty.cod


def has_type(t: Term, env: TypingEnv, sig: Mapping[str, SimpleType]) -> SimpleType | None:
    try:
        return type_of(t, env, sig)
    except TermError:
        return None


# --------------------------------------------------------------------------
# de Bruijn machinery


def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    if by == 0 or t.loose <= cutoff:
        return t
    if isinstance(t, BVar):
        return BVar(t.index + by)
    if isinstance(t, App):
        return App(shift(t.fun, by, cutoff), shift(t.arg, by, cutoff))
    if isinstance(t, Lam):
        return Lam(t.annot, shift(t.body, by, cutoff + 1), t.hint)
    return t


def instantiate(body: Term, u: Term, depth: int = 0) -> Term:
    """Replace bound variable ``depth`` of ``body`` by ``u`` and drop one binder level."""
    if body.loose <= depth:
        return body
    if isinstance(body, BVar):
        if body.index == depth:
            return shift(u, depth)
        return BVar(body.index - 1)
    if isinstance(body, App):
        return App(instantiate(body.fun, u, depth), instantiate(body.arg, u, depth))
    if isinstance(body, Lam):
        return Lam(body.annot, instantiate(body.body, u, depth + 1), body.hint)
    return body


def open_body(lam: Lam, name: str) -> Term:
    return instantiate(lam.body, FVar(name))


def abstract(t: Term, name: str, depth: int = 0) -> Term:
    """Turn free occurrences of ``name`` into bound variable ``depth``."""
    if name not in t.fvs and t.loose <= depth:
        return t
    if isinstance(t, FVar):
        return BVar(depth) if t.name == name else t
    if isinstance(t, BVar):
        return BVar(t.index + 1) if t.index >= depth else t
    if isinstance(t, App):
        return App(abstract(t.fun, name, depth), abstract(t.arg, name, depth))
    if isinstance(t, Lam):
        return Lam(t.annot, abstract(t.body, name, depth + 1), t.hint)
    return t


def lam(name: str, annot: SimpleType, body: Term) -> Lam:
    return Lam(annot, abstract(body, name), name)


def rename_free(t: Term, mapping: Mapping[str, str]) -> Term:
    if not (t.fvs & mapping.keys()):
        return t
    if isinstance(t, FVar):
        return FVar(mapping[t.name])
    if isinstance(t, App):
        return App(rename_free(t.fun, mapping), rename_free(t.arg, mapping))
    if isinstance(t, Lam):
        return Lam(t.annot, rename_free(t.body, mapping), t.hint)
    return t


def _replace_free(t: Term, x: str, u: Term, depth: int) -> Term:
    if x not in t.fvs:
        return t
    if isinstance(t, FVar):
        return shift(u, depth)
    if isinstance(t, App):
        return App(_replace_free(t.fun, x, u, depth), _replace_free(t.arg, x, u, depth))
    if isinstance(t, Lam):
        return Lam(t.annot, _replace_free(t.body, x, u, depth + 1), t.hint)
    return t


def substitute(
    t: Term,
    x: str,
    u: Term,
    env: TypingEnv | None = None,
    sig: Mapping[str, SimpleType] | None = None,
) -> Term:
    """Capture-avoiding ``t[x := u]``; type-checked when ``env`` and ``sig`` are given."""
    if env is not None and sig is not None and x in env:
        u_ty = type_of(u, env, sig)
        if u_ty != env[x]:
            raise TypeMismatch(f"{x} : {env[x]} cannot be replaced by {show(u)} : {u_ty}")
    return _replace_free(t, x, u, 0)


def substitute_many(t: Term, sigma: Mapping[str, Term]) -> Term:
    """Simultaneous substitution of free variables."""
    if not (t.fvs & sigma.keys()):
        return t
    return _subst_many(t, sigma, 0)


def _subst_many(t: Term, sigma: Mapping[str, Term], depth: int) -> Term:
    if not (t.fvs & sigma.keys()):
        return t
    if isinstance(t, FVar):
        return shift(sigma[t.name], depth)
    if isinstance(t, App):
        return App(_subst_many(t.fun, sigma, depth), _subst_many(t.arg, sigma, depth))
    if isinstance(t, Lam):
        return Lam(t.annot, _subst_many(t.body, sigma, depth + 1), t.hint)
    return t


# --------------------------------------------------------------------------
# beta and eta


def beta_step(t: Term) -> Term | None:
    """One leftmost-outermost beta step, or None when ``t`` is normal."""
    if isinstance(t, App):
        if isinstance(t.fun, Lam):
            return instantiate(t.fun.body, t.arg)
        r = beta_step(t.fun)
        if r is not None:
            return App(r, t.arg)
        r = beta_step(t.arg)
        if r is not None:
            return App(t.fun, r)
        return None
    if isinstance(t, Lam):
        r = beta_step(t.body)
        return None if r is None else Lam(t.annot, r, t.hint)
    return None


def beta_reducts(t: Term) -> list[Term]:
    """All one-step beta reducts, in leftmost-outermost order."""
    out = []
    if isinstance(t, App):
        if isinstance(t.fun, Lam):
            out.append(instantiate(t.fun.body, t.arg))
        out.extend(App(r, t.arg) for r in beta_reducts(t.fun))
        out.extend(App(t.fun, r) for r in beta_reducts(t.arg))
    elif isinstance(t, Lam):
        out.extend(Lam(t.annot, r, t.hint) for r in beta_reducts(t.body))
    return out


def is_beta_normal(t: Term) -> bool:
    if isinstance(t, App):
        return not isinstance(t.fun, Lam) and is_beta_normal(t.fun) and is_beta_normal(t.arg)
    if isinstance(t, Lam):
        return is_beta_normal(t.body)
    return True


def beta_normalize(t: Term, max_steps: int = 100_000) -> Term:
    for _ in range(max_steps):
        r = beta_step(t)
        if r is None:
            return t
        t = r
    raise InternalLimit(f"no beta normal form within {max_steps} steps")


def eta_normalize(t: Term) -> Term:
    if isinstance(t, App):
        return App(eta_normalize(t.fun), eta_normalize(t.arg))
    if isinstance(t, Lam):
        body = eta_normalize(t.body)
        if isinstance(body, App) and body.arg == BVar(0) and not _mentions(body.fun, 0):
            return shift(body.fun, -1)
        return Lam(t.annot, body, t.hint)
    return t


def _mentions(t: Term, index: int) -> bool:
    if t.loose <= index:
        return False
    if isinstance(t, BVar):
        return t.index == index
    if isinstance(t, App):
        return _mentions(t.fun, index) or _mentions(t.arg, index)
    if isinstance(t, Lam):
        return _mentions(t.body, index + 1)
    return False


def is_miller_pattern(t: Term) -> bool:
    """Beta-normal, and every free variable is applied to distinct bound variables (up to eta)."""
    if not is_beta_normal(t):
        return False

    def walk(u: Term) -> bool:
        if isinstance(u, Lam):
            return walk(u.body)
        head, args = spine(u)
        if isinstance(head, FVar):
            seen = set()
            for a in args:
                a = eta_normalize(a)
                if not isinstance(a, BVar) or a.index in seen:
                    return False
                seen.add(a.index)
            return True
        return all(walk(a) for a in args)

    return walk(t)


# --------------------------------------------------------------------------
# Positions


def subterm_at(t: Term, p: Position) -> Term:
    for i, step in enumerate(p):
        if isinstance(t, App) and step in (1, 2):
            t = t.fun if step == 1 else t.arg
        elif isinstance(t, Lam) and step == 1:
            t = t.body
        else:
            raise InvalidPosition(f"{p} at step {i}")
    return t


def binder_context(t: Term, p: Position) -> tuple[SimpleType, ...]:
    """Types of the binders crossed on the way to ``p``, innermost first."""
    ctx: tuple[SimpleType, ...] = ()
    for step in p:
        if isinstance(t, Lam) and step == 1:
            ctx = (t.annot,) + ctx
            t = t.body
        elif isinstance(t, App) and step in (1, 2):
            t = t.fun if step == 1 else t.arg
        else:
            raise InvalidPosition(str(p))
    return ctx


def _replace(t: Term, p: Position, u: Term) -> Term:
    if not p:
        return u
    step, rest = p[0], p[1:]
    if isinstance(t, App) and step == 1:
        return App(_replace(t.fun, rest, u), t.arg)
    if isinstance(t, App) and step == 2:
        return App(t.fun, _replace(t.arg, rest, u))
    if isinstance(t, Lam) and step == 1:
        return Lam(t.annot, _replace(t.body, rest, u), t.hint)
    raise InvalidPosition(str(p))


def replace_at(
    t: Term,
    p: Position,
    u: Term,
    env: TypingEnv | None = None,
    sig: Mapping[str, SimpleType] | None = None,
) -> Term:
    if env is not None and sig is not None:
        ctx = binder_context(t, p)
        old = type_of(subterm_at(t, p), env, sig, ctx)
        new = type_of(u, env, sig, ctx)
        if old != new:
            raise TypeMismatch(f"cannot put {show(u)} : {new} in place of a {old}")
    return _replace(t, p, u)


def positions(t: Term) -> list[Position]:
    """All positions of ``t`` in preorder (outermost, leftmost first)."""
    out: list[Position] = []

    def go(u: Term, p: Position) -> None:
        out.append(p)
        if isinstance(u, App):
            go(u.fun, p + (1,))
            go(u.arg, p + (2,))
        elif isinstance(u, Lam):
            go(u.body, p + (1,))

    go(t, ())
    return out


def subterms(t: Term) -> Iterator[tuple[Position, Term]]:
    for p in positions(t):
        yield p, subterm_at(t, p)


# --------------------------------------------------------------------------
# Fresh variables


class FreshSupply:
    """Mints fresh variable names and records their types in a private env.

    Fresh names contain ``#`` which the surface syntax never produces, and a
    name always keeps the type it was first minted with, so equal names mean
    equal variables across a whole query.
    """

    def __init__(self, env: TypingEnv | None = None):
        self.env: dict[str, SimpleType] = dict(env or {})

    def fresh(self, hint: str, ty: SimpleType, avoid: Iterable[str] = ()) -> str:
        avoid = set(avoid)
        base = hint.split("#", 1)[0] or "x"
        k = 1
        while True:
            name = f"{base}#{k}"
            if name not in avoid and self.env.get(name, ty) == ty:
                self.env[name] = ty
                return name
            k += 1


# --------------------------------------------------------------------------
# Printing


def show(t: Term, annotate: bool = False) -> str:
    """Render with named binders; ``annotate`` adds binder types."""
    taken = set(t.fvs) | symbols_of(t)
    return _show(t, [], taken, annotate, top=True)


def _pick_name(hint: str, taken: set[str]) -> str:
    base = hint.split("#", 1)[0] or "x"
    if base not in taken:
        return base
    k = 1
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


def _show(t: Term, names: list[str], taken: set[str], annotate: bool, top: bool) -> str:
    if isinstance(t, (Sym, FVar)):
        return t.name
    if isinstance(t, BVar):
        if t.index < len(names):
            return names[-1 - t.index]
        return f"#{t.index}"
    if isinstance(t, Lam):
        name = _pick_name(t.hint, taken | set(names))
        body = _show(t.body, names + [name], taken, annotate, True)
        binder = f"{name}:{_show_type_atom(t.annot)}" if annotate else name
        s = f"\\{binder}. {body}"
        return s if top else f"({s})"
    head, args = spine(t)
    parts = [_show(head, names, taken, annotate, False)]
    for a in args:
        s = _show(a, names, taken, annotate, False)
        if isinstance(a, App):
            s = f"({s})"
        parts.append(s)
    return " ".join(parts)


def _show_type_atom(ty: SimpleType) -> str:
    return f"({ty})" if isinstance(ty, Arrow) else str(ty)


def show_type(ty: SimpleType) -> str:
    return str(ty)
