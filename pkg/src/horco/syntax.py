"""Line-oriented ``.trs`` format: parser, type inference and printer.

::

    # comment
    sig
      0 : N
      s : N -> N
      rec : N -> T -> (N -> T -> T) -> T
    prec
      rec > s, 0
    status
      rec lex
    rules
      rec 0 u v -> u
      rec (s x) u v -> v x (rec x u v)

Identifiers that are not declared in ``sig`` are rule variables; their types
are inferred per rule by unification and must come out fully determined.
"""

from __future__ import annotations

import re
from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import Union

from .closure import ClosureConfig, RewriteSystem, Rule
from .signature import PrecDecl, Signature, Status
from .terms import App, Arrow, Base, BVar, FVar, Lam, SimpleType, Sym, Term, show, show_type

SECTIONS = ("sig", "prec", "status", "rules", "theory")


class TrsInputError(Exception):
    """Any problem with an input file."""


class TrsSyntaxError(TrsInputError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"line {line}, column {col}: {message}")
        self.line, self.col = line, col


class TrsTypeError(TrsInputError):
    def __init__(self, message: str, line: int):
        super().__init__(f"line {line}: {message}")
        self.line = line


class TypeInferenceAmbiguous(TrsTypeError):
    def __init__(self, variable: str, line: int):
        super().__init__(f"type of {variable} is not determined", line)
        self.variable = variable


class DuplicateSymbol(TrsInputError):
    def __init__(self, name: str, line: int):
        super().__init__(f"line {line}: symbol {name} declared twice")
        self.name, self.line = name, line


# --------------------------------------------------------------------------
# Tokens

_TOKEN = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<name>(?:(?!λ)[\w'])+)|(?P<punct>[()\\λ:.,>~]))",
    re.UNICODE,
)


@dataclass(frozen=True)
class Tok:
    kind: str  # "arrow", "name", "punct", "end"
    text: str
    col: int


def tokenize(text: str, line: int) -> list[Tok]:
    out, pos = [], 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            col = pos + len(text[pos:]) - len(text[pos:].lstrip()) + 1
            raise TrsSyntaxError(f"unexpected character {text[col - 1]!r}", line, col)
        kind = m.lastgroup
        out.append(Tok(kind, m.group(kind), m.start(kind) + 1))
        pos = m.end()
    out.append(Tok("end", "", len(text) + 1))
    return out


class _Cursor:
    def __init__(self, toks: list[Tok], line: int):
        self.toks, self.i, self.line = toks, 0, line

    @property
    def peek(self) -> Tok:
        return self.toks[self.i]

    def next(self) -> Tok:
        t = self.toks[self.i]
        if t.kind != "end":
            self.i += 1
        return t

    def at(self, text: str) -> bool:
        return self.peek.text == text and self.peek.kind != "end"

    def expect(self, text: str) -> Tok:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.next()

    def name(self) -> Tok:
        if self.peek.kind != "name":
            self.fail("expected a name")
        return self.next()

    def fail(self, msg: str):
        t = self.peek
        found = "end of line" if t.kind == "end" else repr(t.text)
        raise TrsSyntaxError(f"{msg}, found {found}", self.line, t.col)

    def done(self) -> None:
        if self.peek.kind != "end":
            self.fail("unexpected trailing input")


# --------------------------------------------------------------------------
# Types


def _parse_type(c: _Cursor) -> SimpleType:
    left = _parse_type_atom(c)
    if c.peek.kind == "arrow":
        c.next()
        return Arrow(left, _parse_type(c))
    return left


def _parse_type_atom(c: _Cursor) -> SimpleType:
    if c.at("("):
        c.next()
        ty = _parse_type(c)
        c.expect(")")
        return ty
    return Base(c.name().text)


def parse_type(text: str, line: int = 1) -> SimpleType:
    c = _Cursor(tokenize(text, line), line)
    ty = _parse_type(c)
    c.done()
    return ty


# --------------------------------------------------------------------------
# Raw terms (names unresolved, types partly unknown)


@dataclass(frozen=True)
class _Meta:
    id: int


PType = Union[Base, Arrow, _Meta]


@dataclass
class _RName:
    name: str
    col: int


@dataclass
class _RApp:
    fun: object
    arg: object


@dataclass
class _RLam:
    name: str
    annot: SimpleType | None
    body: object


def _parse_term(c: _Cursor):
    if c.at("\\") or c.at("λ"):
        return _parse_lam(c)
    head = _parse_atom(c)
    while True:
        if c.at("(") or c.peek.kind == "name":
            head = _RApp(head, _parse_atom(c))
        elif c.at("\\") or c.at("λ"):
            head = _RApp(head, _parse_lam(c))
        else:
            return head


def _parse_lam(c: _Cursor):
    c.next()
    name = c.name().text
    annot = None
    if c.at(":"):
        c.next()
        annot = _parse_type(c)
    c.expect(".")
    return _RLam(name, annot, _parse_term(c))


def _parse_atom(c: _Cursor):
    if c.at("("):
        c.next()
        t = _parse_term(c)
        c.expect(")")
        return t
    tok = c.name()
    return _RName(tok.text, tok.col)


# --------------------------------------------------------------------------
# Inference


@dataclass
class _Infer:
    sig: Signature
    line: int
    subst: dict[int, PType] = field(default_factory=dict)
    counter: int = 0
    vars: dict[str, PType] = field(default_factory=dict)

    def meta(self) -> _Meta:
        self.counter += 1
        return _Meta(self.counter)

    def resolve(self, ty: PType) -> PType:
        while isinstance(ty, _Meta) and ty.id in self.subst:
            ty = self.subst[ty.id]
        return ty

    def zonk(self, ty: PType) -> PType:
        ty = self.resolve(ty)
        if isinstance(ty, Arrow):
            return Arrow(self.zonk(ty.dom), self.zonk(ty.cod))
        return ty

    def occurs(self, m: _Meta, ty: PType) -> bool:
        ty = self.resolve(ty)
        if ty == m:
            return True
        return isinstance(ty, Arrow) and (self.occurs(m, ty.dom) or self.occurs(m, ty.cod))

    def unify(self, a: PType, b: PType, what: str) -> None:
        a, b = self.resolve(a), self.resolve(b)
        if a == b:
            return
        if isinstance(a, _Meta):
            if self.occurs(a, b):
                raise TrsTypeError(f"infinite type in {what}", self.line)
            self.subst[a.id] = b
        elif isinstance(b, _Meta):
            self.unify(b, a, what)
        elif isinstance(a, Arrow) and isinstance(b, Arrow):
            self.unify(a.dom, b.dom, what)
            self.unify(a.cod, b.cod, what)
        else:
            raise TrsTypeError(
                f"type mismatch in {what}: {_show_ptype(self.zonk(a))} vs {_show_ptype(self.zonk(b))}",
                self.line,
            )

    def infer(self, t, scope: list[tuple[str, PType]]) -> PType:
        if isinstance(t, _RName):
            for name, ty in reversed(scope):
                if name == t.name:
                    return ty
            if t.name in self.sig:
                return self.sig[t.name]
            if t.name not in self.vars:
                self.vars[t.name] = self.meta()
            return self.vars[t.name]
        if isinstance(t, _RLam):
            dom: PType = t.annot if t.annot is not None else self.meta()
            t.annot_meta = dom  # type: ignore[attr-defined]
            cod = self.infer(t.body, scope + [(t.name, dom)])
            return Arrow(dom, cod)
        fun = self.infer(t.fun, scope)
        arg = self.infer(t.arg, scope)
        res = self.meta()
        self.unify(fun, Arrow(arg, res), "application")
        return res

    def ground(self, ty: PType, what: str) -> SimpleType:
        ty = self.zonk(ty)
        if _has_meta(ty):
            raise TypeInferenceAmbiguous(what, self.line)
        return ty  # type: ignore[return-value]


def _has_meta(ty: PType) -> bool:
    if isinstance(ty, _Meta):
        return True
    return isinstance(ty, Arrow) and (_has_meta(ty.dom) or _has_meta(ty.cod))


def _show_ptype(ty: PType) -> str:
    if isinstance(ty, _Meta):
        return f"?{ty.id}"
    if isinstance(ty, Arrow):
        dom = _show_ptype(ty.dom)
        if isinstance(ty.dom, Arrow):
            dom = f"({dom})"
        return f"{dom} -> {_show_ptype(ty.cod)}"
    return str(ty)


def _to_term(t, inf: _Infer, scope: list[str]) -> Term:
    if isinstance(t, _RName):
        for depth, name in enumerate(reversed(scope)):
            if name == t.name:
                return BVar(depth)
        return Sym(t.name) if t.name in inf.sig else FVar(t.name)
    if isinstance(t, _RLam):
        annot = inf.ground(t.annot_meta, f"binder {t.name}")  # type: ignore[attr-defined]
        return Lam(annot, _to_term(t.body, inf, scope + [t.name]), t.name)
    return App(_to_term(t.fun, inf, scope), _to_term(t.arg, inf, scope))


def parse_rule(text: str, sig: Signature, line: int = 1) -> Rule:
    c = _Cursor(tokenize(text, line), line)
    lhs = _parse_term(c)
    if c.peek.kind != "arrow":
        c.fail("expected '->'")
    c.next()
    rhs = _parse_term(c)
    c.done()
    inf = _Infer(sig, line)
    tl = inf.infer(lhs, [])
    tr = inf.infer(rhs, [])
    inf.unify(tl, tr, "rule sides")
    env = {x: inf.ground(ty, x) for x, ty in inf.vars.items()}
    return Rule(_to_term(lhs, inf, []), _to_term(rhs, inf, []), env)


def parse_term(text: str, sig: Signature, env: dict[str, SimpleType] | None = None, line: int = 1) -> Term:
    """Parse a single term; free names not in ``sig`` must be typed by ``env`` or inferable."""
    c = _Cursor(tokenize(text, line), line)
    raw = _parse_term(c)
    c.done()
    inf = _Infer(sig, line)
    for x, ty in (env or {}).items():
        inf.vars[x] = ty
    inf.infer(raw, [])
    for x, ty in inf.vars.items():
        inf.ground(ty, x)
    return _to_term(raw, inf, [])


# --------------------------------------------------------------------------
# Files


def _lines(text: str) -> Iterator[tuple[int, str]]:
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield n, line


def _section_header(line: str) -> str | None:
    word = line.strip().rstrip(":").strip()
    return word if word in SECTIONS and line.strip() in (word, word + ":") else None


def _parse_prec(line: str, n: int) -> list[PrecDecl]:
    c = _Cursor(tokenize(line, n), n)
    groups = [[c.name().text]]
    ops = []
    while c.peek.kind != "end":
        if not (c.at(">") or c.at("~")):
            c.fail("expected '>' or '~'")
        ops.append(c.next().text)
        group = [c.name().text]
        while c.at(","):
            c.next()
            group.append(c.name().text)
        groups.append(group)
    if not ops:
        c.fail("expected '>' or '~'")
    out = []
    for op, left, right in zip(ops, groups, groups[1:]):
        out.extend(PrecDecl(a, op, b) for a in left for b in right)
    return out


def parse_system(text: str, config: ClosureConfig | None = None) -> RewriteSystem:
    symbols: dict[str, SimpleType] = {}
    prec: list[PrecDecl] = []
    status: dict[str, Status] = {}
    pending: list[tuple[str, int, str]] = []
    section = None
    for n, line in _lines(text):
        header = _section_header(line)
        if header is not None:
            section = header
            continue
        if section is None:
            raise TrsSyntaxError("entry outside of any section", n, 1)
        if section == "sig":
            c = _Cursor(tokenize(line, n), n)
            names = [c.name()]
            while c.at(","):
                c.next()
                names.append(c.name())
            c.expect(":")
            ty = _parse_type(c)
            c.done()
            for tok in names:
                if tok.text in symbols:
                    raise DuplicateSymbol(tok.text, n)
                symbols[tok.text] = ty
        elif section == "prec":
            prec.extend(_parse_prec(line, n))
        elif section == "status":
            c = _Cursor(tokenize(line, n), n)
            name = c.name().text
            word = c.name()
            try:
                status[name] = Status(word.text)
            except ValueError:
                raise TrsSyntaxError(f"unknown status {word.text!r}", n, word.col) from None
            c.done()
        else:
            pending.append((section, n, line))
    sig = Signature(symbols, prec, status)
    rules, theory = [], []
    for section, n, line in pending:
        (rules if section == "rules" else theory).append(parse_rule(line, sig, n))
    return RewriteSystem(sig, tuple(rules), tuple(theory), config or ClosureConfig())


def print_rule(rule: Rule) -> str:
    return f"{show(rule.lhs, annotate=True)} -> {show(rule.rhs, annotate=True)}"


def print_system(sys: RewriteSystem) -> str:
    out = ["sig"]
    out += [f"  {name} : {show_type(ty)}" for name, ty in sys.sig.symbols.items()]
    if sys.sig.prec_decls:
        out.append("prec")
        out += [f"  {d.left} {d.op} {d.right}" for d in sys.sig.prec_decls]
    if sys.sig.status:
        out.append("status")
        out += [f"  {name} {st.value}" for name, st in sys.sig.status.items()]
    for title, rules in (("rules", sys.rules), ("theory", sys.theory)):
        if rules:
            out.append(title)
            out += [f"  {print_rule(r)}" for r in rules]
    return "\n".join(out) + "\n"
