"""Three-valued answers and derivation certificates."""

from __future__ import annotations

import enum
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Any, Union

from .terms import Term, rename_free, show


class Tri(enum.Enum):
    YES = "Yes"
    NO = "No"
    LIMITED = "DepthLimited"


@dataclass(frozen=True)
class Member:
    """``goal`` belongs to the computability closure of ``head args``."""

    head: str
    args: tuple[Term, ...]
    goal: Term

    def __str__(self) -> str:
        args = ", ".join(show(a) for a in self.args)
        return f"{show(self.goal)} in CC^{self.head}({args})"


@dataclass(frozen=True)
class Greater:
    """``left >_rel right``; ``anchor`` is the left-hand side for the accessibility family."""

    rel: str
    left: Term
    right: Term
    anchor: Term | None = None

    def __str__(self) -> str:
        sup = f"^[{show(self.anchor)}]" if self.anchor is not None else ""
        return f"{show(self.left)} >{self.rel}{sup} {show(self.right)}"


@dataclass(frozen=True)
class SeqGreater:
    """Extension comparison of two argument sequences (``kind`` is lex-lr, lex-rl or mul)."""

    kind: str
    rel: str
    left: tuple[Term, ...]
    right: tuple[Term, ...]
    anchor: Term | None = None

    def __str__(self) -> str:
        lhs = ", ".join(show(a) for a in self.left)
        rhs = ", ".join(show(a) for a in self.right)
        return f"({lhs}) >{self.rel},{self.kind} ({rhs})"


@dataclass(frozen=True)
class StatGreater:
    """Status relation ``(f, left) >stat (g, right)``."""

    rel: str
    f: str
    left: tuple[Term, ...]
    g: str
    right: tuple[Term, ...]
    anchor: Term | None = None

    def __str__(self) -> str:
        lhs = ", ".join(show(a) for a in self.left)
        rhs = ", ".join(show(a) for a in self.right)
        return f"({self.f}; {lhs}) >{self.rel},stat ({self.g}; {rhs})"


Judgment = Union[Member, Greater, SeqGreater, StatGreater]


@dataclass(frozen=True)
class Derivation:
    rule: str
    conclusion: Judgment
    premises: tuple[Derivation, ...] = ()
    info: Mapping[str, Any] = field(default_factory=dict)

    def walk(self):
        yield self
        for p in self.premises:
            yield from p.walk()

    def rules_used(self) -> list[str]:
        seen: dict[str, None] = {}
        for d in self.walk():
            seen.setdefault(d.rule, None)
        return list(seen)

    def size(self) -> int:
        return sum(1 for _ in self.walk())

    def pretty(self, indent: int = 0) -> str:
        lines = [f"{'  ' * indent}({self.rule}) {self.conclusion}"]
        lines.extend(p.pretty(indent + 1) for p in self.premises)
        return "\n".join(lines)

    def to_json(self) -> dict[str, Any]:
        return {
            "rule": self.rule,
            "conclusion": str(self.conclusion),
            "info": {k: _jsonable(v) for k, v in self.info.items()},
            "premises": [p.to_json() for p in self.premises],
        }


def _jsonable(v: Any) -> Any:
    if isinstance(v, Term):
        return show(v)
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    if isinstance(v, Mapping):
        return {str(k): _jsonable(x) for k, x in v.items()}
    return v


@dataclass(frozen=True)
class Answer:
    """Outcome of a bounded search; only ``Yes`` carries a derivation."""

    tri: Tri
    proof: Derivation | None = None

    def __bool__(self) -> bool:
        return self.tri is Tri.YES

    @property
    def limited(self) -> bool:
        return self.tri is Tri.LIMITED


NO = Answer(Tri.NO)
LIMITED = Answer(Tri.LIMITED)


def yes(proof: Derivation) -> Answer:
    return Answer(Tri.YES, proof)


def no_or_limited(limited: bool) -> Answer:
    return LIMITED if limited else NO


# --------------------------------------------------------------------------
# Renaming free variables inside certificates


def _rename_value(v: Any, mapping: Mapping[str, str]) -> Any:
    if isinstance(v, Term):
        return rename_free(v, mapping)
    if isinstance(v, str):
        return mapping.get(v, v)
    if isinstance(v, tuple):
        return tuple(_rename_value(x, mapping) for x in v)
    if isinstance(v, list):
        return [_rename_value(x, mapping) for x in v]
    return v


def _rename_judgment(j: Judgment, mapping: Mapping[str, str]) -> Judgment:
    if isinstance(j, Member):
        return Member(j.head, _rename_value(j.args, mapping), rename_free(j.goal, mapping))
    if isinstance(j, Greater):
        anchor = None if j.anchor is None else rename_free(j.anchor, mapping)
        return Greater(j.rel, rename_free(j.left, mapping), rename_free(j.right, mapping), anchor)
    if isinstance(j, SeqGreater):
        anchor = None if j.anchor is None else rename_free(j.anchor, mapping)
        return SeqGreater(
            j.kind, j.rel, _rename_value(j.left, mapping), _rename_value(j.right, mapping), anchor
        )
    anchor = None if j.anchor is None else rename_free(j.anchor, mapping)
    return StatGreater(
        j.rel, j.f, _rename_value(j.left, mapping), j.g, _rename_value(j.right, mapping), anchor
    )


def rename_derivation(d: Derivation, mapping: Mapping[str, str]) -> Derivation:
    """Apply an injective renaming of free variables to a whole certificate.

    Only variable names listed in ``info['var']`` / ``info['vars']`` and the
    terms themselves are renamed; symbol names are never keys of ``mapping``.
    """
    info = {}
    for k, v in d.info.items():
        info[k] = _rename_value(v, mapping) if k in ("var", "vars", "opened") else v
    return Derivation(
        d.rule,
        _rename_judgment(d.conclusion, mapping),
        tuple(rename_derivation(p, mapping) for p in d.premises),
        info,
    )
