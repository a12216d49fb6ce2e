"""Symbol declarations, precedence quasi-ordering and statuses."""

from __future__ import annotations

import enum
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import cached_property

from .terms import SimpleType, UndeclaredSymbol, uncurry


class Status(enum.Enum):
    LEX_LR = "lex"
    LEX_RL = "lexrl"
    MUL = "mul"


class Prec(enum.Enum):
    GREATER = "Greater"
    LESS = "Less"
    EQUIVALENT = "Equivalent"
    INCOMPARABLE = "Incomparable"


@dataclass(frozen=True)
class PrecDecl:
    left: str
    op: str  # ">" or "~"
    right: str

    def __post_init__(self) -> None:
        if self.op not in (">", "~"):
            raise ValueError(f"unknown precedence operator {self.op!r}")


@dataclass(frozen=True)
class Violation:
    kind: str  # PrecedenceCycle | StatusMismatch | UndeclaredSymbol
    symbols: tuple[str, ...]
    message: str


class Signature(Mapping[str, SimpleType]):
    """Typed symbols plus the precedence and statuses over them.

    Behaves as a read-only mapping from symbol name to type, which is what
    ``type_of`` expects.
    """

    def __init__(
        self,
        symbols: Mapping[str, SimpleType],
        prec: Iterable[PrecDecl | tuple[str, str, str]] = (),
        status: Mapping[str, Status] | None = None,
    ):
        self._symbols = dict(symbols)
        self.prec_decls = tuple(d if isinstance(d, PrecDecl) else PrecDecl(*d) for d in prec)
        self.status = dict(status or {})

    def __getitem__(self, name: str) -> SimpleType:
        return self._symbols[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._symbols)

    def __len__(self) -> int:
        return len(self._symbols)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Signature):
            return NotImplemented
        return (
            self._symbols == other._symbols
            and self.prec_decls == other.prec_decls
            and self.status == other.status
        )

    __hash__ = None  # type: ignore[assignment]

    def __repr__(self) -> str:
        return f"Signature({self._symbols!r}, prec={self.prec_decls!r}, status={self.status!r})"

    @property
    def symbols(self) -> Mapping[str, SimpleType]:
        return self._symbols

    def type_of_symbol(self, name: str) -> SimpleType:
        try:
            return self._symbols[name]
        except KeyError:
            raise UndeclaredSymbol(name) from None

    def arity(self, name: str) -> int:
        return len(uncurry(self.type_of_symbol(name))[0])

    def status_of(self, name: str) -> Status:
        return self.status.get(name, Status.LEX_LR)

    # ---- precedence ------------------------------------------------------

    @cached_property
    def _classes(self) -> dict[str, str]:
        parent = {name: name for name in self._symbols}
        for d in self.prec_decls:
            parent.setdefault(d.left, d.left)
            parent.setdefault(d.right, d.right)

        def find(x: str) -> str:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for d in self.prec_decls:
            if d.op == "~":
                a, b = find(d.left), find(d.right)
                if a != b:
                    parent[max(a, b)] = min(a, b)
        return {x: find(x) for x in parent}

    @cached_property
    def _above(self) -> dict[str, frozenset[str]]:
        """For each class representative, the classes strictly below it."""
        cls = self._classes
        edges: dict[str, set[str]] = {c: set() for c in set(cls.values())}
        for d in self.prec_decls:
            if d.op == ">":
                edges[cls[d.left]].add(cls[d.right])
        below: dict[str, frozenset[str]] = {}
        for c in edges:
            seen: set[str] = set()
            stack = list(edges[c])
            while stack:
                x = stack.pop()
                if x not in seen:
                    seen.add(x)
                    stack.extend(edges[x])
            below[c] = frozenset(seen)
        return below

    def validate(self) -> list[Violation]:
        """Return every problem with the declarations; an empty list means valid."""
        out = []
        for d in self.prec_decls:
            for name in (d.left, d.right):
                if name not in self._symbols:
                    out.append(Violation("UndeclaredSymbol", (name,), f"{name} is not declared"))
        for name in self.status:
            if name not in self._symbols:
                out.append(Violation("UndeclaredSymbol", (name,), f"{name} is not declared"))
        cls = self._classes
        cyclic = sorted(c for c, below in self._above.items() if c in below)
        if cyclic:
            members = tuple(sorted(x for x in cls if cls[x] in cyclic))
            out.append(
                Violation("PrecedenceCycle", members, "strict precedence is cyclic among " + ", ".join(members))
            )
        groups: dict[str, list[str]] = {}
        for x, c in cls.items():
            if x in self._symbols:
                groups.setdefault(c, []).append(x)
        for members in groups.values():
            members.sort()
            first = members[0]
            for other in members[1:]:
                if self.status_of(first) != self.status_of(other):
                    out.append(
                        Violation(
                            "StatusMismatch",
                            (first, other),
                            f"{first} ~ {other} but their statuses differ",
                        )
                    )
        return out

    def prec_compare(self, f: str, g: str) -> Prec:
        for name in (f, g):
            if name not in self._symbols:
                raise UndeclaredSymbol(name)
        cls = self._classes
        cf, cg = cls[f], cls[g]
        if cf == cg:
            return Prec.EQUIVALENT
        down, up = cg in self._above[cf], cf in self._above[cg]
        if down and not up:
            return Prec.GREATER
        if up and not down:
            return Prec.LESS
        return Prec.INCOMPARABLE

    def greater(self, f: str, g: str) -> bool:
        return self.prec_compare(f, g) is Prec.GREATER

    def equivalent(self, f: str, g: str) -> bool:
        return self.prec_compare(f, g) is Prec.EQUIVALENT
