"""Enumeration-based property checks shared by ``horco --selftest`` and the test suite."""

from __future__ import annotations

import random
import time
from collections.abc import Callable, Iterable
from dataclasses import dataclass, field
from itertools import combinations_with_replacement

from .accessibility import AccMode
from .certificates import Validator
from .closure import CallOrder, ClosureConfig, Engine
from .enumerate import enumerate_terms
from .extensions import mul_ext
from .oracles import oracle_mul, oracle_rpo
from .orderings import FORCO, HORPO, RPO
from .proof import Answer, Derivation
from .signature import Signature, Status
from .terms import Base, SimpleType, Term, arrow, show, spine, substitute_many

N, T = Base("N"), Base("T")


def fo_setup() -> tuple[Signature, dict[str, SimpleType]]:
    sig = Signature(
        {"0": N, "s": arrow(N, N), "plus": arrow(N, N, N), "times": arrow(N, N, N)},
        [("times", ">", "plus"), ("plus", ">", "s"), ("s", ">", "0")],
        {f: Status.LEX_LR for f in ("0", "s", "plus", "times")},
    )
    return sig, {"x": N, "y": N}


def ho_setup() -> tuple[Signature, dict[str, SimpleType], list[SimpleType]]:
    """Recursor signature plus a few constants and variables that build applications."""
    sig = Signature(
        {
            "0": N,
            "s": arrow(N, N),
            "rec": arrow(N, T, arrow(N, T, T), T),
            "a": T,
            "h": arrow(T, T),
            "g": arrow(N, T, T),
        },
        [("rec", ">", "s"), ("rec", ">", "0"), ("rec", ">", "h"), ("h", ">", "a"), ("g", ">", "a")],
        {"rec": Status.LEX_LR, "h": Status.MUL, "g": Status.MUL},
    )
    env = {"x": N, "u": T, "v": arrow(N, T, T), "w": arrow(T, T)}
    types = [N, T, arrow(T, T), arrow(N, T), arrow(N, T, T)]
    return sig, env, types


# The configuration under which HORPO is compared with the computability ordering.
HO_CONFIG = ClosureConfig(acc_mode=AccMode.BASE_ONLY, call_order=CallOrder.RECURSIVE, red_rule=True)


@dataclass
class CheckResult:
    name: str
    checked: int = 0
    positives: int = 0
    failures: list[str] = field(default_factory=list)
    certificates: int = 0
    bad_certificates: list[str] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return not self.failures and not self.bad_certificates

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def summary(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        out = f"{verdict} {self.name}: {self.checked} checked, {self.positives} positive"
        if self.certificates:
            out += f", {self.certificates} certificates replayed"
        n = len(self.failures) + len(self.bad_certificates)
        if n:
            out += f", {n} problems: " + "; ".join((self.failures + self.bad_certificates)[:3])
        return out + f" ({self.seconds:.1f}s)"


def _replay(res: CheckResult, v: Validator, d: Derivation, what: Callable[[], str]) -> None:
    res.certificates += 1
    c = v.check(d)
    if not c and len(res.bad_certificates) < 20:
        res.bad_certificates.append(f"{what()}: node {c.path} ({c.rule}) {c.reason}")


def check_fo_equality(max_size: int = 5, validate: bool = True) -> CheckResult:
    """RPO and its computability-style presentation agree on every ordered pair."""
    t0 = time.perf_counter()
    sig, env = fo_setup()
    terms = enumerate_terms(sig, env, N, max_size)
    rpo, forco = RPO(sig), FORCO(sig)
    v = Validator(sig, env)
    res = CheckResult(f"FO equality rpo = forco (size <= {max_size})")
    for t in terms:
        for u in terms:
            a, b = rpo.greater(t, u), forco.greater(t, u)
            res.checked += 1
            if bool(a) != bool(b):
                res.fail(f"{show(t)} vs {show(u)}: rpo {a.tri.value} forco {b.tri.value}")
            if a:
                res.positives += 1
                if validate:
                    _replay(res, v, a.proof, lambda: f"rpo {show(t)} > {show(u)}")
            if b and validate:
                _replay(res, v, b.proof, lambda: f"forco {show(t)} > {show(u)}")
    res.seconds = time.perf_counter() - t0
    return res


def check_rpo_oracle(max_size: int = 4) -> CheckResult:
    t0 = time.perf_counter()
    sig, env = fo_setup()
    terms = enumerate_terms(sig, env, N, max_size)
    rpo = RPO(sig)
    res = CheckResult(f"rpo agrees with the reference oracle (size <= {max_size})")
    for t in terms:
        for u in terms:
            res.checked += 1
            a = bool(rpo.greater(t, u))
            res.positives += a
            if a != oracle_rpo(sig, t, u):
                res.fail(f"{show(t)} vs {show(u)}")
    res.seconds = time.perf_counter() - t0
    return res


def _proper_subterms(t: Term) -> list[Term]:
    """Subterms at argument positions (partial applications of the head are not terms of the algebra)."""
    out = []
    for a in spine(t)[1]:
        out.append(a)
        out.extend(_proper_subterms(a))
    return out


def check_rpo_sanity(max_size: int = 5, samples: int = 100, seed: int = 0) -> CheckResult:
    """Irreflexivity, transitivity, strict subterm inclusion and stability under substitution."""
    t0 = time.perf_counter()
    sig, env = fo_setup()
    terms = enumerate_terms(sig, env, N, max_size)
    rpo = RPO(sig)
    res = CheckResult(f"rpo sanity (size <= {max_size}, {samples} substitutions)")
    below = {t: {u for u in terms if rpo.greater(t, u)} for t in terms}
    for t in terms:
        res.checked += 1
        if t in below[t]:
            res.fail(f"{show(t)} > itself")
        for s in _proper_subterms(t):
            res.checked += 1
            if s not in below[t]:
                res.fail(f"{show(t)} not above its subterm {show(s)}")
        for u in below[t]:
            res.positives += 1
            missing = below[u] - below[t]
            res.checked += len(below[u])
            if missing:
                w = min(missing, key=show)
                res.fail(f"{show(t)} > {show(u)} > {show(w)} but not {show(t)} > {show(w)}")
    rng = random.Random(seed)
    pairs = sorted(((t, u) for t in terms for u in below[t]), key=lambda p: (show(p[0]), show(p[1])))
    small = enumerate_terms(sig, env, N, 3)
    for _ in range(samples):
        t, u = rng.choice(pairs)
        sigma = {x: rng.choice(small) for x in sorted(env)}
        ts, us = substitute_many(t, sigma), substitute_many(u, sigma)
        res.checked += 1
        if not rpo.greater(ts, us):
            res.fail(f"{show(t)} > {show(u)} not stable under {({k: show(w) for k, w in sigma.items()})}")
    res.seconds = time.perf_counter() - t0
    return res


def check_horpo_inclusion(
    max_size: int = 4,
    restrict_app: bool = False,
    steps: int = 3,
    budget: int = 8,
    validate: bool = True,
) -> CheckResult:
    """Every HORPO step is matched by a chain of at most ``steps`` computability-ordering steps.

    With ``restrict_app`` the application rule of HORPO only allows one strict
    side, and a single step (``steps=1``) must suffice.  A budget-limited
    answer counts as a miss.
    """
    t0 = time.perf_counter()
    sig, env, types = ho_setup()
    horpo = HORPO(sig, env, restrict_app=restrict_app)
    engine = Engine(sig, HO_CONFIG, env)
    label = "restricted application rule, single step" if restrict_app else f"chains of <= {steps}"
    res = CheckResult(f"HORPO included in the computability ordering, {label} (size <= {max_size})")
    yes_pairs: list[tuple[Term, Term, Answer, Answer]] = []
    for ty in types:
        terms = enumerate_terms(sig, env, ty, max_size)
        for t in terms:
            for u in terms:
                res.checked += 1
                h = horpo.greater(t, u)
                if not h:
                    continue
                res.positives += 1
                r = engine.horco(t, u, budget) if steps == 1 else engine.horco_plus(t, u, steps, budget)
                if not r:
                    res.fail(f"{show(t)} > {show(u)} [{r.tri.value}]")
                yes_pairs.append((t, u, h, r))
    if validate:
        vh = Validator(sig, horpo.supply.env, horpo_restrict_app=restrict_app)
        vc = Validator(sig, engine.env, HO_CONFIG)
        for t, u, h, r in yes_pairs:
            _replay(res, vh, h.proof, lambda: f"horpo {show(t)} > {show(u)}")
            if r:
                _replay(res, vc, r.proof, lambda: f"horco {show(t)} > {show(u)}")
    res.seconds = time.perf_counter() - t0
    return res


def _multisets(n: int, max_len: int) -> list[tuple[int, ...]]:
    return [c for k in range(max_len + 1) for c in combinations_with_replacement(range(n), k)]


def check_mul_oracle(
    pool_size: int = 20,
    max_total: int = 4,
    sample_side: int = 4,
    samples: int = 20000,
    seed: int = 0,
) -> CheckResult:
    """``mul_ext`` against the subset-splitting oracle over a pool of first-order terms.

    Exhaustive over every pair of multisets of combined size at most
    ``max_total``, plus ``samples`` random pairs with each side of size at most
    ``sample_side``.  The base relation is RPO restricted to the pool.
    """
    t0 = time.perf_counter()
    sig, env = fo_setup()
    pool = enumerate_terms(sig, env, N, 3)[:pool_size]
    if len(pool) < pool_size:
        raise ValueError("pool too small")
    rpo = RPO(sig)
    table = {(a, b): rpo.greater(a, b) for a in pool for b in pool}

    def cmp(a: Term, b: Term) -> Answer:
        return table[(a, b)]

    def gt(a: Term, b: Term) -> bool:
        return bool(table[(a, b)])

    res = CheckResult(
        f"mul_ext vs oracle (pool {pool_size}, combined size <= {max_total}, {samples} samples of sides <= {sample_side})"
    )

    def one(m: Iterable[int], n: Iterable[int]) -> None:
        left, right = [pool[i] for i in m], [pool[i] for i in n]
        res.checked += 1
        a = mul_ext(cmp, left, right)
        b = oracle_mul(gt, left, right)
        res.positives += b
        if bool(a) != b:
            res.fail(f"{[show(x) for x in left]} vs {[show(y) for y in right]}")

    ms = _multisets(pool_size, max_total)
    for m in ms:
        for n in ms:
            if len(m) + len(n) <= max_total:
                one(m, n)
    rng = random.Random(seed)
    side = _multisets(pool_size, sample_side)
    for _ in range(samples):
        one(rng.choice(side), rng.choice(side))
    res.seconds = time.perf_counter() - t0
    return res


def run_selftest(quick: bool = False) -> list[CheckResult]:
    fo, ho = (4, 3) if quick else (5, 4)
    return [
        check_fo_equality(fo),
        check_rpo_oracle(min(fo, 4)),
        check_rpo_sanity(fo),
        check_horpo_inclusion(ho),
        check_horpo_inclusion(ho, restrict_app=True, steps=1),
        check_mul_oracle(samples=2000 if quick else 20000),
    ]


__all__ = [
    "CheckResult",
    "HO_CONFIG",
    "check_fo_equality",
    "check_horpo_inclusion",
    "check_mul_oracle",
    "check_rpo_oracle",
    "check_rpo_sanity",
    "fo_setup",
    "ho_setup",
    "run_selftest",
]
