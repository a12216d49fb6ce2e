"""Running an engine over a whole rewrite system and rendering the outcome."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from typing import Any

from .certificates import Validator
from .closure import (
    Engine,
    Orientation,
    RewriteSystem,
    Rule,
    TheoryIssue,
    check_theory,
    orientation,
    rule_problems,
)
from .orderings import FORCO, HORPO, RPO, is_first_order_rule
from .proof import Answer, Derivation
from .syntax import print_rule

ENGINES = ("rpo", "forco", "horpo", "horco")


@dataclass
class RuleRecord:
    rule: str
    engine: str
    status: Orientation
    certificate: Derivation | None = None
    time_ms: float = 0.0
    reason: str = ""
    certificate_valid: bool | None = None

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "rule": self.rule,
            "status": self.status.value,
            "engine": self.engine,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "time_ms": round(self.time_ms, 3),
        }
        if self.reason:
            out["reason"] = self.reason
        if self.certificate_valid is not None:
            out["certificate_valid"] = self.certificate_valid
        return out


@dataclass
class Report:
    engine: str
    records: list[RuleRecord] = field(default_factory=list)
    violations: list = field(default_factory=list)
    theory_issues: list[TheoryIssue] = field(default_factory=list)

    @property
    def status(self) -> Orientation:
        if self.violations or self.theory_issues:
            return Orientation.NOT_ORIENTED
        statuses = {r.status for r in self.records}
        if Orientation.NOT_ORIENTED in statuses or any(r.certificate_valid is False for r in self.records):
            return Orientation.NOT_ORIENTED
        if Orientation.DEPTH_LIMITED in statuses:
            return Orientation.DEPTH_LIMITED
        return Orientation.ORIENTED

    @property
    def exit_code(self) -> int:
        return {Orientation.ORIENTED: 0, Orientation.NOT_ORIENTED: 1, Orientation.DEPTH_LIMITED: 2}[self.status]

    def to_json(self) -> dict[str, Any]:
        return {
            "engine": self.engine,
            "status": self.status.value,
            "violations": [{"kind": v.kind, "symbols": list(v.symbols), "message": v.message} for v in self.violations],
            "theory_issues": [
                {"kind": i.kind, "rule": print_rule(i.rule), "message": i.message} for i in self.theory_issues
            ],
            "rules": [r.to_json() for r in self.records],
        }

    def to_text(self, certificates: bool = True) -> str:
        lines = [f"engine: {self.engine}"]
        for v in self.violations:
            lines.append(f"signature: {v.kind}: {v.message}")
        for i in self.theory_issues:
            lines.append(f"theory: {i.kind}: {i.message}")
        for r in self.records:
            line = f"[{r.status.value}] {r.rule}  ({r.time_ms:.1f} ms)"
            if r.reason:
                line += f"  -- {r.reason}"
            if r.certificate_valid is not None:
                line += "  certificate " + ("ok" if r.certificate_valid else "INVALID")
            lines.append(line)
            if certificates and r.certificate is not None:
                lines.append(r.certificate.pretty(1))
        lines.append(f"overall: {self.status.value}")
        return "\n".join(lines)


def _first_order_engine(name: str, sys: RewriteSystem, rule: Rule) -> tuple[Answer | None, str]:
    if not is_first_order_rule(sys.sig, rule.env, rule.lhs, rule.rhs):
        return None, f"{name} only handles first-order rules over base types"
    eng = RPO(sys.sig) if name == "rpo" else FORCO(sys.sig)
    return eng.greater(rule.lhs, rule.rhs), ""


def run_engine(sys: RewriteSystem, engine: str = "horco", validate: bool = False) -> Report:
    """Check every rule of ``sys`` with ``engine``; the theory is only supported by ``horco``."""
    if engine not in ENGINES:
        raise ValueError(f"unknown engine {engine!r}")
    report = Report(engine, violations=list(sys.sig.validate()))
    if engine == "horco":
        report.theory_issues, _ = check_theory(sys)
    else:
        report.theory_issues = [
            TheoryIssue("TheoryUnsupported", e, f"engine {engine} cannot work modulo {print_rule(e)}")
            for e in sys.theory
        ]
    for rule in sys.rules:
        t0 = time.perf_counter()
        problem = rule_problems(sys.sig, rule)
        answer: Answer | None = None
        env = dict(rule.env)
        reason = problem or ""
        if problem is None:
            if engine in ("rpo", "forco"):
                answer, reason = _first_order_engine(engine, sys, rule)
            elif engine == "horpo":
                h = HORPO(sys.sig, rule.env)
                answer = h.greater(rule.lhs, rule.rhs)
                env = dict(h.supply.env)
            else:
                e = Engine(sys.sig, sys.config, rule.env)
                answer = e.whorco(rule.lhs, rule.rhs, sys.config.depth_budget)
                env = dict(e.env)
        status = orientation(answer) if answer is not None else Orientation.NOT_ORIENTED
        rec = RuleRecord(print_rule(rule), engine, status, answer.proof if answer else None)
        rec.reason = reason
        if validate and rec.certificate is not None:
            rec.certificate_valid = bool(Validator(sys.sig, env, sys.config).check(rec.certificate))
        rec.time_ms = (time.perf_counter() - t0) * 1000
        report.records.append(rec)
    return report


def dumps(report: Report) -> str:
    return json.dumps(report.to_json(), indent=2, ensure_ascii=False)
