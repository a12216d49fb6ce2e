"""Termination of higher-order rewriting by computability closure and path orderings."""

from __future__ import annotations

from .accessibility import AccMode, acc_greater, accessible_args, pos_signed
from .certificates import CertificateCheck, validate_certificate
from .closure import (
    CallOrder,
    ClosureConfig,
    Engine,
    MalformedRule,
    Orientation,
    RewriteSystem,
    Rule,
    Verdict,
    cc_member,
    check_rule,
    check_system,
    horco_greater,
    horco_trans_greater,
    whorco_greater,
)
from .enumerate import CapExceeded, count_terms, enumerate_terms
from .extensions import lex_ext, mul_ext, status_compare
from .orderings import NotFirstOrder, forco_greater, horpo_greater, rpo_greater
from .proof import Answer, Derivation, Tri
from .signature import Prec, Signature, Status
from .syntax import parse_rule, parse_system, parse_term, print_system
from .terms import Arrow, Base, arrow

__version__ = "0.1.0"

__all__ = [
    "AccMode",
    "Answer",
    "Arrow",
    "Base",
    "CallOrder",
    "CapExceeded",
    "CertificateCheck",
    "ClosureConfig",
    "Derivation",
    "Engine",
    "MalformedRule",
    "NotFirstOrder",
    "Orientation",
    "Prec",
    "RewriteSystem",
    "Rule",
    "Signature",
    "Status",
    "Tri",
    "Verdict",
    "acc_greater",
    "accessible_args",
    "arrow",
    "cc_member",
    "check_rule",
    "check_system",
    "count_terms",
    "enumerate_terms",
    "forco_greater",
    "horco_greater",
    "horco_trans_greater",
    "horpo_greater",
    "lex_ext",
    "mul_ext",
    "parse_rule",
    "parse_system",
    "parse_term",
    "pos_signed",
    "print_system",
    "rpo_greater",
    "status_compare",
    "validate_certificate",
    "whorco_greater",
]
