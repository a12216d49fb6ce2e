from __future__ import annotations

from horco.signature import Signature, Status
from horco.syntax import parse_term
from horco.terms import Base, arrow

N, T, B, D, P = Base("N"), Base("T"), Base("B"), Base("D"), Base("P")

GOEDEL = Signature(
    {"0": N, "s": arrow(N, N), "rec": arrow(N, T, arrow(N, T, T), T)},
    [("rec", ">", "s"), ("rec", ">", "0")],
    {"rec": Status.LEX_LR},
)
GOEDEL_ENV = {"x": N, "y": N, "u": T, "v": arrow(N, T, T)}

ARITH = Signature(
    {"0": N, "s": arrow(N, N), "plus": arrow(N, N, N), "times": arrow(N, N, N)},
    [("times", ">", "plus"), ("plus", ">", "s"), ("s", ">", "0")],
    {"plus": Status.LEX_LR, "times": Status.LEX_LR},
)
ARITH_ENV = {"x": N, "y": N, "z": N}

PROCESS = Signature(
    {"sum": arrow(arrow(D, P), P), "seq": arrow(P, P, P)},
    [("seq", ">", "sum")],
    {"seq": Status.LEX_LR},
)
PROCESS_ENV = {"p": arrow(D, P), "x": P, "y": D}


def term(text: str, sig=GOEDEL, env=None):
    return parse_term(text, sig, dict(env if env is not None else GOEDEL_ENV))
