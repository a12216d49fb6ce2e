from __future__ import annotations

from dataclasses import replace

import pytest
from helpers import ARITH, ARITH_ENV, PROCESS, PROCESS_ENV, term

from horco.accessibility import AccMode
from horco.certificates import Validator, validate_certificate
from horco.cli import bundled_examples, load_system
from horco.closure import CallOrder, ClosureConfig, Engine, check_system
from horco.orderings import HORPO, RPO
from horco.proof import Derivation, Greater
from horco.selftest import HO_CONFIG, ho_setup
from horco.signature import Signature
from horco.terms import FVar, Sym

CONFIGS = [
    ClosureConfig(),
    ClosureConfig(acc_mode=AccMode.BASE_ONLY),
    ClosureConfig(call_order=CallOrder.SUBTERM),
    ClosureConfig(miller_rules=True),
    ClosureConfig(call_order=CallOrder.RECURSIVE, red_rule=True),
]


def tamper(d: Derivation, rule: str, change) -> Derivation:
    """Rebuild ``d`` with the first node named ``rule`` (preorder) replaced by ``change(node)``."""
    done = False

    def go(n: Derivation) -> Derivation:
        nonlocal done
        if not done and n.rule == rule:
            done = True
            return change(n)
        return replace(n, premises=tuple(go(p) for p in n.premises))

    out = go(d)
    assert done, f"no {rule} node"
    return out


def all_certificates():
    for name in sorted(bundled_examples()):
        for cfg in CONFIGS:
            sys = load_system(name, cfg)
            rep = check_system(sys)
            for v in rep.verdicts:
                if v.certificate is not None:
                    yield name, sys, v.certificate, v.env
            for _, d, env in rep.theory_certificates:
                yield name, sys, d, env


def test_every_emitted_certificate_replays():
    rules = set()
    n = 0
    for name, sys, d, env in all_certificates():
        res = validate_certificate(sys, d, env)
        assert res, (name, sys.config, res)
        rules |= set(d.rules_used())
        n += 1
    assert n >= 20
    expected = {"rule", "arg", "decomp-symb", "decomp-lam", "decomp-app-left", "prec", "call", "app", "var", "lam",
                "lex", "mul", ">base", ">lam", "subterm", "cont"}
    assert expected <= rules


def _goedel_cert(config=ClosureConfig(acc_mode=AccMode.BASE_ONLY)):
    sys = load_system("goedel_t", config)
    v = check_system(sys).verdicts[1]
    return sys, v.certificate, v.env


def test_lex_index_must_point_at_the_first_difference():
    sys, d, env = _goedel_cert()
    bad = tamper(d, "lex", lambda n: replace(n, info={"index": (2, 2)}))
    res = validate_certificate(sys, bad, env)
    assert not res and res.rule == "lex"


def test_base_step_variables_must_avoid_the_anchor():
    sig, env = PROCESS, PROCESS_ENV
    a, b = term("sum p", sig, env), term("p y", sig, env)
    good = Derivation(">base", Greater("acc", a, b, term("seq (sum p) x", sig, env)), (), {"index": 1, "vars": ("y",)})
    assert validate_certificate(sig, good, env)
    bad = replace(good, conclusion=Greater("acc", a, b, term("seq (sum p) (p y)", sig, env)))
    res = validate_certificate(sig, bad, env)
    assert not res and "anchor" in res.reason
    wrong_index = replace(good, info={"index": 2, "vars": ("y",)})
    assert not validate_certificate(sig, wrong_index, env)


def test_accessibility_mode_is_rechecked():
    sys = load_system("process")
    v = check_system(sys).verdicts[0]
    assert validate_certificate(sys, v.certificate, v.env)
    res = Validator(sys.sig, v.env, ClosureConfig(acc_mode=AccMode.BASE_ONLY)).check(v.certificate)
    assert not res and res.rule in (">base", "decomp-symb")


def test_call_relation_must_match_the_configuration():
    sys, d, env = _goedel_cert()
    res = Validator(sys.sig, env, ClosureConfig(call_order=CallOrder.SUBTERM)).check(d)
    assert not res and res.rule == "call"


def test_pattern_rules_need_the_flag():
    sys = load_system("derivative", ClosureConfig(miller_rules=True))
    v = check_system(sys).verdicts[0]
    assert validate_certificate(sys, v.certificate, v.env)
    res = Validator(sys.sig, v.env, ClosureConfig()).check(v.certificate)
    assert not res and "disabled" in res.reason


def test_multiset_bookkeeping_is_rechecked():
    sys = load_system("commutativity")
    v = check_system(sys).verdicts[1]
    d = v.certificate
    assert "mul" in d.rules_used()
    bad = tamper(d, "mul", lambda n: replace(n, info={**n.info, "removed": ()}))
    assert not validate_certificate(sys, bad, v.env)
    bad = tamper(d, "mul", lambda n: replace(n, info={**n.info, "added": n.info["added"] + (FVar("x"),)}))
    assert not validate_certificate(sys, bad, v.env)


def test_context_position_is_rechecked():
    sig, env, _ = ho_setup()
    eng = Engine(sig, HO_CONFIG, env)
    t, u = term("h (rec (s x) u v)", sig, env), term("h (v x (rec x u v))", sig, env)
    r = eng.horco(t, u, 8)
    assert r and validate_certificate(sig, r.proof, eng.env, HO_CONFIG)
    bad = tamper(r.proof, "cont", lambda n: replace(n, info={**n.info, "position": (1,)}))
    assert not validate_certificate(sig, bad, eng.env, HO_CONFIG)


def test_rpo_certificates_check_precedence():
    r = RPO(ARITH).greater(term("times x y", ARITH, ARITH_ENV), term("plus x y", ARITH, ARITH_ENV))
    assert Validator(ARITH, ARITH_ENV).check(r.proof)
    flat = Signature(ARITH.symbols)
    res = Validator(flat, ARITH_ENV).check(r.proof)
    assert not res and res.rule == "rpo-2"


def test_restricted_application_rule_is_enforced():
    sig, env, _ = ho_setup()
    h = HORPO(sig, env)
    r = h.greater(term("v (s x) (h u)", sig, env), term("v x u", sig, env))
    assert Validator(sig, h.supply.env).check(r.proof)
    assert not Validator(sig, h.supply.env, horpo_restrict_app=True).check(r.proof)


def test_wrong_conclusion_kind():
    d = Derivation("subterm", Greater("horco", Sym("0"), Sym("0")), (), {"position": (1,)})
    res = validate_certificate(ARITH, d, ARITH_ENV)
    assert not res and "subterm" in res.reason


@pytest.mark.parametrize("bad_info", [{}, {"index": "one"}])
def test_malformed_info_is_reported_not_raised(bad_info):
    sys, d, env = _goedel_cert()
    bad = tamper(d, "arg", lambda n: replace(n, info=bad_info))
    assert not validate_certificate(sys, bad, env)
