from __future__ import annotations

import json
import subprocess
import sys

import pytest

from horco.cli import bundled_examples, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_goedel_is_oriented(capsys):
    code, out, _ = run(capsys, "goedel_t", "--engine", "horco")
    assert code == 0
    assert out.count("[Oriented]") == 2


def test_mendler_is_not_oriented(capsys):
    code, out, _ = run(capsys, "mendler.trs")
    assert code == 1 and "[NotOriented]" in out


def test_json_records(capsys):
    code, out, _ = run(capsys, "goedel_t", "--format", "json", "--validate-certs")
    data = json.loads(out)
    assert code == 0 and data["status"] == "Oriented"
    assert len(data["rules"]) == 2
    for rec in data["rules"]:
        assert {"rule", "status", "engine", "certificate", "time_ms"} <= set(rec)
        assert rec["engine"] == "horco" and rec["certificate_valid"] is True
        assert rec["certificate"]["rule"] == "rule"


def test_every_rule_appears_once_in_json(capsys):
    for name in bundled_examples():
        _, out, _ = run(capsys, name, "--format", "json")
        data = json.loads(out)
        assert [r["rule"] for r in data["rules"]] == list(dict.fromkeys(r["rule"] for r in data["rules"]))


def test_configuration_flags(capsys):
    assert run(capsys, "process")[0] == 0
    assert run(capsys, "process", "--call-order", "subterm")[0] == 1
    assert run(capsys, "derivative")[0] == 1
    assert run(capsys, "derivative", "--patterns")[0] == 0
    assert run(capsys, "goedel_t", "--acc", "base", "--call-order", "recursive", "--red")[0] == 0


def test_depth_limited_exit_code(capsys):
    assert run(capsys, "goedel_t", "--depth", "1")[0] == 2


def test_theory_problems_fail(capsys):
    code, out, _ = run(capsys, "collapsing")
    assert code == 1 and "CollapsingTheoryRule" in out
    assert run(capsys, "commutativity")[0] == 0


@pytest.mark.parametrize("engine", ["rpo", "forco", "horpo"])
def test_other_engines(capsys, engine):
    assert run(capsys, "mendler", "--engine", engine)[0] == 1
    code, out, _ = run(capsys, "commutativity", "--engine", engine, "--format", "json")
    data = json.loads(out)
    assert all(r["status"] == "Oriented" for r in data["rules"])
    assert data["theory_issues"][0]["kind"] == "TheoryUnsupported" and code == 1


def test_input_errors(capsys, tmp_path):
    assert run(capsys, "no-such-file")[0] == 3
    bad = tmp_path / "bad.trs"
    bad.write_text("sig\n  f : A ->\n")
    code, _, err = run(capsys, str(bad))
    assert code == 3 and "line 2" in err
    assert run(capsys, "goedel_t", "--depth", "0")[0] == 3
    with pytest.raises(SystemExit) as e:
        main(["--engine", "nope", "goedel_t"])
    assert e.value.code == 3
    assert run(capsys)[0] == 3


def test_list_examples(capsys):
    code, out, _ = run(capsys, "--list-examples")
    assert code == 0 and "goedel_t" in out.split()


def test_quick_selftest(capsys):
    code, out, _ = run(capsys, "--selftest", "--quick")
    assert code == 0
    assert out.count("PASS") == 6


def test_module_entry_point():
    p = subprocess.run([sys.executable, "-m", "horco", "mendler"], capture_output=True, text=True)
    assert p.returncode == 1 and "NotOriented" in p.stdout
