import json
import subprocess
import sys

import pytest

from fixtures_exprs import MALFORMED_EXPRS, MALFORMED_STATES, VALID_EXPRS, VALID_STATES

import hv.cli as cli
import hv.identities as identities
from hv.exprs import (
    ElabError,
    ParseError,
    elaborate,
    parse_expr,
    parse_state,
    print_expr,
)
from hv.fock import create, vacuum
from hv.frobenius import builtin_model
from hv.operators import commutator, equal_up_to, q, virasoro


@pytest.fixture(scope="module")
def p2():
    return builtin_model("p2")


@pytest.mark.parametrize("text", VALID_EXPRS)
def test_round_trip(text):
    ast = parse_expr(text)
    printed = print_expr(ast)
    again = parse_expr(printed)
    assert again.key() == ast.key(), (text, printed)


@pytest.mark.parametrize("text,pos", MALFORMED_EXPRS)
def test_malformed_positions(text, pos):
    with pytest.raises(ParseError) as err:
        parse_expr(text)
    assert err.value.pos == pos, (text, str(err.value))


def test_parse_shapes():
    ast = parse_expr("[L(2,one), L(-2,one)]")
    assert ast.key()[0] == "brk"
    ast = parse_expr("3/2*W(3,0,one)")
    assert ast.key()[0] == "prod"
    ast = parse_expr("q(1,h)")
    assert ast.key() == ("gen", "q", (1,), "h")


def test_elaboration_matches_direct(p2):
    h = p2.cls("h")
    pairs = [
        ("q(2,h)", q(2, h)),
        ("L(-1,h)", virasoro(-1, h)),
        ("[L(1,h), q(1,h)]", commutator(virasoro(1, h), q(1, h))),
        ("q(1,h)*q(1,h)", q(1, h) * q(1, h)),
        ("2*q(1,h) - q(1,h)", q(1, h)),
    ]
    for text, direct in pairs:
        op = elaborate(parse_expr(text), p2)
        ok, _ = equal_up_to(op, direct, 3)
        assert ok, text


def test_elaboration_unknown_label(p2):
    with pytest.raises(ElabError) as err:
        elaborate(parse_expr("q(1,zz)"), p2)
    assert err.value.pos == 5
    with pytest.raises(ElabError):
        elaborate(parse_expr("W(0,1,h)"), p2)  # k >= 1 enforced at elaboration


def test_state_round_trip(p2):
    for text in VALID_STATES:
        v = parse_state(text, p2)
        assert parse_state(str(v), p2) == v


def test_state_operator_round_trip(p2):
    # printing an operator image and re-parsing it reproduces the vector
    op = elaborate(parse_expr("d"), p2)
    v = op.apply(create(2, p2.one(), vacuum(p2)))
    assert parse_state(str(v), p2) == v
    assert str(parse_state("0*vac", p2)) == "0"


@pytest.mark.parametrize("text,pos", MALFORMED_STATES)
def test_malformed_states(text, pos):
    m = builtin_model("p2")
    with pytest.raises(ParseError) as err:
        parse_state(text, m)
    assert err.value.pos == pos, (text, str(err.value))


# -- CLI ------------------------------------------------------------------


def run_cli(*argv):
    import io
    from contextlib import redirect_stdout

    buf = io.StringIO()
    with redirect_stdout(buf):
        code = cli.main(list(argv))
    return code, buf.getvalue()


def test_cli_apply_examples():
    code, out = run_cli("apply", "--surface", "builtin:p2", "--expr", "d", "--state", "vac")
    assert code == 0 and out.strip() == "0"
    code, out = run_cli("apply", "--surface", "builtin:p2", "--expr", "L(2,x)", "--state", "vac")
    assert code == 0 and out.strip() == "1/2*q(1,x)*q(1,x)*vac"
    code, out = run_cli(
        "apply", "--surface", "builtin:p2", "--expr", "[q(-1,h),q(1,h)]", "--state", "vac")
    assert code == 0 and out.strip() == "-1*vac"


def test_cli_commutator():
    code, out = run_cli(
        "commutator", "--surface", "builtin:p2",
        "--lhs", "L(1,h)", "--rhs", "q(1,h)", "--state", "vac")
    assert code == 0 and out.strip() == "-1*q(2,x)*vac"


def test_cli_parse_error_exit_2(capsys):
    code, out = run_cli("apply", "--surface", "builtin:p2", "--expr", "q(1", "--state", "vac")
    assert code == 2
    err = capsys.readouterr().err
    assert "position 4" in err


def test_cli_span():
    code, out = run_cli("span", "--surface", "builtin:p2", "--n", "3")
    assert code == 0 and out.strip() == "PASS 22/22"
    code, out = run_cli("span", "--surface", "builtin:p2", "--n", "2", "--format", "json")
    assert code == 0
    js = json.loads(out)
    assert js["status"] == "PASS" and js["achieved"] == 9


def test_cli_poincare_and_basis():
    code, out = run_cli("poincare", "--surface", "builtin:p2", "--n", "2")
    assert code == 0 and out.strip() == "1,0,2,0,3,0,2,0,1"
    code, out = run_cli("basis", "--surface", "builtin:p2", "--n", "0")
    assert code == 0 and out.strip() == "vac"
    code, out = run_cli("basis", "--surface", "builtin:p2", "--n", "1")
    assert out.splitlines() == ["q(1,one)*vac", "q(1,h)*vac", "q(1,x)*vac"]


def test_cli_check_skip_and_exit_codes():
    code, out = run_cli(
        "check", "--surface", "builtin:p2", "--suite", "d_eq_minusW03_514")
    assert code == 0
    assert "SKIP" in out
    code, out = run_cli(
        "check", "--surface", "builtin:p2", "--suite", "heisenberg", "--level", "0")
    assert code == 0 and "PASS" in out
    code, out = run_cli("check", "--surface", "builtin:p2", "--suite", "bogus")
    assert code == 2


def test_cli_check_json():
    code, out = run_cli(
        "check", "--surface", "builtin:p2", "--suite", "w1_eq_q,g0_unit_56",
        "--level", "2", "--format", "json")
    assert code == 0
    js = json.loads(out)
    assert js["status"] == 0
    assert [c["id"] for c in js["checks"]] == ["w1_eq_q", "g0_unit_56"]


def test_cli_fail_exit_code(monkeypatch):
    fake = [identities.CheckReport("heisenberg", {}, "FAIL", witness="x")]
    monkeypatch.setattr(identities, "run_suite", lambda *a, **k: (fake, 1))
    code, out = run_cli("check", "--surface", "builtin:p2", "--suite", "heisenberg")
    assert code == 1
    import hv.spanning as spanning

    monkeypatch.setattr(
        spanning, "check_generation",
        lambda n, m: spanning.SpanReport(n, 0, 0, 1, 0, m.name))
    code, out = run_cli("span", "--surface", "builtin:p2", "--n", "1")
    assert code == 1 and out.strip() == "FAIL 0/1"


def test_cli_model_file_and_validation(tmp_path):
    m = builtin_model("p2")
    good = tmp_path / "good.json"
    good.write_text(json.dumps(m.to_json()))
    code, out = run_cli("validate", "--surface", str(good))
    assert code == 0
    assert all(line.endswith("PASS") for line in out.strip().splitlines())

    data = m.to_json()
    data["products"] = [p for p in data["products"]
                        if not (p["left"] == "h" and p["right"] == "h")]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, out = run_cli("validate", "--surface", str(bad))
    assert code == 3
    assert any("nondegenerate_pairing FAIL" in line for line in out.splitlines())

    # any other command on an invalid model refuses with exit 3
    code, out = run_cli("basis", "--surface", str(bad), "--n", "1")
    assert code == 3

    schema_bad = tmp_path / "schema.json"
    schema_bad.write_text(json.dumps({"name": "x"}))
    code, out = run_cli("validate", "--surface", str(schema_bad))
    assert code == 3


def test_cli_validate_json_format():
    code, out = run_cli("validate", "--surface", "builtin:torus", "--format", "json")
    assert code == 0
    js = json.loads(out)
    assert js["ok"] is True and js["model"] == "torus"


def test_cli_deterministic_across_jobs():
    runs = []
    for jobs in ("1", "4"):
        code, out = run_cli(
            "check", "--surface", "builtin:p2", "--suite", "heisenberg,w2_eq_L",
            "--level", "2", "--jobs", jobs)
        assert code == 0
        runs.append(out)
    assert runs[0] == runs[1]


def test_console_script_installed():
    out1 = subprocess.run(
        [sys.executable, "-m", "hv.cli", "poincare", "--surface", "builtin:torus", "--n", "1"],
        capture_output=True, text=True)
    out2 = subprocess.run(
        [sys.executable, "-m", "hv.cli", "poincare", "--surface", "builtin:torus", "--n", "1"],
        capture_output=True, text=True)
    assert out1.returncode == 0
    assert out1.stdout == out2.stdout == "1,4,6,4,1\n"
