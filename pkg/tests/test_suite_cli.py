"""The verification suite driver and the command line around it."""

import json
from fractions import Fraction

import pytest

from formalconn import cli
from formalconn.connection import frenkel_gross_connection
from formalconn.serialize import connection_to_json, dump, load, oper_to_json
from formalconn.opers import canonicalize
from formalconn.suite import (
    CLAIM_ANCHORS,
    VerificationReport,
    check_lambda_separation,
    check_local_structure,
    check_oper_route,
    default_config,
    run_suite,
    suite_passed,
)


def test_default_suite_passes():
    reports = run_suite()
    assert suite_passed(reports)
    assert all(r.error is None for r in reports)
    # every claim id appears
    assert {r.claim for r in reports} == set(CLAIM_ANCHORS)


def test_suite_is_deterministic():
    a = [r.to_json() for r in run_suite()]
    b = [r.to_json() for r in run_suite()]
    assert a == b


def test_suite_scoped_to_one_claim():
    cfg = default_config()
    cfg["claims"] = ["irreducibility-ingredients"]
    cfg["types"] = ["A1", "G2"]
    reports = run_suite(cfg)
    assert [r.claim for r in reports] == ["irreducibility-ingredients"] * 2
    assert suite_passed(reports)
    grain = {r.witness["granularity"] for r in reports}
    assert grain == {"proof-ingredient verification"}


def test_suite_captures_errors_per_job():
    cfg = default_config()
    cfg["claims"] = ["local-structure"]
    cfg["types"] = ["E8"]
    reports = run_suite(cfg)
    assert len(reports) == len(cfg["lambdas"])
    assert not suite_passed(reports)
    assert all(r.error and "E8" in r.error for r in reports)

    cfg2 = default_config()
    cfg2["claims"] = ["oper-route"]
    cfg2["types"] = ["A1"]
    cfg2["lambdas"] = [Fraction(0)]
    bad = run_suite(cfg2)
    assert len(bad) == 1 and bad[0].error
    assert not bad[0].passed


def test_suite_unknown_claim():
    cfg = default_config()
    cfg["claims"] = ["no-such-claim"]
    reports = run_suite(cfg)
    assert len(reports) == 1
    assert not reports[0].passed
    assert "unknown claim" in reports[0].error


def test_suite_empty_claims():
    cfg = default_config()
    cfg["claims"] = []
    assert run_suite(cfg) == []


def test_report_json_shape():
    rep = check_local_structure("A2", Fraction(2))
    obj = rep.to_json()
    assert obj["schema"] == 1
    assert obj["claim"] == "local-structure"
    assert obj["anchor"] == CLAIM_ANCHORS["local-structure"]
    assert obj["pass"] is True
    json.dumps(obj)


def test_lambda_separation_biconditional():
    same = check_lambda_separation("B2", Fraction(2), Fraction(2))
    diff = check_lambda_separation("B2", Fraction(2), Fraction(3))
    assert same.passed and diff.passed
    assert same.witness["equal_parameters"]
    assert not diff.witness["equal_parameters"]
    assert same.witness["equal_invariants"]
    assert not diff.witness["equal_invariants"]


def test_oper_route_carries_ledger_flag():
    rep = check_oper_route("A1", Fraction(1))
    assert rep.passed
    assert "residue-class-at-shifted-weight" in rep.ledger


def test_cli_verify_single_claim(capsys):
    code = cli.main([
        "verify", "--claim", "irreducibility-ingredients",
        "--type", "A", "--rank", "2",
    ])
    out = capsys.readouterr().out
    assert code == 0
    assert "[PASS] irreducibility-ingredients" in out
    assert out.strip().endswith("1/1 checks passed")


def test_cli_verify_failure_exit_code(capsys):
    code = cli.main([
        "verify", "--claim", "local-structure", "--type", "E", "--rank", "8",
    ])
    out = capsys.readouterr().out
    assert code == 1
    assert "[FAIL]" in out


def test_cli_verify_rejects_type_without_rank():
    with pytest.raises(SystemExit):
        cli.main(["verify", "--type", "A"])
    with pytest.raises(SystemExit):
        cli.main(["verify", "--rank", "2"])


def test_cli_verify_writes_artifacts(tmp_path, capsys):
    out = tmp_path / "report.json"
    code = cli.main([
        "verify", "--claim", "oper-route", "--type", "B", "--rank", "2",
        "--lambda", "3/2", "--out", str(out),
    ])
    assert code == 0
    payload = load(out)
    assert payload["pass"] is True
    assert payload["schema"] == 1
    # default grid plus the extra value
    assert payload["config"]["lambdas"] == ["1", "2", "1/3", "3/2"]
    assert len(payload["reports"]) == 4
    csv_path = tmp_path / "report.csv"
    assert csv_path.exists()
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "claim,parameters,pass,error"
    assert len(lines) == 5
    assert (tmp_path / "report_polygon_B2.png").exists()
    assert (tmp_path / "report_poles_B2.png").exists()


def test_cli_verify_no_figures(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = cli.main([
        "verify", "--claim", "sl2-freeness", "--out", str(out), "--no-figures",
    ])
    assert code == 0
    assert out.exists()
    assert not list(tmp_path.glob("*.png"))


def test_cli_canonicalize_roundtrip(tmp_path, capsys):
    src = tmp_path / "conn.json"
    dst = tmp_path / "oper.json"
    dump(connection_to_json(frenkel_gross_connection("A1", Fraction(5, 2))), src)
    code = cli.main(["canonicalize", "--in", str(src), "--out", str(dst)])
    assert code == 0
    obj = load(dst)
    assert obj["type"] == "A" and obj["rank"] == 1
    expect, _ = canonicalize(frenkel_gross_connection("A1", Fraction(5, 2)))
    assert obj == oper_to_json(expect)
    out = capsys.readouterr().out
    assert "pole profile:" in out


def test_cli_invariants(tmp_path, capsys):
    src = tmp_path / "conn.json"
    dump(
        connection_to_json(frenkel_gross_connection("A2", 1, at="infinity")), src
    )
    code = cli.main(["invariants", "--in", str(src)])
    assert code == 0
    out = capsys.readouterr().out
    assert "pole order: 2" in out
    assert "slope: 1/3" in out
    assert "adjoint irregularity: 2" in out
    assert "branch:" in out


def test_cli_invariants_unsplit_branch_note(tmp_path, capsys):
    src = tmp_path / "conn.json"
    dump(
        connection_to_json(frenkel_gross_connection("A2", 3, at="infinity")), src
    )
    assert cli.main(["invariants", "--in", str(src)]) == 0
    out = capsys.readouterr().out
    assert "not split over a supported tower" in out


def test_cli_error_exit_code(tmp_path, capsys):
    src = tmp_path / "oper.json"
    oper, _ = canonicalize(frenkel_gross_connection("A1", 1))
    dump(oper_to_json(oper), src)
    code = cli.main(["invariants", "--in", str(src)])
    assert code == 2
    err = capsys.readouterr().err
    assert "canonical form" in err


def test_report_dataclass_defaults():
    rep = VerificationReport(
        claim="x", parameters={}, passed=True, witness={}
    )
    assert rep.ledger == []
    assert rep.error is None
    assert rep.anchor == "x"
