import json

import pytest

from condflat.catalog import catalog_build
from condflat.cli import main
from condflat.config import RunConfig
from condflat.exactseq import dumps_extension, extension_of_normal
from condflat.groups import dihedral
from condflat.reports import parse
from condflat.suite import evaluate_expectation, expectation_for, run_suite, write_report
from condflat.verdicts import FAIL, PASS, AuditReport

SMALL = dict(max_order=6, test_max=4)


def test_expectation_table():
    assert expectation_for("ab", "condflat").verdict == PASS
    assert expectation_for("ab", "sle").verdict == FAIL
    assert expectation_for("ab", "sle").witness_group == "D_8"
    assert expectation_for("null:Z/2", "extclosed").verdict == PASS
    assert expectation_for("burnside:3", "sle") is None
    assert expectation_for("ab", "torsion").common_verdict == FAIL


def test_expected_fail_passing_is_a_violation():
    cat = catalog_build(8)
    fake = AuditReport("semi_left_exact", "ab", PASS, 10)
    assert evaluate_expectation("ab", "sle", fake, cat).status == "violated"


def test_missing_witness_group_makes_expectation_not_applicable():
    cat = catalog_build(6)
    fake = AuditReport("semi_left_exact", "ab", PASS, 10)
    assert evaluate_expectation("ab", "sle", fake, cat).status == "n/a"


def test_small_suite_meets_expectations(tmp_path):
    cfg = RunConfig(out=str(tmp_path), **SMALL)
    res = run_suite(cfg)
    assert res.exit_status == 0
    assert all(e.status in ("met", "n/a") for e in res.expectations)
    path = write_report(res)
    doc = parse(path.read_text())
    assert doc["exit_status"] == 0 and doc["run"]["max_order"] == 6


def test_max_order_four_birkhoff_audits_pass():
    res = run_suite(RunConfig(reflectors=("ab", "burnside:2", "nil:2"), max_order=4, test_max=4,
                              audits=("fiberwise", "condflat", "admissible")))
    assert all(r.passed for _, r in res.reports)


def test_sle_regression_for_ab():
    res = run_suite(RunConfig(reflectors=("ab",), audits=("sle",), max_order=8, test_max=4))
    [(audit, rep)] = res.reports
    assert audit == "sle" and rep.verdict == FAIL
    [e] = res.expectations
    assert e.status == "met" and res.exit_status == 0


def test_report_is_deterministic_without_timing():
    cfg = RunConfig(**SMALL)
    a = run_suite(cfg).document(timing=False)
    b = run_suite(cfg).document(timing=False)
    assert a == b


# --- CLI --------------------------------------------------------------------

def test_cli_catalog(capsys):
    assert main(["catalog", "--max-order", "4", "--normal"]) == 0
    out = capsys.readouterr().out
    assert "Z/2^2" in out and "[0]" in out


def test_cli_catalog_json(capsys):
    assert main(["catalog", "--max-order", "6", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["max_order"] == 6 and len(doc["groups"]) == 8


def test_cli_reflect_and_nullify(capsys):
    assert main(["reflect", "D_8", "--reflector", "ab"]) == 0
    assert "L(X) of order 4" in capsys.readouterr().out
    assert main(["nullify", "S_3", "--by", "Z/3", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["reflections"][0]["LX_order"] == 2


def test_cli_fiberwise_and_flat(capsys, tmp_path):
    assert main(["fiberwise", "S_3xZ/2", "--reflector", "ab"]) == 0
    out = capsys.readouterr().out
    assert "commutes     True" in out
    D8 = dihedral(4)
    path = tmp_path / "center.ext"
    path.write_text(dumps_extension(extension_of_normal(D8, D8.center)))
    assert main(["flat", "--extension", str(path), "--reflector", "ab"]) == 0
    assert "NOT flat" in capsys.readouterr().out


def test_cli_condflat_single_extension(capsys):
    assert main(["condflat", "D_8", "--normal", "1", "--reflector", "ab", "--max-order", "8", "--test-max", "4"]) == 0
    assert "conditional_flatness" in capsys.readouterr().out


def test_cli_audit_writes_report(tmp_path, capsys):
    rc = main(["sle", "--reflector", "ab", "--max-order", "8", "--test-max", "4", "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert rc == 0 and "MET" in out
    doc = parse((tmp_path / "report.txt").read_text())
    assert doc["audit"][0]["verdict"] == FAIL


def test_cli_audit_json(tmp_path, capsys):
    rc = main(["audit", "--audit", "radical", "--reflector", "null:Z/2", "--max-order", "6",
               "--out", str(tmp_path), "--json"])
    assert rc == 0
    assert json.loads((tmp_path / "report.json").read_text())["exit_status"] == 0
    assert json.loads(capsys.readouterr().out)["run"]["audits"] == ["radical"]


@pytest.mark.parametrize("argv", [
    ["catalog", "--max-order", "0"],
    ["reflect", "D_8", "--reflector", "bogus"],
    ["reflect", "Q_9"],
    ["flat", "--extension", "/nonexistent/file"],
    ["fiberwise"],
    ["condflat", "D_8", "--normal", "99"],
    ["catalog", "--config", "/nonexistent/cfg"],
])
def test_cli_errors_exit_two(argv, capsys):
    assert main(argv) == 2
    assert "error:" in capsys.readouterr().err


def test_cli_unwritable_output_exits_two(tmp_path, capsys):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    rc = main(["audit", "--audit", "radical", "--reflector", "null:Z/2", "--max-order", "2",
               "--out", str(blocker / "sub")])
    assert rc == 2 and "cannot write report" in capsys.readouterr().err
