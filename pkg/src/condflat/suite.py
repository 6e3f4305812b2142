"""The audit matrix driver: runs audits per reflector and checks expectations.

Expectations encode what the theory predicts for each (reflector, audit)
pair.  Verbal reflections are conditionally flat and admissible but fail the
torsion-theory conditions; nullifications pass everything.  Expected
failures are tied to a witness group that must show up among the failing
cases, and only apply when that group is present in the catalog.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from .catalog import Catalog, catalog_build
from .config import AUDITS, RunConfig
from .errors import FiberwisePreconditionFailed, ReportWriteError
from .exactseq import loads_extension
from .groups import FiniteGroup, find_isomorphism, group_from_name, loads_group
from .reflectors import Reflector, parse_reflector
from .reports import render, report_to_doc
from .verdicts import (
    FAIL,
    PASS,
    AuditReport,
    audit_conditional_flatness,
    audit_fiberwise,
    audit_flatness_admissibility_equivalence,
    audit_torsion_equivalences,
    check_admissibility,
    check_extension_closed,
    check_radical_trivializes,
    check_semi_left_exact,
    check_torsion_free,
)

log = logging.getLogger(__name__)

# reflector -> group that must witness the failure of the torsion-theory conditions
REGRESSION_WITNESSES = {"ab": "D_8", "burnside:2": "Z/4", "nil:2": "S_3"}
TORSION_CONDITIONS = ("sle", "extclosed", "radical", "torsionfree")


@dataclass(frozen=True)
class Expectation:
    verdict: str
    witness_group: Optional[str] = None
    common_verdict: Optional[str] = None  # for the equivalence audits


@dataclass(frozen=True)
class ExpectationResult:
    reflector: str
    audit: str
    expected: str
    observed: str
    status: str  # "met", "violated" or "n/a"

    def line(self) -> str:
        return f"{self.status.upper():<9} {self.audit:<12} {self.reflector:<12} expected {self.expected}, observed {self.observed}"


def expectation_for(reflector: str, audit: str) -> Optional[Expectation]:
    if audit in ("fiberwise", "condflat", "admissible", "equivalence"):
        return Expectation(PASS)
    is_null = reflector.startswith("null:")
    witness = REGRESSION_WITNESSES.get(reflector)
    if audit in TORSION_CONDITIONS:
        if is_null:
            return Expectation(PASS)
        if witness:
            return Expectation(FAIL, witness)
        return None
    if audit == "torsion":
        if is_null:
            return Expectation(PASS, common_verdict=PASS)
        if witness:
            return Expectation(PASS, witness, common_verdict=FAIL)
        return Expectation(PASS)
    return None


def _witness_group(w: dict) -> Optional[FiniteGroup]:
    if "C" in w:
        return loads_group(w["C"])
    if "X" in w:
        return loads_group(w["X"])
    if "extension" in w:
        return loads_extension(w["extension"]).E
    return None


def has_witness_isomorphic_to(report: AuditReport, H: FiniteGroup) -> bool:
    for w in report.witnesses:
        G = _witness_group(w)
        if G is not None and G.order == H.order and find_isomorphism(G, H) is not None:
            return True
    return False


def _catalog_has(cat: Catalog, H: FiniteGroup) -> bool:
    return any(G.order == H.order and find_isomorphism(G, H) is not None for G in cat.groups)


def evaluate_expectation(
    reflector: str, audit: str, report: AuditReport, cat: Catalog
) -> Optional[ExpectationResult]:
    exp = expectation_for(reflector, audit)
    if exp is None:
        return None
    observed = report.verdict
    if "common_verdict" in report.notes:
        observed += f" (conditions {report.notes['common_verdict']})"
    expected = exp.verdict
    if exp.common_verdict:
        expected += f" (conditions {exp.common_verdict})"
    H = group_from_name(exp.witness_group) if exp.witness_group else None
    if H is not None and not _catalog_has(cat, H):
        status = "n/a"
    elif exp.verdict == FAIL:
        ok = report.verdict == FAIL and has_witness_isomorphic_to(report, H)
        status = "met" if ok else "violated"
        expected += f" with witness {exp.witness_group}"
    else:
        ok = report.verdict == exp.verdict
        if exp.common_verdict is not None:
            ok = ok and report.notes.get("common_verdict") == exp.common_verdict
        status = "met" if ok else "violated"
    return ExpectationResult(reflector, audit, expected, observed, status)


@dataclass
class SuiteResult:
    config: RunConfig
    catalog: Catalog
    reports: list[tuple[str, AuditReport]]
    expectations: list[ExpectationResult]

    @property
    def exit_status(self) -> int:
        return 1 if any(e.status == "violated" for e in self.expectations) else 0

    def document(self, timing: bool = True) -> dict:
        c = self.config
        return {
            "run": {
                "catalog_fingerprint": self.catalog.fingerprint,
                "max_order": c.max_order,
                "test_max": c.test_max,
                "groups": len(self.catalog.groups),
                "extensions": len(self.catalog.extensions),
                "reflectors": list(c.reflectors),
                "audits": list(c.audits),
            },
            "audit": [dict(report_to_doc(r, timing), audit=a) for a, r in self.reports],
            "expectation": [e.__dict__ for e in self.expectations],
            "exit_status": self.exit_status,
        }


def _precondition_failure(prop: str, R: Reflector, exc: Exception) -> AuditReport:
    return AuditReport(prop, R.label, FAIL, 0, [{"case": "precondition", "reason": str(exc)}])


def run_reflector(R: Reflector, audits: tuple[str, ...], cat: Catalog, test_max: int, jobs: int = 1):
    """Run the selected audits for one reflector; shared sub-audits run once."""
    groups = list(cat.groups)
    exts = list(cat.extensions)
    tests = cat.up_to(test_max)
    need = set(audits)
    if "torsion" in need:
        need |= set(TORSION_CONDITIONS)
    if "equivalence" in need:
        need |= {"condflat", "admissible"}
    runners = {
        "fiberwise": lambda: audit_fiberwise(R, exts),
        "condflat": lambda: audit_conditional_flatness(R, exts, tests, jobs=jobs),
        "admissible": lambda: check_admissibility(R, groups, jobs=jobs),
        "sle": lambda: check_semi_left_exact(R, groups, jobs=jobs),
        "extclosed": lambda: check_extension_closed(R, exts),
        "radical": lambda: check_radical_trivializes(R, groups),
        "torsionfree": lambda: check_torsion_free(R, groups),
    }
    done: dict[str, AuditReport] = {}
    for key in AUDITS:
        if key in need and key in runners:
            log.info("running %s for %s", key, R.label)
            done[key] = runners[key]()
    if "torsion" in need:
        subs = [done[k] for k in ("extclosed", "radical", "sle", "torsionfree")]
        try:
            done["torsion"] = audit_torsion_equivalences(R, groups, exts, subreports=subs)
        except FiberwisePreconditionFailed as exc:
            done["torsion"] = _precondition_failure("torsion_equivalences", R, exc)
    if "equivalence" in need:
        subs = [done["condflat"], done["admissible"]]
        try:
            done["equivalence"] = audit_flatness_admissibility_equivalence(
                R, groups, exts, tests, subreports=subs
            )
        except FiberwisePreconditionFailed as exc:
            done["equivalence"] = _precondition_failure("flatness_admissibility", R, exc)
    return [(a, done[a]) for a in AUDITS if a in audits]


def run_suite(config: RunConfig, catalog: Optional[Catalog] = None) -> SuiteResult:
    config.validate()
    cat = catalog if catalog is not None else catalog_build(config.max_order)
    reports: list[tuple[str, AuditReport]] = []
    expectations: list[ExpectationResult] = []
    for spec in config.reflectors:
        R = parse_reflector(spec)
        for audit, rep in run_reflector(R, config.audits, cat, config.test_max, config.jobs):
            reports.append((audit, rep))
            res = evaluate_expectation(spec, audit, rep, cat)
            if res is not None:
                expectations.append(res)
    return SuiteResult(config, cat, reports, expectations)


def write_report(result: SuiteResult, out: Optional[str] = None, name: str = "report") -> Path:
    directory = Path(out or result.config.out)
    suffix = ".json" if result.config.json else ".txt"
    try:
        directory.mkdir(parents=True, exist_ok=True)
        path = directory / f"{name}{suffix}"
        path.write_text(render(result.document(), result.config.json))
    except OSError as exc:
        raise ReportWriteError(f"cannot write report to {directory}: {exc}") from exc
    return path
