"""Decision procedures for flatness, admissibility and the torsion-theory criteria.

Every audit quantifies exhaustively over the objects it is given and over all
homomorphisms between them, in a fixed order, and collects one witness record
per failing case.  Witness records hold serialized groups and maps so that a
failing case can be replayed in isolation with :func:`replay_witness`.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional, Sequence

from .errors import FiberwisePreconditionFailed, ParseError, RadicalNotNormalInTotal
from .exactseq import Extension, dumps_extension, loads_extension, pullback_extension
from .fiberwise import fiberwise_localize
from .groups import (
    FiniteGroup,
    Hom,
    dumps_group,
    dumps_hom,
    enumerate_homs,
    image,
    kernel,
    loads_group,
    loads_hom,
    pullback,
)
from .reflectors import Reflector

PASS, FAIL = "pass", "fail"


@dataclass
class AuditReport:
    property: str
    reflector: str
    verdict: str
    cases_checked: int
    witnesses: list[dict] = field(default_factory=list)
    elapsed: float = 0.0
    notes: dict = field(default_factory=dict)
    subreports: list["AuditReport"] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def summary(self) -> str:
        line = (
            f"{self.property:<28} {self.reflector:<12} {self.verdict.upper():<4} "
            f"cases={self.cases_checked} witnesses={len(self.witnesses)}"
        )
        if "conditions" in self.notes:
            line += " [" + " ".join(f"{k}={v}" for k, v in self.notes["conditions"].items()) + "]"
        return line

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "property": self.property,
            "reflector": self.reflector,
            "verdict": self.verdict,
            "cases_checked": self.cases_checked,
            "witnesses": self.witnesses,
            "notes": self.notes,
            "subreports": [s.to_dict(timing) for s in self.subreports],
        }
        if timing:
            d["elapsed"] = round(self.elapsed, 3)
        return d


def _finish(prop: str, R: Reflector, cases: int, witnesses: list, start: float, **notes) -> AuditReport:
    return AuditReport(
        prop, R.label, FAIL if witnesses else PASS, cases, witnesses, time.perf_counter() - start, notes
    )


def _map_items(fn: Callable, R: Reflector, items: Sequence, jobs: int, *extra) -> list:
    """Apply fn(R, item, *extra) to each item, preserving item order."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(R, it, *extra) for it in items]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, [R] * len(items), items, *[[e] * len(items) for e in extra]))


# -- flatness ---------------------------------------------------------------


@dataclass(frozen=True)
class FlatVerdict:
    flat: bool
    stage: Optional[str] = None

    def __bool__(self) -> bool:
        return self.flat


def check_flat(R: Reflector, ext: Extension) -> FlatVerdict:
    """Whether 0 -> L(K) -> L(E) -> L(Q) -> 0 is again exact."""
    Lk = R.reflect_hom(ext.k)
    Lp = R.reflect_hom(ext.p)
    assert Lp.is_surjective(), "L(p) must be surjective for a normal-epi reflection"
    if not Lk.is_injective():
        return FlatVerdict(False, "kernel-map-not-injective")
    if image(Lk).carrier != kernel(Lp).carrier:
        return FlatVerdict(False, "image-not-kernel")
    return FlatVerdict(True)


def _case_condflat(R: Reflector, ext: Extension, f: Hom) -> Optional[str]:
    pulled, _ = pullback_extension(ext, f)
    v = check_flat(R, pulled)
    return None if v.flat else v.stage


def _condflat_item(R: Reflector, ext: Extension, test_objects: Sequence[FiniteGroup]):
    if not check_flat(R, ext).flat:
        return 0, [], False
    cases, witnesses = 0, []
    for X in test_objects:
        for f in enumerate_homs(X, ext.Q):
            cases += 1
            stage = _case_condflat(R, ext, f)
            if stage is not None:
                witnesses.append({
                    "case": "condflat",
                    "extension": dumps_extension(ext),
                    "X": dumps_group(X),
                    "f": dumps_hom(f),
                    "reason": stage,
                })
    return cases, witnesses, True


def audit_conditional_flatness(
    R: Reflector, exts: Sequence[Extension], test_objects: Sequence[FiniteGroup], jobs: int = 1
) -> AuditReport:
    """Pull every L-flat extension back along every f: X -> Q and re-check flatness."""
    start = time.perf_counter()
    results = _map_items(_condflat_item, R, list(exts), jobs, list(test_objects))
    cases = sum(r[0] for r in results)
    witnesses = [w for r in results for w in r[1]]
    flat = sum(1 for r in results if r[2])
    return _finish("conditional_flatness", R, cases, witnesses, start,
                   extensions=len(exts), flat_extensions=flat, test_objects=len(test_objects))


# -- pullbacks of units ------------------------------------------------------


def _case_unit_pullback(R: Reflector, C: FiniteGroup, Eprime: FiniteGroup, g: Hom) -> Optional[str]:
    """Does L carry the pullback of eta_C along g: E' -> L(C) to a pullback?

    With E' local this is bijectivity of L(P) -> L(E') ≅ E'.
    """
    LC, eta = R.reflect(C)
    if eta.is_bijective():
        return None
    pb = pullback(eta, g)
    Lp2 = R.reflect_hom(pb.p2)
    if Lp2.is_bijective():
        return None
    return f"L(P) has order {Lp2.source.order}, comparison to E' (order {Eprime.order}) not bijective"


def _unit_pullback_item(R: Reflector, C: FiniteGroup, locals_: Sequence[FiniteGroup], surjective_only: bool):
    LC, eta = R.reflect(C)
    if eta.is_bijective():
        return 0, [], 1
    cases, witnesses = 0, []
    for Ep in locals_:
        for g in enumerate_homs(Ep, LC):
            if surjective_only and not g.is_surjective():
                continue
            cases += 1
            reason = _case_unit_pullback(R, C, Ep, g)
            if reason is not None:
                witnesses.append({
                    "case": "unit_pullback",
                    "C": dumps_group(C),
                    "E'": dumps_group(Ep),
                    "LC": dumps_group(LC),
                    "g": dumps_hom(g),
                    "reason": reason,
                })
    return cases, witnesses, 0


def _unit_pullback_audit(prop, R, objects, local_candidates, surjective_only, jobs) -> AuditReport:
    start = time.perf_counter()
    cands = objects if local_candidates is None else local_candidates
    locals_ = [E for E in cands if R.is_local(E)]
    results = _map_items(_unit_pullback_item, R, list(objects), jobs, locals_, surjective_only)
    cases = sum(r[0] for r in results)
    witnesses = [w for r in results for w in r[1]]
    trivial = sum(r[2] for r in results)
    return _finish(prop, R, cases, witnesses, start,
                   objects=len(objects), local_objects=len(locals_), local_C_trivial=trivial)


def check_admissibility(
    R: Reflector, objects: Sequence[FiniteGroup], local_candidates: Optional[Sequence[FiniteGroup]] = None,
    jobs: int = 1,
) -> AuditReport:
    """Pullbacks of eta_C along surjections g: E' -> L(C), E' local, are preserved by L."""
    return _unit_pullback_audit("admissibility", R, objects, local_candidates, True, jobs)


def check_semi_left_exact(
    R: Reflector, objects: Sequence[FiniteGroup], local_candidates: Optional[Sequence[FiniteGroup]] = None,
    jobs: int = 1,
) -> AuditReport:
    """As admissibility, but g ranges over all homs between local objects."""
    return _unit_pullback_audit("semi_left_exact", R, objects, local_candidates, False, jobs)


# -- torsion-theory conditions ----------------------------------------------


def _case_extclosed(R: Reflector, ext: Extension) -> Optional[str]:
    if R.is_local(ext.K) and R.is_local(ext.Q) and not R.is_local(ext.E):
        return f"{ext.E.name} is not local although kernel and quotient are"
    return None


def check_extension_closed(R: Reflector, exts: Sequence[Extension]) -> AuditReport:
    start = time.perf_counter()
    cases, witnesses = 0, []
    for ext in exts:
        if not (R.is_local(ext.K) and R.is_local(ext.Q)):
            continue
        cases += 1
        reason = _case_extclosed(R, ext)
        if reason is not None:
            witnesses.append({"case": "extclosed", "extension": dumps_extension(ext), "reason": reason})
    return _finish("extension_closed", R, cases, witnesses, start, extensions=len(exts))


def _case_radical(R: Reflector, X: FiniteGroup) -> Optional[str]:
    T, _ = R.radical(X).as_group()
    LT = R.reflect(T)[0]
    if LT.order != 1:
        return f"T({X.name}) has order {T.order} and L(T) has order {LT.order}"
    return None


def check_radical_trivializes(R: Reflector, objects: Sequence[FiniteGroup]) -> AuditReport:
    start = time.perf_counter()
    witnesses = []
    for X in objects:
        reason = _case_radical(R, X)
        if reason is not None:
            witnesses.append({"case": "radical", "X": dumps_group(X), "reason": reason})
    return _finish("radical_trivializes", R, len(objects), witnesses, start)


def _case_torsion_hom(R: Reflector, X: FiniteGroup, Y: FiniteGroup, h: Hom) -> Optional[str]:
    if h.is_zero():
        return None
    return f"nonzero map T({X.name}) -> {Y.name} into a local object"


def check_torsion_free(R: Reflector, objects: Sequence[FiniteGroup]) -> AuditReport:
    """Only zero maps from radicals to local objects, and radicals are their own radicals."""
    start = time.perf_counter()
    locals_ = [Y for Y in objects if R.is_local(Y)]
    cases, witnesses = 0, []
    for X in objects:
        T, _ = R.radical(X).as_group()
        cases += 1
        reason = _case_radical(R, X)
        if reason is not None:
            witnesses.append({"case": "radical_idempotent", "X": dumps_group(X),
                              "reason": "radical is not its own radical: " + reason})
        if T.order == 1:
            cases += len(locals_)
            continue
        for Y in locals_:
            cases += 1
            for h in enumerate_homs(T, Y):
                if _case_torsion_hom(R, X, Y, h) is not None:
                    witnesses.append({
                        "case": "torsion_hom",
                        "X": dumps_group(X),
                        "Y": dumps_group(Y),
                        "T": dumps_group(T),
                        "h": dumps_hom(h),
                        "reason": _case_torsion_hom(R, X, Y, h),
                    })
                    break
    return _finish("torsion_free", R, cases, witnesses, start, local_objects=len(locals_))


def require_fiberwise(R: Reflector, exts: Iterable[Extension]) -> int:
    n = 0
    for ext in exts:
        try:
            fiberwise_localize(R, ext)
        except RadicalNotNormalInTotal as exc:
            raise FiberwisePreconditionFailed(str(exc)) from exc
        n += 1
    return n


def _equivalence_report(prop: str, R: Reflector, subs: list[AuditReport], start: float, **notes) -> AuditReport:
    conditions = {s.property: s.verdict for s in subs}
    consistent = len(set(conditions.values())) == 1
    witnesses = [] if consistent else [{"case": "inconsistent", "reason": "mixed verdicts: " + ", ".join(
        f"{k}={v}" for k, v in conditions.items())}]
    rep = AuditReport(
        prop, R.label, PASS if consistent else FAIL, sum(s.cases_checked for s in subs), witnesses,
        time.perf_counter() - start, dict(notes, conditions=conditions,
                                          common_verdict=subs[0].verdict if consistent else "mixed"),
        subs,
    )
    return rep


def audit_torsion_equivalences(
    R: Reflector, objects: Sequence[FiniteGroup], exts: Sequence[Extension], jobs: int = 1,
    subreports: Optional[Sequence[AuditReport]] = None,
) -> AuditReport:
    """Run the four torsion-theory conditions and require them to agree.

    ``subreports`` may supply already computed results of the four checks,
    in the order extension-closed, radical, semi-left-exact, torsion-free.
    """
    start = time.perf_counter()
    n = require_fiberwise(R, exts)
    subs = list(subreports) if subreports is not None else [
        check_extension_closed(R, exts),
        check_radical_trivializes(R, objects),
        check_semi_left_exact(R, objects, jobs=jobs),
        check_torsion_free(R, objects),
    ]
    return _equivalence_report("torsion_equivalences", R, subs, start, fiberwise_checked=n)


def audit_flatness_admissibility_equivalence(
    R: Reflector, objects: Sequence[FiniteGroup], exts: Sequence[Extension],
    test_objects: Sequence[FiniteGroup], jobs: int = 1,
    subreports: Optional[Sequence[AuditReport]] = None,
) -> AuditReport:
    """Conditional flatness and admissibility must agree when fiberwise localization exists."""
    start = time.perf_counter()
    n = require_fiberwise(R, exts)
    subs = list(subreports) if subreports is not None else [
        audit_conditional_flatness(R, exts, test_objects, jobs=jobs),
        check_admissibility(R, objects, jobs=jobs),
    ]
    return _equivalence_report("flatness_admissibility", R, subs, start, fiberwise_checked=n)


def audit_fiberwise(R: Reflector, exts: Sequence[Extension]) -> AuditReport:
    """fiberwise_localize succeeds on every extension and certifies an L-equivalence."""
    start = time.perf_counter()
    witnesses = []
    for ext in exts:
        reason = _case_fiberwise(R, ext)
        if reason is not None:
            witnesses.append({"case": "fiberwise", "extension": dumps_extension(ext), "reason": reason})
    return _finish("fiberwise", R, len(exts), witnesses, start)


def _case_fiberwise(R: Reflector, ext: Extension) -> Optional[str]:
    try:
        res = fiberwise_localize(R, ext)
    except RadicalNotNormalInTotal as exc:
        return str(exc)
    if not res.diagram_commutes():
        return "diagram does not commute"
    if not R.is_equivalence(res.e):
        return "e is not an L-equivalence"
    return None


# -- replay -----------------------------------------------------------------


def replay_witness(R: Reflector, witness: dict) -> bool:
    """Re-run the single case recorded in ``witness``; True iff it fails again."""
    case = witness.get("case")
    if case == "condflat":
        ext = loads_extension(witness["extension"])
        X = loads_group(witness["X"])
        f = loads_hom(witness["f"], X, ext.Q)
        return _case_condflat(R, ext, f) is not None
    if case == "unit_pullback":
        C = loads_group(witness["C"])
        Ep = loads_group(witness["E'"])
        LC = R.reflect(C)[0]
        g = loads_hom(witness["g"], Ep, LC)
        return _case_unit_pullback(R, C, Ep, g) is not None
    if case == "extclosed":
        return _case_extclosed(R, loads_extension(witness["extension"])) is not None
    if case in ("radical", "radical_idempotent"):
        return _case_radical(R, loads_group(witness["X"])) is not None
    if case == "torsion_hom":
        X, Y, T = (loads_group(witness[k]) for k in ("X", "Y", "T"))
        if R.radical(X).as_group()[0] != T or not R.is_local(Y):
            return False
        return _case_torsion_hom(R, X, Y, loads_hom(witness["h"], T, Y)) is not None
    if case == "fiberwise":
        return _case_fiberwise(R, loads_extension(witness["extension"])) is not None
    raise ParseError(f"witness of kind {case!r} cannot be replayed")
