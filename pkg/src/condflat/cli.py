"""Command-line driver.

Exit codes: 0 when every expectation is met, 1 when one is violated (or a
single-extension check fails), 2 on configuration or I/O errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from .catalog import catalog_build
from .config import AUDITS, RunConfig, load_config
from .errors import CondflatError
from .exactseq import Extension, extension_of_normal, loads_extension
from .fiberwise import fiberwise_localize
from .groups import FiniteGroup, group_from_name, loads_group, normal_subgroups
from .reflectors import parse_reflector
from .reports import render, report_to_doc
from .suite import run_suite, write_report
from .verdicts import audit_conditional_flatness, check_flat

VERB_AUDITS = {"condflat": "condflat", "admissible": "admissible", "sle": "sle", "torsion": "torsion"}


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value configuration file")
    p.add_argument("--reflector", action="append", help="ab, burnside:<n>, nil:<c> or null:<group>; repeatable")
    p.add_argument("--max-order", type=int, help="catalog bound (default 16)")
    p.add_argument("--test-max", type=int, help="order bound for pullback test objects (default 8)")
    p.add_argument("--out", help="report directory (default ./reports/)")
    p.add_argument("--jobs", type=int, help="worker processes for audits")
    p.add_argument("--json", action="store_true", default=None, help="emit JSON instead of text")
    p.add_argument("-v", "--verbose", action="store_true")


def _extension_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("group", nargs="?", help="group name such as D_8 or S_3xZ/2")
    p.add_argument("--normal", type=int, help="index into the group's normal subgroups (see 'catalog --normal')")
    p.add_argument("--extension", help="file holding a serialized extension")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="condflat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("catalog", help="list the catalog of groups and extensions")
    _common(p)
    p.add_argument("--normal", action="store_true", help="also list normal subgroups per group")

    for verb in ("reflect", "nullify"):
        p = sub.add_parser(verb, help="compute L(X) and eta_X" if verb == "reflect" else "compute P_A(X)")
        _common(p)
        p.add_argument("group", help="group name, or @file for a serialized group")
        if verb == "nullify":
            p.add_argument("--by", required=True, help="the nullifying group A")

    for verb in ("fiberwise", "flat"):
        p = sub.add_parser(verb, help="fiberwise localization of an extension" if verb == "fiberwise"
                           else "check L-flatness of extensions")
        _common(p)
        _extension_args(p)

    p = sub.add_parser("condflat", help="conditional flatness audit")
    _common(p)
    _extension_args(p)
    for verb in ("admissible", "sle", "torsion"):
        p = sub.add_parser(verb, help=f"{verb} audit over the catalog")
        _common(p)
    p = sub.add_parser("audit", help="full audit matrix")
    _common(p)
    p.add_argument("--audit", action="append", choices=AUDITS, help="restrict to these audits")
    return parser


def _config(args) -> RunConfig:
    base = load_config(args.config) if args.config else RunConfig()
    cfg = base.with_overrides(
        reflectors=tuple(args.reflector) if args.reflector else None,
        max_order=args.max_order,
        test_max=args.test_max,
        out=args.out,
        jobs=args.jobs,
        json=args.json,
    )
    return cfg.validate()


def _group(name: str) -> FiniteGroup:
    if name.startswith("@"):
        return loads_group(Path(name[1:]).read_text())
    return group_from_name(name)


def _selected_extensions(args, cfg: RunConfig) -> Optional[list[Extension]]:
    if args.extension:
        return [loads_extension(Path(args.extension).read_text())]
    if args.group:
        G = _group(args.group)
        normals = normal_subgroups(G)
        if args.normal is None:
            return [extension_of_normal(G, N) for N in normals]
        if not 0 <= args.normal < len(normals):
            raise CondflatError(f"{G.name} has {len(normals)} normal subgroups; index {args.normal} out of range")
        return [extension_of_normal(G, normals[args.normal])]
    return None


def _emit(doc, as_json: bool) -> None:
    sys.stdout.write(render(doc, as_json))


def cmd_catalog(args, cfg: RunConfig) -> int:
    cat = catalog_build(cfg.max_order)
    if cfg.json:
        doc = {
            "max_order": cat.max_order,
            "fingerprint": cat.fingerprint,
            "groups": [{"name": G.name, "order": G.order, "normal_subgroups": len(cat.extensions_of(G))}
                       for G in cat.groups],
            "extensions": len(cat.extensions),
        }
        _emit(doc, True)
        return 0
    print(f"catalog max_order={cat.max_order} groups={len(cat.groups)} "
          f"extensions={len(cat.extensions)} fingerprint={cat.fingerprint}")
    for G in cat.groups:
        exts = cat.extensions_of(G)
        print(f"  {G.name:<14} order={G.order:<4} normal_subgroups={len(exts)}")
        if args.normal:
            for i, e in enumerate(exts):
                print(f"      [{i}] {e.describe()}")
    return 0


def cmd_reflect(args, cfg: RunConfig, specs: Sequence[str]) -> int:
    X = _group(args.group)
    rows = []
    for spec in specs:
        R = parse_reflector(spec)
        LX, eta = R.reflect(X)
        rows.append({
            "reflector": spec,
            "X": X.name,
            "order": X.order,
            "LX_order": LX.order,
            "radical_order": R.radical(X).order,
            "local": R.is_local(X),
            "eta": eta.map.tolist(),
        })
    if cfg.json:
        _emit({"reflections": rows}, True)
    else:
        for r in rows:
            print(f"{r['reflector']:<12} {r['X']} (order {r['order']}) -> L(X) of order {r['LX_order']}, "
                  f"radical order {r['radical_order']}, local={r['local']}")
            print(f"{'':<12} eta = {' '.join(map(str, r['eta']))}")
    return 0


def cmd_fiberwise(args, cfg: RunConfig) -> int:
    exts = _selected_extensions(args, cfg)
    if exts is None:
        raise CondflatError("fiberwise needs a group (with optional --normal) or --extension")
    out = []
    for spec in cfg.reflectors:
        R = parse_reflector(spec)
        for ext in exts:
            res = fiberwise_localize(R, ext)
            out.append({
                "reflector": spec,
                "input": f"0 -> {ext.K.name}({ext.K.order}) -> {ext.E.name}({ext.E.order}) -> "
                         f"{ext.Q.name}({ext.Q.order}) -> 0",
                "output": f"0 -> L(K)({res.output.K.order}) -> Ebar({res.E_bar.order}) -> "
                          f"{ext.Q.name}({ext.Q.order}) -> 0",
                "e": f"E({ext.E.order}) -> Ebar({res.E_bar.order}) surjective={res.e.is_surjective()}",
                "certificate": f"L(e): L(E)({res.certificate.source.order}) -> "
                               f"L(Ebar)({res.certificate.target.order}) bijective={res.certificate.is_bijective()}",
                "commutes": res.diagram_commutes(),
            })
    if cfg.json:
        _emit({"fiberwise": out}, True)
    else:
        for r in out:
            print(f"[{r['reflector']}]")
            for key in ("input", "e", "output", "certificate"):
                print(f"  {key:<12} {r[key]}")
            print(f"  {'commutes':<12} {r['commutes']}")
    return 0


def cmd_flat(args, cfg: RunConfig) -> int:
    exts = _selected_extensions(args, cfg)
    if exts is None:
        exts = list(catalog_build(cfg.max_order).extensions)
    rows = []
    for spec in cfg.reflectors:
        R = parse_reflector(spec)
        for ext in exts:
            v = check_flat(R, ext)
            rows.append({"reflector": spec, "extension": ext.describe(), "flat": v.flat, "stage": v.stage})
    if cfg.json:
        _emit({"flat": rows}, True)
    else:
        for r in rows:
            tail = "" if r["flat"] else f"  ({r['stage']})"
            print(f"{r['reflector']:<12} {'flat' if r['flat'] else 'NOT flat':<9} {r['extension']}{tail}")
    return 0


def cmd_condflat_single(args, cfg: RunConfig) -> int:
    exts = _selected_extensions(args, cfg)
    cat = catalog_build(cfg.max_order)
    tests = cat.up_to(cfg.test_max)
    status = 0
    docs = []
    for spec in cfg.reflectors:
        rep = audit_conditional_flatness(parse_reflector(spec), exts, tests, jobs=cfg.jobs)
        docs.append(report_to_doc(rep))
        if not cfg.json:
            print(rep.summary())
        status |= 0 if rep.passed else 1
    if cfg.json:
        _emit({"audit": docs}, True)
    return status


def cmd_audits(cfg: RunConfig, audits: tuple[str, ...]) -> int:
    cfg = cfg.with_overrides(audits=audits).validate()
    result = run_suite(cfg)
    path = write_report(result)
    if cfg.json:
        _emit(result.document(), True)
    else:
        for audit, rep in result.reports:
            print(rep.summary())
            for sub in rep.subreports:
                print("    " + sub.summary())
        for e in result.expectations:
            print(e.line())
        print(f"report written to {path}")
    return result.exit_status


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = _config(args)
        if args.verb == "catalog":
            return cmd_catalog(args, cfg)
        if args.verb == "reflect":
            return cmd_reflect(args, cfg, cfg.reflectors)
        if args.verb == "nullify":
            return cmd_reflect(args, cfg, [f"null:{args.by}"])
        if args.verb == "fiberwise":
            return cmd_fiberwise(args, cfg)
        if args.verb == "flat":
            return cmd_flat(args, cfg)
        if args.verb == "condflat" and (args.extension or args.group):
            return cmd_condflat_single(args, cfg)
        if args.verb in VERB_AUDITS:
            return cmd_audits(cfg, (VERB_AUDITS[args.verb],))
        if args.verb == "audit":
            return cmd_audits(cfg, tuple(a for a in AUDITS if not args.audit or a in args.audit))
    except (CondflatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 2


if __name__ == "__main__":
    sys.exit(main())
