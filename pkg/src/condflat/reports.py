"""Report persistence: an indented key-value text format and JSON.

Text layout, one entry per line::

    key = <json scalar>
    key:              nested mapping follows, indented two spaces
    key[0]:           list element (mapping) follows
    key[0] = <json>   list element (scalar)
    key |             literal block follows, each line prefixed by "| "
"""

from __future__ import annotations

import json
import re
from typing import Any

from .errors import ParseError
from .verdicts import AuditReport

_LINE = re.compile(r"^(?P<key>[^\s\[=|:]+)(?:\[(?P<idx>\d+)\])?\s*(?P<op>=|:|\|)\s*(?P<rest>.*)$")


def _emit(key: str, value: Any, indent: int, out: list[str]) -> None:
    pad = "  " * indent
    if isinstance(value, dict):
        out.append(f"{pad}{key}:")
        for k, v in value.items():
            _emit(str(k), v, indent + 1, out)
    elif isinstance(value, (list, tuple)):
        if not value:
            out.append(f"{pad}{key} = []")
        for i, v in enumerate(value):
            _emit(f"{key}[{i}]", v, indent, out)
    elif isinstance(value, str) and "\n" in value:
        out.append(f"{pad}{key} |")
        for ln in value.rstrip("\n").split("\n"):
            out.append(f"{pad}  | {ln}")
    else:
        out.append(f"{pad}{key} = {json.dumps(value)}")


def dumps_text(doc: dict) -> str:
    out: list[str] = []
    for k, v in doc.items():
        _emit(str(k), v, 0, out)
    return "\n".join(out) + "\n"


def loads_text(text: str) -> dict:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    doc, pos = _parse_block(lines, 0, 0)
    if pos != len(lines):
        raise ParseError(f"unexpected indentation at line {pos + 1}")
    return doc


def _indent_of(line: str) -> int:
    return (len(line) - len(line.lstrip(" "))) // 2


def _put(doc: dict, key: str, idx, value) -> None:
    if idx is None:
        doc[key] = value
    else:
        doc.setdefault(key, []).append(value)


def _parse_block(lines: list[str], pos: int, level: int) -> tuple[dict, int]:
    doc: dict = {}
    while pos < len(lines):
        line = lines[pos]
        ind = _indent_of(line)
        if ind < level:
            break
        if ind > level:
            raise ParseError(f"unexpected indentation at line {pos + 1}: {line!r}")
        m = _LINE.match(line.strip())
        if not m:
            raise ParseError(f"cannot parse line {pos + 1}: {line!r}")
        key, idx, op = m["key"], m["idx"], m["op"]
        pos += 1
        if op == "=":
            val = json.loads(m["rest"])
            if val == [] and idx is None:
                doc[key] = []
            else:
                _put(doc, key, idx, val)
        elif op == ":":
            sub, pos = _parse_block(lines, pos, level + 1)
            _put(doc, key, idx, sub)
        else:
            block = []
            while pos < len(lines) and _indent_of(lines[pos]) > level and lines[pos].lstrip().startswith("|"):
                block.append(lines[pos].lstrip()[2:])
                pos += 1
            _put(doc, key, idx, "\n".join(block) + "\n")
    return doc, pos


def _primary_key(w: dict) -> str:
    for k in ("C", "X", "extension"):
        if k in w:
            return w[k]
    return w.get("reason", "")


def compact_witnesses(witnesses: list[dict]) -> list[dict]:
    """First witness for each distinct primary object (C, X or extension)."""
    seen, out = set(), []
    for w in witnesses:
        key = _primary_key(w)
        if key not in seen:
            seen.add(key)
            out.append(w)
    return out


def report_to_doc(rep: AuditReport, timing: bool = True, compact: bool = True) -> dict:
    d = rep.to_dict(timing)
    if compact:
        shown = compact_witnesses(rep.witnesses)
        d["failures_total"] = len(rep.witnesses)
        d["witnesses"] = shown
    d["subreports"] = [report_to_doc(s, timing, compact) for s in rep.subreports]
    return d


def report_from_doc(d: dict) -> AuditReport:
    return AuditReport(
        d["property"], d["reflector"], d["verdict"], d["cases_checked"],
        list(d.get("witnesses", [])), float(d.get("elapsed", 0.0)), dict(d.get("notes", {})),
        [report_from_doc(s) for s in d.get("subreports", [])],
    )


def render(doc: dict, as_json: bool) -> str:
    if as_json:
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"
    return dumps_text(doc)


def parse(text: str) -> dict:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return json.loads(text)
    return loads_text(text)
