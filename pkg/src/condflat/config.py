"""Run configuration: defaults, ``key = value`` config files, validation."""

from __future__ import annotations

from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Optional

from .errors import ConfigInvalid, CondflatError
from .reflectors import parse_reflector

DEFAULT_REFLECTORS = ("ab", "burnside:2", "nil:2", "null:Z/2", "null:Z/3", "null:S_3")
AUDITS = (
    "fiberwise",
    "condflat",
    "admissible",
    "sle",
    "extclosed",
    "radical",
    "torsionfree",
    "torsion",
    "equivalence",
)


@dataclass(frozen=True)
class RunConfig:
    reflectors: tuple[str, ...] = DEFAULT_REFLECTORS
    max_order: int = 16
    test_max: int = 8
    audits: tuple[str, ...] = AUDITS
    out: str = "reports"
    jobs: int = 1
    json: bool = False

    def validate(self) -> "RunConfig":
        if not 1 <= self.max_order <= 128:
            raise ConfigInvalid(f"max_order must lie in 1..128, got {self.max_order}")
        if self.test_max < 1:
            raise ConfigInvalid("test_max must be positive")
        if self.jobs < 1:
            raise ConfigInvalid("jobs must be positive")
        if not self.reflectors:
            raise ConfigInvalid("no reflectors selected")
        for spec in self.reflectors:
            try:
                parse_reflector(spec)
            except CondflatError as exc:
                raise ConfigInvalid(f"bad reflector {spec!r}: {exc}") from exc
        bad = [a for a in self.audits if a not in AUDITS]
        if bad:
            raise ConfigInvalid(f"unknown audits {bad}; choose from {', '.join(AUDITS)}")
        return self

    def with_overrides(self, **kw) -> "RunConfig":
        return replace(self, **{k: v for k, v in kw.items() if v is not None})


def _split(value: str) -> tuple[str, ...]:
    return tuple(v.strip() for v in value.split(",") if v.strip())


def _to_bool(value: str) -> bool:
    v = value.lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ConfigInvalid(f"not a boolean: {value!r}")


_CONVERT = {
    "reflectors": _split,
    "audits": _split,
    "max_order": int,
    "test_max": int,
    "jobs": int,
    "out": str,
    "json": _to_bool,
}


def parse_config(text: str, base: Optional[RunConfig] = None) -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep:
            raise ConfigInvalid(f"line {lineno}: expected 'key = value'")
        if key not in _CONVERT:
            raise ConfigInvalid(f"line {lineno}: unknown key {key!r}")
        try:
            values[key] = _CONVERT[key](value.strip())
        except ValueError as exc:
            raise ConfigInvalid(f"line {lineno}: {exc}") from exc
    return replace(base or RunConfig(), **values).validate()


def load_config(path: str | Path) -> RunConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigInvalid(f"cannot read config {path}: {exc}") from exc
    return parse_config(text)


def config_keys() -> list[str]:
    return [f.name for f in fields(RunConfig)]
