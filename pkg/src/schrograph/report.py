"""Run configuration and report serialization for the command-line tools.

Reports are canonical JSON: object keys sorted, floats rendered with 17
significant digits (round-trip exact), stable indentation.  The same
configuration and seed therefore produce byte-identical report files,
except for the `timestamp` field, which `reports_match` knows to ignore.
Non-finite floats have no JSON representation and are emitted as the
strings "inf", "-inf", "nan".
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .certificates import Certificate, FAIL, INCONCLUSIVE

SCHEMA_VERSION = 1
TOLERANCE_FLOOR = 1e-15


def clamp_tolerance(tol: float, floor: float = TOLERANCE_FLOOR) -> float:
    """User-supplied tolerance overrides cannot go below machine-precision
    territory; demanding agreement tighter than float arithmetic delivers
    would only manufacture spurious failures."""
    return max(float(tol), floor)


def _float_text(x: float) -> str:
    if math.isnan(x):
        return '"nan"'
    if math.isinf(x):
        return '"inf"' if x > 0 else '"-inf"'
    return format(x, ".17g")


def _render(obj, indent: int, level: int) -> str:
    pad = " " * (indent * level)
    pad_in = " " * (indent * (level + 1))
    if obj is None:
        return "null"
    if isinstance(obj, bool):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _float_text(float(obj))
    if isinstance(obj, (complex, np.complexfloating)):
        c = complex(obj)
        return _render([c.real, c.imag], indent, level)
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = sorted(((str(k), v) for k, v in obj.items()), key=lambda kv: kv[0])
        body = ",\n".join(
            f"{pad_in}{json.dumps(k, ensure_ascii=False)}: {_render(v, indent, level + 1)}"
            for k, v in items
        )
        return "{\n" + body + "\n" + pad + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        body = ",\n".join(f"{pad_in}{_render(v, indent, level + 1)}" for v in seq)
        return "[\n" + body + "\n" + pad + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__} canonically")


def canonical_json(obj, indent: int = 2) -> str:
    return _render(obj, indent, 0) + "\n"


@dataclass
class RunConfig:
    """Echo of everything a run depends on, embedded in its report so the
    run can be repeated from the report alone."""

    command: str
    options: dict = field(default_factory=dict)
    seed: int = 0
    threads: int = 1

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "options": self.options,
            "seed": self.seed,
            "threads": self.threads,
        }


def exit_code_for(certificates: Sequence[Certificate]) -> int:
    """0 when every certificate passes, 2 on any failure, 3 when the worst
    outcome is inconclusive."""
    code = 0
    for c in certificates:
        if c.verdict == FAIL:
            return 2
        if c.verdict == INCONCLUSIVE:
            code = 3
    return code


@dataclass
class Report:
    config: RunConfig
    certificates: list = field(default_factory=list)
    data: dict = field(default_factory=dict)
    version: str = __version__
    schema_version: int = SCHEMA_VERSION
    timestamp: str = field(
        default_factory=lambda: datetime.now(timezone.utc).isoformat()
    )

    def exit_code(self) -> int:
        return exit_code_for(self.certificates)

    def to_dict(self) -> dict:
        return {
            "schema_version": self.schema_version,
            "version": self.version,
            "timestamp": self.timestamp,
            "config": self.config.to_dict(),
            "certificates": [c.to_dict() for c in self.certificates],
            "data": self.data,
        }

    def to_json(self) -> str:
        return canonical_json(self.to_dict())

    def write(self, path) -> Path:
        p = Path(path)
        p.parent.mkdir(parents=True, exist_ok=True)
        p.write_text(self.to_json())
        return p


def reports_match(text_a: str, text_b: str) -> bool:
    """Byte equality after removing the timestamp field from both."""
    a, b = json.loads(text_a), json.loads(text_b)
    a.pop("timestamp", None)
    b.pop("timestamp", None)
    return canonical_json(a) == canonical_json(b)
