"""Verdict records for numerical hypothesis checks.

Checkers in this package return a Certificate instead of raising: a violated
inequality is a reportable result with witnesses, not a programming error.
Verdicts are one of "pass", "fail", "inconclusive" and compose by
conjunction, with "fail" dominating "inconclusive".
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"

_VERDICTS = (PASS, FAIL, INCONCLUSIVE)

# Witness lists in serialized reports are capped; the full count is kept in
# the certificate details.
MAX_REPORTED_WITNESSES = 10


def vertex_label(v: Any) -> str:
    """Compact printable form of a vertex id: (3, 1) -> "3,1"."""
    if isinstance(v, tuple):
        return ",".join(vertex_label(c) for c in v)
    return str(v)


@dataclass(frozen=True)
class Witness:
    """A vertex or edge exhibiting a violation, with the offending value."""

    where: Any
    value: float | None = None
    note: str = ""

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"where": vertex_label(self.where)}
        if self.value is not None:
            d["value"] = self.value
        if self.note:
            d["note"] = self.note
        return d


@dataclass
class Certificate:
    """Outcome of one named check over one named scope.

    Invariants: a "fail" carries at least one witness (possibly in a child
    certificate), an "inconclusive" carries a reason.  `slack` holds summary
    statistics of the margin by which the checked inequality held (minimum
    slack, where it was attained, how many vertices were checked).
    """

    condition: str
    scope: str
    verdict: str
    witnesses: list[Witness] = field(default_factory=list)
    slack: dict | None = None
    reason: str | None = None
    details: dict = field(default_factory=dict)
    children: list["Certificate"] = field(default_factory=list)

    def __post_init__(self):
        if self.verdict not in _VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict == FAIL:
            if not self.witnesses and not any(c.verdict == FAIL for c in self.children):
                raise ValueError(f"fail certificate {self.condition!r} has no witness")
        if self.verdict == INCONCLUSIVE:
            if not self.reason and not any(
                c.verdict == INCONCLUSIVE for c in self.children
            ):
                raise ValueError(
                    f"inconclusive certificate {self.condition!r} has no reason"
                )

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_dict(self) -> dict:
        d: dict[str, Any] = {
            "condition": self.condition,
            "scope": self.scope,
            "verdict": self.verdict,
        }
        if self.witnesses:
            d["witnesses"] = [w.to_dict() for w in self.witnesses[:MAX_REPORTED_WITNESSES]]
            d["witness_count"] = len(self.witnesses)
        if self.slack is not None:
            d["slack"] = _jsonable(self.slack)
        if self.reason:
            d["reason"] = self.reason
        if self.details:
            d["details"] = _jsonable(self.details)
        if self.children:
            d["children"] = [c.to_dict() for c in self.children]
        return d

    def walk(self):
        yield self
        for c in self.children:
            yield from c.walk()


def _jsonable(obj):
    """Recursively coerce vertex ids and numpy scalars into JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item") and callable(obj.item):  # numpy scalar
        return obj.item()
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return vertex_label(obj)


def conjunction(condition: str, scope: str, children: list[Certificate]) -> Certificate:
    """Combine sub-certificates: fail > inconclusive > pass."""
    if any(c.verdict == FAIL for c in children):
        verdict, reason = FAIL, None
    elif any(c.verdict == INCONCLUSIVE for c in children):
        verdict = INCONCLUSIVE
        reason = "; ".join(
            f"{c.condition}: {c.reason or 'inconclusive'}"
            for c in children
            if c.verdict == INCONCLUSIVE
        )
    else:
        verdict, reason = PASS, None
    return Certificate(
        condition=condition,
        scope=scope,
        verdict=verdict,
        reason=reason,
        details={
            "passed": sum(c.verdict == PASS for c in children),
            "failed": sum(c.verdict == FAIL for c in children),
            "inconclusive": sum(c.verdict == INCONCLUSIVE for c in children),
        },
        children=list(children),
    )
