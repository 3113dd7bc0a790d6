"""Machine-first check reports shared by all auditors.

A report is a list of named checks; each check counts the instances it
verified, the instances it had to skip (truncation boundary), and keeps
a capped list of violation witnesses.  Reports render to a stable JSON
document and to a short human summary.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

VIOLATION_CAP = 20


@dataclass
class CheckItem:
    check_id: str
    instances: int = 0
    skipped: int = 0
    violations: list[str] = field(default_factory=list)
    total_violations: int = 0
    note: str = ""

    @property
    def status(self) -> str:
        if self.total_violations:
            return "fail"
        if self.instances == 0 and self.skipped > 0:
            return "skipped"
        return "pass"

    def count(self, n: int = 1):
        self.instances += n

    def skip(self, n: int = 1):
        self.skipped += n

    def fail(self, witness: str):
        self.total_violations += 1
        if len(self.violations) < VIOLATION_CAP:
            self.violations.append(witness)

    def check(self, ok: bool, witness):
        """Count one instance; record the witness (lazy or plain) on failure."""
        self.instances += 1
        if not ok:
            self.fail(witness() if callable(witness) else str(witness))

    def to_dict(self) -> dict:
        return {
            "id": self.check_id,
            "status": self.status,
            "instances": self.instances,
            "skipped": self.skipped,
            "violations": list(self.violations),
            "total_violations": self.total_violations,
            "note": self.note,
        }


class Report:
    """Ordered collection of checks with deterministic rendering."""

    def __init__(self, title: str, meta: dict | None = None):
        self.title = title
        self.meta = dict(meta or {})
        self._items: dict[str, CheckItem] = {}

    def item(self, check_id: str) -> CheckItem:
        if check_id not in self._items:
            self._items[check_id] = CheckItem(check_id)
        return self._items[check_id]

    @property
    def items(self) -> list[CheckItem]:
        return [self._items[k] for k in sorted(self._items)]

    @property
    def ok(self) -> bool:
        return all(item.total_violations == 0 for item in self.items)

    def extend(self, other: "Report"):
        for item in other.items:
            if item.check_id in self._items:
                raise ValueError(f"duplicate check id {item.check_id!r}")
            self._items[item.check_id] = item

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "meta": {k: self.meta[k] for k in sorted(self.meta)},
            "checks": [item.to_dict() for item in self.items],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"

    def summary_lines(self) -> list[str]:
        lines = [f"{self.title}: {'PASS' if self.ok else 'FAIL'}"]
        for item in self.items:
            extra = f" (+{item.skipped} skipped at boundary)" if item.skipped else ""
            lines.append(
                f"  [{item.status:>7}] {item.check_id}: {item.instances} instances{extra}"
            )
            for witness in item.violations[:3]:
                lines.append(f"           ! {witness}")
        return lines
