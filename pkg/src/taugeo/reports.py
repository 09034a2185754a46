"""Check records and report emission (JSON and text).

Every verification routine in the library returns a CheckRecord: the name
of the check, the identity it verifies (rendered in canonical element
syntax), a pass/fail/skipped status and, on failure, a witness mapping
input names to rendered elements.  A Report bundles records with the
run configuration; two runs with the same config and seed emit
byte-identical JSON apart from the timing fields.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field


PASS = "pass"
FAIL = "fail"
SKIPPED = "skipped"

REPORT_VERSION = 1


@dataclass
class CheckRecord:
    name: str
    identity: str
    status: str
    witness: dict | None = None
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @property
    def failed(self) -> bool:
        return self.status == FAIL

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "identity": self.identity,
            "status": self.status,
            "witness": self.witness,
            "seconds": self.seconds,
        }


def passed(name: str, identity: str) -> CheckRecord:
    return CheckRecord(name, identity, PASS)


def failed(name: str, identity: str, witness: dict) -> CheckRecord:
    return CheckRecord(name, identity, FAIL, {k: str(v) for k, v in witness.items()})


def skipped(name: str, identity: str, reason: str) -> CheckRecord:
    return CheckRecord(name, identity, SKIPPED, {"reason": reason})


@dataclass
class Report:
    config: dict
    checks: list[CheckRecord] = field(default_factory=list)

    def add(self, record: CheckRecord) -> CheckRecord:
        self.checks.append(record)
        return record

    def extend(self, records) -> None:
        for r in records:
            self.checks.append(r)

    @property
    def all_passed(self) -> bool:
        return all(not c.failed for c in self.checks)

    def summary(self) -> dict:
        out = {PASS: 0, FAIL: 0, SKIPPED: 0}
        for c in self.checks:
            out[c.status] += 1
        return out

    def as_dict(self) -> dict:
        ordered = sorted(self.checks, key=lambda c: c.name)
        return {
            "version": REPORT_VERSION,
            "config": self.config,
            "checks": [c.as_dict() for c in ordered],
            "summary": self.summary(),
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def to_text(self) -> str:
        lines = []
        for c in sorted(self.checks, key=lambda c: c.name):
            lines.append(f"[{c.status.upper():7s}] {c.name}: {c.identity}")
            if c.witness:
                for k, v in c.witness.items():
                    lines.append(f"          {k} = {v}")
        s = self.summary()
        lines.append(f"summary: {s[PASS]} passed, {s[FAIL]} failed, {s[SKIPPED]} skipped")
        return "\n".join(lines)


def report_from_dict(data: dict) -> Report:
    rep = Report(config=data.get("config", {}))
    for c in data.get("checks", []):
        rep.add(CheckRecord(c["name"], c["identity"], c["status"], c.get("witness"), c.get("seconds", 0.0)))
    return rep


def load_report(path: str) -> Report:
    with open(path, "r", encoding="utf-8") as fh:
        return report_from_dict(json.load(fh))


def write_report(report: Report, path: str, fmt: str = "json") -> None:
    text = report.to_json() if fmt == "json" else report.to_text()
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
        fh.write("\n")
