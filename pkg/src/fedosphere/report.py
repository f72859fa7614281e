"""Verification reports: one record per check, grouped by suite, rendered as text, JSON or markdown."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

__all__ = ["Check", "SuiteResult", "VerificationReport", "emit_report", "STATUSES"]

STATUSES = ("pass", "fail", "skip")
SCHEMA_VERSION = 1


@dataclass
class Check:
    id: str
    paper_tag: str
    status: str
    detail: str = ""
    elapsed_ms: float = 0.0

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"bad status {self.status!r}")
        if self.elapsed_ms < 0:
            raise ValueError("elapsed_ms must be nonnegative")


@dataclass
class SuiteResult:
    name: str
    checks: list = field(default_factory=list)

    def sorted_checks(self) -> list:
        return sorted(self.checks, key=lambda c: c.id)

    @property
    def passed(self) -> bool:
        return all(c.status != "fail" for c in self.checks)


@dataclass
class VerificationReport:
    mode: str = "symbolic"
    seed: int = 0
    points: int = 0
    suites: list = field(default_factory=list)
    version: int = SCHEMA_VERSION

    @property
    def passed(self) -> bool:
        return all(s.passed for s in self.suites)

    def counts(self) -> dict:
        out = {s: 0 for s in STATUSES}
        for s in self.suites:
            for c in s.checks:
                out[c.status] += 1
        return out

    def to_dict(self) -> dict:
        ids = [c.id for s in self.suites for c in s.checks]
        if len(ids) != len(set(ids)):
            raise ValueError("check ids are not unique")
        return {
            "version": self.version,
            "mode": self.mode,
            "seed": self.seed,
            "points": self.points,
            "suites": [
                {"name": s.name, "checks": [asdict(c) for c in s.sorted_checks()]} for s in self.suites
            ],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VerificationReport":
        suites = [SuiteResult(s["name"], [Check(**c) for c in s["checks"]]) for s in d["suites"]]
        return cls(d["mode"], d["seed"], d["points"], suites, d["version"])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    def to_text(self) -> str:
        lines = [f"mode={self.mode} seed={self.seed} points={self.points}"]
        for s in self.suites:
            lines.append(f"[{s.name}]")
            for c in s.sorted_checks():
                lines.append(f"  {c.status.upper():4} {c.id} ({c.paper_tag}) {c.detail}".rstrip())
        n = self.counts()
        lines.append(f"{n['pass']} passed, {n['fail']} failed, {n['skip']} skipped")
        return "\n".join(lines)

    def to_markdown(self) -> str:
        lines = ["# Verification report", "", f"mode `{self.mode}`, seed `{self.seed}`, points `{self.points}`", ""]
        for s in self.suites:
            lines += [f"## {s.name}", "", "| id | tag | status | detail | ms |", "|---|---|---|---|---|"]
            for c in s.sorted_checks():
                detail = c.detail.replace("|", "\\|")
                lines.append(f"| {c.id} | {c.paper_tag} | {c.status} | {detail} | {c.elapsed_ms:.1f} |")
            lines.append("")
        return "\n".join(lines)


def emit_report(report: VerificationReport, fmt: str = "text") -> bytes:
    if fmt == "json":
        text = report.to_json()
    elif fmt == "md":
        text = report.to_markdown()
    elif fmt == "text":
        text = report.to_text()
    else:
        raise ValueError(f"unknown format {fmt!r}")
    return (text + "\n").encode("utf-8")
