"""Verification reports: typed check records plus canonical documents.

A report is a flat list of named checks, each carrying the measured
residual, the threshold it was held to, and the verdict.  A check may be
waived: its failure is expected, stays visible, and does not pull the
overall verdict down.  Canonical bytes exclude wall time so that equal
mathematical content is byte-equal across runs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InputError
from .serialize import VERIFICATION_FORMAT, canonical_dumps


@dataclass(frozen=True)
class CheckRecord:
    check_id: str
    anchor: str
    residual: float
    threshold: float
    passed: bool
    waived: bool = False
    detail: str = ""

    def status(self) -> str:
        if self.passed:
            return "PASS"
        return "XFAIL" if self.waived else "FAIL"


@dataclass(frozen=True)
class VerificationReport:
    suite: str
    records: tuple[CheckRecord, ...]
    wall_time: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))

    @property
    def passed(self) -> bool:
        return all(rec.passed or rec.waived for rec in self.records)

    def failing(self) -> tuple[CheckRecord, ...]:
        return tuple(r for r in self.records if not r.passed and not r.waived)


def report_to_doc(report: VerificationReport, include_wall_time: bool = False) -> dict:
    doc = {
        "format": VERIFICATION_FORMAT,
        "suite": report.suite,
        "checks": [
            {
                "id": rec.check_id,
                "anchor": rec.anchor,
                "residual": float(rec.residual),
                "threshold": float(rec.threshold),
                "passed": rec.passed,
                "waived": rec.waived,
                "detail": rec.detail,
            }
            for rec in report.records
        ],
        "overall": report.passed,
    }
    if include_wall_time:
        doc["wall_time"] = float(report.wall_time)
    return doc


def report_from_doc(doc: dict) -> VerificationReport:
    if doc.get("format") != VERIFICATION_FORMAT:
        raise InputError(f"not a {VERIFICATION_FORMAT} document")
    records = tuple(
        CheckRecord(
            check_id=str(c["id"]),
            anchor=str(c["anchor"]),
            residual=float(c["residual"]),
            threshold=float(c["threshold"]),
            passed=bool(c["passed"]),
            waived=bool(c.get("waived", False)),
            detail=str(c.get("detail", "")),
        )
        for c in doc["checks"]
    )
    return VerificationReport(
        suite=str(doc["suite"]),
        records=records,
        wall_time=float(doc.get("wall_time", 0.0)),
    )


def report_bytes(report: VerificationReport) -> bytes:
    """Canonical bytes for determinism comparisons (wall time excluded)."""
    return canonical_dumps(report_to_doc(report)).encode("utf-8")


def render_text(report: VerificationReport, wall_time: bool = True) -> str:
    width = max((len(r.check_id) for r in report.records), default=0)
    lines = []
    for rec in report.records:
        lines.append(
            f"{rec.status():5s} {rec.check_id:<{width}s} "
            f"residual {rec.residual:.3e} <= {rec.threshold:.1e}  {rec.anchor}"
        )
    verdict = "PASS" if report.passed else "FAIL"
    summary = (
        f"suite {report.suite}: {verdict} "
        f"({sum(r.passed for r in report.records)}/{len(report.records)} checks"
    )
    waived = sum(1 for r in report.records if r.waived and not r.passed)
    if waived:
        summary += f", {waived} waived"
    summary += ")"
    if wall_time:
        summary += f" in {report.wall_time:.2f}s"
    lines.append(summary)
    return "\n".join(lines)
