"""Verification report record shared by the operator and check layers."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class VerificationReport:
    """Outcome of one identity check.

    ``counterexample`` is present exactly when the status is "fail"; it holds
    JSON-ready data (inputs, lhs, rhs) whose difference is a nonzero exact
    rational combination.  ``elapsed`` is informational and excluded from the
    canonical JSON form so that identical specs produce byte-identical
    reports.
    """

    check_id: str
    status: str  # "pass" | "fail"
    samples_run: int
    counterexample: dict | None = None
    elapsed: float = 0.0
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def to_json(self, include_elapsed: bool = False) -> dict:
        doc: dict = {
            "checkId": self.check_id,
            "status": self.status,
            "samplesRun": self.samples_run,
            "counterexample": self.counterexample,
        }
        if self.detail:
            doc["detail"] = self.detail
        if include_elapsed:
            doc["elapsed"] = self.elapsed
        return doc


def failure(check_id: str, samples_run: int, counterexample: dict, elapsed: float = 0.0) -> VerificationReport:
    return VerificationReport(check_id, "fail", samples_run, counterexample, elapsed)


def success(check_id: str, samples_run: int, elapsed: float = 0.0) -> VerificationReport:
    return VerificationReport(check_id, "pass", samples_run, None, elapsed)
