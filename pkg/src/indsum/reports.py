"""Structured results of analytic and Monte Carlo cross-checks."""

from __future__ import annotations

from dataclasses import asdict, dataclass

__all__ = ["ValidationReport", "PASS", "FAIL", "INFORMATIONAL"]

PASS = "pass"
FAIL = "fail"
INFORMATIONAL = "informational"


@dataclass(frozen=True)
class ValidationReport:
    """One statistic checked against one target.

    verdict is "pass"/"fail" for hard checks and "informational" for
    diagnostics that cannot be falsified at finite horizons.
    """

    statistic: str
    model: str
    t: float
    n_samples: int
    estimate: float
    target: float
    stderr: float
    tolerance: float
    verdict: str

    def __post_init__(self):
        if self.verdict not in (PASS, FAIL, INFORMATIONAL):
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.n_samples > 1 and self.verdict != INFORMATIONAL and not self.stderr >= 0:
            raise ValueError("stderr must be nonnegative")

    @property
    def passed(self) -> bool:
        return self.verdict != FAIL

    def to_dict(self) -> dict:
        return asdict(self)


def bounded_verdict(estimate: float, target: float, tolerance: float) -> str:
    """pass iff |estimate - target| <= tolerance."""
    return PASS if abs(estimate - target) <= tolerance else FAIL
