"""Shared fixtures and the acceptance-summary reporting hook.

The expensive propagations (the full three-thousand-kick reference run
and the per-lambda oracle-equivalence runs) are session fixtures shared
between the unit tests and the acceptance suite.  Acceptance tests
register one verdict per criterion through ``acceptance``; the terminal
summary prints one PASS/FAIL line per criterion with the measured
numbers, so the gate is auditable from the test log alone.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import pytest

from nhrotor import ModelParams, run

# Snapshot times of the reference run: the two localized-regime fits,
# then the five soliton-regime fits used for the drift line.
REFERENCE_SNAPSHOTS = (2, 10, 1000, 1500, 2000, 2500, 3000)


@pytest.fixture(scope="session")
def long_run():
    """Default-parameter run to t = 3000, recorded every kick."""
    params = ModelParams()
    series, snaps = run(
        params, 3000, record_every=1, snapshot_times=REFERENCE_SNAPSHOTS
    )
    return params, series, snaps


@pytest.fixture(scope="session")
def lam_runs():
    """Series to t = 200 for each gain/loss strength in the master check."""
    out = {}
    for lam in (0.3, 0.5, 1.0):
        params = ModelParams(lam=lam)
        series, _ = run(params, 200, record_every=1)
        out[lam] = (params, series)
    return out


# ------------------------------------------------- acceptance registry


@dataclass
class _Verdict:
    name: str
    checks: list = field(default_factory=list)  # (ok, detail, expected_gap)

    @property
    def passed(self) -> bool:
        return all(ok for ok, _, expected in self.checks if not expected)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        details = "; ".join(
            (f"known gap: {detail}" if expected else detail)
            for ok, detail, expected in self.checks
            if detail
        )
        return f"{status}" + (f" ({details})" if details else "")


_VERDICTS: dict[int, _Verdict] = {}


class AcceptanceRecorder:
    """Collects per-criterion measurements for the end-of-run summary."""

    def record(
        self,
        criterion: int,
        name: str,
        ok: bool,
        detail: str = "",
        expected_gap: bool = False,
    ) -> None:
        verdict = _VERDICTS.setdefault(criterion, _Verdict(name=name))
        verdict.checks.append((ok, detail, expected_gap))


@pytest.fixture(scope="session")
def acceptance() -> AcceptanceRecorder:
    return AcceptanceRecorder()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _VERDICTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_VERDICTS):
        verdict = _VERDICTS[number]
        terminalreporter.write_line(
            f"ACCEPTANCE {number} {verdict.name}: {verdict.line()}"
        )
