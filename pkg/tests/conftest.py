from __future__ import annotations

import os
import sys
from collections import OrderedDict

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, os.path.dirname(__file__))

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# criterion number -> list of (part, ok, detail)
_ACCEPTANCE: "OrderedDict[int, list[tuple[str, bool, str]]]" = OrderedDict()
_TITLES: dict[int, str] = {}


class AcceptanceRecorder:
    def __call__(self, criterion: int, title: str, part: str, ok: bool, detail: str = "") -> None:
        _TITLES.setdefault(criterion, title)
        _ACCEPTANCE.setdefault(criterion, []).append((part, ok, detail))
        status = "PASS" if ok else "FAIL"
        print(f"criterion {criterion} [{part}]: {status} {detail}".rstrip())


@pytest.fixture
def acceptance() -> AcceptanceRecorder:
    return AcceptanceRecorder()


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(_ACCEPTANCE):
        parts = _ACCEPTANCE[criterion]
        failed = [(p, d) for p, ok, d in parts if not ok]
        status = "FAIL" if failed else "PASS"
        line = f"criterion {criterion:>2}: {status}  {_TITLES[criterion]} ({len(parts) - len(failed)}/{len(parts)} checks)"
        if failed:
            line += "; failing: " + "; ".join(f"{p}: {d}" for p, d in failed)
        terminalreporter.write_line(line)
