"""Shared fixtures plus the acceptance-summary hook.

Each acceptance test registers its verdict before asserting, so the terminal
summary shows one PASS/FAIL line per criterion even when a criterion fails.
"""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE: dict[int, tuple[str, bool]] = {}


def record_acceptance(number: int, label: str, ok: bool) -> None:
    _ACCEPTANCE[number] = (label, ok)


@pytest.fixture(scope="session")
def mg30_series():
    from kemforecast import MackeyGlassParams, generate_mackey_glass

    return generate_mackey_glass(MackeyGlassParams(), length=400)


@pytest.fixture(scope="session")
def lorenz_components():
    from kemforecast import LorenzParams, generate_lorenz

    return generate_lorenz(LorenzParams(), length=400)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        label, ok = _ACCEPTANCE[number]
        verdict = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"acceptance {number} [{verdict}] {label}")
