from __future__ import annotations

import pytest

ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion():
    """Record a criterion outcome so the terminal summary can list it."""

    def record(number: int, ok: bool, note: str = "") -> None:
        ACCEPTANCE[number] = (ok, note)
        print(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'} {note}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, note = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {note}")
