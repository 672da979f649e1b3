from __future__ import annotations

import pytest

from amorphic import constructions as cons


@pytest.fixture(scope="session")
def four_class2():
    return cons.four_class_scheme(2)


@pytest.fixture(scope="session")
def lifted2():
    return cons.lifted_four_class_scheme(2)


@pytest.fixture(scope="session")
def rotation3():
    return cons.rotation_scheme(3, 2)


_CRITERIA: dict[int, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the summary is printed at the end of the run."""

    def record(number: int, ok: bool, detail: str) -> None:
        _CRITERIA[number] = (ok, detail)
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} - {detail}")
        assert ok, detail

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_CRITERIA):
        ok, detail = _CRITERIA[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'} - {detail}")
