import contextlib

import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

_ACCEPTANCE: list[tuple[str, str, bool]] = []


@pytest.fixture
def criterion():
    """Record a named acceptance criterion; a summary line per criterion is printed at the end."""

    @contextlib.contextmanager
    def record(label: str, description: str):
        ok = False
        try:
            yield
            ok = True
        finally:
            _ACCEPTANCE.append((label, description, ok))

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, description, ok in _ACCEPTANCE:
        terminalreporter.write_line(f"{label:<5} {'PASS' if ok else 'FAIL'}  {description}")
