from __future__ import annotations

from hypothesis import settings

# exact rational work has heavy-tailed runtimes; rely on the example count instead
settings.register_profile("default", deadline=None, max_examples=100)
settings.load_profile("default")

# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
