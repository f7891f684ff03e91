"""Shared pytest plumbing: surface the acceptance PASS/FAIL lines in the
terminal summary even though pytest captures per-test stdout."""

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
