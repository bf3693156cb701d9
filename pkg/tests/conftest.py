import os
import sys

sys.path.insert(0, os.path.dirname(__file__))

# criterion number -> (status, seconds, title, detail); filled by test_acceptance
CRITERIA: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        status, secs, title, detail = CRITERIA[n]
        tail = f" [{detail}]" if detail else ""
        terminalreporter.write_line(f"criterion {n:2d}: {status} ({secs:.1f} s) {title}{tail}")
