"""Shared pytest plumbing: echo the acceptance verdict lines.

The acceptance tests record one "[PASS]/[FAIL] criterion N" line each; the
hook below replays them in the terminal summary so they stay visible in
captured-run logs.
"""

import sys


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "CRITERION_LINES", None) if mod else None
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
